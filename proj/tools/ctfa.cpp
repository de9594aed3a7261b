// ctfa — CTF attack attribution toolkit.
//
// Subcommands: ingest (pcap/json -> events), analyze (deception summaries),
// synth (seeded synthetic corpora), experiment (train/evaluate matrix).
// Exit codes: 0 success, 2 usage or input error. Diagnostics go to stderr,
// data to files only.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ctfa/deception.hpp"
#include "ctfa/evaluation.hpp"
#include "ctfa/event.hpp"
#include "ctfa/fileio.hpp"
#include "ctfa/ingest.hpp"
#include "ctfa/manifest.hpp"
#include "ctfa/pcap.hpp"
#include "ctfa/pruning.hpp"
#include "ctfa/reassembly.hpp"
#include "ctfa/report.hpp"
#include "ctfa/synth.hpp"
#include "ctfa/teammap.hpp"
#include "ctfa/version.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string out_path(const std::string& dir, const std::string& name) {
    return (std::filesystem::path(dir) / name).string();
}

void prepare_outdir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw UsageError("cannot create output directory " + dir + ": " + ec.message());
}

void write_manifest(const std::string& dir, ctfa::RunManifest manifest) {
    std::sort(manifest.outputs.begin(), manifest.outputs.end());
    ctfa::write_file_text(out_path(dir, "manifest.json"), manifest.to_json().dump(2) + "\n");
}

ctfa::EventReadResult read_events_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open events file " + path);
    return ctfa::read_events(in);
}

std::vector<ctfa::AttackEvent> read_events_strict(const std::string& path) {
    auto result = read_events_file(path);
    if (!result.rejected.empty()) {
        for (const auto& r : result.rejected)
            std::cerr << path << ":" << r.line << ": " << r.message << "\n";
        throw UsageError("malformed events in " + path);
    }
    return std::move(result.events);
}

int default_threads() {
    if (const char* env = std::getenv("CTFA_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 0;  // resolved to hardware concurrency downstream
}

// ---------------------------------------------------------------- ingest ---

struct IngestArgs {
    std::vector<std::string> pcaps;
    std::string events;
    std::string teammap;
    std::string out;
};

int run_ingest(const IngestArgs& args) {
    if (args.pcaps.empty() == args.events.empty())
        throw UsageError("ingest needs exactly one of --pcap or --events");
    prepare_outdir(args.out);

    nlohmann::json stats;
    std::vector<ctfa::AttackEvent> events;
    ctfa::RunManifest manifest;
    manifest.command = "ingest";
    manifest.flags["out"] = args.out;

    if (!args.pcaps.empty()) {
        if (args.teammap.empty()) throw UsageError("--teammap is required with --pcap");
        std::ifstream tm(args.teammap);
        if (!tm) throw UsageError("cannot open teammap " + args.teammap);
        ctfa::TeamMap map = ctfa::TeamMap::parse(tm);
        manifest.flags["teammap"] = args.teammap;
        manifest.input_digests.emplace_back(args.teammap, ctfa::md5_of_file(args.teammap));

        ctfa::PcapStats pcap_total;
        ctfa::ReassemblyStats reasm_total;
        ctfa::IngestStats ingest_total;
        for (const auto& path : args.pcaps) {
            auto bytes = ctfa::read_file_bytes(path);
            manifest.input_digests.emplace_back(path, ctfa::md5_digest(ctfa::ByteView{bytes}));
            ctfa::PcapStats ps;
            auto packets = ctfa::parse_pcap(bytes, &ps);
            ctfa::ReassemblyStats rs;
            auto flows = ctfa::reassemble_streams(packets, &rs);
            ctfa::IngestStats is;
            auto batch = ctfa::flows_to_events(flows, map, &is);
            events.insert(events.end(), batch.begin(), batch.end());
            pcap_total.records += ps.records;
            pcap_total.tcp_packets += ps.tcp_packets;
            pcap_total.skipped_non_ipv4 += ps.skipped_non_ipv4;
            pcap_total.skipped_non_tcp += ps.skipped_non_tcp;
            pcap_total.skipped_fragment += ps.skipped_fragment;
            pcap_total.skipped_truncated += ps.skipped_truncated;
            reasm_total.flows += rs.flows;
            reasm_total.anomalies += rs.anomalies;
            ingest_total.events += is.events;
            ingest_total.intra_team_dropped += is.intra_team_dropped;
            ingest_total.unmapped_address += is.unmapped_address;
        }
        stats["pcap"] = {{"records", pcap_total.records},
                         {"tcp_packets", pcap_total.tcp_packets},
                         {"skipped_non_ipv4", pcap_total.skipped_non_ipv4},
                         {"skipped_non_tcp", pcap_total.skipped_non_tcp},
                         {"skipped_fragment", pcap_total.skipped_fragment},
                         {"skipped_truncated", pcap_total.skipped_truncated}};
        stats["reassembly"] = {{"flows", reasm_total.flows},
                               {"anomalies", reasm_total.anomalies},
                               {"close_rule", "syn-restart-or-60s-gap"},
                               {"overlap_policy", "first-copy-wins"}};
        stats["events"] = {{"written", ingest_total.events},
                           {"intra_team_dropped", ingest_total.intra_team_dropped},
                           {"unmapped_address", ingest_total.unmapped_address}};
    } else {
        manifest.flags["events"] = args.events;
        manifest.input_digests.emplace_back(args.events, ctfa::md5_of_file(args.events));
        auto result = read_events_file(args.events);
        for (const auto& r : result.rejected)
            std::cerr << args.events << ":" << r.line << ": " << r.message << "\n";
        events = std::move(result.events);
        stats["events"] = {{"written", events.size()}, {"rejected", result.rejected.size()}};
    }

    std::ostringstream body;
    ctfa::write_events(body, events);
    ctfa::write_file_text(out_path(args.out, "events.jsonl"), body.str());
    ctfa::write_file_text(out_path(args.out, "stats.json"), stats.dump(2) + "\n");
    manifest.outputs = {out_path(args.out, "events.jsonl"), out_path(args.out, "stats.json")};
    write_manifest(args.out, std::move(manifest));
    std::cerr << "ingest: " << events.size() << " events\n";
    return kExitOk;
}

// --------------------------------------------------------------- analyze ---

struct AnalyzeArgs {
    std::string events;
    std::string out;
};

int run_analyze(const AnalyzeArgs& args) {
    prepare_outdir(args.out);
    auto events = read_events_strict(args.events);
    auto annotations = ctfa::annotate(events);
    auto summary = ctfa::summarize(events, annotations);

    std::ostringstream fig1;
    fig1 << "to_team,unique_payloads,unique_deceptive_payloads,unique_hash_attacker_pairs\n";
    for (const auto& [team, s] : summary)
        fig1 << ctfa::csv_field(team) << ',' << s.unique_payloads << ','
             << s.unique_deceptive_payloads << ',' << s.unique_hash_attacker_pairs << '\n';
    std::ostringstream fig2;
    fig2 << "to_team,total_attacks,nondeceptive_duplicates,deceptive_duplicates\n";
    for (const auto& [team, s] : summary)
        fig2 << ctfa::csv_field(team) << ',' << s.total_attacks << ','
             << s.nondeceptive_duplicates << ',' << s.deceptive_duplicates << '\n';
    std::ostringstream full;
    ctfa::write_deception_csv(full, summary);

    ctfa::write_file_text(out_path(args.out, "fig1.csv"), fig1.str());
    ctfa::write_file_text(out_path(args.out, "fig2.csv"), fig2.str());
    ctfa::write_file_text(out_path(args.out, "deception_summary.csv"), full.str());

    ctfa::RunManifest manifest;
    manifest.command = "analyze";
    manifest.flags["events"] = args.events;
    manifest.flags["out"] = args.out;
    manifest.input_digests.emplace_back(args.events, ctfa::md5_of_file(args.events));
    manifest.outputs = {out_path(args.out, "fig1.csv"), out_path(args.out, "fig2.csv"),
                        out_path(args.out, "deception_summary.csv")};
    write_manifest(args.out, std::move(manifest));
    std::cerr << "analyze: " << summary.size() << " target teams\n";
    return kExitOk;
}

// ----------------------------------------------------------------- synth ---

struct SynthArgs {
    std::string config;
    std::string out;
    ctfa::SynthConfig cfg;
    bool paper_like = false;
    std::size_t events_target = 50000;
    std::uint64_t seed = 1;
};

ctfa::SynthConfig synth_config_from_json(const nlohmann::json& j) {
    ctfa::SynthConfig c;
    c.n_teams = j.value("n_teams", c.n_teams);
    c.n_services = j.value("n_services", c.n_services);
    c.events_target = j.value("events_target", c.events_target);
    c.payload_len_min = j.value("payload_len_min", c.payload_len_min);
    c.payload_len_max = j.value("payload_len_max", c.payload_len_max);
    c.mean_group_gap_s = j.value("mean_group_gap_s", c.mean_group_gap_s);
    c.group_lifetime_s = j.value("group_lifetime_s", c.group_lifetime_s);
    c.wave_geo_p = j.value("wave_geo_p", c.wave_geo_p);
    c.deceptive_wave_geo_p = j.value("deceptive_wave_geo_p", c.deceptive_wave_geo_p);
    c.p_deceive = j.value("p_deceive", c.p_deceive);
    c.deceiver_min = j.value("deceiver_min", c.deceiver_min);
    c.deceiver_max = j.value("deceiver_max", c.deceiver_max);
    c.copy_delay_mean_s = j.value("copy_delay_mean_s", c.copy_delay_mean_s);
    c.style_strength = j.value("style_strength", c.style_strength);
    c.style_bytes = j.value("style_bytes", c.style_bytes);
    c.style_mnemonics = j.value("style_mnemonics", c.style_mnemonics);
    c.instr_fraction = j.value("instr_fraction", c.instr_fraction);
    c.seed = j.value("seed", c.seed);
    return c;
}

int run_synth(SynthArgs& args, const CLI::App* cmd) {
    prepare_outdir(args.out);
    ctfa::SynthConfig cfg = args.cfg;
    ctfa::RunManifest manifest;
    manifest.command = "synth";
    if (!args.config.empty()) {
        auto text = ctfa::read_file_text(args.config);
        auto j = nlohmann::json::parse(text, nullptr, false);
        if (j.is_discarded()) throw UsageError("config is not valid JSON: " + args.config);
        cfg = synth_config_from_json(j);
        manifest.input_digests.emplace_back(args.config, ctfa::md5_of_file(args.config));
        manifest.flags["config"] = args.config;
    }
    if (args.paper_like) {
        cfg = ctfa::SynthConfig::paper_like(args.seed, args.events_target);
        manifest.flags["paper-like"] = "true";
    }
    if (cmd->count("--teams")) cfg.n_teams = args.cfg.n_teams;
    if (cmd->count("--events")) cfg.events_target = args.events_target;
    if (cmd->count("--seed")) cfg.seed = args.seed;
    if (cmd->count("--p-deceive")) cfg.p_deceive = args.cfg.p_deceive;
    if (cmd->count("--style-strength")) cfg.style_strength = args.cfg.style_strength;

    try {
        cfg.validate();
    } catch (const ctfa::InvalidConfig& e) {
        throw UsageError(e.what());
    }
    auto corpus = ctfa::generate(cfg);

    std::ostringstream body;
    ctfa::write_events(body, corpus.events);
    ctfa::write_file_text(out_path(args.out, "events.jsonl"), body.str());
    std::ostringstream truth;
    truth << "index,role\n";
    for (std::size_t i = 0; i < corpus.truth.size(); ++i)
        truth << i << ',' << ctfa::role_name(corpus.truth[i]) << '\n';
    ctfa::write_file_text(out_path(args.out, "truth.csv"), truth.str());

    manifest.seed = cfg.seed;
    manifest.flags["out"] = args.out;
    manifest.flags["n_teams"] = std::to_string(cfg.n_teams);
    manifest.flags["events_target"] = std::to_string(cfg.events_target);
    manifest.flags["p_deceive"] = ctfa::fmt_accuracy(cfg.p_deceive);
    manifest.outputs = {out_path(args.out, "events.jsonl"), out_path(args.out, "truth.csv")};
    write_manifest(args.out, std::move(manifest));
    std::cerr << "synth: " << corpus.events.size() << " events\n";
    return kExitOk;
}

// ------------------------------------------------------------ experiment ---

struct ExperimentArgs {
    std::string events;
    std::string out;
    std::string methods = "dt,rf,logreg,svm";
    std::string prune = "none,p1,p2:3,p3,p4";
    double train_frac = 0.9;
    std::uint64_t seed = 1;
    int threads = default_threads();
    int rf_trees = 100;
    int rf_mtry = 0;
    double dt_min_frac = 0.001;
    double logreg_l2 = 1e-4;
    int logreg_epochs = 200;
    double svm_c = 1.0;
    int svm_epochs = 30;
    bool raw_counts = false;
};

std::vector<std::string> split_csv(const std::string& s) {
    std::vector<std::string> parts;
    std::istringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        if (!item.empty()) parts.push_back(item);
    return parts;
}

int run_experiment(const ExperimentArgs& args) {
    ctfa::ExperimentConfig cfg;
    cfg.methods.clear();
    for (const auto& name : split_csv(args.methods)) {
        auto kind = ctfa::model_kind_from(name);
        if (!kind) throw UsageError("unknown method: " + name);
        cfg.methods.push_back(*kind);
    }
    if (cfg.methods.empty()) throw UsageError("no methods selected");
    cfg.strategies.clear();
    for (const auto& name : split_csv(args.prune)) {
        auto strategy = ctfa::PruningStrategy::parse(name);
        if (!strategy) throw UsageError("unknown pruning strategy: " + name);
        cfg.strategies.push_back(*strategy);
    }
    if (cfg.strategies.empty()) throw UsageError("no pruning strategies selected");
    if (!(args.train_frac > 0.0 && args.train_frac < 1.0))
        throw UsageError("--train-frac must be in (0,1)");
    cfg.split.train_fraction = args.train_frac;
    cfg.seed = args.seed;
    cfg.threads = args.threads;
    cfg.params.rf.n_trees = args.rf_trees;
    cfg.params.rf.mtry = args.rf_mtry;
    cfg.params.rf.min_node_fraction = args.dt_min_frac;
    cfg.params.dt.min_node_fraction = args.dt_min_frac;
    cfg.params.logreg.l2 = args.logreg_l2;
    cfg.params.logreg.max_epochs = args.logreg_epochs;
    cfg.params.svm.c = args.svm_c;
    cfg.params.svm.epochs = args.svm_epochs;
    cfg.params.normalize_features = !args.raw_counts;

    prepare_outdir(args.out);
    auto events = read_events_strict(args.events);
    ctfa::ExperimentReport report;
    try {
        report = ctfa::run_experiment_matrix(events, cfg);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    std::size_t ok_cells = 0;
    for (const auto& c : report.cells)
        if (c.ok) ++ok_cells;
    for (const auto& c : report.cells)
        if (!c.ok)
            std::cerr << "cell failed: " << c.target << "/" << ctfa::model_kind_name(c.method)
                      << "/" << c.strategy << ": " << c.error << "\n";

    std::string baseline = "none";
    bool have_none = false;
    for (const auto& s : cfg.strategies) have_none |= s.name() == "none";
    if (!have_none) baseline = cfg.strategies.front().name();
    std::string fig4_method = "rf";
    bool have_rf = false;
    for (auto m : cfg.methods) have_rf |= m == ctfa::ModelKind::RF;
    if (!have_rf) fig4_method = ctfa::model_kind_name(cfg.methods.front());

    std::ostringstream report_csv, per_team, fig3, fig4, pruning_csv;
    ctfa::write_report_csv(report_csv, report);
    ctfa::write_per_team_csv(per_team, report);
    ctfa::write_fig3_csv(fig3, report, baseline);
    ctfa::write_fig4_csv(fig4, report, fig4_method, baseline);
    ctfa::write_pruning_report_csv(pruning_csv, report);
    auto summary = ctfa::summary_to_json(report);
    summary["seed"] = args.seed;
    summary["train_fraction"] = args.train_frac;
    summary["cells_ok"] = ok_cells;
    summary["cells_total"] = report.cells.size();

    ctfa::write_file_text(out_path(args.out, "report.csv"), report_csv.str());
    ctfa::write_file_text(out_path(args.out, "per_team.csv"), per_team.str());
    ctfa::write_file_text(out_path(args.out, "fig3.csv"), fig3.str());
    ctfa::write_file_text(out_path(args.out, "fig4.csv"), fig4.str());
    ctfa::write_file_text(out_path(args.out, "pruning_report.csv"), pruning_csv.str());
    ctfa::write_file_text(out_path(args.out, "summary.json"), summary.dump(2) + "\n");

    ctfa::RunManifest manifest;
    manifest.command = "experiment";
    manifest.seed = args.seed;
    manifest.flags = {{"events", args.events},
                      {"out", args.out},
                      {"methods", args.methods},
                      {"prune", args.prune},
                      {"train-frac", ctfa::fmt_accuracy(args.train_frac)},
                      {"seed", std::to_string(args.seed)},
                      {"rf-trees", std::to_string(args.rf_trees)},
                      {"rf-mtry", std::to_string(args.rf_mtry)},
                      {"dt-min-frac", ctfa::fmt_accuracy(args.dt_min_frac)},
                      {"logreg-l2", ctfa::fmt_accuracy(args.logreg_l2)},
                      {"logreg-epochs", std::to_string(args.logreg_epochs)},
                      {"svm-c", ctfa::fmt_accuracy(args.svm_c)},
                      {"svm-epochs", std::to_string(args.svm_epochs)},
                      {"raw-counts", args.raw_counts ? "true" : "false"}};
    manifest.input_digests.emplace_back(args.events, ctfa::md5_of_file(args.events));
    manifest.outputs = {out_path(args.out, "report.csv"),   out_path(args.out, "per_team.csv"),
                        out_path(args.out, "fig3.csv"),     out_path(args.out, "fig4.csv"),
                        out_path(args.out, "pruning_report.csv"),
                        out_path(args.out, "summary.json")};
    write_manifest(args.out, std::move(manifest));

    std::cerr << "experiment: " << ok_cells << "/" << report.cells.size() << " cells ok\n";
    if (ok_cells == 0) throw UsageError("no experiment cell succeeded");
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{std::string(ctfa::kToolName) + " — CTF attack attribution toolkit"};
    app.set_version_flag("--version", std::string(ctfa::kToolVersion));
    app.require_subcommand(1);

    IngestArgs ingest_args;
    auto* ingest = app.add_subcommand("ingest", "Convert pcap captures or JSON events to the "
                                                "event format");
    ingest->add_option("--pcap", ingest_args.pcaps, "pcap capture files");
    ingest->add_option("--events", ingest_args.events, "existing JSON-lines events file");
    ingest->add_option("--teammap", ingest_args.teammap, "team network / service map");
    ingest->add_option("--out", ingest_args.out, "output directory")->required();

    AnalyzeArgs analyze_args;
    auto* analyze = app.add_subcommand("analyze", "Deception and duplicate statistics per target");
    analyze->add_option("--events", analyze_args.events, "events file")->required();
    analyze->add_option("--out", analyze_args.out, "output directory")->required();

    SynthArgs synth_args;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic attack corpus");
    synth->add_option("--config", synth_args.config, "JSON config file");
    synth->add_option("--out", synth_args.out, "output directory")->required();
    synth->add_option("--teams", synth_args.cfg.n_teams, "number of teams");
    synth->add_option("--events", synth_args.events_target, "target event count");
    synth->add_option("--seed", synth_args.seed, "generator seed");
    synth->add_option("--p-deceive", synth_args.cfg.p_deceive, "copy probability");
    synth->add_option("--style-strength", synth_args.cfg.style_strength, "team style bias");
    synth->add_flag("--paper-like", synth_args.paper_like,
                    "preset tuned for a ~90% deceptive-duplicate share");

    ExperimentArgs exp_args;
    auto* exp = app.add_subcommand("experiment", "Run the train/evaluate matrix");
    exp->add_option("--events", exp_args.events, "events file")->required();
    exp->add_option("--out", exp_args.out, "output directory")->required();
    exp->add_option("--methods", exp_args.methods, "comma list of dt,rf,logreg,svm");
    exp->add_option("--prune", exp_args.prune, "comma list of none,p1,p2:<k>,p3,p4");
    exp->add_option("--train-frac", exp_args.train_frac, "temporal training fraction");
    exp->add_option("--seed", exp_args.seed, "experiment seed");
    exp->add_option("--threads", exp_args.threads, "worker threads (default: CTFA_THREADS or all)");
    exp->add_option("--rf-trees", exp_args.rf_trees, "random forest size");
    exp->add_option("--rf-mtry", exp_args.rf_mtry, "features per node (0: sqrt)");
    exp->add_option("--dt-min-frac", exp_args.dt_min_frac, "minimum node fraction for splits");
    exp->add_option("--logreg-l2", exp_args.logreg_l2, "logistic regression L2");
    exp->add_option("--logreg-epochs", exp_args.logreg_epochs, "logistic regression epochs");
    exp->add_option("--svm-c", exp_args.svm_c, "margin learner inverse regularization");
    exp->add_option("--svm-epochs", exp_args.svm_epochs, "margin learner epochs");
    exp->add_flag("--raw-counts", exp_args.raw_counts, "skip histogram L1 normalization");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(ingest)) return run_ingest(ingest_args);
        if (app.got_subcommand(analyze)) return run_analyze(analyze_args);
        if (app.got_subcommand(synth)) return run_synth(synth_args, synth);
        if (app.got_subcommand(exp)) return run_experiment(exp_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}

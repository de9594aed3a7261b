// Acceptance suite: every release criterion in one binary, one PASS/FAIL
// line each. Exits nonzero when any gating criterion fails. Criterion 10
// (real capture smoke test) only runs when CTFA_DEFCON_DIR is set; it is
// reported but never gates.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "ctfa/deception.hpp"
#include "ctfa/evaluation.hpp"
#include "ctfa/event.hpp"
#include "ctfa/fileio.hpp"
#include "ctfa/ingest.hpp"
#include "ctfa/md5.hpp"
#include "ctfa/pruning.hpp"
#include "ctfa/reassembly.hpp"
#include "ctfa/report.hpp"
#include "ctfa/synth.hpp"
#include "ctfa/teammap.hpp"
#include "support/oracles.hpp"
#include "support/pcap_builder.hpp"
#include "support/tempdir.hpp"

using namespace ctfa;

namespace {

struct Outcome {
    bool pass = false;
    std::string details;
};

int failures = 0;

void run_criterion(int number, const std::string& title, const std::function<Outcome()>& fn,
                   bool gating = true) {
    auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = fn();
    } catch (const std::exception& e) {
        out.pass = false;
        out.details = std::string("exception: ") + e.what();
    }
    auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
    const char* verdict = out.pass ? "PASS" : (gating ? "FAIL" : "SKIP");
    std::printf("%s criterion-%d: %s (%s; %.1fs)\n", verdict, number, title.c_str(),
                out.details.c_str(), static_cast<double>(elapsed) / 1000.0);
    std::fflush(stdout);
    if (!out.pass && gating) ++failures;
}

// --- 1: deception labeling vs brute-force oracle ---------------------------

Outcome criterion_oracle_equivalence() {
    Rng rng(0xACCE9701);
    std::size_t mismatches = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto events = oracle::random_events(rng);
        auto got = annotate(events);
        auto want = oracle::annotate(events);
        for (std::size_t i = 0; i < events.size(); ++i)
            if (got[i].role != want[i].role || got[i].initiator != want[i].initiator)
                ++mismatches;
    }
    return {mismatches == 0, "1000 random event sets, " + std::to_string(mismatches) +
                                 " mismatches"};
}

// --- 2: generator ground truth ----------------------------------------------

Outcome criterion_generator_truth() {
    std::size_t mismatches = 0, corpora = 0;
    for (int i = 0; i < 20; ++i) {
        SynthConfig cfg;
        cfg.seed = 1000 + static_cast<std::uint64_t>(i);
        cfg.n_teams = 3 + (i % 10);
        cfg.events_target = 2000;
        cfg.p_deceive = (i % 5) * 0.25;
        cfg.deceiver_max = 1 + (i % 4);
        cfg.deceptive_wave_geo_p = 0.05 + 0.1 * (i % 3);
        auto corpus = generate(cfg);
        auto ann = annotate(corpus.events);
        for (std::size_t j = 0; j < ann.size(); ++j)
            if (ann[j].role != corpus.truth[j]) ++mismatches;
        ++corpora;
    }
    return {mismatches == 0, std::to_string(corpora) + " corpora, " +
                                 std::to_string(mismatches) + " label mismatches"};
}

// --- 3: pruning exactness ----------------------------------------------------

Outcome criterion_pruning_exactness() {
    Rng rng(0xACCE9703);
    std::size_t bad = 0;
    for (int trial = 0; trial < 1000; ++trial) {
        auto events = oracle::random_events(rng);
        auto ann = annotate(events);

        auto p3 = prune_indices(events, ann, {PruneKind::AllButEarliest});
        std::set<std::size_t> kept(p3.begin(), p3.end());
        for (std::size_t i = 0; i < events.size(); ++i) {
            bool deceptive =
                ann[i].role == Role::DeceptiveFirst || ann[i].role == Role::DeceptiveDuplicate;
            if (kept.contains(i) == deceptive) ++bad;
        }

        int k = 1 + static_cast<int>(rng.below(4));
        for (auto strategy : {PruningStrategy{PruneKind::AllButMajority},
                              PruningStrategy{PruneKind::AllButKMajority, k},
                              PruningStrategy{PruneKind::AllButMostRecent}}) {
            auto got = prune_indices(events, ann, strategy);
            if (got != oracle::prune_indices(events, strategy)) ++bad;
            std::map<std::pair<std::string, std::string>, std::set<std::string>> teams;
            for (std::size_t i : got)
                teams[{events[i].to_team, events[i].payload_hash}].insert(events[i].from_team);
            std::size_t limit = strategy.kind == PruneKind::AllButKMajority
                                    ? static_cast<std::size_t>(strategy.k)
                                    : 1u;
            for (const auto& [key, t] : teams)
                if (t.size() > limit) ++bad;
        }
        if (prune_indices(events, ann, {PruneKind::AllButKMajority, 1}) !=
            prune_indices(events, ann, {PruneKind::AllButMajority}))
            ++bad;
    }
    return {bad == 0, "1000 random inputs, " + std::to_string(bad) + " violations"};
}

// --- 4: protocol invariants ---------------------------------------------------

Outcome criterion_protocol_invariants() {
    auto corpus = generate(SynthConfig::paper_like(2024, 50000));
    std::map<std::string, std::vector<AttackEvent>> by_target;
    for (const auto& e : corpus.events) by_target[e.to_team].push_back(e);

    std::size_t bad = 0;
    for (auto& [target, slice] : by_target) {
        std::size_t n = slice.size();
        auto [train, test] = temporal_split(slice);
        if (train.size() != static_cast<std::size_t>(std::floor(0.9 * static_cast<double>(n))))
            ++bad;
        if (!train.empty() && !test.empty() && train.back().time > test.front().time) ++bad;
    }

    ExperimentConfig cfg;
    cfg.methods = {ModelKind::RF};
    cfg.strategies = {PruningStrategy{PruneKind::None},
                      PruningStrategy{PruneKind::AllButMajority},
                      PruningStrategy{PruneKind::AllButKMajority, 3},
                      PruningStrategy{PruneKind::AllButEarliest},
                      PruningStrategy{PruneKind::AllButMostRecent}};
    cfg.params.rf.n_trees = 30;
    cfg.seed = 11;
    auto report = run_experiment_matrix(corpus.events, cfg);

    std::map<std::string, std::set<std::size_t>> n_tests;
    for (const auto& c : report.cells) {
        if (!c.ok) {
            ++bad;
            continue;
        }
        n_tests[c.target].insert(c.n_test);
        auto wrong = static_cast<std::uint64_t>(
            std::llround((1.0 - c.accuracy) * static_cast<double>(c.n_test)));
        if (c.breakdown.total() != wrong) ++bad;
    }
    for (const auto& [target, sizes] : n_tests)
        if (sizes.size() != 1) ++bad;

    return {bad == 0, std::to_string(by_target.size()) + " targets, " +
                          std::to_string(report.cells.size()) + " cells, " +
                          std::to_string(bad) + " violations"};
}

// --- 5: classifier correctness -------------------------------------------------

Outcome criterion_classifier_correctness() {
    std::vector<std::string> problems;

    // (a) RFC 1321 test suite
    const std::vector<std::pair<std::string, std::string>> rfc = {
        {"", "d41d8cd98f00b204e9800998ecf8427e"},
        {"a", "0cc175b9c0f1b6a831c399e269772661"},
        {"abc", "900150983cd24fb0d6963f7d28e17f72"},
        {"message digest", "f96b697d7cb7938d525a2f31aaf161d0"},
        {"abcdefghijklmnopqrstuvwxyz", "c3fcd3d76192e4007dfb496cca67e13b"},
        {"ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789",
         "d174ab98d277d9f5a5611c2c9f419d9f"},
        {"123456789012345678901234567890123456789012345678901234567890123456"
         "78901234567890",
         "57edf4a22be3c955ac49da2e2107b67a"},
    };
    for (const auto& [msg, want] : rfc)
        if (md5_digest(msg) != want) problems.push_back("md5(" + msg.substr(0, 8) + ")");

    // (b) gradient vs central finite differences, 20 random instances
    Rng rng(0xACCE9705);
    for (int inst = 0; inst < 20; ++inst) {
        std::size_t n = 3 + rng.below(5), dim = 2 + rng.below(4), classes = 2 + rng.below(3);
        std::vector<double> x;
        std::vector<int> y;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < dim; ++j) x.push_back(rng.unit() * 2 - 1);
            x.push_back(1.0);
            y.push_back(static_cast<int>(rng.below(classes)));
        }
        detail::SoftmaxObjective obj{x, y, n, dim + 1, classes, 1e-3};
        std::vector<double> w(obj.n_weights());
        for (auto& v : w) v = rng.unit() - 0.5;
        std::vector<double> g;
        obj.gradient(w, g);
        double num = 0, den = 0;
        const double h = 1e-5;
        for (std::size_t j = 0; j < w.size(); ++j) {
            auto wp = w, wm = w;
            wp[j] += h;
            wm[j] -= h;
            double fd = (obj.loss(wp) - obj.loss(wm)) / (2 * h);
            num += (g[j] - fd) * (g[j] - fd);
            den += fd * fd;
        }
        if (!(std::sqrt(num / std::max(den, 1e-300)) < 1e-5))
            problems.push_back("gradient instance " + std::to_string(inst));
    }

    // (c) all four learners solve the separable toy set
    std::vector<FeatureVector> train = {{{0.0}, "a"}, {{0.5}, "a"}, {{1.0}, "a"},
                                        {{10.0}, "b"}, {{10.5}, "b"}, {{11.0}, "b"}};
    std::vector<FeatureVector> test = {{{0.25}, "a"}, {{0.75}, "a"}, {{10.25}, "b"},
                                       {{10.75}, "b"}};
    auto data = Dataset::build(train);
    SvmParams svm_params;
    svm_params.epochs = 100;
    std::vector<std::pair<std::string, Model>> models;
    models.emplace_back("dt", train_decision_tree(data, {}, 1));
    models.emplace_back("rf", train_random_forest(data, {25}, 2));
    models.emplace_back("logreg", train_logistic_regression(data, {}, 3));
    models.emplace_back("svm", train_linear_svm(data, svm_params, 4));
    for (const auto& [name, model] : models) {
        std::size_t hits = 0;
        for (const auto& v : test)
            if (model.predict(v.values).team == v.label) ++hits;
        if (hits != test.size()) problems.push_back(name + " below 1.0 on toy set");
    }

    // (d) no split node below the 0.1% floor on a trained corpus model
    auto corpus = generate(SynthConfig::paper_like(7, 12000));
    std::map<std::string, std::vector<AttackEvent>> by_target;
    for (const auto& e : corpus.events) by_target[e.to_team].push_back(e);
    auto slice = by_target.begin()->second;
    auto [tr, te] = temporal_split(slice);
    auto space = FeatureSpace::build(tr);
    std::vector<FeatureVector> vecs;
    for (const auto& e : tr) vecs.push_back(vectorize(e, space));
    auto dt = train_decision_tree(Dataset::build(vecs), {}, 5);
    const auto& tree = std::get<TreeModel>(dt.params);
    std::vector<std::uint64_t> subtree(tree.nodes.size(), 0);
    for (std::size_t i = tree.nodes.size(); i-- > 0;) {
        const auto& node = tree.nodes[i];
        if (node.is_leaf())
            for (auto c : node.counts) subtree[i] += c;
        else
            subtree[i] = subtree[static_cast<std::size_t>(node.left)] +
                         subtree[static_cast<std::size_t>(node.right)];
    }
    auto floor_size = static_cast<std::uint64_t>(std::ceil(0.001 * static_cast<double>(tr.size())));
    for (std::size_t i = 0; i < tree.nodes.size(); ++i)
        if (!tree.nodes[i].is_leaf() && subtree[i] < floor_size)
            problems.push_back("split below floor at node " + std::to_string(i));

    std::string details = problems.empty()
                              ? "md5 suite, 20 gradient instances, 4 learners, tree walk"
                              : problems.front() + " (+" + std::to_string(problems.size() - 1) +
                                    " more)";
    return {problems.empty(), details};
}

// --- 6: directional replication on synthetic data ------------------------------

Outcome criterion_directional() {
    const std::vector<std::uint64_t> seeds = {101, 202, 404};
    const std::vector<ModelKind> methods = {ModelKind::DT, ModelKind::RF, ModelKind::LOGREG,
                                            ModelKind::SVM};
    const std::vector<PruningStrategy> strategies = {
        PruningStrategy{PruneKind::None},         PruningStrategy{PruneKind::AllButMajority},
        PruningStrategy{PruneKind::AllButKMajority, 3}, PruningStrategy{PruneKind::AllButEarliest},
        PruningStrategy{PruneKind::AllButMostRecent}};

    std::map<std::pair<std::string, std::string>, std::vector<double>> acc;
    Breakdown rf_none_breakdown;
    double share_sum = 0.0;
    for (std::uint64_t seed : seeds) {
        auto corpus = generate(SynthConfig::paper_like(seed, 50000));
        auto ann = annotate(corpus.events);
        std::uint64_t total = 0, deceptive = 0;
        for (const auto& a : ann) {
            ++total;
            if (a.role == Role::DeceptiveDuplicate) ++deceptive;
        }
        share_sum += static_cast<double>(deceptive) / static_cast<double>(total);

        ExperimentConfig cfg;
        cfg.methods = methods;
        cfg.strategies = strategies;
        cfg.seed = seed;
        cfg.params.rf.n_trees = 100;
        cfg.params.logreg.max_epochs = 80;
        cfg.params.svm.epochs = 20;
        auto report = run_experiment_matrix(corpus.events, cfg);
        for (const auto& a : report.averages)
            acc[{model_kind_name(a.method), a.strategy}].push_back(a.mean_accuracy);
        for (const auto& a : report.averages) {
            if (a.method == ModelKind::RF && a.strategy == "none") {
                rf_none_breakdown.unseen_payload += a.breakdown.unseen_payload;
                rf_none_breakdown.nondeceptive_misattributed +=
                    a.breakdown.nondeceptive_misattributed;
                rf_none_breakdown.deceptive_misattributed += a.breakdown.deceptive_misattributed;
            }
        }
    }
    auto mean = [&](const std::string& m, const std::string& s) {
        const auto& v = acc.at({m, s});
        double sum = 0;
        for (double x : v) sum += x;
        return sum / static_cast<double>(v.size());
    };

    std::vector<std::string> problems;
    const double chance3 = 3.0 / 19.0;
    for (const char* m : {"dt", "rf", "logreg", "svm"})
        if (!(mean(m, "none") > chance3))
            problems.push_back(std::string(m) + " avg " + fmt_accuracy(mean(m, "none")) +
                               " <= " + fmt_accuracy(chance3));
    if (!(mean("rf", "none") >= mean("dt", "none"))) problems.push_back("rf < dt");
    if (!(rf_none_breakdown.deceptive_misattributed >
              rf_none_breakdown.nondeceptive_misattributed &&
          rf_none_breakdown.deceptive_misattributed > rf_none_breakdown.unseen_payload))
        problems.push_back("deceptive bucket not the largest");
    double best_pruned = 0.0;
    for (const char* s : {"p1", "p2:3", "p3", "p4"}) best_pruned = std::max(best_pruned, mean("rf", s));
    if (!(best_pruned >= mean("rf", "none") - 0.01))
        problems.push_back("best pruning " + fmt_accuracy(best_pruned) + " < baseline - 0.01");

    std::ostringstream details;
    details << "share=" << fmt_accuracy(share_sum / 3.0) << " dt=" << fmt_accuracy(mean("dt", "none"))
            << " rf=" << fmt_accuracy(mean("rf", "none"))
            << " logreg=" << fmt_accuracy(mean("logreg", "none"))
            << " svm=" << fmt_accuracy(mean("svm", "none"))
            << " best-pruned-rf=" << fmt_accuracy(best_pruned);
    for (const auto& p : problems) details << "; " << p;
    return {problems.empty(), details.str()};
}

// --- 7: random-baseline calibration ---------------------------------------------

Outcome criterion_random_baseline() {
    double acc = random_baseline_accuracy(19, 10000, 20130803);
    return {std::abs(acc - 0.053) <= 0.02, "simulated " + fmt_accuracy(acc) + " vs 0.053"};
}

// --- 8: ingestion golden files ----------------------------------------------------

Outcome criterion_golden_pcap() {
    std::istringstream tm(fixture::teammap_text());
    TeamMap map = TeamMap::parse(tm);
    auto events_json = [&](const Bytes& file) {
        auto packets = parse_pcap(file);
        auto flows = reassemble_streams(packets);
        auto events = flows_to_events(flows, map);
        std::ostringstream out;
        write_events(out, events);
        return out.str();
    };
    std::vector<std::string> problems;

    {  // single flow
        Bytes f = fixture::pcap_header();
        fixture::TcpFrameSpec s;
        s.payload = "AB";
        fixture::append_record(f, 1375573517, 0, fixture::tcp_frame(s));
        std::string want =
            R"({"byte_hist":{"0x41":1,"0x42":1},"inst_hist":{},"from_team":"teamA",)"
            R"("to_team":"teamB","svc":"02345","payload_hash":"b86fc6b051f63d73de262d4c34e3a0a9",)"
            R"("time":"2013-08-03T23:45:17"})"
            "\n";
        if (events_json(f) != want) problems.push_back("single-flow");
    }
    {  // out-of-order segments
        Bytes f = fixture::pcap_header();
        fixture::TcpFrameSpec tail;
        tail.seq = 1002;
        tail.payload = "TACK";
        fixture::TcpFrameSpec head;
        head.seq = 1000;
        head.payload = "AT";
        fixture::append_record(f, 1375573517, 0, fixture::tcp_frame(tail));
        fixture::append_record(f, 1375573518, 0, fixture::tcp_frame(head));
        std::string want =
            R"({"byte_hist":{"0x41":2,"0x43":1,"0x4b":1,"0x54":2},"inst_hist":{"cmpmi":1},)"
            R"("from_team":"teamA","to_team":"teamB","svc":"02345",)"
            R"("payload_hash":"c6ddd0f72ff2fd344693b9ca8d483871","time":"2013-08-03T23:45:17"})"
            "\n";
        if (events_json(f) != want) problems.push_back("out-of-order");
    }
    {  // retransmission
        Bytes f = fixture::pcap_header();
        fixture::TcpFrameSpec s;
        s.payload = "ATTACK";
        fixture::append_record(f, 1375573517, 0, fixture::tcp_frame(s));
        fixture::append_record(f, 1375573518, 0, fixture::tcp_frame(s));
        std::string want =
            R"({"byte_hist":{"0x41":2,"0x43":1,"0x4b":1,"0x54":2},"inst_hist":{"cmpmi":1},)"
            R"("from_team":"teamA","to_team":"teamB","svc":"02345",)"
            R"("payload_hash":"c6ddd0f72ff2fd344693b9ca8d483871","time":"2013-08-03T23:45:17"})"
            "\n";
        if (events_json(f) != want) problems.push_back("retransmission");
    }
    {  // two interleaved flows
        Bytes f = fixture::pcap_header();
        fixture::TcpFrameSpec a1;
        a1.payload = "HEL";
        a1.seq = 100;
        fixture::TcpFrameSpec b1;
        b1.src_ip = 0x0A030009;  // teamC
        b1.src_port = 50000;
        b1.payload = "WOR";
        b1.seq = 500;
        fixture::TcpFrameSpec a2 = a1;
        a2.payload = "LO";
        a2.seq = 103;
        fixture::TcpFrameSpec b2 = b1;
        b2.payload = "LD";
        b2.seq = 503;
        fixture::append_record(f, 1375573517, 0, fixture::tcp_frame(a1));
        fixture::append_record(f, 1375573518, 0, fixture::tcp_frame(b1));
        fixture::append_record(f, 1375573519, 0, fixture::tcp_frame(a2));
        fixture::append_record(f, 1375573520, 0, fixture::tcp_frame(b2));
        std::string want =
            R"({"byte_hist":{"0x45":1,"0x48":1,"0x4c":2,"0x4f":1},"inst_hist":{"unknown":1},)"
            R"("from_team":"teamA","to_team":"teamB","svc":"02345",)"
            R"("payload_hash":"eb61eead90e3b899c6bcbe27ac581660","time":"2013-08-03T23:45:17"})"
            "\n"
            R"({"byte_hist":{"0x44":1,"0x4c":1,"0x4f":1,"0x52":1,"0x57":1},)"
            R"("inst_hist":{"unknown":1},"from_team":"teamC","to_team":"teamB","svc":"02345",)"
            R"("payload_hash":"5289492cf082446ca4a6eec9f72f1ec3","time":"2013-08-03T23:45:18"})"
            "\n";
        if (events_json(f) != want) problems.push_back("interleaved");
    }
    return {problems.empty(),
            problems.empty() ? "4 fixtures byte-identical"
                             : "mismatch: " + problems.front()};
}

// --- 9: end-to-end determinism ------------------------------------------------------

int run_cli(const std::string& args) {
    std::string cmd = std::string(CTFA_CLI_PATH) + " " + args + " 2>/dev/null";
    int status = std::system(cmd.c_str());
    return status == -1 ? -1 : (WIFEXITED(status) ? WEXITSTATUS(status) : -1);
}

Outcome criterion_determinism() {
    fixture::TempDir dir;
    if (run_cli("synth --teams 6 --events 3000 --seed 99 --out " + dir.file("corpus")) != 0)
        return {false, "synth failed"};
    std::string base = "experiment --events " + dir.file("corpus/events.jsonl") +
                       " --methods dt,rf --prune none,p1,p2:3 --rf-trees 15 --seed 77 --out " +
                       dir.file("run");
    if (run_cli(base) != 0) return {false, "first run failed"};
    const std::vector<std::string> outputs = {"report.csv",         "per_team.csv", "fig3.csv",
                                              "fig4.csv",           "pruning_report.csv",
                                              "summary.json",       "manifest.json"};
    std::map<std::string, std::string> snapshot;
    for (const auto& name : outputs) snapshot[name] = read_file_text(dir.file("run/") + name);
    if (run_cli(base) != 0) return {false, "second run failed"};
    std::size_t compared = 0;
    for (const auto& name : outputs) {
        if (read_file_text(dir.file("run/") + name) != snapshot[name])
            return {false, "outputs differ: " + name};
        ++compared;
    }
    return {true, std::to_string(compared) + " files byte-identical across reruns"};
}

// --- 10 (optional): real capture smoke test -------------------------------------------

Outcome criterion_defcon_smoke() {
    const char* dir = std::getenv("CTFA_DEFCON_DIR");
    if (!dir) return {false, "CTFA_DEFCON_DIR not set; skipping real-capture smoke test"};
    std::vector<std::string> pcaps;
    for (const auto& entry : std::filesystem::directory_iterator(dir))
        if (entry.path().extension() == ".pcap") pcaps.push_back(entry.path().string());
    if (pcaps.empty()) return {false, "no .pcap files under CTFA_DEFCON_DIR"};
    std::sort(pcaps.begin(), pcaps.end());
    const char* teammap = std::getenv("CTFA_DEFCON_TEAMMAP");
    if (!teammap) return {false, "CTFA_DEFCON_TEAMMAP not set"};

    fixture::TempDir tmp;
    std::string flags = "ingest --teammap " + std::string(teammap) + " --out " + tmp.file("ing");
    for (const auto& p : pcaps) flags += " --pcap " + p;
    if (run_cli(flags) != 0) return {false, "ingest failed"};
    if (run_cli("analyze --events " + tmp.file("ing/events.jsonl") + " --out " + tmp.file("ana")) != 0)
        return {false, "analyze failed"};

    std::ifstream fig1(tmp.file("ana/fig1.csv"));
    std::string line;
    std::getline(fig1, line);  // header
    std::uint64_t uniq = 0, deceptive = 0;
    while (std::getline(fig1, line)) {
        std::istringstream row(line);
        std::string team, u, d;
        std::getline(row, team, ',');
        std::getline(row, u, ',');
        std::getline(row, d, ',');
        uniq += std::stoull(u);
        deceptive += std::stoull(d);
    }
    double share = uniq ? static_cast<double>(deceptive) / static_cast<double>(uniq) : 0.0;
    return {true, "deceptive-unique share " + fmt_accuracy(share) +
                      " (full-corpus reference: just under 0.35)"};
}

}  // namespace

int main() {
    std::printf("ctfa acceptance suite\n");
    run_criterion(1, "deception labeling matches the brute-force oracle",
                  criterion_oracle_equivalence);
    run_criterion(2, "generator truth labels equal analysis labels", criterion_generator_truth);
    run_criterion(3, "pruning strategies are exact", criterion_pruning_exactness);
    run_criterion(4, "temporal protocol invariants hold", criterion_protocol_invariants);
    run_criterion(5, "classifier correctness", criterion_classifier_correctness);
    run_criterion(6, "directional replication on synthetic corpora", criterion_directional);
    run_criterion(7, "random-baseline calibration", criterion_random_baseline);
    run_criterion(8, "ingestion golden files", criterion_golden_pcap);
    run_criterion(9, "experiment reruns are byte-identical", criterion_determinism);
    run_criterion(10, "real-capture smoke test (optional)", criterion_defcon_smoke,
                  /*gating=*/false);
    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all gating criteria passed\n");
    return 0;
}

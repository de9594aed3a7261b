#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include "ctfa/classify/decision_tree.hpp"
#include "ctfa/classify/linear_svm.hpp"
#include "ctfa/classify/logistic_regression.hpp"
#include "ctfa/classify/random_forest.hpp"
#include "ctfa/deception.hpp"
#include "ctfa/event.hpp"
#include "ctfa/features.hpp"
#include "ctfa/pruning.hpp"
#include "ctfa/rng.hpp"

namespace ctfa {

struct TooFewEvents : std::runtime_error {
    TooFewEvents() : std::runtime_error("need at least 2 events to split") {}
};

struct SplitSpec {
    double train_fraction = 0.9;  // in (0,1); split is by time order, never random
};

// Sorts one target's events into the canonical total order and cuts at
// floor(train_fraction * N): earliest slice trains, the rest tests.
inline std::pair<std::vector<AttackEvent>, std::vector<AttackEvent>> temporal_split(
    std::vector<AttackEvent> events, const SplitSpec& spec = {}) {
    if (events.size() < 2) throw TooFewEvents{};
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw std::invalid_argument("train_fraction must be in (0,1)");
    std::sort(events.begin(), events.end(), event_before);
    std::size_t n_train = static_cast<std::size_t>(
        std::floor(spec.train_fraction * static_cast<double>(events.size())));
    std::vector<AttackEvent> test(events.begin() + static_cast<std::ptrdiff_t>(n_train),
                                  events.end());
    events.resize(n_train);
    return {std::move(events), std::move(test)};
}

// Square confusion matrix over the union of model classes and observed test
// labels, sorted; rows are true teams, columns predicted.
struct Confusion {
    std::vector<std::string> labels;
    std::vector<std::uint64_t> counts;

    std::uint64_t& at(std::size_t truth, std::size_t predicted) {
        return counts[truth * labels.size() + predicted];
    }
    std::uint64_t at(std::size_t truth, std::size_t predicted) const {
        return counts[truth * labels.size() + predicted];
    }
    std::uint64_t trace() const {
        std::uint64_t t = 0;
        for (std::size_t i = 0; i < labels.size(); ++i) t += at(i, i);
        return t;
    }
};

struct EvalResult {
    double accuracy = 0.0;
    Confusion confusion;
    std::vector<std::string> predictions;  // parallel to the test sequence
};

inline EvalResult evaluate(const Model& model, std::span<const FeatureVector> test) {
    EvalResult r;
    std::set<std::string> labels(model.classes.begin(), model.classes.end());
    for (const auto& v : test) labels.insert(v.label);
    r.confusion.labels.assign(labels.begin(), labels.end());
    r.confusion.counts.assign(r.confusion.labels.size() * r.confusion.labels.size(), 0);
    auto index_of = [&](const std::string& s) {
        return static_cast<std::size_t>(
            std::lower_bound(r.confusion.labels.begin(), r.confusion.labels.end(), s) -
            r.confusion.labels.begin());
    };
    std::uint64_t correct = 0;
    for (const auto& v : test) {
        auto p = model.predict(v.values);
        r.predictions.push_back(p.team);
        ++r.confusion.at(index_of(v.label), index_of(p.team));
        if (p.team == v.label) ++correct;
    }
    r.accuracy = test.empty() ? 0.0 : static_cast<double>(correct) / static_cast<double>(test.size());
    return r;
}

// Every misclassified test event has exactly one source. Unseen payloads are
// checked first; otherwise the event's deception role decides.
struct Breakdown {
    std::uint64_t unseen_payload = 0;
    std::uint64_t nondeceptive_misattributed = 0;
    std::uint64_t deceptive_misattributed = 0;

    std::uint64_t total() const {
        return unseen_payload + nondeceptive_misattributed + deceptive_misattributed;
    }
};

inline Breakdown misclassification_breakdown(std::span<const std::string> predictions,
                                             std::span<const AttackEvent> test,
                                             std::span<const DeceptionAnnotation> test_annotations,
                                             const std::unordered_set<std::string>& train_hashes) {
    Breakdown b;
    for (std::size_t i = 0; i < test.size(); ++i) {
        if (predictions[i] == test[i].from_team) continue;
        if (!train_hashes.contains(test[i].payload_hash)) {
            ++b.unseen_payload;
        } else if (test_annotations[i].role == Role::Original ||
                   test_annotations[i].role == Role::NonDeceptiveDuplicate) {
            ++b.nondeceptive_misattributed;
        } else {
            ++b.deceptive_misattributed;
        }
    }
    return b;
}

// Uniform guessing over n_classes; the chance-level reference for accuracy.
inline double random_baseline_accuracy(int n_classes, int draws, std::uint64_t seed) {
    Rng rng(seed);
    int hits = 0;
    for (int i = 0; i < draws; ++i) {
        auto truth = rng.index(static_cast<std::size_t>(n_classes));
        auto guess = rng.index(static_cast<std::size_t>(n_classes));
        if (truth == guess) ++hits;
    }
    return static_cast<double>(hits) / static_cast<double>(draws);
}

struct TrainParams {
    DtParams dt;
    RfParams rf;
    LogRegParams logreg;
    SvmParams svm;
    bool normalize_features = true;
};

inline Model train_model(ModelKind kind, const Dataset& data, const TrainParams& params,
                         std::uint64_t seed) {
    switch (kind) {
        case ModelKind::DT: return train_decision_tree(data, params.dt, seed);
        case ModelKind::RF: return train_random_forest(data, params.rf, seed);
        case ModelKind::LOGREG: return train_logistic_regression(data, params.logreg, seed);
        case ModelKind::SVM: return train_linear_svm(data, params.svm, seed);
    }
    throw std::logic_error("unreachable");
}

struct CellResult {
    std::string target;
    ModelKind method = ModelKind::DT;
    std::string strategy;
    bool ok = false;
    std::string error;
    double accuracy = 0.0;
    std::size_t n_train_raw = 0;  // before pruning
    std::size_t n_train = 0;      // actually fitted
    std::size_t n_test = 0;
    Breakdown breakdown;
};

struct ExperimentConfig {
    SplitSpec split;
    std::vector<ModelKind> methods{ModelKind::RF};
    std::vector<PruningStrategy> strategies{PruningStrategy{}};
    TrainParams params;
    std::uint64_t seed = 1;
    int threads = 0;  // 0: hardware concurrency
};

struct MethodStrategyAverage {
    ModelKind method;
    std::string strategy;
    double mean_accuracy = 0.0;
    std::size_t n_targets = 0;  // targets with a successful cell
    Breakdown breakdown;        // summed over targets
};

struct ExperimentReport {
    std::vector<std::string> targets;      // sorted
    std::vector<CellResult> cells;         // target-major, then strategy, then method
    std::vector<MethodStrategyAverage> averages;
};

namespace detail {

inline std::uint64_t cell_seed(std::uint64_t master, const std::string& target, ModelKind method,
                               const std::string& strategy) {
    std::uint64_t h = mix64(master);
    h = derive_seed(h, fnv1a64(target));
    h = derive_seed(h, fnv1a64(model_kind_name(method)));
    h = derive_seed(h, fnv1a64(strategy));
    return h;
}

// All cells of one target: one split and one annotation pass, shared across
// strategies and methods.
inline void run_target(const std::string& target, std::vector<AttackEvent> target_events,
                       const ExperimentConfig& cfg, std::vector<CellResult>& out) {
    auto fail_all = [&](const std::string& message) {
        for (const auto& strategy : cfg.strategies)
            for (ModelKind method : cfg.methods) {
                CellResult cell;
                cell.target = target;
                cell.method = method;
                cell.strategy = strategy.name();
                cell.error = message;
                out.push_back(std::move(cell));
            }
    };
    std::vector<AttackEvent> train, test;
    try {
        std::tie(train, test) = temporal_split(std::move(target_events), cfg.split);
    } catch (const std::exception& e) {
        fail_all(e.what());
        return;
    }

    // Roles for the breakdown span the full (train+test) timeline; roles for
    // pruning are computed on the training slice only.
    std::vector<AttackEvent> timeline;
    timeline.reserve(train.size() + test.size());
    timeline.insert(timeline.end(), train.begin(), train.end());
    timeline.insert(timeline.end(), test.begin(), test.end());
    auto full_annotations = annotate(timeline);
    std::vector<DeceptionAnnotation> test_annotations(full_annotations.begin() +
                                                          static_cast<std::ptrdiff_t>(train.size()),
                                                      full_annotations.end());
    auto train_annotations = annotate(train);

    for (const auto& strategy : cfg.strategies) {
        std::vector<AttackEvent> pruned;
        try {
            pruned = prune(train, train_annotations, strategy);
        } catch (const std::exception& e) {
            for (ModelKind method : cfg.methods) {
                CellResult cell;
                cell.target = target;
                cell.method = method;
                cell.strategy = strategy.name();
                cell.error = e.what();
                out.push_back(std::move(cell));
            }
            continue;
        }
        for (ModelKind method : cfg.methods) {
            CellResult cell;
            cell.target = target;
            cell.method = method;
            cell.strategy = strategy.name();
            cell.n_train_raw = train.size();
            cell.n_train = pruned.size();
            cell.n_test = test.size();
            try {
                auto space = FeatureSpace::build(pruned, cfg.params.normalize_features);
                std::vector<FeatureVector> train_vecs, test_vecs;
                train_vecs.reserve(pruned.size());
                for (const auto& e : pruned) train_vecs.push_back(vectorize(e, space));
                test_vecs.reserve(test.size());
                for (const auto& e : test) test_vecs.push_back(vectorize(e, space));
                Dataset data = Dataset::build(train_vecs);
                Model model = train_model(method, data, cfg.params,
                                          cell_seed(cfg.seed, target, method, strategy.name()));
                EvalResult eval = evaluate(model, test_vecs);
                std::unordered_set<std::string> train_hashes;
                for (const auto& e : pruned) train_hashes.insert(e.payload_hash);
                cell.breakdown = misclassification_breakdown(eval.predictions, test,
                                                             test_annotations, train_hashes);
                cell.accuracy = eval.accuracy;
                cell.ok = true;
            } catch (const std::exception& e) {
                cell.error = e.what();
            }
            out.push_back(std::move(cell));
        }
    }
}

}  // namespace detail

// The full protocol: per target team, temporal split, per-strategy training
// set pruning, per-method training, evaluation on the untouched test slice.
// Cells fail individually; the report always assembles.
inline ExperimentReport run_experiment_matrix(std::span<const AttackEvent> events,
                                              const ExperimentConfig& cfg) {
    std::map<std::string, std::vector<AttackEvent>> by_target;
    for (const auto& e : events) by_target[e.to_team].push_back(e);
    if (by_target.size() < 2) throw std::invalid_argument("need at least 2 target teams");

    ExperimentReport report;
    std::vector<std::vector<AttackEvent>> slices;
    for (auto& [target, slice] : by_target) {
        report.targets.push_back(target);
        slices.push_back(std::move(slice));
    }

    std::vector<std::vector<CellResult>> per_target(report.targets.size());
    unsigned n_threads = cfg.threads > 0 ? static_cast<unsigned>(cfg.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
    n_threads = std::min<unsigned>(n_threads, static_cast<unsigned>(report.targets.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= report.targets.size()) return;
            detail::run_target(report.targets[i], std::move(slices[i]), cfg, per_target[i]);
        }
    };
    if (n_threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    for (auto& cells : per_target)
        for (auto& c : cells) report.cells.push_back(std::move(c));

    for (const auto& strategy : cfg.strategies) {
        for (ModelKind method : cfg.methods) {
            MethodStrategyAverage avg;
            avg.method = method;
            avg.strategy = strategy.name();
            double sum = 0.0;
            for (const auto& c : report.cells) {
                if (!c.ok || c.method != method || c.strategy != strategy.name()) continue;
                sum += c.accuracy;
                ++avg.n_targets;
                avg.breakdown.unseen_payload += c.breakdown.unseen_payload;
                avg.breakdown.nondeceptive_misattributed += c.breakdown.nondeceptive_misattributed;
                avg.breakdown.deceptive_misattributed += c.breakdown.deceptive_misattributed;
            }
            avg.mean_accuracy = avg.n_targets ? sum / static_cast<double>(avg.n_targets) : 0.0;
            report.averages.push_back(std::move(avg));
        }
    }
    return report;
}

}  // namespace ctfa

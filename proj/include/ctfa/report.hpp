#pragma once

#include <cstdio>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ctfa/evaluation.hpp"

namespace ctfa {

inline std::string fmt_accuracy(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

// One row per target x method x strategy cell.
inline void write_report_csv(std::ostream& out, const ExperimentReport& report) {
    out << "target,method,strategy,status,accuracy,n_train_raw,n_train,n_test,"
           "miss_unseen_payload,miss_nondeceptive,miss_deceptive,error\n";
    for (const auto& c : report.cells) {
        out << csv_field(c.target) << ',' << model_kind_name(c.method) << ','
            << csv_field(c.strategy) << ',' << (c.ok ? "ok" : "failed") << ','
            << (c.ok ? fmt_accuracy(c.accuracy) : "") << ',' << c.n_train_raw << ',' << c.n_train
            << ',' << c.n_test << ',' << c.breakdown.unseen_payload << ','
            << c.breakdown.nondeceptive_misattributed << ','
            << c.breakdown.deceptive_misattributed << ',' << csv_field(c.error) << '\n';
    }
}

// Pivot of accuracies: one row per target, one column per method|strategy.
inline void write_per_team_csv(std::ostream& out, const ExperimentReport& report) {
    std::vector<std::pair<std::string, std::string>> columns;  // (method, strategy)
    for (const auto& a : report.averages) columns.emplace_back(model_kind_name(a.method), a.strategy);
    out << "target";
    for (const auto& [m, s] : columns) out << ',' << m << '|' << s;
    out << '\n';
    std::map<std::string, std::map<std::pair<std::string, std::string>, const CellResult*>> table;
    for (const auto& c : report.cells)
        table[c.target][{model_kind_name(c.method), c.strategy}] = &c;
    for (const auto& target : report.targets) {
        out << csv_field(target);
        for (const auto& col : columns) {
            auto it = table[target].find(col);
            out << ',';
            if (it != table[target].end() && it->second->ok) out << fmt_accuracy(it->second->accuracy);
        }
        out << '\n';
    }
}

// Per-target accuracy for each method at the baseline (unpruned) strategy.
inline void write_fig3_csv(std::ostream& out, const ExperimentReport& report,
                           const std::string& baseline_strategy) {
    std::vector<std::string> methods;
    for (const auto& a : report.averages) {
        std::string m = model_kind_name(a.method);
        if (std::find(methods.begin(), methods.end(), m) == methods.end()) methods.push_back(m);
    }
    out << "target";
    for (const auto& m : methods) out << ',' << m;
    out << '\n';
    std::map<std::string, std::map<std::string, double>> acc;
    for (const auto& c : report.cells)
        if (c.ok && c.strategy == baseline_strategy) acc[c.target][model_kind_name(c.method)] = c.accuracy;
    for (const auto& target : report.targets) {
        out << csv_field(target);
        for (const auto& m : methods) {
            out << ',';
            auto it = acc[target].find(m);
            if (it != acc[target].end()) out << fmt_accuracy(it->second);
        }
        out << '\n';
    }
}

// Misclassification sources per target for one reference method.
inline void write_fig4_csv(std::ostream& out, const ExperimentReport& report,
                           const std::string& method, const std::string& strategy) {
    out << "target,miss_unseen_payload,miss_nondeceptive,miss_deceptive\n";
    for (const auto& c : report.cells) {
        if (!c.ok || c.strategy != strategy || model_kind_name(c.method) != method) continue;
        out << csv_field(c.target) << ',' << c.breakdown.unseen_payload << ','
            << c.breakdown.nondeceptive_misattributed << ','
            << c.breakdown.deceptive_misattributed << '\n';
    }
}

// Training-set size before/after pruning, one row per target x strategy.
inline void write_pruning_report_csv(std::ostream& out, const ExperimentReport& report) {
    out << "target,strategy,events_before,events_after\n";
    std::string last_key;
    for (const auto& c : report.cells) {
        std::string key = c.target + '\x1f' + c.strategy;
        if (key == last_key) continue;  // cells repeat per method
        last_key = key;
        if (c.n_train_raw == 0 && !c.ok) continue;
        out << csv_field(c.target) << ',' << csv_field(c.strategy) << ',' << c.n_train_raw << ','
            << c.n_train << '\n';
    }
}

inline nlohmann::json summary_to_json(const ExperimentReport& report) {
    nlohmann::json j;
    j["targets"] = report.targets;
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& a : report.averages) {
        rows.push_back({{"method", model_kind_name(a.method)},
                        {"strategy", a.strategy},
                        {"mean_accuracy", a.mean_accuracy},
                        {"targets_ok", a.n_targets},
                        {"miss_unseen_payload", a.breakdown.unseen_payload},
                        {"miss_nondeceptive", a.breakdown.nondeceptive_misattributed},
                        {"miss_deceptive", a.breakdown.deceptive_misattributed}});
    }
    j["averages"] = std::move(rows);
    return j;
}

}  // namespace ctfa

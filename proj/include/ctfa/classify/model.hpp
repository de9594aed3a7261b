#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "ctfa/classify/dataset.hpp"

namespace ctfa {

enum class ModelKind { DT, RF, LOGREG, SVM };

inline const char* model_kind_name(ModelKind k) {
    switch (k) {
        case ModelKind::DT: return "dt";
        case ModelKind::RF: return "rf";
        case ModelKind::LOGREG: return "logreg";
        case ModelKind::SVM: return "svm";
    }
    return "?";
}

inline std::optional<ModelKind> model_kind_from(std::string_view s) {
    for (ModelKind k : {ModelKind::DT, ModelKind::RF, ModelKind::LOGREG, ModelKind::SVM})
        if (s == model_kind_name(k)) return k;
    return std::nullopt;
}

// Binary split on one feature; leaves carry the class counts of the samples
// that reached them.
struct TreeNode {
    int feature = -1;  // -1 marks a leaf
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    std::vector<std::uint32_t> counts;  // leaves only

    bool is_leaf() const { return feature < 0; }
};

struct TreeModel {
    std::vector<TreeNode> nodes;  // nodes[0] is the root

    const TreeNode& leaf_for(const double* x) const {
        int i = 0;
        while (!nodes[i].is_leaf()) i = x[nodes[i].feature] < nodes[i].threshold
                                            ? nodes[i].left
                                            : nodes[i].right;
        return nodes[i];
    }
};

struct ForestModel {
    std::vector<TreeModel> trees;
};

// Dense weight matrix over bias-augmented inputs: logreg keeps C-1 rows
// (last class pinned to zero), the max-margin learner one row per class.
struct LinearModel {
    std::size_t rows = 0;
    std::size_t cols = 0;  // dim + 1, bias last
    std::vector<double> w;

    double dot_row(std::size_t r, std::span<const double> x) const {
        const double* wr = w.data() + r * cols;
        double acc = wr[cols - 1];  // bias
        for (std::size_t j = 0; j < x.size(); ++j) acc += wr[j] * x[j];
        return acc;
    }
};

struct PredictResult {
    int class_index = 0;
    std::string team;
    std::vector<double> scores;  // aligned with Model::classes
};

struct Model {
    ModelKind kind = ModelKind::DT;
    std::vector<std::string> classes;
    std::size_t dim = 0;
    std::uint64_t seed = 0;
    nlohmann::json hyperparameters;
    std::variant<TreeModel, ForestModel, LinearModel> params;

    PredictResult predict(std::span<const double> x) const {
        if (x.size() != dim) throw DimensionMismatch{};
        PredictResult r;
        r.scores.assign(classes.size(), 0.0);
        switch (kind) {
            case ModelKind::DT: {
                const auto& leaf = std::get<TreeModel>(params).leaf_for(x.data());
                for (std::size_t c = 0; c < r.scores.size(); ++c) r.scores[c] = leaf.counts[c];
                break;
            }
            case ModelKind::RF: {
                for (const auto& tree : std::get<ForestModel>(params).trees) {
                    const auto& leaf = tree.leaf_for(x.data());
                    int best = 0;
                    for (std::size_t c = 1; c < leaf.counts.size(); ++c)
                        if (leaf.counts[c] > leaf.counts[best]) best = static_cast<int>(c);
                    r.scores[best] += 1.0;
                }
                break;
            }
            case ModelKind::LOGREG: {
                const auto& lm = std::get<LinearModel>(params);
                double maxl = 0.0;  // implicit last-class logit
                std::vector<double> logits(classes.size(), 0.0);
                for (std::size_t c = 0; c + 1 < classes.size(); ++c) {
                    logits[c] = lm.dot_row(c, x);
                    maxl = std::max(maxl, logits[c]);
                }
                double denom = 0.0;
                for (double& l : logits) {
                    l = std::exp(l - maxl);
                    denom += l;
                }
                for (std::size_t c = 0; c < classes.size(); ++c) r.scores[c] = logits[c] / denom;
                break;
            }
            case ModelKind::SVM: {
                const auto& lm = std::get<LinearModel>(params);
                for (std::size_t c = 0; c < classes.size(); ++c) r.scores[c] = lm.dot_row(c, x);
                break;
            }
        }
        r.class_index = 0;
        for (std::size_t c = 1; c < r.scores.size(); ++c)
            if (r.scores[c] > r.scores[r.class_index]) r.class_index = static_cast<int>(c);
        r.team = classes[static_cast<std::size_t>(r.class_index)];
        return r;
    }
};

// --- versioned JSON container ------------------------------------------------

namespace detail {

inline nlohmann::json tree_to_json(const TreeModel& t) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : t.nodes) {
        if (n.is_leaf())
            nodes.push_back({{"n", n.counts}});
        else
            nodes.push_back({{"f", n.feature}, {"t", n.threshold}, {"l", n.left}, {"r", n.right}});
    }
    return nodes;
}

inline TreeModel tree_from_json(const nlohmann::json& nodes) {
    TreeModel t;
    for (const auto& jn : nodes) {
        TreeNode n;
        if (jn.contains("f")) {
            n.feature = jn.at("f").get<int>();
            n.threshold = jn.at("t").get<double>();
            n.left = jn.at("l").get<int>();
            n.right = jn.at("r").get<int>();
        } else {
            n.counts = jn.at("n").get<std::vector<std::uint32_t>>();
        }
        t.nodes.push_back(std::move(n));
    }
    return t;
}

}  // namespace detail

inline nlohmann::json model_to_json(const Model& m) {
    nlohmann::json j;
    j["format"] = "ctfa-model";
    j["version"] = 1;
    j["kind"] = model_kind_name(m.kind);
    j["classes"] = m.classes;
    j["dim"] = m.dim;
    j["seed"] = m.seed;
    j["hyperparameters"] = m.hyperparameters;
    if (const auto* t = std::get_if<TreeModel>(&m.params)) {
        j["tree"] = detail::tree_to_json(*t);
    } else if (const auto* f = std::get_if<ForestModel>(&m.params)) {
        nlohmann::json trees = nlohmann::json::array();
        for (const auto& t2 : f->trees) trees.push_back(detail::tree_to_json(t2));
        j["trees"] = std::move(trees);
    } else if (const auto* l = std::get_if<LinearModel>(&m.params)) {
        j["rows"] = l->rows;
        j["cols"] = l->cols;
        j["weights"] = l->w;
    }
    return j;
}

inline Model model_from_json(const nlohmann::json& j) {
    if (j.value("format", "") != "ctfa-model" || j.value("version", 0) != 1)
        throw std::runtime_error("unrecognized model container");
    Model m;
    auto kind = model_kind_from(j.at("kind").get<std::string>());
    if (!kind) throw std::runtime_error("unknown model kind");
    m.kind = *kind;
    m.classes = j.at("classes").get<std::vector<std::string>>();
    m.dim = j.at("dim").get<std::size_t>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.hyperparameters = j.at("hyperparameters");
    if (j.contains("tree")) {
        m.params = detail::tree_from_json(j.at("tree"));
    } else if (j.contains("trees")) {
        ForestModel f;
        for (const auto& t : j.at("trees")) f.trees.push_back(detail::tree_from_json(t));
        m.params = std::move(f);
    } else {
        LinearModel l;
        l.rows = j.at("rows").get<std::size_t>();
        l.cols = j.at("cols").get<std::size_t>();
        l.w = j.at("weights").get<std::vector<double>>();
        m.params = std::move(l);
    }
    return m;
}

}  // namespace ctfa

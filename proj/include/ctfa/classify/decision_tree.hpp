#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "ctfa/classify/dataset.hpp"
#include "ctfa/classify/model.hpp"
#include "ctfa/rng.hpp"

namespace ctfa {

struct DtParams {
    double min_node_fraction = 0.001;  // nodes smaller than this share of the
                                       // training set become leaves
};

namespace detail {

// Gains below this are treated as zero; a materialized split must improve
// entropy strictly.
constexpr double kMinGain = 1e-12;

inline double entropy(const std::vector<std::uint32_t>& counts, double total) {
    double h = 0.0;
    for (std::uint32_t c : counts) {
        if (c == 0) continue;
        double p = c / total;
        h -= p * std::log2(p);
    }
    return h;
}

struct TreeBuilder {
    const Dataset& data;
    std::size_t min_split;  // smallest node size that may still be split
    std::size_t mtry;       // features examined per node; dim for plain trees
    Rng* rng;               // feature sampler; nullptr scans all features

    std::vector<std::size_t> feature_buf;
    std::vector<std::pair<double, int>> sort_buf;

    TreeModel build(std::vector<std::size_t>& indices) {
        TreeModel tree;
        if (rng) {
            feature_buf.resize(data.dim);
            std::iota(feature_buf.begin(), feature_buf.end(), 0);
        }
        grow(tree, indices, 0, indices.size());
        return tree;
    }

private:
    // Depth-first, left child before right, so node visitation order (and
    // with it the per-node feature sampling sequence) is deterministic.
    int grow(TreeModel& tree, std::vector<std::size_t>& indices, std::size_t begin,
             std::size_t end) {
        const std::size_t n_classes = data.classes.size();
        std::vector<std::uint32_t> counts(n_classes, 0);
        for (std::size_t i = begin; i < end; ++i) ++counts[data.y[indices[i]]];
        const std::size_t n = end - begin;

        int node_index = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();

        bool pure = std::count(counts.begin(), counts.end(), 0u) + 1 >= counts.size();
        int best_feature = -1;
        double best_threshold = 0.0, best_gain = kMinGain;
        if (!pure && n >= min_split) {
            const double parent_h = entropy(counts, static_cast<double>(n));
            scan_features(indices, begin, end, counts, parent_h, best_feature, best_threshold,
                          best_gain);
        }
        if (best_feature < 0) {
            tree.nodes[node_index].counts = std::move(counts);
            return node_index;
        }

        auto mid = std::partition(indices.begin() + begin, indices.begin() + end,
                                  [&](std::size_t i) {
                                      return data.x[i * data.dim + best_feature] < best_threshold;
                                  });
        std::size_t split = static_cast<std::size_t>(mid - indices.begin());
        tree.nodes[node_index].feature = best_feature;
        tree.nodes[node_index].threshold = best_threshold;
        int left = grow(tree, indices, begin, split);
        tree.nodes[node_index].left = left;
        int right = grow(tree, indices, split, end);
        tree.nodes[node_index].right = right;
        return node_index;
    }

    void scan_features(const std::vector<std::size_t>& indices, std::size_t begin,
                       std::size_t end, const std::vector<std::uint32_t>& parent_counts,
                       double parent_h, int& best_feature, double& best_threshold,
                       double& best_gain) {
        const std::size_t n = end - begin;
        const std::size_t n_classes = data.classes.size();

        // Candidate features, ascending; sampling then sorting keeps the scan
        // order identical to the full scan when mtry == dim.
        const std::size_t take = rng ? std::min(mtry, data.dim) : data.dim;
        std::size_t* chosen = nullptr;
        if (rng) {
            for (std::size_t i = 0; i < take; ++i) {
                std::size_t j = i + rng->index(data.dim - i);
                std::swap(feature_buf[i], feature_buf[j]);
            }
            std::sort(feature_buf.begin(), feature_buf.begin() + take);
            chosen = feature_buf.data();
        }

        std::vector<std::uint32_t> left(n_classes);
        for (std::size_t fi = 0; fi < take; ++fi) {
            const std::size_t f = rng ? chosen[fi] : fi;
            sort_buf.clear();
            for (std::size_t i = begin; i < end; ++i) {
                std::size_t row = indices[i];
                sort_buf.emplace_back(data.x[row * data.dim + f], data.y[row]);
            }
            std::sort(sort_buf.begin(), sort_buf.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
            if (sort_buf.front().first == sort_buf.back().first) continue;

            std::fill(left.begin(), left.end(), 0u);
            std::uint32_t n_left = 0;
            for (std::size_t i = 0; i + 1 < n; ++i) {
                ++left[sort_buf[i].second];
                ++n_left;
                if (sort_buf[i].first == sort_buf[i + 1].first) continue;
                double hl = entropy(left, n_left);
                double hr = 0.0;
                {
                    double n_right = static_cast<double>(n - n_left);
                    for (std::size_t c = 0; c < n_classes; ++c) {
                        std::uint32_t rc = parent_counts[c] - left[c];
                        if (rc == 0) continue;
                        double p = rc / n_right;
                        hr -= p * std::log2(p);
                    }
                }
                double gain = parent_h - (n_left * hl + (n - n_left) * hr) / n;
                if (gain > best_gain) {
                    double lo = sort_buf[i].first, hi = sort_buf[i + 1].first;
                    double thr = lo / 2 + hi / 2;
                    if (!(thr > lo)) thr = hi;  // adjacent doubles; keep both sides non-empty
                    best_gain = gain;
                    best_feature = static_cast<int>(f);
                    best_threshold = thr;
                }
            }
        }
    }
};

inline std::size_t min_split_from_fraction(double fraction, std::size_t n_train) {
    return static_cast<std::size_t>(std::ceil(fraction * static_cast<double>(n_train)));
}

}  // namespace detail

inline Model train_decision_tree(const Dataset& data, const DtParams& params = {},
                                 std::uint64_t seed = 0) {
    if (data.n == 0) throw EmptyTrainingSet{};
    detail::TreeBuilder builder{data,
                                detail::min_split_from_fraction(params.min_node_fraction, data.n),
                                data.dim, nullptr};
    std::vector<std::size_t> indices(data.n);
    std::iota(indices.begin(), indices.end(), 0);
    Model m;
    m.kind = ModelKind::DT;
    m.classes = data.classes;
    m.dim = data.dim;
    m.seed = seed;
    m.hyperparameters = {{"min_node_fraction", params.min_node_fraction}};
    m.params = builder.build(indices);
    return m;
}

}  // namespace ctfa

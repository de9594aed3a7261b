#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "ctfa/classify/decision_tree.hpp"

namespace ctfa {

struct RfParams {
    int n_trees = 100;
    int mtry = 0;          // features per node; 0 means floor(sqrt(dim))
    bool bootstrap = true; // test hook: disabled + n_trees=1 + mtry=dim == DT
    double min_node_fraction = 0.001;
};

// Bagged trees with per-node random feature subsets. Each tree draws from its
// own seed, derived from the master seed and tree index, so growing trees in
// any order (or in parallel) yields the same forest.
inline Model train_random_forest(const Dataset& data, const RfParams& params = {},
                                 std::uint64_t seed = 0) {
    if (data.n == 0) throw EmptyTrainingSet{};
    std::size_t mtry = params.mtry > 0
                           ? static_cast<std::size_t>(params.mtry)
                           : std::max<std::size_t>(1, static_cast<std::size_t>(
                                                          std::sqrt(static_cast<double>(data.dim))));
    mtry = std::min(mtry, data.dim);

    ForestModel forest;
    forest.trees.resize(static_cast<std::size_t>(params.n_trees));
    for (int t = 0; t < params.n_trees; ++t) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
        std::vector<std::size_t> indices(data.n);
        if (params.bootstrap)
            for (auto& i : indices) i = rng.index(data.n);
        else
            std::iota(indices.begin(), indices.end(), 0);
        detail::TreeBuilder builder{
            data, detail::min_split_from_fraction(params.min_node_fraction, data.n), mtry, &rng};
        forest.trees[static_cast<std::size_t>(t)] = builder.build(indices);
    }

    Model m;
    m.kind = ModelKind::RF;
    m.classes = data.classes;
    m.dim = data.dim;
    m.seed = seed;
    m.hyperparameters = {{"n_trees", params.n_trees},
                         {"mtry", mtry},
                         {"bootstrap", params.bootstrap},
                         {"min_node_fraction", params.min_node_fraction}};
    m.params = std::move(forest);
    return m;
}

}  // namespace ctfa

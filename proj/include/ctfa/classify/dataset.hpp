#pragma once

#include <algorithm>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ctfa/features.hpp"

namespace ctfa {

struct DimensionMismatch : std::runtime_error {
    DimensionMismatch() : std::runtime_error("feature dimension mismatch") {}
};

// Row-major training matrix with labels encoded as indices into the sorted
// class list, so lexicographically-smallest tie-breaking is index order.
struct Dataset {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::vector<double> x;
    std::vector<int> y;
    std::vector<std::string> classes;

    const double* row(std::size_t i) const { return x.data() + i * dim; }

    static Dataset build(std::span<const FeatureVector> vectors) {
        if (vectors.empty()) throw EmptyTrainingSet{};
        Dataset d;
        d.n = vectors.size();
        d.dim = vectors.front().values.size();
        std::set<std::string> labels;
        for (const auto& v : vectors) {
            if (v.values.size() != d.dim) throw DimensionMismatch{};
            labels.insert(v.label);
        }
        d.classes.assign(labels.begin(), labels.end());
        d.x.reserve(d.n * d.dim);
        d.y.reserve(d.n);
        for (const auto& v : vectors) {
            d.x.insert(d.x.end(), v.values.begin(), v.values.end());
            int cls = static_cast<int>(
                std::lower_bound(d.classes.begin(), d.classes.end(), v.label) -
                d.classes.begin());
            d.y.push_back(cls);
        }
        return d;
    }
};

}  // namespace ctfa

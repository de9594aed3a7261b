#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "ctfa/classify/dataset.hpp"
#include "ctfa/classify/logistic_regression.hpp"  // augment_with_bias
#include "ctfa/classify/model.hpp"
#include "ctfa/rng.hpp"

namespace ctfa {

struct SvmParams {
    double c = 1.0;   // inverse regularization; lambda = kSvmBaseLambda / c
    int epochs = 30;
};

// Regularization scale at c = 1. The mean-hinge objective keeps lambda
// independent of the sample count (so duplicating samples never moves the
// optimum); this constant sets where c = 1 lands on L1-normalized features.
constexpr double kSvmBaseLambda = 1e-3;

namespace detail {

// (lambda/2)*||w||^2 + mean hinge. Both terms are invariant under duplicating
// every sample, which pins the optimum independent of multiplicity.
inline double svm_objective(const std::vector<double>& w, const std::vector<double>& x,
                            const std::vector<signed char>& z, std::size_t n, std::size_t cols,
                            double lambda) {
    double norm2 = 0.0;
    for (double v : w) norm2 += v * v;
    double hinge = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double* xi = x.data() + i * cols;
        double m = 0.0;
        for (std::size_t j = 0; j < cols; ++j) m += w[j] * xi[j];
        hinge += std::max(0.0, 1.0 - z[i] * m);
    }
    return 0.5 * lambda * norm2 + hinge / static_cast<double>(n);
}

// Stochastic subgradient descent with step 1/(lambda*t) and iterate
// averaging; returns the averaged weights. One binary one-vs-rest problem.
inline std::vector<double> pegasos_binary(const std::vector<double>& x,
                                          const std::vector<signed char>& z, std::size_t n,
                                          std::size_t cols, double lambda, int epochs, Rng& rng,
                                          std::vector<double>* epoch_avg_objective = nullptr) {
    std::vector<double> w(cols, 0.0), sum(cols, 0.0);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::uint64_t t = 1;
    for (int epoch = 0; epoch < epochs; ++epoch) {
        rng.shuffle(order.begin(), order.end());
        for (std::size_t k = 0; k < n; ++k, ++t) {
            std::size_t i = order[k];
            const double* xi = x.data() + i * cols;
            // warm-started 1/(lambda t) schedule: bounded early steps, same tail
            double eta = 1.0 / (lambda * static_cast<double>(t) + 1.0);
            double margin = 0.0;
            for (std::size_t j = 0; j < cols; ++j) margin += w[j] * xi[j];
            double shrink = 1.0 - eta * lambda;
            if (z[i] * margin < 1.0) {
                double step = eta * z[i];
                for (std::size_t j = 0; j < cols; ++j) w[j] = w[j] * shrink + step * xi[j];
            } else {
                for (std::size_t j = 0; j < cols; ++j) w[j] *= shrink;
            }
            // projection onto the ||w|| <= 1/sqrt(lambda) ball; tames the
            // large early steps of the 1/(lambda t) schedule
            double norm2 = 0.0;
            for (double v : w) norm2 += v * v;
            if (norm2 * lambda > 1.0) {
                double scale = 1.0 / std::sqrt(norm2 * lambda);
                for (double& v : w) v *= scale;
            }
            for (std::size_t j = 0; j < cols; ++j) sum[j] += w[j];
        }
        if (epoch_avg_objective) {
            std::vector<double> avg(cols);
            for (std::size_t j = 0; j < cols; ++j)
                avg[j] = sum[j] / static_cast<double>(t - 1);
            epoch_avg_objective->push_back(svm_objective(avg, x, z, n, cols, lambda));
        }
    }
    for (std::size_t j = 0; j < cols; ++j) sum[j] /= static_cast<double>(t - 1);
    return sum;
}

}  // namespace detail

// One-vs-rest linear max-margin classifiers. Per-class seeds derive from the
// master seed, so classes can be trained in any order or in parallel.
inline Model train_linear_svm(const Dataset& data, const SvmParams& params = {},
                              std::uint64_t seed = 0,
                              std::vector<std::vector<double>>* objective_traces = nullptr) {
    if (data.n == 0) throw EmptyTrainingSet{};
    const std::size_t cols = data.dim + 1;
    const std::size_t n_classes = data.classes.size();
    const double lambda = kSvmBaseLambda / params.c;
    std::vector<double> x = detail::augment_with_bias(data);

    LinearModel lm{n_classes, cols, {}};
    lm.w.resize(n_classes * cols);
    if (objective_traces) objective_traces->assign(n_classes, {});
    for (std::size_t c = 0; c < n_classes; ++c) {
        std::vector<signed char> z(data.n);
        for (std::size_t i = 0; i < data.n; ++i)
            z[i] = data.y[i] == static_cast<int>(c) ? 1 : -1;
        Rng rng(derive_seed(seed, c));
        auto w = detail::pegasos_binary(x, z, data.n, cols, lambda, params.epochs, rng,
                                        objective_traces ? &(*objective_traces)[c] : nullptr);
        std::copy(w.begin(), w.end(), lm.w.begin() + static_cast<std::ptrdiff_t>(c * cols));
    }

    Model m;
    m.kind = ModelKind::SVM;
    m.classes = data.classes;
    m.dim = data.dim;
    m.seed = seed;
    m.hyperparameters = {{"c", params.c}, {"epochs", params.epochs}};
    m.params = std::move(lm);
    return m;
}

}  // namespace ctfa

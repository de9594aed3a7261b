#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "ctfa/classify/dataset.hpp"
#include "ctfa/classify/model.hpp"

namespace ctfa {

struct NonFiniteLoss : std::runtime_error {
    NonFiniteLoss() : std::runtime_error("non-finite loss; check feature scaling") {}
};

struct LogRegParams {
    double l2 = 1e-4;      // applied to weights, not the intercept
    int max_epochs = 200;
    double tol = 1e-6;     // stop when the gradient norm falls below this
};

namespace detail {

// Multinomial softmax objective over bias-augmented rows, last class pinned
// to zero for identifiability. Mean cross-entropy plus (l2/2)*||W||^2.
struct SoftmaxObjective {
    const std::vector<double>& x;  // n rows * cols, bias column last
    const std::vector<int>& y;
    std::size_t n, cols, n_classes;
    double l2;

    std::size_t n_weights() const { return (n_classes - 1) * cols; }

    double loss(const std::vector<double>& w) const {
        double total = 0.0;
        std::vector<double> logits(n_classes);
        for (std::size_t i = 0; i < n; ++i) {
            row_logits(w, i, logits);
            double maxl = 0.0;
            for (double l : logits) maxl = std::max(maxl, l);
            double denom = 0.0;
            for (double l : logits) denom += std::exp(l - maxl);
            total += maxl + std::log(denom) - logits[static_cast<std::size_t>(y[i])];
        }
        total /= static_cast<double>(n);
        total += 0.5 * l2 * weight_norm2(w);
        return total;
    }

    void gradient(const std::vector<double>& w, std::vector<double>& g) const {
        g.assign(n_weights(), 0.0);
        std::vector<double> logits(n_classes);
        for (std::size_t i = 0; i < n; ++i) {
            row_logits(w, i, logits);
            double maxl = 0.0;
            for (double l : logits) maxl = std::max(maxl, l);
            double denom = 0.0;
            for (double& l : logits) {
                l = std::exp(l - maxl);
                denom += l;
            }
            const double* xi = x.data() + i * cols;
            for (std::size_t c = 0; c + 1 < n_classes; ++c) {
                double r = logits[c] / denom - (static_cast<std::size_t>(y[i]) == c ? 1.0 : 0.0);
                double* gc = g.data() + c * cols;
                for (std::size_t j = 0; j < cols; ++j) gc[j] += r * xi[j];
            }
        }
        for (double& v : g) v /= static_cast<double>(n);
        for (std::size_t c = 0; c + 1 < n_classes; ++c)
            for (std::size_t j = 0; j + 1 < cols; ++j)  // bias unregularized
                g[c * cols + j] += l2 * w[c * cols + j];
    }

private:
    void row_logits(const std::vector<double>& w, std::size_t i,
                    std::vector<double>& logits) const {
        const double* xi = x.data() + i * cols;
        for (std::size_t c = 0; c + 1 < n_classes; ++c) {
            const double* wc = w.data() + c * cols;
            double acc = 0.0;
            for (std::size_t j = 0; j < cols; ++j) acc += wc[j] * xi[j];
            logits[c] = acc;
        }
        logits[n_classes - 1] = 0.0;
    }

    double weight_norm2(const std::vector<double>& w) const {
        double s = 0.0;
        for (std::size_t c = 0; c + 1 < n_classes; ++c)
            for (std::size_t j = 0; j + 1 < cols; ++j) s += w[c * cols + j] * w[c * cols + j];
        return s;
    }
};

inline std::vector<double> augment_with_bias(const Dataset& data) {
    std::vector<double> x;
    x.reserve(data.n * (data.dim + 1));
    for (std::size_t i = 0; i < data.n; ++i) {
        x.insert(x.end(), data.row(i), data.row(i) + data.dim);
        x.push_back(1.0);
    }
    return x;
}

}  // namespace detail

// Full-batch gradient descent with backtracking (Armijo) line search.
inline Model train_logistic_regression(const Dataset& data, const LogRegParams& params = {},
                                       std::uint64_t seed = 0) {
    if (data.n == 0) throw EmptyTrainingSet{};
    const std::size_t cols = data.dim + 1;
    const std::size_t n_classes = data.classes.size();
    std::vector<double> x = detail::augment_with_bias(data);
    detail::SoftmaxObjective obj{x, data.y, data.n, cols, n_classes, params.l2};

    std::vector<double> w(obj.n_weights(), 0.0);
    if (n_classes > 1) {
        std::vector<double> g, trial(w.size());
        double step = 1.0;
        double f = obj.loss(w);
        for (int epoch = 0; epoch < params.max_epochs; ++epoch) {
            if (!std::isfinite(f)) throw NonFiniteLoss{};
            obj.gradient(w, g);
            double g2 = 0.0;
            for (double v : g) g2 += v * v;
            if (std::sqrt(g2) < params.tol) break;
            double t = step;
            double f_new;
            int halvings = 0;
            for (;; t *= 0.5, ++halvings) {
                for (std::size_t j = 0; j < w.size(); ++j) trial[j] = w[j] - t * g[j];
                f_new = obj.loss(trial);
                if (f_new <= f - 1e-4 * t * g2) break;
                if (halvings > 60) throw NonFiniteLoss{};
            }
            w.swap(trial);
            f = f_new;
            step = std::min(t * 2.0, 1e6);
        }
    }

    Model m;
    m.kind = ModelKind::LOGREG;
    m.classes = data.classes;
    m.dim = data.dim;
    m.seed = seed;
    m.hyperparameters = {{"l2", params.l2}, {"max_epochs", params.max_epochs}, {"tol", params.tol}};
    m.params = LinearModel{n_classes > 0 ? n_classes - 1 : 0, cols, std::move(w)};
    return m;
}

}  // namespace ctfa

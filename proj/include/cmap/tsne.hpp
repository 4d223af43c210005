#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cmap/errors.hpp"
#include "cmap/matrix.hpp"
#include "cmap/rng.hpp"
#include "cmap/similarity.hpp"

namespace cmap {

struct TsneConfig {
    double perplexity = 0.0; // 0 = auto: min(30, (n-1)/3)
    int iterations = 1000;
    double learning_rate = 200.0;
    double early_exaggeration = 12.0;
    int exaggeration_iters = 250;
    double momentum_initial = 0.5;
    double momentum_final = 0.8;
    int momentum_switch_iter = 250;
    std::uint64_t rng_seed = 42;
};

struct Layout2D {
    std::vector<int> ids;
    std::vector<std::pair<double, double>> coords;
    std::vector<double> objective_trace; // t-SNE only: KL per iteration
};

// d_ij = 1 - S_ij clamped to [0, 2]; diagonal forced to 0.
inline DenseMatrix similarity_to_distance(const SimilarityMatrix& s) {
    const std::size_t n = s.size();
    DenseMatrix d(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            d(i, j) = std::clamp(1.0 - s.values(i, j), 0.0, 2.0);
        }
    return d;
}

namespace tsne_detail {

constexpr double kProbFloor = 1e-12;

// Conditional Gaussian row with bandwidth calibrated by binary search so the
// row's perplexity matches the target. Distances enter as squared-distance
// surrogates.
inline void calibrate_row(const DenseMatrix& d, std::size_t i, double target_entropy,
                          std::vector<double>& row) {
    const std::size_t n = d.rows();
    double beta = 1.0, beta_min = -1e300, beta_max = 1e300;
    for (int iter = 0; iter < 50; ++iter) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            row[j] = j == i ? 0.0 : std::exp(-beta * d(i, j));
            sum += row[j];
        }
        double entropy;
        if (sum <= 0.0) {
            entropy = 0.0;
        } else {
            // H = ln(sum) + beta * E[d]
            double weighted = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) weighted += row[j] * d(i, j);
            entropy = std::log(sum) + beta * weighted / sum;
            for (std::size_t j = 0; j < n; ++j) row[j] /= sum;
        }
        double diff = entropy - target_entropy;
        if (std::abs(diff) < 1e-5) return;
        if (diff > 0) {
            beta_min = beta;
            beta = beta_max > 1e299 ? beta * 2.0 : (beta + beta_max) / 2.0;
        } else {
            beta_max = beta;
            beta = beta_min < -1e299 ? beta / 2.0 : (beta + beta_min) / 2.0;
        }
    }
}

inline DenseMatrix joint_probabilities(const DenseMatrix& d, double perplexity) {
    const std::size_t n = d.rows();
    DenseMatrix cond(n, n, 0.0);
    std::vector<double> row(n, 0.0);
    double target_entropy = std::log(perplexity);
    for (std::size_t i = 0; i < n; ++i) {
        calibrate_row(d, i, target_entropy, row);
        for (std::size_t j = 0; j < n; ++j) cond(i, j) = row[j];
    }
    DenseMatrix p(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            p(i, j) = std::max((cond(i, j) + cond(j, i)) / (2.0 * static_cast<double>(n)),
                               kProbFloor);
        }
    return p;
}

// Student-t kernel matrix W and its off-diagonal sum.
inline double q_kernel(const std::vector<std::pair<double, double>>& y, DenseMatrix& w) {
    const std::size_t n = y.size();
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        w(i, i) = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double dx = y[i].first - y[j].first;
            double dy = y[i].second - y[j].second;
            double v = 1.0 / (1.0 + dx * dx + dy * dy);
            w(i, j) = v;
            w(j, i) = v;
            sum += 2.0 * v;
        }
    }
    return sum;
}

} // namespace tsne_detail

// Normalized low-dimensional affinities for the given coordinates.
inline DenseMatrix tsne_q_matrix(const std::vector<std::pair<double, double>>& coords) {
    const std::size_t n = coords.size();
    DenseMatrix w(n, n, 0.0);
    double sum = tsne_detail::q_kernel(coords, w);
    DenseMatrix q(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j) q(i, j) = std::max(w(i, j) / sum, tsne_detail::kProbFloor);
    return q;
}

// Analytic KL gradient: grad_i = 4 * sum_j (p_ij - q_ij) w_ij (y_i - y_j),
// with w the unnormalized Student-t kernel recomputed from coords.
inline std::vector<std::pair<double, double>>
tsne_gradient(const DenseMatrix& p, const DenseMatrix& q,
              const std::vector<std::pair<double, double>>& coords) {
    const std::size_t n = coords.size();
    if (p.rows() != n || q.rows() != n) throw DataError("tsne_gradient: shape mismatch");
    std::vector<std::pair<double, double>> grad(n, {0.0, 0.0});
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double dx = coords[i].first - coords[j].first;
            double dy = coords[i].second - coords[j].second;
            double w = 1.0 / (1.0 + dx * dx + dy * dy);
            double mult = 4.0 * (p(i, j) - q(i, j)) * w;
            grad[i].first += mult * dx;
            grad[i].second += mult * dy;
        }
    }
    return grad;
}

// KL(P || Q(coords)) over off-diagonal pairs.
inline double tsne_kl(const DenseMatrix& p, const std::vector<std::pair<double, double>>& coords) {
    auto q = tsne_q_matrix(coords);
    double kl = 0.0;
    for (std::size_t i = 0; i < p.rows(); ++i)
        for (std::size_t j = 0; j < p.cols(); ++j)
            if (i != j && p(i, j) > 0.0) kl += p(i, j) * std::log(p(i, j) / q(i, j));
    return kl;
}

// Exact (quadratic) t-SNE on a precomputed distance matrix. Deterministic for
// a fixed (D, config): serial loops, seeded Gaussian init with sigma 1e-4.
// The trace records KL against the true (un-exaggerated) P each iteration.
inline Layout2D tsne(const DenseMatrix& d, const TsneConfig& config) {
    const std::size_t n = d.rows();
    if (n < 2 || d.cols() != n) throw DataError("tsne needs a square matrix with n >= 2");
    if (config.iterations < 1) throw ConfigError("tsne iterations must be >= 1");

    double max_perp = std::max(1.0, (static_cast<double>(n) - 1.0) / 3.0);
    double perplexity = config.perplexity;
    if (perplexity == 0.0) perplexity = std::min(30.0, max_perp);
    if (perplexity < 1.0 || perplexity > max_perp)
        throw ConfigError("perplexity " + fmt_double(perplexity) + " infeasible for n = " +
                          std::to_string(n) + " (must be in [1, " + fmt_double(max_perp) + "])");

    DenseMatrix p = tsne_detail::joint_probabilities(d, perplexity);

    Rng rng(config.rng_seed);
    std::vector<std::pair<double, double>> y(n);
    for (auto& pt : y) {
        pt.first = rng.gaussian() * 1e-4;
        pt.second = rng.gaussian() * 1e-4;
    }
    std::vector<std::pair<double, double>> velocity(n, {0.0, 0.0});
    std::vector<std::pair<double, double>> gains(n, {1.0, 1.0});

    DenseMatrix w(n, n, 0.0);
    Layout2D layout;
    layout.ids.resize(n);
    for (std::size_t i = 0; i < n; ++i) layout.ids[i] = static_cast<int>(i);

    for (int iter = 0; iter < config.iterations; ++iter) {
        double exaggeration = iter < config.exaggeration_iters ? config.early_exaggeration : 1.0;
        double momentum =
            iter < config.momentum_switch_iter ? config.momentum_initial : config.momentum_final;

        double w_sum = tsne_detail::q_kernel(y, w);
        std::vector<std::pair<double, double>> grad(n, {0.0, 0.0});
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                if (i == j) continue;
                double q = std::max(w(i, j) / w_sum, tsne_detail::kProbFloor);
                double mult = 4.0 * (exaggeration * p(i, j) - q) * w(i, j);
                grad[i].first += mult * (y[i].first - y[j].first);
                grad[i].second += mult * (y[i].second - y[j].second);
            }
        }

        auto update_axis = [&](double g, double& gain, double& vel, double& pos) {
            gain = (g > 0.0) == (vel > 0.0) ? std::max(gain * 0.8, 0.01) : gain + 0.2;
            vel = momentum * vel - config.learning_rate * gain * g;
            pos += vel;
        };
        double mean_x = 0.0, mean_y = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            update_axis(grad[i].first, gains[i].first, velocity[i].first, y[i].first);
            update_axis(grad[i].second, gains[i].second, velocity[i].second, y[i].second);
            mean_x += y[i].first;
            mean_y += y[i].second;
        }
        mean_x /= static_cast<double>(n);
        mean_y /= static_cast<double>(n);
        for (auto& pt : y) {
            pt.first -= mean_x;
            pt.second -= mean_y;
            if (!std::isfinite(pt.first) || !std::isfinite(pt.second))
                throw Error("tsne: non-finite coordinate at iteration " + std::to_string(iter));
        }
        layout.objective_trace.push_back(tsne_kl(p, y));
    }

    layout.coords = std::move(y);
    return layout;
}

} // namespace cmap

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "cmap/tsne.hpp"

using namespace cmap;

namespace {

SimilarityMatrix sim_from(std::vector<std::vector<double>> values) {
    SimilarityMatrix m;
    const auto n = values.size();
    m.values = DenseMatrix(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        m.labels.push_back("w" + std::to_string(i));
        for (std::size_t j = 0; j < n; ++j) m.values(i, j) = values[i][j];
    }
    return m;
}

// Squared-distance surrogate matrix for points on a line at given positions.
DenseMatrix line_distances(const std::vector<double>& pos) {
    const auto n = pos.size();
    DenseMatrix d(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d(i, j) = (pos[i] - pos[j]) * (pos[i] - pos[j]);
    return d;
}

// Three tight blocks of `per` points each, pairwise-far between blocks.
DenseMatrix block_distances(int per, double intra, double inter) {
    const std::size_t n = static_cast<std::size_t>(3 * per);
    DenseMatrix d(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            bool same = (i / static_cast<std::size_t>(per)) == (j / static_cast<std::size_t>(per));
            d(i, j) = same ? intra : inter;
        }
    return d;
}

} // namespace

TEST_CASE("similarity converts to clamped distance") {
    auto m = sim_from({{1.0, 0.3, -0.5, 1.2},
                       {0.3, 1.0, 0.0, -1.5},
                       {-0.5, 0.0, 1.0, 0.25},
                       {1.2, -1.5, 0.25, 1.0}});
    auto d = similarity_to_distance(m);
    CHECK(d(0, 0) == 0.0); // diagonal pinned regardless of values
    CHECK(d(0, 1) == 0.7);
    CHECK(d(0, 2) == 1.5);   // negative similarity stretches the distance
    CHECK(d(0, 3) == 0.0);   // similarity > 1 clamps at 0
    CHECK(d(1, 3) == 2.0);   // similarity < -1 clamps at 2
    CHECK(d(2, 3) == 0.75);
}

TEST_CASE("row calibration hits the target entropy") {
    // spacings chosen so every point's nearest neighbor is unique: a tied
    // minimum caps the reachable entropy at ln 2 and the search would clamp
    auto d = line_distances({0.0, 0.4, 1.1, 2.0, 3.2, 4.0, 5.0});
    const std::size_t n = d.rows();
    for (double perp : {2.0, 1.5}) {
        double target = std::log(perp);
        std::vector<double> row(n, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            tsne_detail::calibrate_row(d, i, target, row);
            double sum = 0.0, weighted = 0.0;
            for (std::size_t j = 0; j < n; ++j) sum += row[j];
            CHECK(sum == Catch::Approx(1.0).margin(1e-9));
            double entropy = 0.0;
            for (std::size_t j = 0; j < n; ++j)
                if (row[j] > 0.0) entropy -= row[j] * std::log(row[j]);
            weighted = entropy;
            CHECK(weighted == Catch::Approx(target).margin(1e-4));
        }
    }
}

TEST_CASE("joint probabilities are symmetric, floored, and normalized") {
    auto d = line_distances({0.0, 0.5, 1.3, 2.4, 3.0, 4.4});
    auto p = tsne_detail::joint_probabilities(d, 1.5);
    const std::size_t n = d.rows();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        CHECK(p(i, i) == 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            CHECK(p(i, j) == p(j, i));
            CHECK(p(i, j) >= tsne_detail::kProbFloor);
            total += p(i, j);
        }
    }
    CHECK(total == Catch::Approx(1.0).margin(1e-6)); // floor only nudges it upward
}

TEST_CASE("q matrix is a normalized student-t kernel") {
    std::vector<std::pair<double, double>> y{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}};
    auto q = tsne_q_matrix(y);
    // both unit-distance pairs share the same affinity
    CHECK(q(0, 1) == q(0, 2));
    CHECK(q(0, 1) > q(1, 2)); // sqrt(2) apart
    double total = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            if (i != j) total += q(i, j);
    CHECK(total == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("analytic gradient matches central differences") {
    std::mt19937 gen(2024);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    auto d = line_distances({0.0, 0.7, 1.5, 2.1, 3.3, 4.0});
    auto p = tsne_detail::joint_probabilities(d, 1.5);
    const std::size_t n = d.rows();

    for (int trial = 0; trial < 5; ++trial) {
        std::vector<std::pair<double, double>> y(n);
        for (auto& pt : y) pt = {unif(gen), unif(gen)};

        auto grad = tsne_gradient(p, tsne_q_matrix(y), y);

        const double h = 1e-6;
        for (std::size_t i = 0; i < n; ++i) {
            for (int axis = 0; axis < 2; ++axis) {
                auto plus = y, minus = y;
                (axis == 0 ? plus[i].first : plus[i].second) += h;
                (axis == 0 ? minus[i].first : minus[i].second) -= h;
                double numeric = (tsne_kl(p, plus) - tsne_kl(p, minus)) / (2.0 * h);
                double analytic = axis == 0 ? grad[i].first : grad[i].second;
                double scale = std::max({std::abs(numeric), std::abs(analytic), 1e-3});
                CHECK(std::abs(numeric - analytic) / scale < 1e-4);
            }
        }
    }
}

TEST_CASE("tsne is deterministic and reduces the objective") {
    auto d = block_distances(3, 0.05, 1.8);
    TsneConfig config;
    config.perplexity = 2.0;
    config.iterations = 400;

    auto a = tsne(d, config);
    auto b = tsne(d, config);
    CHECK(a.coords == b.coords); // bitwise reproducible
    CHECK(a.objective_trace == b.objective_trace);

    REQUIRE(a.objective_trace.size() == 400);
    CHECK(a.objective_trace.back() < a.objective_trace.front());
    for (const auto& [x, yy] : a.coords) {
        CHECK(std::isfinite(x));
        CHECK(std::isfinite(yy));
    }
    CHECK(a.ids == std::vector<int>{0, 1, 2, 3, 4, 5, 6, 7, 8});

    TsneConfig other = config;
    other.rng_seed = 7;
    auto c = tsne(d, other);
    CHECK(c.coords != a.coords);
}

TEST_CASE("tsne separates tight blocks") {
    auto d = block_distances(3, 0.05, 1.8);
    TsneConfig config;
    config.perplexity = 2.0;
    auto layout = tsne(d, config);

    // every point's nearest neighbour belongs to its own block
    for (std::size_t i = 0; i < 9; ++i) {
        double best = 1e300;
        std::size_t who = i;
        for (std::size_t j = 0; j < 9; ++j) {
            if (i == j) continue;
            double dx = layout.coords[i].first - layout.coords[j].first;
            double dy = layout.coords[i].second - layout.coords[j].second;
            double dist = dx * dx + dy * dy;
            if (dist < best) {
                best = dist;
                who = j;
            }
        }
        CHECK(i / 3 == who / 3);
    }
}

TEST_CASE("two points embed at a finite separation") {
    DenseMatrix d(2, 2, 0.0);
    d(0, 1) = d(1, 0) = 1.0;
    TsneConfig config; // auto perplexity: min(30, max(1, 1/3)) = 1
    config.iterations = 250;
    auto layout = tsne(d, config);
    REQUIRE(layout.coords.size() == 2);
    for (const auto& [x, y] : layout.coords) {
        CHECK(std::isfinite(x));
        CHECK(std::isfinite(y));
    }
    double dx = layout.coords[0].first - layout.coords[1].first;
    double dy = layout.coords[0].second - layout.coords[1].second;
    CHECK(dx * dx + dy * dy > 0.0);
}

TEST_CASE("tsne validates its inputs") {
    DenseMatrix d(4, 4, 0.5);
    for (std::size_t i = 0; i < 4; ++i) d(i, i) = 0.0;

    TsneConfig too_high;
    too_high.perplexity = 2.0; // max for n=4 is max(1, 3/3) = 1
    CHECK_THROWS_AS(tsne(d, too_high), ConfigError);

    TsneConfig too_low;
    too_low.perplexity = 0.5;
    CHECK_THROWS_AS(tsne(d, too_low), ConfigError);

    TsneConfig bad_iters;
    bad_iters.perplexity = 1.0;
    bad_iters.iterations = 0;
    CHECK_THROWS_AS(tsne(d, bad_iters), ConfigError);

    DenseMatrix tiny(1, 1, 0.0);
    CHECK_THROWS_AS(tsne(tiny, TsneConfig{}), DataError);
    DenseMatrix rect(3, 2, 0.0);
    CHECK_THROWS_AS(tsne(rect, TsneConfig{}), DataError);
}

TEST_CASE("kl trace measures against the true p even during exaggeration") {
    auto d = block_distances(2, 0.1, 1.5);
    TsneConfig config;
    config.perplexity = 1.2;
    config.iterations = 30;
    config.exaggeration_iters = 30; // exaggerated the whole run
    auto layout = tsne(d, config);
    auto p = tsne_detail::joint_probabilities(d, config.perplexity);
    // the last trace entry must equal KL(P||Q(final coords)) with the plain P
    CHECK(layout.objective_trace.back() ==
          Catch::Approx(tsne_kl(p, layout.coords)).margin(1e-12));
}

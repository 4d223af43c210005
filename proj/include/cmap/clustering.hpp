#pragma once

#include <algorithm>
#include <limits>
#include <string>
#include <vector>

#include "cmap/csv.hpp"
#include "cmap/errors.hpp"
#include "cmap/matrix.hpp"
#include "cmap/util.hpp"

namespace cmap {

struct Merge {
    int a = 0;          // surviving cluster label (the smaller-membered one wins ties by min id)
    int b = 0;          // absorbed cluster label
    double height = 0.0;
};

struct Dendrogram {
    std::vector<Merge> merges;     // n - 1 merges, heights non-decreasing for UPGMA
    std::vector<int> leaf_order;   // permutation of [0, n): concatenated member lists
    std::size_t n_leaves = 0;
};

// Average-linkage (UPGMA) agglomeration on a symmetric distance matrix.
// Cluster labels stay stable: a merged cluster keeps the minimum leaf id of
// its members, so the pair recorded for each merge is (min_label, other).
// Ties on distance resolve to the lexicographically smallest (a, b).
inline Dendrogram agglomerative_cluster(const DenseMatrix& dist) {
    const std::size_t n = dist.rows();
    if (n == 0 || dist.cols() != n) throw DataError("clustering needs a nonempty square matrix");

    Dendrogram out;
    out.n_leaves = n;

    std::vector<std::vector<int>> members(n);
    std::vector<bool> active(n, true);
    for (std::size_t i = 0; i < n; ++i) members[i] = {static_cast<int>(i)};

    // Working copy: d(i, j) holds the average pairwise leaf distance between
    // clusters labelled i and j (labels are min leaf ids, so rows get reused).
    DenseMatrix d = dist;
    for (std::size_t i = 0; i < n; ++i) d(i, i) = 0.0;

    for (std::size_t step = 0; step + 1 < n; ++step) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            for (std::size_t j = i + 1; j < n; ++j) {
                if (!active[j]) continue;
                if (d(i, j) < best) {
                    best = d(i, j);
                    bi = i;
                    bj = j;
                }
            }
        }

        out.merges.push_back({static_cast<int>(bi), static_cast<int>(bj), best});

        // Lance-Williams update for average linkage: weighted mean of the two
        // cluster-to-other distances.
        double na = static_cast<double>(members[bi].size());
        double nb = static_cast<double>(members[bj].size());
        for (std::size_t k = 0; k < n; ++k) {
            if (!active[k] || k == bi || k == bj) continue;
            double merged = (na * d(bi, k) + nb * d(bj, k)) / (na + nb);
            d(bi, k) = merged;
            d(k, bi) = merged;
        }
        members[bi].insert(members[bi].end(), members[bj].begin(), members[bj].end());
        members[bj].clear();
        active[bj] = false;
    }

    for (std::size_t i = 0; i < n; ++i)
        if (active[i]) out.leaf_order = members[i];
    return out;
}

// Cut the tree to produce exactly k flat clusters: replay the first n - k
// merges. Returned assignment maps leaf -> cluster label (min member id).
inline std::vector<int> cut_clusters(const Dendrogram& dendro, std::size_t k) {
    const std::size_t n = dendro.n_leaves;
    if (k < 1 || k > n) throw ConfigError("cluster count must be in [1, n]");
    std::vector<int> label(n);
    for (std::size_t i = 0; i < n; ++i) label[i] = static_cast<int>(i);
    std::size_t merges_to_apply = n - k;
    for (std::size_t m = 0; m < merges_to_apply; ++m) {
        int keep = dendro.merges[m].a;
        int drop = dendro.merges[m].b;
        for (auto& l : label)
            if (l == drop) l = keep;
    }
    return label;
}

// CSV export: header a,b,height. Heights use shortest round-trip formatting.
inline std::string dendrogram_csv(const Dendrogram& dendro) {
    std::string out = "a,b,height\n";
    for (const auto& m : dendro.merges)
        out += csv_row({std::to_string(m.a), std::to_string(m.b), fmt_double(m.height)});
    return out;
}

} // namespace cmap

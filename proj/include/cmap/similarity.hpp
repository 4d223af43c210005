#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "cmap/cooccurrence.hpp"
#include "cmap/errors.hpp"
#include "cmap/matrix.hpp"

namespace cmap {

// u.v / (|u||v|); 0 when either vector has zero norm.
inline double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw DataError("cosine: dimension mismatch");
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

// Cosine over sparse rows keyed by context id.
inline double cosine_sparse(const std::map<int, double>& a, const std::map<int, double>& b) {
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (const auto& [k, v] : a) na += v * v;
    for (const auto& [k, v] : b) nb += v * v;
    const auto& small = a.size() <= b.size() ? a : b;
    const auto& large = a.size() <= b.size() ? b : a;
    for (const auto& [k, v] : small) {
        auto it = large.find(k);
        if (it != large.end()) dot += v * it->second;
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

struct SimilarityMatrix {
    enum class Method { raw_cosine, ppmi_cosine, tfidf_cosine, jaccard, embedding_cosine };

    Method method = Method::raw_cosine;
    std::vector<std::string> labels; // lemma per row/column
    DenseMatrix values;              // symmetric, computed once per pair

    std::size_t size() const { return labels.size(); }
    int index_of(const std::string& lemma) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == lemma) return static_cast<int>(i);
        return -1;
    }
};

inline const char* method_name(SimilarityMatrix::Method m) {
    switch (m) {
    case SimilarityMatrix::Method::raw_cosine: return "raw_cosine";
    case SimilarityMatrix::Method::ppmi_cosine: return "ppmi_cosine";
    case SimilarityMatrix::Method::tfidf_cosine: return "tfidf_cosine";
    case SimilarityMatrix::Method::jaccard: return "jaccard";
    case SimilarityMatrix::Method::embedding_cosine: return "embedding_cosine";
    }
    return "?";
}

inline SimilarityMatrix::Method method_for_weighting(ContextVectorTable::Weighting w) {
    switch (w) {
    case ContextVectorTable::Weighting::raw: return SimilarityMatrix::Method::raw_cosine;
    case ContextVectorTable::Weighting::ppmi: return SimilarityMatrix::Method::ppmi_cosine;
    case ContextVectorTable::Weighting::tfidf: return SimilarityMatrix::Method::tfidf_cosine;
    }
    return SimilarityMatrix::Method::raw_cosine;
}

namespace detail {

// Fills a symmetric matrix from a pairwise function evaluated once per pair.
// The diagonal is pinned to 1 for rows the predicate marks nonzero.
inline SimilarityMatrix pairwise_matrix(std::vector<std::string> labels,
                                        SimilarityMatrix::Method method,
                                        const std::function<double(int, int)>& sim,
                                        const std::function<bool(int)>& nonzero) {
    SimilarityMatrix m;
    m.method = method;
    m.labels = std::move(labels);
    const std::size_t n = m.labels.size();
    m.values = DenseMatrix(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        m.values(i, i) = nonzero(static_cast<int>(i)) ? 1.0 : 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = sim(static_cast<int>(i), static_cast<int>(j));
            m.values(i, j) = s;
            m.values(j, i) = s;
        }
    }
    return m;
}

} // namespace detail

// Pairwise cosine over context-vector rows. `subset` picks which word ids
// become matrix rows; defaults to every row in the table.
inline SimilarityMatrix similarity_matrix(const ContextVectorTable& table,
                                          const Vocabulary& vocab,
                                          const std::vector<int>& subset = {}) {
    std::vector<int> ids = subset;
    if (ids.empty())
        for (std::size_t i = 0; i < table.size(); ++i) ids.push_back(static_cast<int>(i));
    std::vector<std::string> labels;
    for (int id : ids) labels.push_back(vocab.id_to_word[static_cast<std::size_t>(id)]);
    return detail::pairwise_matrix(
        std::move(labels), method_for_weighting(table.weighting),
        [&](int i, int j) {
            return cosine_sparse(table.rows[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])],
                                 table.rows[static_cast<std::size_t>(ids[static_cast<std::size_t>(j)])]);
        },
        [&](int i) { return !table.rows[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])].empty(); });
}

// Pairwise Jaccard over context sets; diagonal is 1 for non-empty sets.
inline SimilarityMatrix jaccard_matrix(const ContextSetTable& sets, const Vocabulary& vocab,
                                       const std::vector<int>& subset = {}) {
    std::vector<int> ids = subset;
    if (ids.empty())
        for (std::size_t i = 0; i < sets.size(); ++i) ids.push_back(static_cast<int>(i));
    std::vector<std::string> labels;
    for (int id : ids) labels.push_back(vocab.id_to_word[static_cast<std::size_t>(id)]);
    return detail::pairwise_matrix(
        std::move(labels), SimilarityMatrix::Method::jaccard,
        [&](int i, int j) {
            return jaccard(sets.sets[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])],
                           sets.sets[static_cast<std::size_t>(ids[static_cast<std::size_t>(j)])]);
        },
        [&](int i) { return !sets.sets[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])].empty(); });
}

// Analyst-chosen seed words, split into resolved and unresolved halves.
struct SeedSet {
    std::vector<std::string> seeds;      // as given, order preserved
    std::vector<int> resolved_ids;       // indexes into the resolving table
    std::vector<std::string> unresolved; // seeds missing from it
};

inline SeedSet resolve_seeds(const std::vector<std::string>& seeds,
                             const std::function<int(const std::string&)>& lookup) {
    SeedSet s;
    s.seeds = seeds;
    for (const auto& lemma : seeds) {
        int id = lookup(lemma);
        if (id >= 0) s.resolved_ids.push_back(id);
        else s.unresolved.push_back(lemma);
    }
    return s;
}

using ScoredWord = std::pair<std::string, double>;

namespace detail {

// Ranks candidates by score descending, lemma ascending on ties.
inline std::vector<ScoredWord> rank(std::vector<ScoredWord> scored) {
    std::sort(scored.begin(), scored.end(), [](const ScoredWord& a, const ScoredWord& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return scored;
}

} // namespace detail

// score(c) = mean similarity from candidate c to each resolved seed. Seeds are
// excluded from the ranking.
inline std::vector<ScoredWord> seed_scores(const SimilarityMatrix& matrix, const SeedSet& seeds) {
    if (seeds.resolved_ids.empty())
        throw DataError("no resolved seeds (unresolved: " + join(seeds.unresolved, ", ") + ")");
    std::set<int> seed_ids(seeds.resolved_ids.begin(), seeds.resolved_ids.end());
    std::vector<ScoredWord> scored;
    for (std::size_t c = 0; c < matrix.size(); ++c) {
        if (seed_ids.count(static_cast<int>(c))) continue;
        double sum = 0.0;
        for (int s : seeds.resolved_ids) sum += matrix.values(c, static_cast<std::size_t>(s));
        scored.push_back({matrix.labels[c], sum / static_cast<double>(seeds.resolved_ids.size())});
    }
    return detail::rank(std::move(scored));
}

// Same scoring evaluated directly on context-vector rows, avoiding the full
// pairwise matrix when only candidate-to-seed similarities are needed.
inline std::vector<ScoredWord> seed_scores(const ContextVectorTable& table,
                                           const Vocabulary& vocab, const SeedSet& seeds) {
    if (seeds.resolved_ids.empty())
        throw DataError("no resolved seeds (unresolved: " + join(seeds.unresolved, ", ") + ")");
    std::set<int> seed_ids(seeds.resolved_ids.begin(), seeds.resolved_ids.end());
    std::vector<ScoredWord> scored;
    for (std::size_t c = 0; c < table.size(); ++c) {
        if (seed_ids.count(static_cast<int>(c))) continue;
        double sum = 0.0;
        for (int s : seeds.resolved_ids)
            sum += cosine_sparse(table.rows[c], table.rows[static_cast<std::size_t>(s)]);
        scored.push_back({vocab.id_to_word[c], sum / static_cast<double>(seeds.resolved_ids.size())});
    }
    return detail::rank(std::move(scored));
}

inline std::vector<ScoredWord> seed_scores(const ContextSetTable& sets, const Vocabulary& vocab,
                                           const SeedSet& seeds) {
    if (seeds.resolved_ids.empty())
        throw DataError("no resolved seeds (unresolved: " + join(seeds.unresolved, ", ") + ")");
    std::set<int> seed_ids(seeds.resolved_ids.begin(), seeds.resolved_ids.end());
    std::vector<ScoredWord> scored;
    for (std::size_t c = 0; c < sets.size(); ++c) {
        if (seed_ids.count(static_cast<int>(c))) continue;
        double sum = 0.0;
        for (int s : seeds.resolved_ids)
            sum += jaccard(sets.sets[c], sets.sets[static_cast<std::size_t>(s)]);
        scored.push_back({vocab.id_to_word[c], sum / static_cast<double>(seeds.resolved_ids.size())});
    }
    return detail::rank(std::move(scored));
}

// seeds + the k top-scored candidates. k = 0 is the identity; asking for more
// candidates than exist returns them all and records a warning.
inline SeedSet expand_seeds(const std::vector<ScoredWord>& ranked, const SeedSet& seeds, int k,
                            const std::function<int(const std::string&)>& lookup,
                            std::vector<std::string>* warnings = nullptr) {
    if (k < 0) throw DataError("expand_seeds: k must be >= 0");
    SeedSet out = seeds;
    std::size_t take = static_cast<std::size_t>(k);
    if (take > ranked.size()) {
        if (warnings)
            warnings->push_back("expand_k=" + std::to_string(k) + " exceeds candidate pool of " +
                                std::to_string(ranked.size()) + "; taking all candidates");
        take = ranked.size();
    }
    for (std::size_t i = 0; i < take; ++i) {
        out.seeds.push_back(ranked[i].first);
        int id = lookup(ranked[i].first);
        if (id >= 0) out.resolved_ids.push_back(id);
    }
    return out;
}

inline SeedSet expand_seeds(const SimilarityMatrix& matrix, const SeedSet& seeds, int k,
                            std::vector<std::string>* warnings = nullptr) {
    auto ranked = seed_scores(matrix, seeds);
    return expand_seeds(ranked, seeds, k, [&](const std::string& w) { return matrix.index_of(w); },
                        warnings);
}

// Thresholded pair list with display weights rescaled onto [1, 5].
struct Edge {
    int i = 0, j = 0; // matrix indexes, i < j
    double similarity = 0.0;
    double display_weight = 0.0;
};

struct EdgeList {
    std::vector<Edge> edges;
    double threshold = 0.0;
    std::vector<std::string> labels; // copied from the source matrix
};

// Keeps pairs at or above the threshold, then enforces a per-node cap: an
// edge survives only while it ranks within the top max_edges_per_node of both
// endpoints (cap 0 = unlimited). Display weights map retained similarities
// linearly onto [1, 5]; a degenerate range maps everything to 3.
inline EdgeList build_edges(const SimilarityMatrix& matrix, double threshold,
                            int max_edges_per_node = 0) {
    EdgeList list;
    list.threshold = threshold;
    list.labels = matrix.labels;
    const std::size_t n = matrix.size();

    std::vector<Edge> candidates;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (matrix.values(i, j) >= threshold)
                candidates.push_back({static_cast<int>(i), static_cast<int>(j),
                                      matrix.values(i, j), 0.0});

    if (max_edges_per_node > 0) {
        // rank every node's incident candidates by (similarity desc, neighbor lemma asc)
        std::vector<std::vector<std::size_t>> incident(n);
        for (std::size_t e = 0; e < candidates.size(); ++e) {
            incident[static_cast<std::size_t>(candidates[e].i)].push_back(e);
            incident[static_cast<std::size_t>(candidates[e].j)].push_back(e);
        }
        std::vector<std::set<std::size_t>> keep(n);
        for (std::size_t v = 0; v < n; ++v) {
            auto& inc = incident[v];
            std::sort(inc.begin(), inc.end(), [&](std::size_t a, std::size_t b) {
                if (candidates[a].similarity != candidates[b].similarity)
                    return candidates[a].similarity > candidates[b].similarity;
                auto other = [&](std::size_t e) {
                    return static_cast<std::size_t>(candidates[e].i) == v
                               ? matrix.labels[static_cast<std::size_t>(candidates[e].j)]
                               : matrix.labels[static_cast<std::size_t>(candidates[e].i)];
                };
                return other(a) < other(b);
            });
            for (std::size_t r = 0; r < inc.size() && r < static_cast<std::size_t>(max_edges_per_node); ++r)
                keep[v].insert(inc[r]);
        }
        std::vector<Edge> capped;
        for (std::size_t e = 0; e < candidates.size(); ++e)
            if (keep[static_cast<std::size_t>(candidates[e].i)].count(e) &&
                keep[static_cast<std::size_t>(candidates[e].j)].count(e))
                capped.push_back(candidates[e]);
        candidates = std::move(capped);
    }

    if (candidates.empty())
        throw DataError("no edges retained at threshold " + fmt_double(threshold));

    double lo = candidates[0].similarity, hi = candidates[0].similarity;
    for (const auto& e : candidates) {
        lo = std::min(lo, e.similarity);
        hi = std::max(hi, e.similarity);
    }
    for (auto& e : candidates)
        e.display_weight = hi > lo ? 1.0 + 4.0 * (e.similarity - lo) / (hi - lo) : 3.0;

    list.edges = std::move(candidates);
    return list;
}

inline std::string edge_list_csv(const EdgeList& list) {
    std::string out = "source,target,similarity,weight\n";
    for (const auto& e : list.edges)
        out += csv_row({list.labels[static_cast<std::size_t>(e.i)],
                        list.labels[static_cast<std::size_t>(e.j)], fmt_double(e.similarity),
                        fmt_double(e.display_weight)});
    return out;
}

} // namespace cmap

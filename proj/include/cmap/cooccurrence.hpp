#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmap/errors.hpp"
#include "cmap/tokenize.hpp"
#include "cmap/util.hpp"

namespace cmap {

// Sparse anchor x context matrix. Rows and columns both index the retained
// vocabulary; values are raw window counts or a weighted transform of them.
struct ContextVectorTable {
    enum class Weighting { raw, ppmi, tfidf };

    Weighting weighting = Weighting::raw;
    int window_size = 0;
    std::vector<std::map<int, double>> rows; // anchor id -> {context id -> value}

    std::size_t size() const { return rows.size(); }
    double value(int anchor, int context) const {
        const auto& row = rows[static_cast<std::size_t>(anchor)];
        auto it = row.find(context);
        return it == row.end() ? 0.0 : it->second;
    }
    double row_sum(int anchor) const {
        double s = 0.0;
        for (const auto& [k, v] : rows[static_cast<std::size_t>(anchor)]) s += v;
        return s;
    }
};

inline const char* weighting_name(ContextVectorTable::Weighting w) {
    switch (w) {
    case ContextVectorTable::Weighting::raw: return "raw";
    case ContextVectorTable::Weighting::ppmi: return "ppmi";
    case ContextVectorTable::Weighting::tfidf: return "tfidf";
    }
    return "?";
}

// Counts context occurrences in a window of `window` tokens on each side of
// every anchor occurrence. Windows never cross sentence boundaries, and the
// anchor position itself is counted (include_self_position=true), so the
// diagonal accumulates one self count per occurrence.
inline ContextVectorTable build_context_vectors(const TokenizedCorpus& corpus,
                                                const Vocabulary& vocab, int window,
                                                bool include_self_position = true) {
    if (window < 1) throw DataError("window must be >= 1");
    if (vocab.size() == 0) throw DataError("empty vocabulary");
    ContextVectorTable table;
    table.window_size = window;
    table.rows.resize(vocab.size());
    for (const auto& sent : corpus.sentences) {
        const auto n = static_cast<int>(sent.tokens.size());
        std::vector<int> ids(static_cast<std::size_t>(n));
        for (int p = 0; p < n; ++p) ids[static_cast<std::size_t>(p)] = vocab.id_of(sent.tokens[static_cast<std::size_t>(p)]);
        for (int p = 0; p < n; ++p) {
            int anchor = ids[static_cast<std::size_t>(p)];
            if (anchor < 0) continue;
            int lo = std::max(0, p - window);
            int hi = std::min(n - 1, p + window);
            for (int q = lo; q <= hi; ++q) {
                if (q == p && !include_self_position) continue;
                int context = ids[static_cast<std::size_t>(q)];
                if (context < 0) continue;
                table.rows[static_cast<std::size_t>(anchor)][context] += 1.0;
            }
        }
    }
    return table;
}

// Distinct in-vocabulary words seen within the window of any anchor
// occurrence. The anchor's own position is excluded by default: a word enters
// its own context set only by recurring inside its window.
struct ContextSetTable {
    std::vector<std::set<int>> sets;
    int window_size = 0;

    std::size_t size() const { return sets.size(); }
};

inline ContextSetTable build_context_sets(const TokenizedCorpus& corpus, const Vocabulary& vocab,
                                          int window, bool include_self_position = false) {
    if (window < 1) throw DataError("window must be >= 1");
    ContextSetTable table;
    table.window_size = window;
    table.sets.resize(vocab.size());
    for (const auto& sent : corpus.sentences) {
        const auto n = static_cast<int>(sent.tokens.size());
        std::vector<int> ids(static_cast<std::size_t>(n));
        for (int p = 0; p < n; ++p) ids[static_cast<std::size_t>(p)] = vocab.id_of(sent.tokens[static_cast<std::size_t>(p)]);
        for (int p = 0; p < n; ++p) {
            int anchor = ids[static_cast<std::size_t>(p)];
            if (anchor < 0) continue;
            int lo = std::max(0, p - window);
            int hi = std::min(n - 1, p + window);
            for (int q = lo; q <= hi; ++q) {
                if (q == p && !include_self_position) continue;
                int context = ids[static_cast<std::size_t>(q)];
                if (context < 0) continue;
                table.sets[static_cast<std::size_t>(anchor)].insert(context);
            }
        }
    }
    return table;
}

// |A n B| / |A u B|; 0 when both sets are empty.
inline double jaccard(const std::set<int>& a, const std::set<int>& b) {
    if (a.empty() && b.empty()) return 0.0;
    std::size_t inter = 0;
    for (int x : a) inter += b.count(x);
    std::size_t uni = a.size() + b.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
}

// PPMI transform of a raw table: probabilities come from the single grand
// total, negatives are clamped to zero, zero cells are never touched (the log
// of zero is never evaluated and sparsity is preserved).
inline ContextVectorTable ppmi_transform(const ContextVectorTable& table, double epsilon = 1e-10) {
    if (table.weighting != ContextVectorTable::Weighting::raw)
        throw DataError("ppmi_transform expects a raw table");
    if (epsilon <= 0.0) throw DataError("epsilon must be > 0");

    const std::size_t n = table.size();
    std::vector<double> row_sum(n, 0.0), col_sum(n, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& [j, v] : table.rows[i]) {
            row_sum[i] += v;
            col_sum[static_cast<std::size_t>(j)] += v;
            total += v;
        }
    if (total <= 0.0) throw DataError("empty co-occurrence table");

    ContextVectorTable out;
    out.weighting = ContextVectorTable::Weighting::ppmi;
    out.window_size = table.window_size;
    out.rows.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (const auto& [j, v] : table.rows[i]) {
            double p_ij = v / total;
            double p_i = row_sum[i] / total;
            double p_j = col_sum[static_cast<std::size_t>(j)] / total;
            double pmi = std::log2(p_ij / (std::max(epsilon, p_i) * std::max(epsilon, p_j)));
            if (pmi > 0.0) out.rows[i][j] = pmi;
        }
    }
    return out;
}

// Document statistics with one SegmentTable row as the document unit.
struct CorpusDocStats {
    std::size_t n_docs = 0;
    std::vector<long long> df;         // word id -> number of rows containing it
    std::vector<long long> tf_corpus;  // word id -> total corpus count
};

inline CorpusDocStats compute_doc_stats(const SegmentTable& table, const TokenizedCorpus& corpus,
                                        const Vocabulary& vocab) {
    CorpusDocStats stats;
    stats.n_docs = table.records.size();
    stats.df.assign(vocab.size(), 0);
    stats.tf_corpus.assign(vocab.size(), 0);
    std::vector<std::set<int>> seen_in_doc(table.records.size());
    for (const auto& sent : corpus.sentences) {
        for (const auto& tok : sent.tokens) {
            int id = vocab.id_of(tok);
            if (id < 0) continue;
            ++stats.tf_corpus[static_cast<std::size_t>(id)];
            seen_in_doc[static_cast<std::size_t>(sent.segment_index)].insert(id);
        }
    }
    for (const auto& doc : seen_in_doc)
        for (int id : doc) ++stats.df[static_cast<std::size_t>(id)];
    return stats;
}

// Raw count of `term` in one segment's tokens.
inline long long term_frequency(int term, int segment_index, const TokenizedCorpus& corpus,
                                const Vocabulary& vocab) {
    long long tf = 0;
    for (const auto& sent : corpus.sentences) {
        if (sent.segment_index != segment_index) continue;
        for (const auto& tok : sent.tokens)
            if (vocab.id_of(tok) == term) ++tf;
    }
    return tf;
}

// tf(t, d) * ln(|D| / df(t)). Natural log; a term present in every document
// scores exactly 0.
inline double tfidf(int term, int segment_index, const CorpusDocStats& stats,
                    const TokenizedCorpus& corpus, const Vocabulary& vocab) {
    if (term < 0 || static_cast<std::size_t>(term) >= vocab.size())
        throw DataError("term not in vocabulary");
    long long df = stats.df[static_cast<std::size_t>(term)];
    if (df < 1) throw DataError("term has zero document frequency");
    double tf = static_cast<double>(term_frequency(term, segment_index, corpus, vocab));
    return tf * std::log(static_cast<double>(stats.n_docs) / static_cast<double>(df));
}

// Corpus-level TF-IDF weight of a context word: sublinear term frequency
// damping times inverse document frequency.
inline double context_tfidf_weight(int context, const CorpusDocStats& stats) {
    long long tf = stats.tf_corpus[static_cast<std::size_t>(context)];
    long long df = stats.df[static_cast<std::size_t>(context)];
    if (tf <= 0 || df <= 0) return 0.0;
    return (1.0 + std::log(static_cast<double>(tf))) *
           std::log(static_cast<double>(stats.n_docs) / static_cast<double>(df));
}

// Scales every column k of a raw table by the corpus-level weight of context
// word k. Zero cells stay zero.
inline ContextVectorTable tfidf_weight_contexts(const ContextVectorTable& table,
                                                const CorpusDocStats& stats) {
    if (table.weighting != ContextVectorTable::Weighting::raw)
        throw DataError("tfidf_weight_contexts expects a raw table");
    ContextVectorTable out;
    out.weighting = ContextVectorTable::Weighting::tfidf;
    out.window_size = table.window_size;
    out.rows.resize(table.size());
    std::vector<double> weight(table.size());
    for (std::size_t k = 0; k < table.size(); ++k)
        weight[k] = context_tfidf_weight(static_cast<int>(k), stats);
    for (std::size_t i = 0; i < table.size(); ++i)
        for (const auto& [k, v] : table.rows[i]) {
            double w = v * weight[static_cast<std::size_t>(k)];
            if (w != 0.0) out.rows[i][k] = w;
        }
    return out;
}

// Symmetric code x code matrix; the diagonal holds per-code segment counts.
struct CodeMatrix {
    std::vector<std::string> codes;
    std::vector<std::vector<long long>> counts;

    std::size_t size() const { return codes.size(); }
};

// Each record contributes once per unordered code pair present in its codes
// list, regardless of duplicates within the list.
inline CodeMatrix code_cooccurrence(const SegmentTable& table) {
    std::set<std::string> all_codes;
    for (const auto& rec : table.records)
        for (const auto& c : rec.codes)
            if (!trim(c).empty()) all_codes.insert(trim(c));
    if (all_codes.empty()) throw DataError("no codes anywhere in the corpus");

    CodeMatrix m;
    m.codes.assign(all_codes.begin(), all_codes.end());
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < m.codes.size(); ++i) index[m.codes[i]] = i;
    m.counts.assign(m.codes.size(), std::vector<long long>(m.codes.size(), 0));

    for (const auto& rec : table.records) {
        std::set<std::size_t> present;
        for (const auto& c : rec.codes)
            if (!trim(c).empty()) present.insert(index[trim(c)]);
        for (auto a : present)
            for (auto b : present) ++m.counts[a][b];
    }
    return m;
}

// Sparse triplet export with a JSON side file describing the table.
inline void export_context_vectors(const ContextVectorTable& table, const Vocabulary& vocab,
                                   const std::string& csv_path, const std::string& meta_path) {
    std::string csv = "anchor,context,value\n";
    for (std::size_t i = 0; i < table.size(); ++i)
        for (const auto& [k, v] : table.rows[i])
            csv += csv_row({vocab.id_to_word[i], vocab.id_to_word[static_cast<std::size_t>(k)],
                            fmt_double(v)});
    write_file(csv_path, csv);

    nlohmann::ordered_json meta;
    meta["weighting"] = weighting_name(table.weighting);
    meta["window_size"] = table.window_size;
    meta["vocab_size"] = vocab.size();
    meta["vocab_hash"] = fnv1a64_hex(join(vocab.id_to_word, "\n"));
    write_file(meta_path, meta.dump(2) + "\n");
}

inline std::string code_matrix_csv(const CodeMatrix& m) {
    std::vector<std::string> header = {""};
    header.insert(header.end(), m.codes.begin(), m.codes.end());
    std::string out = csv_row(header);
    for (std::size_t i = 0; i < m.size(); ++i) {
        std::vector<std::string> row = {m.codes[i]};
        for (std::size_t j = 0; j < m.size(); ++j) row.push_back(std::to_string(m.counts[i][j]));
        out += csv_row(row);
    }
    return out;
}

} // namespace cmap

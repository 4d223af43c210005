#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmap/errors.hpp"
#include "cmap/similarity.hpp"
#include "cmap/tokenize.hpp"
#include "cmap/util.hpp"

namespace cmap {

// One word occurrence with the hidden-state vectors of its subword tokens.
// Produced out of process by any transformer; see tools/emit_token_embeddings.py.
struct TokenEmbeddingRecord {
    int segment_index = 0;
    std::string occurrence_id;
    std::string word;
    int first_subword = 0;
    int last_subword = 0;
    std::vector<std::vector<double>> vectors; // one per subword, shared dimension
};

// JSONL, one record per line:
// {"segment_index": int, "occurrence_id": str, "word": str,
//  "span": [first, last], "vectors": [[...], ...]}
inline std::vector<TokenEmbeddingRecord> load_token_embeddings(const std::string& path) {
    std::vector<TokenEmbeddingRecord> records;
    std::size_t dim = 0;
    std::size_t line_no = 0;
    for (const auto& line : split(read_file(path), '\n')) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty()) continue;
        auto fail = [&](const std::string& why) -> DataError {
            return DataError(path + ": line " + std::to_string(line_no) + ": " + why);
        };
        auto j = nlohmann::json::parse(t, nullptr, false);
        if (j.is_discarded() || !j.is_object()) throw fail("not a JSON object");
        TokenEmbeddingRecord rec;
        try {
            rec.segment_index = j.at("segment_index").get<int>();
            rec.occurrence_id = j.at("occurrence_id").get<std::string>();
            rec.word = j.at("word").get<std::string>();
            const auto& span = j.at("span");
            if (!span.is_array() || span.size() != 2) throw fail("span must be [first, last]");
            rec.first_subword = span[0].get<int>();
            rec.last_subword = span[1].get<int>();
            rec.vectors = j.at("vectors").get<std::vector<std::vector<double>>>();
        } catch (const nlohmann::json::exception& e) {
            throw fail(e.what());
        }
        if (rec.last_subword < rec.first_subword) throw fail("span is reversed");
        auto expected = static_cast<std::size_t>(rec.last_subword - rec.first_subword + 1);
        if (rec.vectors.size() != expected)
            throw fail("span covers " + std::to_string(expected) + " subwords but " +
                       std::to_string(rec.vectors.size()) + " vectors given");
        for (const auto& v : rec.vectors) {
            if (dim == 0) dim = v.size();
            if (v.size() != dim || v.empty())
                throw fail("inconsistent_dimension: expected " + std::to_string(dim) + ", got " +
                           std::to_string(v.size()));
        }
        records.push_back(std::move(rec));
    }
    return records;
}

// Word-level vector: arithmetic mean of the subword hidden states.
inline std::vector<double> word_vector(const TokenEmbeddingRecord& record) {
    if (record.vectors.empty()) throw DataError("record has no vectors");
    std::vector<double> mean(record.vectors[0].size(), 0.0);
    for (const auto& v : record.vectors)
        for (std::size_t d = 0; d < mean.size(); ++d) mean[d] += v[d];
    for (auto& x : mean) x /= static_cast<double>(record.vectors.size());
    return mean;
}

// Corpus-averaged embedding per word with its occurrence count.
struct EmbeddingTable {
    std::vector<std::string> words; // lemma-sorted
    std::vector<std::vector<double>> vectors;
    std::vector<long long> counts;
    std::size_t dim = 0;

    std::size_t size() const { return words.size(); }
    int index_of(const std::string& lemma) const {
        auto it = std::lower_bound(words.begin(), words.end(), lemma);
        if (it == words.end() || *it != lemma) return -1;
        return static_cast<int>(it - words.begin());
    }
};

// Averages all occurrences of each word. Records are reduced in a fixed
// (word, segment_index, occurrence_id) order so the result is exactly
// permutation invariant. When a tokenizer config is given, record words go
// through the same lowercasing and lemmatizer as the corpus.
inline EmbeddingTable build_embedding_table(std::vector<TokenEmbeddingRecord> records,
                                            const TokenizerConfig* normalize = nullptr) {
    if (records.empty()) throw DataError("no embedding records");
    if (normalize)
        for (auto& r : records) r.word = lemmatize(to_lower_ascii(r.word), *normalize);
    std::sort(records.begin(), records.end(),
              [](const TokenEmbeddingRecord& a, const TokenEmbeddingRecord& b) {
                  if (a.word != b.word) return a.word < b.word;
                  if (a.segment_index != b.segment_index) return a.segment_index < b.segment_index;
                  if (a.occurrence_id != b.occurrence_id) return a.occurrence_id < b.occurrence_id;
                  return a.vectors < b.vectors;
              });

    EmbeddingTable table;
    table.dim = records[0].vectors[0].size();
    std::size_t i = 0;
    while (i < records.size()) {
        std::size_t j = i;
        std::vector<double> sum(table.dim, 0.0);
        while (j < records.size() && records[j].word == records[i].word) {
            auto v = word_vector(records[j]);
            if (v.size() != table.dim) throw DataError("inconsistent_dimension across records");
            for (std::size_t d = 0; d < table.dim; ++d) sum[d] += v[d];
            ++j;
        }
        auto n = static_cast<double>(j - i);
        for (auto& x : sum) x /= n;
        table.words.push_back(records[i].word);
        table.vectors.push_back(std::move(sum));
        table.counts.push_back(static_cast<long long>(j - i));
        i = j;
    }
    return table;
}

// Pairwise cosine over averaged embeddings.
inline SimilarityMatrix similarity_matrix(const EmbeddingTable& table,
                                          const std::vector<int>& subset = {}) {
    std::vector<int> ids = subset;
    if (ids.empty())
        for (std::size_t i = 0; i < table.size(); ++i) ids.push_back(static_cast<int>(i));
    std::vector<std::string> labels;
    for (int id : ids) labels.push_back(table.words[static_cast<std::size_t>(id)]);
    auto norm_nonzero = [&](int i) {
        for (double x : table.vectors[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])])
            if (x != 0.0) return true;
        return false;
    };
    return detail::pairwise_matrix(
        std::move(labels), SimilarityMatrix::Method::embedding_cosine,
        [&](int i, int j) {
            return cosine(table.vectors[static_cast<std::size_t>(ids[static_cast<std::size_t>(i)])],
                          table.vectors[static_cast<std::size_t>(ids[static_cast<std::size_t>(j)])]);
        },
        norm_nonzero);
}

inline std::vector<ScoredWord> seed_scores(const EmbeddingTable& table, const SeedSet& seeds) {
    if (seeds.resolved_ids.empty())
        throw DataError("no resolved seeds (unresolved: " + join(seeds.unresolved, ", ") + ")");
    std::set<int> seed_ids(seeds.resolved_ids.begin(), seeds.resolved_ids.end());
    std::vector<ScoredWord> scored;
    for (std::size_t c = 0; c < table.size(); ++c) {
        if (seed_ids.count(static_cast<int>(c))) continue;
        double sum = 0.0;
        for (int s : seeds.resolved_ids)
            sum += cosine(table.vectors[c], table.vectors[static_cast<std::size_t>(s)]);
        scored.push_back({table.words[c], sum / static_cast<double>(seeds.resolved_ids.size())});
    }
    return detail::rank(std::move(scored));
}

} // namespace cmap

#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmap/clustering.hpp"
#include "cmap/config.hpp"
#include "cmap/cooccurrence.hpp"
#include "cmap/corpus.hpp"
#include "cmap/embedding.hpp"
#include "cmap/errors.hpp"
#include "cmap/network.hpp"
#include "cmap/render.hpp"
#include "cmap/similarity.hpp"
#include "cmap/tokenize.hpp"
#include "cmap/tsne.hpp"

namespace cmap {

struct RunManifest {
    std::string config_hash;
    std::string input_hash;
    nlohmann::ordered_json config_echo;
    std::vector<std::pair<std::string, double>> stage_ms;
    std::map<std::string, std::string> output_hashes; // file name -> fnv1a64
    std::vector<long long> dropped_rows;              // 1-based input rows
    std::vector<std::string> warnings;

    std::string json() const {
        nlohmann::ordered_json j;
        j["config_hash"] = config_hash;
        j["input_hash"] = input_hash;
        j["config"] = config_echo;
        j["stages"] = nlohmann::ordered_json::array();
        for (const auto& [name, ms] : stage_ms)
            j["stages"].push_back({{"name", name}, {"ms", ms}});
        j["outputs"] = nlohmann::ordered_json::object();
        for (const auto& [name, hash] : output_hashes) j["outputs"][name] = hash;
        j["dropped_rows"] = dropped_rows;
        j["warnings"] = warnings;
        return j.dump(2) + "\n";
    }
};

// Everything computed along the way; single-stage subcommands run a prefix of
// the same functions `run` uses, so their artifacts match run output byte for
// byte.
struct PipelineState {
    PipelineConfig cfg;
    bool allow_invalid = false;

    SegmentTable table;
    ValidationReport validation;
    std::vector<long long> dropped_rows;

    TokenizerConfig tokenizer;
    std::set<std::string> stopwords;
    TokenizedCorpus corpus;
    Vocabulary vocab;

    ContextVectorTable vectors; // cooc_cosine / pmi / tfidf
    ContextSetTable sets;       // jaccard
    EmbeddingTable embeddings;  // embedding
    CorpusDocStats doc_stats;   // tfidf only

    SeedSet seed_set;                    // as resolved, before expansion
    std::vector<ScoredWord> seed_ranking;
    SeedSet expanded;                    // seeds + top expand_k
    std::vector<int> selected;           // matrix word ids (method table space)

    SimilarityMatrix matrix;
    Dendrogram dendrogram;
    Layout2D tsne_layout;
    EdgeList edges;
    SemanticGraph graph;
    Layout2D force_pos;

    std::vector<std::string> warnings;
};

namespace pipeline_detail {

template <typename F>
void timed(RunManifest* manifest, const std::string& name, F&& f) {
    auto t0 = std::chrono::steady_clock::now();
    try {
        f();
    } catch (const ConfigError& e) {
        throw ConfigError("stage '" + name + "': " + e.what());
    } catch (const DataError& e) {
        throw DataError("stage '" + name + "': " + e.what());
    } catch (const std::exception& e) {
        throw Error("stage '" + name + "': " + e.what());
    }
    if (manifest) {
        double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                        .count();
        manifest->stage_ms.push_back({name, ms});
    }
}

} // namespace pipeline_detail

// --- stage functions -------------------------------------------------------

inline void stage_load(PipelineState& st) {
    st.table = load_segments(st.cfg.input, st.cfg.format);
    if (st.table.records.empty()) throw DataError("input has no records");
}

// Violations abort unless allow_invalid, in which case every offending row is
// dropped (and listed); a clean subset must remain.
inline void stage_validate(PipelineState& st) {
    st.validation = validate_schema(st.table);
    if (st.validation.empty()) return;
    if (!st.allow_invalid)
        throw DataError("validation found " + std::to_string(st.validation.size()) +
                        " violation(s); rerun with --allow-invalid to drop offending rows");
    std::set<long long> bad;
    for (const auto& v : st.validation) bad.insert(v.row);
    st.dropped_rows.assign(bad.begin(), bad.end());
    SegmentTable kept;
    kept.source_path = st.table.source_path;
    kept.format = st.table.format;
    for (std::size_t i = 0; i < st.table.records.size(); ++i)
        if (!bad.count(static_cast<long long>(i + 1))) kept.records.push_back(st.table.records[i]);
    if (kept.records.empty()) throw DataError("every row failed validation; nothing to analyze");
    st.table = std::move(kept);
    st.warnings.push_back("dropped " + std::to_string(st.dropped_rows.size()) +
                          " row(s) with validation violations");
}

inline void stage_tokenize(PipelineState& st) {
    st.tokenizer = tokenizer_from(st.cfg);
    st.stopwords = st.cfg.stopword_file.empty() ? builtin_stopwords()
                                                : load_stopwords(st.cfg.stopword_file);
    st.corpus = tokenize_and_segment(st.table, st.tokenizer);
}

inline void stage_vocabulary(PipelineState& st) {
    st.vocab = build_vocabulary(st.corpus, st.cfg.min_frequency, st.stopwords);
}

inline void stage_model(PipelineState& st) {
    switch (st.cfg.method) {
    case Method::jaccard:
        st.sets = build_context_sets(st.corpus, st.vocab, st.cfg.window_size);
        break;
    case Method::cooc_cosine:
        st.vectors = build_context_vectors(st.corpus, st.vocab, st.cfg.window_size);
        break;
    case Method::pmi:
        st.vectors = ppmi_transform(build_context_vectors(st.corpus, st.vocab, st.cfg.window_size));
        break;
    case Method::tfidf:
        st.vectors = build_context_vectors(st.corpus, st.vocab, st.cfg.window_size);
        st.doc_stats = compute_doc_stats(st.table, st.corpus, st.vocab);
        st.vectors = tfidf_weight_contexts(st.vectors, st.doc_stats);
        break;
    case Method::embedding:
        st.embeddings =
            build_embedding_table(load_token_embeddings(st.cfg.embeddings_path), &st.tokenizer);
        break;
    }
}

namespace pipeline_detail {

// Lookup from a raw seed string into the method's id space: lowercased,
// lemmatized with the corpus tokenizer, then resolved.
inline std::function<int(const std::string&)> seed_lookup(const PipelineState& st) {
    if (st.cfg.method == Method::embedding)
        return [&st](const std::string& w) {
            return st.embeddings.index_of(lemmatize(to_lower_ascii(w), st.tokenizer));
        };
    return [&st](const std::string& w) {
        return st.vocab.id_of(lemmatize(to_lower_ascii(w), st.tokenizer));
    };
}

inline std::vector<ScoredWord> score_candidates(const PipelineState& st) {
    switch (st.cfg.method) {
    case Method::jaccard: return seed_scores(st.sets, st.vocab, st.seed_set);
    case Method::embedding: return seed_scores(st.embeddings, st.seed_set);
    default: return seed_scores(st.vectors, st.vocab, st.seed_set);
    }
}

} // namespace pipeline_detail

// With seeds: resolve + score + expand; the matrix covers seeds plus the top
// expand_k candidates. Without seeds: the matrix covers the max_words most
// frequent retained words (for embeddings, those also present in the table).
inline void stage_select(PipelineState& st) {
    if (!st.cfg.seeds.empty()) {
        st.seed_set = resolve_seeds(st.cfg.seeds, pipeline_detail::seed_lookup(st));
        if (!st.seed_set.unresolved.empty() && !st.seed_set.resolved_ids.empty())
            st.warnings.push_back("unresolved seeds ignored: " + join(st.seed_set.unresolved, ", "));
        st.seed_ranking = pipeline_detail::score_candidates(st);
        st.expanded = expand_seeds(st.seed_ranking, st.seed_set, st.cfg.expand_k,
                                   pipeline_detail::seed_lookup(st), &st.warnings);
        std::set<int> seen;
        for (int id : st.expanded.resolved_ids)
            if (seen.insert(id).second) st.selected.push_back(id);
        return;
    }

    if (st.cfg.method == Method::embedding) {
        std::vector<std::pair<long long, std::string>> candidates;
        for (const auto& word : st.vocab.id_to_word)
            if (st.embeddings.index_of(word) >= 0)
                candidates.push_back({st.vocab.frequency.at(word), word});
        std::sort(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
            if (a.first != b.first) return a.first > b.first;
            return a.second < b.second;
        });
        if (candidates.size() > static_cast<std::size_t>(st.cfg.max_words))
            candidates.resize(static_cast<std::size_t>(st.cfg.max_words));
        for (const auto& [freq, word] : candidates)
            st.selected.push_back(st.embeddings.index_of(word));
        if (st.selected.size() < 2)
            throw DataError("embedding table shares fewer than 2 words with the corpus vocabulary");
        return;
    }

    std::size_t n = std::min(st.vocab.size(), static_cast<std::size_t>(st.cfg.max_words));
    for (std::size_t i = 0; i < n; ++i) st.selected.push_back(static_cast<int>(i));
}

inline void stage_matrix(PipelineState& st) {
    if (st.selected.size() < 2)
        throw DataError("need at least 2 words for a similarity matrix; increase expand_k, "
                        "max_words, or corpus size");
    switch (st.cfg.method) {
    case Method::jaccard: st.matrix = jaccard_matrix(st.sets, st.vocab, st.selected); break;
    case Method::embedding: st.matrix = similarity_matrix(st.embeddings, st.selected); break;
    default: st.matrix = similarity_matrix(st.vectors, st.vocab, st.selected); break;
    }
}

inline void stage_cluster(PipelineState& st) {
    st.dendrogram = agglomerative_cluster(similarity_to_distance(st.matrix));
}

inline void stage_tsne(PipelineState& st) {
    TsneConfig tc;
    tc.perplexity = st.cfg.tsne_perplexity;
    tc.iterations = st.cfg.tsne_iterations;
    tc.learning_rate = st.cfg.tsne_learning_rate;
    tc.rng_seed = st.cfg.rng_seed;
    st.tsne_layout = tsne(similarity_to_distance(st.matrix), tc);
}

inline void stage_network(PipelineState& st) {
    st.edges = build_edges(st.matrix, st.cfg.threshold, st.cfg.max_edges_per_node);
    st.graph = build_graph(st.edges, st.vocab, st.cfg.groups, &st.warnings);
    ForceConfig fc;
    fc.iterations = st.cfg.force_iterations;
    fc.area = st.cfg.force_area;
    fc.cooling = st.cfg.force_cooling;
    fc.rng_seed = st.cfg.rng_seed;
    st.force_pos = force_layout(st.graph, fc);
}

// --- artifact emission -----------------------------------------------------

namespace pipeline_detail {

inline void write_output(const std::string& dir, const std::string& name,
                         const std::string& content, RunManifest* manifest) {
    write_file((std::filesystem::path(dir) / name).string(), content);
    if (manifest) manifest->output_hashes[name] = fnv1a64_hex(content);
}

} // namespace pipeline_detail

inline std::string vocab_csv(const Vocabulary& vocab) {
    std::string out = "lemma,frequency\n";
    for (const auto& word : vocab.id_to_word)
        out += csv_row({word, std::to_string(vocab.frequency.at(word))});
    return out;
}

inline std::string seed_scores_csv(const std::vector<ScoredWord>& ranked) {
    std::string out = "lemma,score\n";
    for (const auto& [word, score] : ranked) out += csv_row({word, fmt_double(score)});
    return out;
}

inline std::set<std::string> seed_lemma_set(const PipelineState& st) {
    std::set<std::string> lemmas;
    for (const auto& s : st.seed_set.seeds)
        lemmas.insert(lemmatize(to_lower_ascii(s), st.tokenizer));
    return lemmas;
}

inline std::map<std::string, long long> wordcloud_frequencies(const PipelineState& st) {
    std::map<std::string, long long> freq;
    std::size_t n = std::min(st.vocab.size(), static_cast<std::size_t>(st.cfg.cloud_max_words));
    for (std::size_t i = 0; i < n; ++i) {
        const auto& word = st.vocab.id_to_word[i];
        freq[word] = st.vocab.frequency.at(word);
    }
    return freq;
}

inline void emit_stats(PipelineState& st, const std::string& dir, RunManifest* manifest) {
    using pipeline_detail::write_output;
    write_output(dir, "vocab.csv", vocab_csv(st.vocab), manifest);
    if (st.cfg.method != Method::embedding) {
        const ContextVectorTable* table = &st.vectors;
        ContextVectorTable raw;
        if (st.cfg.method == Method::jaccard) {
            raw = build_context_vectors(st.corpus, st.vocab, st.cfg.window_size);
            table = &raw;
        }
        std::string csv = "anchor,context,value\n";
        for (std::size_t i = 0; i < table->size(); ++i)
            for (const auto& [k, v] : table->rows[i])
                csv += csv_row({st.vocab.id_to_word[i],
                                st.vocab.id_to_word[static_cast<std::size_t>(k)], fmt_double(v)});
        write_output(dir, "context_vectors.csv", csv, manifest);

        nlohmann::ordered_json meta;
        meta["weighting"] = weighting_name(table->weighting);
        meta["window_size"] = table->window_size;
        meta["vocab_size"] = st.vocab.size();
        meta["vocab_hash"] = fnv1a64_hex(join(st.vocab.id_to_word, "\n"));
        write_output(dir, "context_vectors.json", meta.dump(2) + "\n", manifest);
    }
    try {
        CodeMatrix codes = code_cooccurrence(st.table);
        write_output(dir, "codes.csv", code_matrix_csv(codes), manifest);
    } catch (const DataError&) {
        st.warnings.push_back("no codes in corpus; code exports skipped");
    }
}

inline void emit_expand(PipelineState& st, const std::string& dir, RunManifest* manifest) {
    using pipeline_detail::write_output;
    write_output(dir, "seed_scores.csv", seed_scores_csv(st.seed_ranking), manifest);
    write_output(dir, "expanded_seeds.txt", join(st.expanded.seeds, "\n") + "\n", manifest);
}

inline void emit_matrix(PipelineState& st, const std::string& dir, RunManifest* manifest) {
    using pipeline_detail::write_output;
    write_output(dir, "matrix.csv", matrix_csv(st.matrix.values, st.matrix.labels), manifest);
    write_output(dir, "matrix.json",
                 matrix_json(st.matrix.values, st.matrix.labels, method_name(st.matrix.method)),
                 manifest);
}

inline void emit_cluster(PipelineState& st, const std::string& dir, RunManifest* manifest) {
    pipeline_detail::write_output(dir, "dendrogram.csv", dendrogram_csv(st.dendrogram), manifest);
}

inline SvgDocument word_heatmap_doc(const PipelineState& st) {
    Palette palette;
    HeatmapOptions opt;
    opt.title = "Similarity (" + std::string(method_name(st.matrix.method)) + ")";
    return render_heatmap(st.matrix.values, st.matrix.labels, st.dendrogram.leaf_order, palette,
                          opt);
}

inline void emit_heatmap(PipelineState& st, const std::string& dir, RunManifest* manifest) {
    using pipeline_detail::write_output;
    write_output(dir, "heatmap.svg", word_heatmap_doc(st).str(), manifest);
    try {
        CodeMatrix codes = code_cooccurrence(st.table);
        DenseMatrix m(codes.size(), codes.size(), 0.0);
        for (std::size_t i = 0; i < codes.size(); ++i)
            for (std::size_t j = 0; j < codes.size(); ++j)
                m(i, j) = static_cast<double>(codes.counts[i][j]);
        std::vector<int> order(codes.size());
        for (std::size_t i = 0; i < codes.size(); ++i) order[i] = static_cast<int>(i);
        Palette palette;
        HeatmapOptions opt;
        opt.title = "Code co-occurrence";
        write_output(dir, "code_heatmap.svg",
                     render_heatmap(m, codes.codes, order, palette, opt).str(), manifest);
    } catch (const DataError&) {
        // no codes in the corpus; word heatmap only
    }
}

inline void emit_tsne(PipelineState& st, const std::string& dir, RunManifest* manifest) {
    using pipeline_detail::write_output;
    write_output(dir, "tsne.csv", layout_csv(st.tsne_layout, st.matrix.labels), manifest);
    write_output(dir, "tsne_trace.csv", trace_csv(st.tsne_layout.objective_trace), manifest);
    Palette palette;
    write_output(dir, "scatter.svg",
                 render_scatter(st.tsne_layout, seed_lemma_set(st), st.matrix.labels, palette).str(),
                 manifest);
}

inline void emit_network(PipelineState& st, const std::string& dir, RunManifest* manifest) {
    using pipeline_detail::write_output;
    write_output(dir, "edges.csv", edge_list_csv(st.edges), manifest);
    write_output(dir, "graph.json", graph_json(st.graph, &st.force_pos), manifest);
    Palette palette;
    SvgDocument network_doc = render_network(st.graph, st.force_pos, palette);
    write_output(dir, "network.svg", network_doc.str(), manifest);
    write_output(dir, "heatmap_network.svg",
                 compose_side_by_side(word_heatmap_doc(st), network_doc).str(), manifest);
}

inline void emit_wordcloud(PipelineState& st, const std::string& dir, RunManifest* manifest) {
    Palette palette;
    WordCloudOptions opt;
    opt.min_pt = st.cfg.cloud_min_pt;
    opt.max_pt = st.cfg.cloud_max_pt;
    opt.rng_seed = st.cfg.rng_seed;
    WordCloudResult cloud = render_wordcloud(wordcloud_frequencies(st), st.cfg.groups, palette, opt);
    for (const auto& word : cloud.dropped)
        st.warnings.push_back("word cloud: could not place '" + word + "'");
    pipeline_detail::write_output(dir, "wordcloud.svg", cloud.svg, manifest);
}

inline void emit_validation(PipelineState& st, const std::string& dir, RunManifest* manifest) {
    pipeline_detail::write_output(dir, "validation.json",
                                  validation_report_json(st.validation).dump(2) + "\n", manifest);
}

// --- orchestration ---------------------------------------------------------

// Prefix of the pipeline every analysis subcommand needs.
inline void prepare_corpus(PipelineState& st, RunManifest* manifest = nullptr) {
    using pipeline_detail::timed;
    timed(manifest, "load", [&] { stage_load(st); });
    timed(manifest, "validate", [&] { stage_validate(st); });
    timed(manifest, "tokenize", [&] { stage_tokenize(st); });
    timed(manifest, "vocabulary", [&] { stage_vocabulary(st); });
}

inline void prepare_matrix(PipelineState& st, RunManifest* manifest = nullptr) {
    using pipeline_detail::timed;
    timed(manifest, "model", [&] { stage_model(st); });
    timed(manifest, "seed_expansion", [&] { stage_select(st); });
    timed(manifest, "similarity", [&] { stage_matrix(st); });
}

// The full run: every stage, every artifact, plus the manifest.
inline RunManifest run_pipeline(const PipelineConfig& cfg, bool allow_invalid) {
    PipelineState st;
    st.cfg = cfg;
    st.allow_invalid = allow_invalid;
    st.warnings = cfg.warnings;

    RunManifest manifest;
    manifest.config_hash = fnv1a64_hex(cfg.raw_text);
    manifest.input_hash = fnv1a64_hex(read_file(cfg.input));
    manifest.config_echo = resolved_config_json(cfg);

    const std::string& dir = cfg.output_dir;
    std::filesystem::create_directories(dir);

    using pipeline_detail::timed;
    prepare_corpus(st, &manifest);
    prepare_matrix(st, &manifest);
    timed(&manifest, "cluster", [&] { stage_cluster(st); });
    timed(&manifest, "tsne", [&] { stage_tsne(st); });
    timed(&manifest, "network", [&] { stage_network(st); });

    timed(&manifest, "export", [&] {
        emit_validation(st, dir, &manifest);
        emit_stats(st, dir, &manifest);
        if (!st.cfg.seeds.empty()) emit_expand(st, dir, &manifest);
        emit_matrix(st, dir, &manifest);
        emit_cluster(st, dir, &manifest);
        emit_heatmap(st, dir, &manifest);
        emit_tsne(st, dir, &manifest);
        emit_network(st, dir, &manifest);
        emit_wordcloud(st, dir, &manifest);
    });

    manifest.dropped_rows = st.dropped_rows;
    manifest.warnings = st.warnings;
    write_file((std::filesystem::path(dir) / "manifest.json").string(), manifest.json());
    return manifest;
}

} // namespace cmap

#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmap/corpus.hpp"
#include "cmap/errors.hpp"
#include "cmap/network.hpp"
#include "cmap/render.hpp"
#include "cmap/tokenize.hpp"
#include "cmap/tsne.hpp"
#include "cmap/util.hpp"

namespace cmap {

enum class Method { embedding, jaccard, cooc_cosine, pmi, tfidf };

inline std::string method_to_string(Method m) {
    switch (m) {
    case Method::embedding: return "embedding";
    case Method::jaccard: return "jaccard";
    case Method::cooc_cosine: return "cooc_cosine";
    case Method::pmi: return "pmi";
    case Method::tfidf: return "tfidf";
    }
    return "?";
}

inline Method method_from_string(const std::string& s) {
    if (s == "embedding") return Method::embedding;
    if (s == "jaccard") return Method::jaccard;
    if (s == "cooc_cosine") return Method::cooc_cosine;
    if (s == "pmi") return Method::pmi;
    if (s == "tfidf") return Method::tfidf;
    throw ConfigError("invalid_value: method '" + s +
                      "' (expected embedding|jaccard|cooc_cosine|pmi|tfidf)");
}

// Everything a run needs, resolved from the flat key=value config file. Every
// field has a default; the full key list is documented in the README.
struct PipelineConfig {
    std::string input;
    SegmentFormat format = SegmentFormat::csv;
    bool format_explicit = false;

    Method method = Method::cooc_cosine;
    std::string embeddings_path;

    int window_size = 4;
    int min_token_len = 2;
    bool drop_numeric = true;
    std::string stopword_file;
    std::string lemma_exceptions_file;
    std::string synonyms_file;
    int min_frequency = 2;

    std::vector<std::string> seeds;
    int expand_k = 10;
    int max_words = 100;

    double threshold = 0.3;
    int max_edges_per_node = 6;
    std::map<std::string, GroupDef> groups;

    double tsne_perplexity = 0.0; // 0 = auto
    int tsne_iterations = 1000;
    double tsne_learning_rate = 200.0;

    int force_iterations = 500;
    double force_area = 1.0;
    double force_cooling = 0.95;

    double cloud_min_pt = 12.0;
    double cloud_max_pt = 64.0;
    int cloud_max_words = 100;

    std::uint64_t rng_seed = 42;
    std::string output_dir = "out";

    std::string raw_text;                // config bytes, hashed into the manifest
    std::vector<std::string> warnings;   // unused_key and friends
};

namespace config_detail {

inline bool parse_bool(const std::string& key, const std::string& value) {
    std::string v = to_lower_ascii(value);
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("type_mismatch: key '" + key + "' expects a boolean, got '" + value + "'");
}

inline int parse_int_value(const std::string& key, const std::string& value) {
    bool ok = false;
    long long v = parse_int(value, &ok);
    if (!ok) throw ConfigError("type_mismatch: key '" + key + "' expects an integer, got '" + value + "'");
    return static_cast<int>(v);
}

inline double parse_real(const std::string& key, const std::string& value) {
    bool ok = false;
    double v = parse_double(value, &ok);
    if (!ok) throw ConfigError("type_mismatch: key '" + key + "' expects a number, got '" + value + "'");
    return v;
}

inline SegmentFormat format_from_extension(const std::string& path) {
    auto dot = path.rfind('.');
    std::string ext = dot == std::string::npos ? "" : to_lower_ascii(path.substr(dot + 1));
    if (ext == "csv") return SegmentFormat::csv;
    if (ext == "jsonl" || ext == "ndjson" || ext == "json") return SegmentFormat::jsonl;
    throw ConfigError("cannot infer input format from '" + path + "'; set input_format = csv|jsonl");
}

} // namespace config_detail

// Parses the already-loaded config text. Unknown keys are fatal (with the
// offending name); `group.<name> = [#color:] lemma, lemma, ...` defines a
// semantic group. Keys irrelevant to the chosen method produce unused_key
// warnings, not errors.
inline PipelineConfig parse_config_text(const std::string& text) {
    PipelineConfig cfg;
    cfg.raw_text = text;

    bool embeddings_set = false;
    bool window_set = false;
    std::size_t line_no = 0;
    for (const auto& raw_line : split(text, '\n')) {
        ++line_no;
        std::string line = trim(raw_line);
        if (line.empty() || line[0] == '#') continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("config line " + std::to_string(line_no) +
                              ": expected key = value, got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));

        using namespace config_detail;
        if (key == "input") {
            cfg.input = value;
        } else if (key == "input_format") {
            std::string v = to_lower_ascii(value);
            if (v == "csv") cfg.format = SegmentFormat::csv;
            else if (v == "jsonl") cfg.format = SegmentFormat::jsonl;
            else throw ConfigError("invalid_value: input_format '" + value + "' (expected csv|jsonl)");
            cfg.format_explicit = true;
        } else if (key == "method") {
            cfg.method = method_from_string(to_lower_ascii(value));
        } else if (key == "embeddings_path") {
            cfg.embeddings_path = value;
            embeddings_set = true;
        } else if (key == "window_size") {
            cfg.window_size = parse_int_value(key, value);
            window_set = true;
        } else if (key == "min_token_len") {
            cfg.min_token_len = parse_int_value(key, value);
        } else if (key == "drop_numeric") {
            cfg.drop_numeric = parse_bool(key, value);
        } else if (key == "stopword_file") {
            cfg.stopword_file = value;
        } else if (key == "lemma_exceptions_file") {
            cfg.lemma_exceptions_file = value;
        } else if (key == "synonyms_file") {
            cfg.synonyms_file = value;
        } else if (key == "min_frequency") {
            cfg.min_frequency = parse_int_value(key, value);
        } else if (key == "seeds") {
            cfg.seeds.clear();
            for (const auto& s : split_list(value, ','))
                if (!s.empty()) cfg.seeds.push_back(to_lower_ascii(s));
        } else if (key == "expand_k") {
            cfg.expand_k = parse_int_value(key, value);
        } else if (key == "max_words") {
            cfg.max_words = parse_int_value(key, value);
        } else if (key == "threshold") {
            cfg.threshold = parse_real(key, value);
        } else if (key == "max_edges_per_node") {
            cfg.max_edges_per_node = parse_int_value(key, value);
        } else if (key == "tsne_perplexity") {
            cfg.tsne_perplexity = parse_real(key, value);
        } else if (key == "tsne_iterations") {
            cfg.tsne_iterations = parse_int_value(key, value);
        } else if (key == "tsne_learning_rate") {
            cfg.tsne_learning_rate = parse_real(key, value);
        } else if (key == "force_iterations") {
            cfg.force_iterations = parse_int_value(key, value);
        } else if (key == "force_area") {
            cfg.force_area = parse_real(key, value);
        } else if (key == "force_cooling") {
            cfg.force_cooling = parse_real(key, value);
        } else if (key == "cloud_min_pt") {
            cfg.cloud_min_pt = parse_real(key, value);
        } else if (key == "cloud_max_pt") {
            cfg.cloud_max_pt = parse_real(key, value);
        } else if (key == "cloud_max_words") {
            cfg.cloud_max_words = parse_int_value(key, value);
        } else if (key == "rng_seed") {
            cfg.rng_seed = static_cast<std::uint64_t>(parse_int_value(key, value));
        } else if (key == "output_dir") {
            cfg.output_dir = value;
        } else if (key.rfind("group.", 0) == 0) {
            std::string name = trim(key.substr(6));
            if (name.empty()) throw ConfigError("group key needs a name: 'group.<name>'");
            GroupDef def;
            std::string members = value;
            auto colon = value.find(':');
            if (!value.empty() && value[0] == '#' && colon != std::string::npos) {
                def.color = trim(value.substr(0, colon));
                members = value.substr(colon + 1);
            }
            for (const auto& m : split_list(members, ','))
                if (!m.empty()) def.members.push_back(to_lower_ascii(m));
            if (def.members.empty())
                throw ConfigError("group '" + name + "' has no members");
            cfg.groups[name] = std::move(def);
        } else {
            throw ConfigError("unknown key '" + key + "' in config");
        }
    }

    if (cfg.input.empty()) throw ConfigError("missing required key 'input'");
    if (!cfg.format_explicit) cfg.format = config_detail::format_from_extension(cfg.input);
    if (cfg.window_size < 1) throw ConfigError("invalid_value: window_size must be >= 1");
    if (cfg.min_token_len < 1) throw ConfigError("invalid_value: min_token_len must be >= 1");
    if (cfg.min_frequency < 1) throw ConfigError("invalid_value: min_frequency must be >= 1");
    if (cfg.expand_k < 0) throw ConfigError("invalid_value: expand_k must be >= 0");
    if (cfg.max_words < 2) throw ConfigError("invalid_value: max_words must be >= 2");
    if (cfg.max_edges_per_node < 0)
        throw ConfigError("invalid_value: max_edges_per_node must be >= 0 (0 = no cap)");
    if (cfg.tsne_iterations < 1) throw ConfigError("invalid_value: tsne_iterations must be >= 1");
    if (cfg.force_iterations < 1) throw ConfigError("invalid_value: force_iterations must be >= 1");
    if (!(cfg.force_cooling > 0.0 && cfg.force_cooling < 1.0))
        throw ConfigError("invalid_value: force_cooling must be in (0, 1)");
    if (cfg.cloud_min_pt <= 0.0 || cfg.cloud_max_pt < cfg.cloud_min_pt)
        throw ConfigError("invalid_value: cloud font range must satisfy 0 < min <= max");
    if (cfg.cloud_max_words < 1) throw ConfigError("invalid_value: cloud_max_words must be >= 1");

    if (cfg.method == Method::embedding) {
        if (cfg.embeddings_path.empty())
            throw ConfigError("method 'embedding' requires embeddings_path");
        if (window_set)
            cfg.warnings.push_back("unused_key: window_size has no effect with method embedding");
    } else if (embeddings_set) {
        cfg.warnings.push_back("unused_key: embeddings_path has no effect with method " +
                               method_to_string(cfg.method));
    }

    // Groups without an explicit color get stable colors from the default
    // palette, in group-name order.
    Palette palette;
    std::size_t cursor = 0;
    for (auto& [name, def] : cfg.groups) {
        if (def.color.empty()) {
            def.color = palette.colors[cursor % palette.colors.size()];
            ++cursor;
        } else if (!svg_detail::valid_hex_color(def.color)) {
            throw ConfigError("group '" + name + "': '" + def.color +
                              "' is not a 6-digit hex color");
        }
    }
    return cfg;
}

inline PipelineConfig parse_config(const std::string& path) {
    return parse_config_text(read_file(path));
}

inline TokenizerConfig tokenizer_from(const PipelineConfig& cfg) {
    TokenizerConfig tok;
    tok.min_token_len = cfg.min_token_len;
    tok.drop_numeric = cfg.drop_numeric;
    if (!cfg.lemma_exceptions_file.empty())
        tok.lemma_exceptions = load_word_map(cfg.lemma_exceptions_file);
    if (!cfg.synonyms_file.empty()) tok.synonyms = load_word_map(cfg.synonyms_file);
    return tok;
}

// Resolved configuration as echoed into the run manifest.
inline nlohmann::ordered_json resolved_config_json(const PipelineConfig& cfg) {
    nlohmann::ordered_json j;
    j["input"] = cfg.input;
    j["input_format"] = cfg.format == SegmentFormat::csv ? "csv" : "jsonl";
    j["method"] = method_to_string(cfg.method);
    if (cfg.method == Method::embedding) j["embeddings_path"] = cfg.embeddings_path;
    j["window_size"] = cfg.window_size;
    j["min_token_len"] = cfg.min_token_len;
    j["drop_numeric"] = cfg.drop_numeric;
    j["stopword_file"] = cfg.stopword_file;
    j["lemma_exceptions_file"] = cfg.lemma_exceptions_file;
    j["synonyms_file"] = cfg.synonyms_file;
    j["min_frequency"] = cfg.min_frequency;
    j["seeds"] = cfg.seeds;
    j["expand_k"] = cfg.expand_k;
    j["max_words"] = cfg.max_words;
    j["threshold"] = cfg.threshold;
    j["max_edges_per_node"] = cfg.max_edges_per_node;
    j["tsne_perplexity"] = cfg.tsne_perplexity;
    j["tsne_iterations"] = cfg.tsne_iterations;
    j["tsne_learning_rate"] = cfg.tsne_learning_rate;
    j["force_iterations"] = cfg.force_iterations;
    j["force_area"] = cfg.force_area;
    j["force_cooling"] = cfg.force_cooling;
    j["cloud_min_pt"] = cfg.cloud_min_pt;
    j["cloud_max_pt"] = cfg.cloud_max_pt;
    j["cloud_max_words"] = cfg.cloud_max_words;
    j["rng_seed"] = cfg.rng_seed;
    j["output_dir"] = cfg.output_dir;
    j["groups"] = nlohmann::ordered_json::object();
    for (const auto& [name, def] : cfg.groups) {
        nlohmann::ordered_json g;
        g["color"] = def.color;
        g["members"] = def.members;
        j["groups"][name] = std::move(g);
    }
    return j;
}

} // namespace cmap

#pragma once

#include <map>
#include <string>
#include <vector>

#include "cmap/cmap.hpp"

namespace testutil {

inline std::string fixture(const std::string& name) {
    return std::string(FIXTURE_DIR) + "/" + name;
}

// A schema-clean in-memory table with one record per text.
inline cmap::SegmentTable table_from_texts(const std::vector<std::string>& texts) {
    cmap::SegmentTable table;
    for (std::size_t i = 0; i < texts.size(); ++i) {
        cmap::SegmentRecord rec;
        rec.project = "test";
        rec.number = std::to_string(i + 1);
        rec.reference = static_cast<long long>(i + 1);
        rec.text = texts[i];
        rec.document = "doc";
        rec.start_position = 0;
        rec.end_position = static_cast<long long>(texts[i].size());
        rec.data_group = {"g1"};
        rec.text_length = static_cast<long long>(texts[i].size());
        rec.word_count = 0;
        rec.doc_id = "t" + std::to_string(i + 1);
        table.records.push_back(std::move(rec));
    }
    return table;
}

struct MiniCorpus {
    cmap::SegmentTable table;
    cmap::TokenizedCorpus corpus;
    cmap::Vocabulary vocab;
};

inline MiniCorpus corpus_from_texts(const std::vector<std::string>& texts, long long min_freq = 1,
                                    const std::set<std::string>& stopwords = {}) {
    MiniCorpus mc;
    mc.table = table_from_texts(texts);
    cmap::TokenizerConfig config;
    config.min_token_len = 1;
    mc.corpus = cmap::tokenize_and_segment(mc.table, config);
    mc.vocab = cmap::build_vocabulary(mc.corpus, min_freq, stopwords);
    return mc;
}

// Sentences as id sequences (-1 for out-of-vocabulary) for the oracles.
inline std::vector<std::vector<int>> id_sentences(const cmap::TokenizedCorpus& corpus,
                                                  const cmap::Vocabulary& vocab) {
    std::vector<std::vector<int>> out;
    for (const auto& sent : corpus.sentences) {
        std::vector<int> ids;
        for (const auto& tok : sent.tokens) ids.push_back(vocab.id_of(tok));
        out.push_back(std::move(ids));
    }
    return out;
}

// Minimal SVG element scanner: enough structure to audit the renderers'
// output without an XML library.
struct SvgElement {
    std::string tag;
    std::map<std::string, std::string> attrs;
    std::string content; // inner text for <text> elements
};

inline std::vector<SvgElement> parse_svg(const std::string& svg) {
    std::vector<SvgElement> elements;
    std::size_t pos = 0;
    while ((pos = svg.find('<', pos)) != std::string::npos) {
        if (svg[pos + 1] == '/' || svg[pos + 1] == '?') {
            ++pos;
            continue;
        }
        std::size_t tag_end = svg.find_first_of(" >", pos + 1);
        SvgElement el;
        el.tag = svg.substr(pos + 1, tag_end - pos - 1);
        std::size_t close = svg.find('>', pos);
        std::string head = svg.substr(pos, close - pos);
        std::size_t a = 0;
        while ((a = head.find('"', a)) != std::string::npos) {
            std::size_t key_end = head.rfind('=', a);
            std::size_t key_start = head.rfind(' ', key_end);
            std::size_t val_end = head.find('"', a + 1);
            el.attrs[head.substr(key_start + 1, key_end - key_start - 1)] =
                head.substr(a + 1, val_end - a - 1);
            a = val_end + 1;
        }
        if (el.tag == "text" && head.back() != '/') {
            std::size_t text_end = svg.find("</text>", close);
            el.content = svg.substr(close + 1, text_end - close - 1);
        }
        elements.push_back(std::move(el));
        pos = close + 1;
    }
    return elements;
}

inline std::vector<SvgElement> svg_elements_of(const std::vector<SvgElement>& all,
                                               const std::string& tag) {
    std::vector<SvgElement> out;
    for (const auto& el : all)
        if (el.tag == tag) out.push_back(el);
    return out;
}

} // namespace testutil

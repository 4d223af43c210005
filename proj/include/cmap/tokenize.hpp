#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "cmap/corpus.hpp"
#include "cmap/errors.hpp"
#include "cmap/util.hpp"

namespace cmap {

struct TokenizerConfig {
    int min_token_len = 2;
    bool drop_numeric = true;
    // token (lowercased) -> lemma, consulted before the suffix rules
    std::map<std::string, std::string> lemma_exceptions;
    // lemma -> replacement, applied after lemmatization (concept compression)
    std::map<std::string, std::string> synonyms;

    std::string canonical_string() const {
        std::string s = "v1|min_token_len=" + std::to_string(min_token_len) +
                        "|drop_numeric=" + (drop_numeric ? "1" : "0");
        for (const auto& [k, v] : lemma_exceptions) s += "|x:" + k + ">" + v;
        for (const auto& [k, v] : synonyms) s += "|s:" + k + ">" + v;
        return s;
    }
    std::string hash() const { return fnv1a64_hex(canonical_string()); }
};

struct TokenizedSentence {
    int segment_index = 0;
    std::vector<std::string> tokens;

    bool operator==(const TokenizedSentence&) const = default;
};

struct TokenizedCorpus {
    std::vector<TokenizedSentence> sentences;
    std::string tokenizer_config_hash;
};

// Irregular forms shipped with the engine; users can extend or replace the
// table through the lemma_exceptions_file config key.
inline const std::map<std::string, std::string>& builtin_lemma_exceptions() {
    static const std::map<std::string, std::string> table = {
        {"men", "man"},         {"women", "woman"},   {"children", "child"},
        {"people", "person"},   {"feet", "foot"},     {"teeth", "tooth"},
        {"mice", "mouse"},      {"geese", "goose"},   {"lives", "life"},
        {"wives", "wife"},      {"knives", "knife"},  {"leaves", "leaf"},
        {"selves", "self"},     {"shelves", "shelf"}, {"halves", "half"},
        // function words the suffix rules would corrupt out of the stopword set
        {"was", "be"},          {"has", "have"},      {"having", "have"},
        {"during", "during"},   {"ourselves", "ourselves"},
        {"themselves", "themselves"},                 {"yourselves", "yourselves"},
    };
    return table;
}

namespace detail {

inline bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

inline bool is_ascii_consonant(char c) {
    return c >= 'a' && c <= 'z' && c != 'a' && c != 'e' && c != 'i' && c != 'o' && c != 'u';
}

// Un-double a trailing doubled consonant left by -ing / -ed removal
// (running -> runn -> run). ll/ss are kept (still, pass).
inline void undouble(std::string& s) {
    auto n = s.size();
    if (n >= 2 && s[n - 1] == s[n - 2] && is_ascii_consonant(s[n - 1]) && s[n - 1] != 'l' &&
        s[n - 1] != 's')
        s.pop_back();
}

} // namespace detail

// English suffix-rule lemmatizer. Ordered rules, the first match is applied
// once; tokens matching no rule pass through unchanged. The table trades
// linguistic coverage for full transparency; the exception map handles
// irregulars.
inline std::string lemmatize(const std::string& token, const TokenizerConfig& config) {
    auto ex = config.lemma_exceptions.find(token);
    if (ex != config.lemma_exceptions.end()) return ex->second;

    std::string lemma = token;
    const auto n = token.size();
    using detail::ends_with;
    if (ends_with(token, "ies") && n >= 5) {
        lemma = token.substr(0, n - 3) + "y"; // studies -> study
    } else if (ends_with(token, "sses")) {
        lemma = token.substr(0, n - 2); // classes -> class
    } else if (ends_with(token, "xes") || ends_with(token, "zes") || ends_with(token, "ches") ||
               ends_with(token, "shes") || ends_with(token, "oes")) {
        lemma = token.substr(0, n - 2); // boxes -> box, heroes -> hero
    } else if (ends_with(token, "ss") || ends_with(token, "us") || ends_with(token, "is")) {
        // class, bus, analysis: not plurals
    } else if (ends_with(token, "s") && n >= 3) {
        lemma = token.substr(0, n - 1); // doctors -> doctor
    } else if (ends_with(token, "ing") && n >= 6) {
        lemma = token.substr(0, n - 3); // walking -> walk
        detail::undouble(lemma);
    } else if (ends_with(token, "ied") && n >= 5) {
        lemma = token.substr(0, n - 3) + "y"; // worried -> worry
    } else if (ends_with(token, "ed") && n >= 5 && !ends_with(token, "eed")) {
        lemma = token.substr(0, n - 2); // planned -> plann -> plan
        detail::undouble(lemma);
    }

    auto syn = config.synonyms.find(lemma);
    if (syn != config.synonyms.end()) return syn->second;
    return lemma;
}

namespace detail {

inline bool is_sentence_break(char c) {
    return c == '.' || c == '!' || c == '?' || c == ';' || c == '\n';
}

// Byte-level word-character test over UTF-8 input. ASCII alphanumerics and
// apostrophes are word characters; any non-ASCII byte is kept as part of the
// token (accented letters survive; exotic punctuation becomes part of a token
// rather than silently corrupting the byte stream).
inline bool is_word_byte(unsigned char c) {
    if (c >= 0x80) return true;
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
           c == '\'';
}

inline bool all_ascii_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

inline std::vector<std::string> tokenize_sentence(std::string_view sentence,
                                                  const TokenizerConfig& config) {
    std::vector<std::string> tokens;
    std::string cur;
    auto flush = [&] {
        // strip wrapping apostrophes, keep internal ones ('tis -> tis, don't stays)
        std::size_t b = 0, e = cur.size();
        while (b < e && cur[b] == '\'') ++b;
        while (e > b && cur[e - 1] == '\'') --e;
        std::string tok = to_lower_ascii(cur.substr(b, e - b));
        cur.clear();
        if (tok.size() > 2 && tok.ends_with("'s")) tok.resize(tok.size() - 2);
        if (tok.empty()) return;
        if (static_cast<int>(tok.size()) < config.min_token_len) return;
        if (config.drop_numeric && all_ascii_digits(tok)) return;
        tokens.push_back(lemmatize(tok, config));
    };
    for (unsigned char c : sentence) {
        if (is_word_byte(c)) cur += static_cast<char>(c);
        else flush();
    }
    flush();
    return tokens;
}

} // namespace detail

// Splits each segment's text into sentences on . ! ? ; and newline, then into
// lowercase lemma tokens. Deterministic for a fixed config; segments that
// tokenize to nothing simply contribute no sentences.
inline TokenizedCorpus tokenize_and_segment(const SegmentTable& table,
                                            const TokenizerConfig& config) {
    TokenizedCorpus corpus;
    corpus.tokenizer_config_hash = config.hash();
    for (std::size_t i = 0; i < table.records.size(); ++i) {
        const std::string& text = table.records[i].text;
        std::size_t start = 0;
        for (std::size_t p = 0; p <= text.size(); ++p) {
            if (p == text.size() || detail::is_sentence_break(text[p])) {
                auto tokens = detail::tokenize_sentence(
                    std::string_view(text).substr(start, p - start), config);
                if (!tokens.empty())
                    corpus.sentences.push_back({static_cast<int>(i), std::move(tokens)});
                start = p + 1;
            }
        }
    }
    return corpus;
}

struct Vocabulary {
    std::map<std::string, int> word_to_id;
    std::vector<std::string> id_to_word;
    std::map<std::string, long long> frequency; // full corpus counts, pre-filter
    long long min_frequency = 1;
    std::set<std::string> stopwords;

    std::size_t size() const { return id_to_word.size(); }
    int id_of(const std::string& lemma) const {
        auto it = word_to_id.find(lemma);
        return it == word_to_id.end() ? -1 : it->second;
    }
};

// Retained words are sorted by (frequency desc, lemma asc) and given ids
// 0..n-1. Throws when filtering leaves nothing.
inline Vocabulary build_vocabulary(const TokenizedCorpus& corpus, long long min_frequency,
                                   const std::set<std::string>& stopwords) {
    Vocabulary vocab;
    vocab.min_frequency = min_frequency;
    vocab.stopwords = stopwords;
    for (const auto& sent : corpus.sentences)
        for (const auto& tok : sent.tokens) ++vocab.frequency[tok];

    std::vector<std::pair<long long, std::string>> retained;
    for (const auto& [word, count] : vocab.frequency)
        if (count >= min_frequency && !stopwords.count(word)) retained.push_back({count, word});
    std::sort(retained.begin(), retained.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    if (retained.empty())
        throw DataError("empty vocabulary after filtering (min_frequency=" +
                        std::to_string(min_frequency) + ")");
    for (const auto& [count, word] : retained) {
        vocab.word_to_id[word] = static_cast<int>(vocab.id_to_word.size());
        vocab.id_to_word.push_back(word);
    }
    return vocab;
}

// Default English stopword list; replaceable through the stopword_file key.
inline const std::set<std::string>& builtin_stopwords() {
    static const std::set<std::string> words = {
        "a", "about", "above", "after", "again", "against", "all", "am", "an", "and", "any",
        "are", "aren't", "as", "at", "be", "because", "been", "before", "being", "below",
        "between", "both", "but", "by", "can", "cannot", "could", "couldn't", "did", "didn't",
        "do", "does", "doesn't", "doing", "don't", "down", "during", "each", "few", "for",
        "from", "further", "had", "hadn't", "has", "hasn't", "have", "haven't", "having", "he",
        "he'd", "he'll", "he's", "her", "here", "here's", "hers", "herself", "him", "himself",
        "his", "how", "how's", "i", "i'd", "i'll", "i'm", "i've", "if", "in", "into", "is",
        "isn't", "it", "it's", "its", "itself", "just", "let's", "me", "more", "most",
        "mustn't", "my", "myself", "no", "nor", "not", "now", "of", "off", "on", "once",
        "only", "or", "other", "ought", "our", "ours", "ourselves", "out", "over", "own",
        "same", "shan't", "she", "she'd", "she'll", "she's", "should", "shouldn't", "so",
        "some", "such", "than", "that", "that's", "the", "their", "theirs", "them",
        "themselves", "then", "there", "there's", "these", "they", "they'd", "they'll",
        "they're", "they've", "this", "those", "through", "to", "too", "under", "until", "up",
        "very", "was", "wasn't", "we", "we'd", "we'll", "we're", "we've", "were", "weren't",
        "what", "what's", "when", "when's", "where", "where's", "which", "while", "who",
        "who's", "whom", "why", "why's", "with", "won't", "would", "wouldn't", "you", "you'd",
        "you'll", "you're", "you've", "your", "yours", "yourself", "yourselves"};
    return words;
}

// Stopword files: one word per line, # comments.
inline std::set<std::string> load_stopwords(const std::string& path) {
    std::set<std::string> words;
    for (const auto& line : split(read_file(path), '\n')) {
        auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        words.insert(to_lower_ascii(t));
    }
    return words;
}

// Exception / synonym files: `form lemma` per line, whitespace separated,
// # comments.
inline std::map<std::string, std::string> load_word_map(const std::string& path) {
    std::map<std::string, std::string> mapping;
    std::size_t line_no = 0;
    for (const auto& line : split(read_file(path), '\n')) {
        ++line_no;
        auto t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        std::istringstream ss(t);
        std::string from, to, extra;
        ss >> from >> to;
        if (to.empty() || (ss >> extra && !extra.empty()))
            throw DataError(path + ": line " + std::to_string(line_no) +
                            ": expected 'form lemma'");
        mapping[to_lower_ascii(from)] = to_lower_ascii(to);
    }
    return mapping;
}

} // namespace cmap

#pragma once

// Brute-force reference implementations used to pin expected values. These
// are written independently of the library internals (naive enumeration, no
// shared helpers) so a bug in the real code cannot cancel out here.

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace oracle {

// Windowed co-occurrence by literal (p, q) position-pair enumeration over one
// corpus of sentences (each a vector of word ids, -1 = out of vocabulary).
inline std::map<std::pair<int, int>, double>
context_counts(const std::vector<std::vector<int>>& sentences, int window, bool include_self) {
    std::map<std::pair<int, int>, double> counts;
    for (const auto& sent : sentences) {
        int n = static_cast<int>(sent.size());
        for (int p = 0; p < n; ++p) {
            if (sent[p] < 0) continue;
            int q_lo = p - window < 0 ? 0 : p - window;
            int q_hi = p + window > n - 1 ? n - 1 : p + window;
            for (int q = q_lo; q <= q_hi; ++q) {
                if (q == p && !include_self) continue;
                if (sent[q] < 0) continue;
                counts[{sent[p], sent[q]}] += 1.0;
            }
        }
    }
    return counts;
}

inline std::map<int, std::set<int>>
context_sets(const std::vector<std::vector<int>>& sentences, int window) {
    std::map<int, std::set<int>> sets;
    for (const auto& sent : sentences) {
        int n = static_cast<int>(sent.size());
        for (int p = 0; p < n; ++p) {
            if (sent[p] < 0) continue;
            sets.try_emplace(sent[p]);
            for (int q = p - window; q <= p + window; ++q) {
                if (q < 0 || q >= n || q == p || sent[q] < 0) continue;
                sets[sent[p]].insert(sent[q]);
            }
        }
    }
    return sets;
}

// O(n^3) UPGMA: cluster distance recomputed every step as the plain mean of
// all cross-member leaf distances from the ORIGINAL matrix. Cluster label =
// smallest member id; among equal distances the lexicographically smallest
// (label_a, label_b) pair merges first.
struct NaiveMerge {
    int a, b;
    double height;
};

inline std::vector<NaiveMerge> naive_upgma(const std::vector<std::vector<double>>& d) {
    int n = static_cast<int>(d.size());
    std::vector<std::vector<int>> clusters;
    for (int i = 0; i < n; ++i) clusters.push_back({i});

    std::vector<NaiveMerge> merges;
    while (clusters.size() > 1) {
        double best = 0.0;
        std::size_t bi = 0, bj = 0;
        bool first = true;
        for (std::size_t i = 0; i < clusters.size(); ++i) {
            for (std::size_t j = i + 1; j < clusters.size(); ++j) {
                double sum = 0.0;
                for (int a : clusters[i])
                    for (int b : clusters[j]) sum += d[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
                double mean = sum / (static_cast<double>(clusters[i].size()) *
                                     static_cast<double>(clusters[j].size()));
                // Clusters are kept ordered by min member id, so scanning
                // (i, j) ascending and keeping strict < picks the smallest
                // labelled pair among ties.
                if (first || mean < best) {
                    best = mean;
                    bi = i;
                    bj = j;
                    first = false;
                }
            }
        }
        merges.push_back({clusters[bi][0], clusters[bj][0], best});
        clusters[bi].insert(clusters[bi].end(), clusters[bj].begin(), clusters[bj].end());
        clusters.erase(clusters.begin() + static_cast<std::ptrdiff_t>(bj));
    }
    return merges;
}

// tf and df by direct scanning of tokenized documents (doc = vector of ids).
inline int doc_frequency(const std::vector<std::vector<int>>& docs, int term) {
    int df = 0;
    for (const auto& doc : docs) {
        for (int t : doc)
            if (t == term) {
                ++df;
                break;
            }
    }
    return df;
}

inline int term_freq(const std::vector<int>& doc, int term) {
    int tf = 0;
    for (int t : doc)
        if (t == term) ++tf;
    return tf;
}

inline double tfidf(const std::vector<std::vector<int>>& docs, int term, std::size_t doc_index) {
    int df = doc_frequency(docs, term);
    double tf = term_freq(docs[doc_index], term);
    return tf * std::log(static_cast<double>(docs.size()) / static_cast<double>(df));
}

// Plain double-loop cosine.
inline double cosine(const std::vector<double>& u, const std::vector<double>& v) {
    double dot = 0.0, nu = 0.0, nv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        dot += u[i] * v[i];
        nu += u[i] * u[i];
        nv += v[i] * v[i];
    }
    if (nu == 0.0 || nv == 0.0) return 0.0;
    return dot / (std::sqrt(nu) * std::sqrt(nv));
}

inline double jaccard(const std::set<int>& a, const std::set<int>& b) {
    std::size_t inter = 0;
    for (int x : a) inter += b.count(x);
    std::set<int> uni = a;
    uni.insert(b.begin(), b.end());
    if (uni.empty()) return 0.0;
    return static_cast<double>(inter) / static_cast<double>(uni.size());
}

// Independent gradient-endpoint color interpolation (two stops only).
inline std::string lerp_hex(const std::string& lo, const std::string& hi, double t) {
    auto byte = [](const std::string& h, int i) {
        return std::stoi(h.substr(static_cast<std::size_t>(1 + 2 * i), 2), nullptr, 16);
    };
    char buf[8];
    int r = static_cast<int>(std::floor((1.0 - t) * byte(lo, 0) + t * byte(hi, 0) + 0.5));
    int g = static_cast<int>(std::floor((1.0 - t) * byte(lo, 1) + t * byte(hi, 1) + 0.5));
    int b = static_cast<int>(std::floor((1.0 - t) * byte(lo, 2) + t * byte(hi, 2) + 0.5));
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

} // namespace oracle

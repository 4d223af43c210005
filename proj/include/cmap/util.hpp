#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "cmap/errors.hpp"

namespace cmap {

inline std::string trim(std::string_view s) {
    const char* ws = " \t\r\n\f\v";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

inline std::string to_lower_ascii(std::string_view s) {
    std::string out(s);
    for (char& c : out)
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    return out;
}

inline std::vector<std::string> split(std::string_view s, char delim) {
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        auto pos = s.find(delim, start);
        if (pos == std::string_view::npos) {
            parts.emplace_back(s.substr(start));
            break;
        }
        parts.emplace_back(s.substr(start, pos - start));
        start = pos + 1;
    }
    return parts;
}

// Split on `delim`, trim each part, drop empties.
inline std::vector<std::string> split_list(std::string_view s, char delim) {
    std::vector<std::string> out;
    for (auto& p : split(s, delim)) {
        auto t = trim(p);
        if (!t.empty()) out.push_back(std::move(t));
    }
    return out;
}

template <typename Range>
std::string join(const Range& items, std::string_view sep) {
    std::string out;
    bool first = true;
    for (const auto& it : items) {
        if (!first) out += sep;
        out += it;
        first = false;
    }
    return out;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write file: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("write failed: " + path);
}

// FNV-1a 64-bit, used for config/input/output fingerprints in the run manifest.
inline std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::string fnv1a64_hex(std::string_view bytes) {
    static const char* digits = "0123456789abcdef";
    std::uint64_t h = fnv1a64(bytes);
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[h & 0xf];
        h >>= 4;
    }
    return out;
}

// Shortest decimal that round-trips to the same double. Locale independent.
inline std::string fmt_double(double v) {
    if (v == 0.0) v = 0.0; // normalize -0
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

// Fixed-point decimal with `prec` digits, for SVG coordinates.
inline std::string fmt_fixed(double v, int prec) {
    if (v == 0.0) v = 0.0;
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::fixed, prec);
    std::string s(buf, res.ptr);
    if (s == "-0" || s.rfind("-0.", 0) == 0) {
        bool all_zero = true;
        for (char c : s)
            if (c != '-' && c != '0' && c != '.') { all_zero = false; break; }
        if (all_zero) s.erase(0, 1);
    }
    return s;
}

inline double parse_double(std::string_view s, bool* ok = nullptr) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    bool good = res.ec == std::errc() && res.ptr == s.data() + s.size();
    if (ok) *ok = good;
    else if (!good) throw DataError("not a number: '" + std::string(s) + "'");
    return v;
}

inline long long parse_int(std::string_view s, bool* ok = nullptr) {
    long long v = 0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    bool good = res.ec == std::errc() && res.ptr == s.data() + s.size();
    if (ok) *ok = good;
    else if (!good) throw DataError("not an integer: '" + std::string(s) + "'");
    return v;
}

} // namespace cmap

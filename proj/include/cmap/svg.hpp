#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "cmap/errors.hpp"
#include "cmap/util.hpp"

namespace cmap {

// Advance widths (per 1000 units of font size) for ASCII 32..126, taken from
// the standard Helvetica AFM. Bundling the table keeps text bounding boxes —
// and therefore collision tests and golden SVGs — identical on every
// platform regardless of installed fonts. Bytes outside the table measure as
// 600 (a conservative wide default for multi-byte UTF-8 sequences).
namespace font_metrics {

inline constexpr std::array<int, 95> kHelveticaWidths = {
    278, 278, 355, 556, 556, 889, 667, 222, 333, 333, // space ! " # $ % & ' ( )
    389, 584, 278, 333, 278, 278,                     // * + , - . /
    556, 556, 556, 556, 556, 556, 556, 556, 556, 556, // 0-9
    278, 278, 584, 584, 584, 556, 1015,               // : ; < = > ? @
    667, 667, 722, 722, 667, 611, 778, 722, 278, 500, // A-J
    667, 556, 833, 722, 778, 667, 778, 722, 667, 611, // K-T
    722, 667, 944, 667, 667, 611,                     // U-Z
    278, 278, 278, 469, 556, 333,                     // [ \ ] ^ _ `
    556, 556, 500, 556, 556, 278, 556, 556, 222, 222, // a-j
    500, 222, 833, 556, 556, 556, 556, 333, 500, 278, // k-t
    556, 500, 722, 500, 500, 500,                     // u-z
    334, 260, 334, 584,                               // { | } ~
};

inline constexpr int kDefaultWidth = 600;
inline constexpr double kAscent = 0.718;  // cap height fraction of font size
inline constexpr double kDescent = 0.207; // descender fraction of font size

inline int char_width(unsigned char c) {
    if (c >= 32 && c <= 126) return kHelveticaWidths[c - 32];
    return kDefaultWidth;
}

inline double text_width(const std::string& text, double font_size) {
    long long units = 0;
    for (unsigned char c : text) units += char_width(c);
    return static_cast<double>(units) / 1000.0 * font_size;
}

inline double text_height(double font_size) { return (kAscent + kDescent) * font_size; }

} // namespace font_metrics

struct Palette {
    std::vector<std::string> colors = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                                       "#66a61e", "#e6ab02", "#a6761d", "#666666"};
    std::string background = "#ffffff";
    std::vector<std::string> heatmap = {"#f7fbff", "#08306b"}; // low -> high stops
    std::string default_node = "#8c8c8c";
    std::string text_color = "#222222";
};

namespace svg_detail {

inline bool valid_hex_color(const std::string& c) {
    if (c.size() != 7 || c[0] != '#') return false;
    for (std::size_t i = 1; i < 7; ++i) {
        char ch = c[i];
        bool hex = (ch >= '0' && ch <= '9') || (ch >= 'a' && ch <= 'f') || (ch >= 'A' && ch <= 'F');
        if (!hex) return false;
    }
    return true;
}

inline int hex_nibble(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return c - 'A' + 10;
}

} // namespace svg_detail

inline void validate_palette(const Palette& p) {
    auto check = [](const std::string& c, const std::string& where) {
        if (!svg_detail::valid_hex_color(c))
            throw ConfigError("palette: '" + c + "' in " + where + " is not a 6-digit hex color");
    };
    if (p.heatmap.size() < 2) throw ConfigError("palette: heatmap gradient needs at least 2 stops");
    for (const auto& c : p.colors) check(c, "colors");
    for (const auto& c : p.heatmap) check(c, "heatmap");
    check(p.background, "background");
    check(p.default_node, "default_node");
    check(p.text_color, "text_color");
}

// Piecewise-linear interpolation across gradient stops; t clamped to [0, 1].
// Components round half-up to integers, output is lowercase hex.
inline std::string interpolate_color(const std::vector<std::string>& stops, double t) {
    if (stops.size() < 2) throw ConfigError("gradient needs at least 2 stops");
    t = std::clamp(t, 0.0, 1.0);
    double scaled = t * static_cast<double>(stops.size() - 1);
    auto lo = static_cast<std::size_t>(scaled);
    if (lo >= stops.size() - 1) lo = stops.size() - 2;
    double frac = scaled - static_cast<double>(lo);

    auto channel = [](const std::string& hex, int idx) {
        return svg_detail::hex_nibble(hex[1 + 2 * idx]) * 16 +
               svg_detail::hex_nibble(hex[2 + 2 * idx]);
    };
    std::string out = "#";
    static const char* digits = "0123456789abcdef";
    for (int c = 0; c < 3; ++c) {
        double v = (1.0 - frac) * channel(stops[lo], c) + frac * channel(stops[lo + 1], c);
        int b = static_cast<int>(std::floor(v + 0.5));
        b = std::clamp(b, 0, 255);
        out += digits[b / 16];
        out += digits[b % 16];
    }
    return out;
}

inline std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        case '\'': out += "&apos;"; break;
        default: out += c;
        }
    }
    return out;
}

// Minimal deterministic SVG writer. All coordinates are formatted with two
// fixed decimals through std::to_chars, so output bytes never depend on
// locale or platform printf behavior.
class SvgDocument {
public:
    SvgDocument(double width, double height) : width_(width), height_(height) {}

    static std::string num(double v) { return fmt_fixed(v, 2); }

    void rect(double x, double y, double w, double h, const std::string& fill,
              const std::string& stroke = "", double stroke_width = 0.0) {
        body_ += "  <rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(w) +
                 "\" height=\"" + num(h) + "\" fill=\"" + fill + "\"";
        if (!stroke.empty())
            body_ += " stroke=\"" + stroke + "\" stroke-width=\"" + num(stroke_width) + "\"";
        body_ += "/>\n";
    }

    void line(double x1, double y1, double x2, double y2, const std::string& stroke,
              double stroke_width, double opacity = 1.0) {
        body_ += "  <line x1=\"" + num(x1) + "\" y1=\"" + num(y1) + "\" x2=\"" + num(x2) +
                 "\" y2=\"" + num(y2) + "\" stroke=\"" + stroke + "\" stroke-width=\"" +
                 num(stroke_width) + "\"";
        if (opacity < 1.0) body_ += " stroke-opacity=\"" + num(opacity) + "\"";
        body_ += "/>\n";
    }

    void circle(double cx, double cy, double r, const std::string& fill,
                const std::string& stroke = "", double stroke_width = 0.0) {
        body_ += "  <circle cx=\"" + num(cx) + "\" cy=\"" + num(cy) + "\" r=\"" + num(r) +
                 "\" fill=\"" + fill + "\"";
        if (!stroke.empty())
            body_ += " stroke=\"" + stroke + "\" stroke-width=\"" + num(stroke_width) + "\"";
        body_ += "/>\n";
    }

    void text(double x, double y, const std::string& content, double font_size,
              const std::string& fill, const std::string& anchor = "start", bool bold = false,
              double rotate_deg = 0.0) {
        body_ += "  <text x=\"" + num(x) + "\" y=\"" + num(y) + "\" font-family=\"" +
                 kFontFamily + "\" font-size=\"" + num(font_size) + "\" fill=\"" + fill + "\"";
        if (anchor != "start") body_ += " text-anchor=\"" + anchor + "\"";
        if (bold) body_ += " font-weight=\"bold\"";
        if (rotate_deg != 0.0)
            body_ += " transform=\"rotate(" + num(rotate_deg) + " " + num(x) + " " + num(y) + ")\"";
        body_ += ">" + xml_escape(content) + "</text>\n";
    }

    void raw(const std::string& fragment) { body_ += fragment; }

    double width() const { return width_; }
    double height() const { return height_; }
    const std::string& body() const { return body_; }

    std::string str() const {
        std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width_) +
               "\" height=\"" + num(height_) + "\" viewBox=\"0 0 " + num(width_) + " " +
               num(height_) + "\">\n";
        out += body_;
        out += "</svg>\n";
        return out;
    }

    static constexpr const char* kFontFamily = "Helvetica, Arial, sans-serif";

private:
    double width_;
    double height_;
    std::string body_;
};

// Places two finished documents side by side on a shared canvas.
inline SvgDocument compose_side_by_side(const SvgDocument& left, const SvgDocument& right,
                                        double gap = 20.0) {
    double width = left.width() + gap + right.width();
    double height = std::max(left.height(), right.height());
    SvgDocument out(width, height);
    out.raw("  <g>\n" + left.body() + "  </g>\n");
    out.raw("  <g transform=\"translate(" + SvgDocument::num(left.width() + gap) + " 0)\">\n" +
            right.body() + "  </g>\n");
    return out;
}

} // namespace cmap

#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmap/clustering.hpp"
#include "cmap/csv.hpp"
#include "cmap/errors.hpp"
#include "cmap/matrix.hpp"
#include "cmap/network.hpp"
#include "cmap/rng.hpp"
#include "cmap/similarity.hpp"
#include "cmap/svg.hpp"
#include "cmap/tsne.hpp"

namespace cmap {

// ---------------------------------------------------------------------------
// Word cloud

struct WordCloudOptions {
    double width = 800.0;
    double height = 500.0;
    double min_pt = 12.0;
    double max_pt = 64.0;
    double padding = 2.0; // collision padding around each label box
    std::uint64_t rng_seed = 42;
};

struct WordCloudResult {
    std::string svg;
    std::vector<std::string> dropped; // words that could not be placed
};

namespace render_detail {

struct Box {
    double x0, y0, x1, y1;
};

inline bool overlaps(const Box& a, const Box& b) {
    return a.x0 < b.x1 && b.x0 < a.x1 && a.y0 < b.y1 && b.y0 < a.y1;
}

} // namespace render_detail

// Font size is an affine map of sqrt(count) onto [min_pt, max_pt]; a
// degenerate count range maps every word to the midpoint. Words are placed
// largest-first on an Archimedean spiral from the canvas center (the spiral's
// first candidate IS the center), rejecting any position whose padded
// axis-aligned box overlaps an already placed box or leaves the canvas. The
// seed only randomizes each word's spiral phase, so a single word always
// lands dead center.
inline WordCloudResult render_wordcloud(const std::map<std::string, long long>& frequencies,
                                        const std::map<std::string, GroupDef>& groups,
                                        const Palette& palette, const WordCloudOptions& opt = {}) {
    if (frequencies.empty()) throw DataError("word cloud needs at least one word");
    validate_palette(palette);

    std::vector<std::pair<std::string, long long>> words(frequencies.begin(), frequencies.end());
    std::sort(words.begin(), words.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    double lo = std::sqrt(static_cast<double>(words.back().second));
    double hi = std::sqrt(static_cast<double>(words.front().second));
    auto font_size = [&](long long count) {
        if (hi - lo < 1e-12) return (opt.min_pt + opt.max_pt) / 2.0;
        double t = (std::sqrt(static_cast<double>(count)) - lo) / (hi - lo);
        return opt.min_pt + t * (opt.max_pt - opt.min_pt);
    };

    std::map<std::string, std::string> word_color;
    for (const auto& [name, def] : groups)
        for (const auto& member : def.members) word_color[member] = def.color;

    Rng rng(opt.rng_seed);
    const double cx = opt.width / 2.0, cy = opt.height / 2.0;
    const double max_radius = std::hypot(opt.width, opt.height) / 2.0;

    SvgDocument doc(opt.width, opt.height);
    doc.rect(0, 0, opt.width, opt.height, palette.background);

    WordCloudResult result;
    std::vector<render_detail::Box> placed;
    std::size_t color_cursor = 0;

    for (const auto& [word, count] : words) {
        double size = font_size(count);
        double w = font_metrics::text_width(word, size);
        double h = font_metrics::text_height(size);
        double phase = rng.uniform() * 2.0 * 3.14159265358979323846;

        bool ok = false;
        double px = 0.0, py = 0.0;
        for (double t = 0.0;; t += 0.3) {
            double r = 3.5 * t;
            if (r > max_radius) break;
            double x = cx + r * std::cos(phase + t);
            double y = cy + r * std::sin(phase + t);
            render_detail::Box box{x - w / 2.0 - opt.padding, y - h / 2.0 - opt.padding,
                                   x + w / 2.0 + opt.padding, y + h / 2.0 + opt.padding};
            if (box.x0 < 0.0 || box.y0 < 0.0 || box.x1 > opt.width || box.y1 > opt.height)
                continue;
            bool collision = false;
            for (const auto& other : placed)
                if (render_detail::overlaps(box, other)) {
                    collision = true;
                    break;
                }
            if (!collision) {
                px = x;
                py = y;
                placed.push_back(box);
                ok = true;
                break;
            }
        }

        if (!ok) {
            result.dropped.push_back(word);
            continue;
        }

        std::string color;
        if (auto it = word_color.find(word); it != word_color.end()) {
            color = it->second;
        } else {
            color = palette.colors[color_cursor % palette.colors.size()];
            ++color_cursor;
        }
        double baseline = py - h / 2.0 + font_metrics::kAscent * size;
        doc.text(px, baseline, word, size, color, "middle");
    }

    result.svg = doc.str();
    return result;
}

// ---------------------------------------------------------------------------
// Heatmap

struct HeatmapOptions {
    double cell = 26.0;
    double label_pt = 11.0;
    std::string title;
};

namespace render_detail {

inline void check_permutation(const std::vector<int>& order, std::size_t n) {
    if (order.size() != n) throw DataError("heatmap order must cover every index");
    std::vector<bool> seen(n, false);
    for (int v : order) {
        if (v < 0 || static_cast<std::size_t>(v) >= n || seen[static_cast<std::size_t>(v)])
            throw DataError("heatmap order is not a permutation");
        seen[static_cast<std::size_t>(v)] = true;
    }
}

} // namespace render_detail

// Cells interpolate linearly between the palette's gradient stops over the
// observed [min, max]; a constant matrix renders entirely at the low stop.
inline SvgDocument render_heatmap(const DenseMatrix& m, const std::vector<std::string>& labels,
                                  const std::vector<int>& order, const Palette& palette,
                                  const HeatmapOptions& opt = {}) {
    const std::size_t n = m.rows();
    if (n == 0 || m.cols() != n) throw DataError("heatmap needs a nonempty square matrix");
    if (labels.size() != n) throw DataError("heatmap labels must match matrix size");
    render_detail::check_permutation(order, n);
    validate_palette(palette);

    double lo = m(0, 0), hi = m(0, 0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            lo = std::min(lo, m(i, j));
            hi = std::max(hi, m(i, j));
        }
    auto color_of = [&](double v) {
        double t = hi - lo < 1e-300 ? 0.0 : (v - lo) / (hi - lo);
        return interpolate_color(palette.heatmap, t);
    };

    double label_extent = 0.0;
    for (const auto& l : labels)
        label_extent = std::max(label_extent, font_metrics::text_width(l, opt.label_pt));
    double left = label_extent + 10.0;
    double top = label_extent + 10.0 + (opt.title.empty() ? 0.0 : 24.0);
    double width = left + static_cast<double>(n) * opt.cell + 10.0;
    double height = top + static_cast<double>(n) * opt.cell + 10.0;

    SvgDocument doc(width, height);
    doc.rect(0, 0, width, height, palette.background);
    if (!opt.title.empty())
        doc.text(left + static_cast<double>(n) * opt.cell / 2.0, 18.0, opt.title, 14.0,
                 palette.text_color, "middle", true);

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double v = m(static_cast<std::size_t>(order[i]), static_cast<std::size_t>(order[j]));
            doc.rect(left + static_cast<double>(j) * opt.cell,
                     top + static_cast<double>(i) * opt.cell, opt.cell, opt.cell, color_of(v));
        }

    for (std::size_t i = 0; i < n; ++i) {
        const auto& row_label = labels[static_cast<std::size_t>(order[i])];
        doc.text(left - 6.0, top + static_cast<double>(i) * opt.cell + opt.cell / 2.0 +
                                 opt.label_pt * 0.35,
                 row_label, opt.label_pt, palette.text_color, "end");
        double cx = left + static_cast<double>(i) * opt.cell + opt.cell / 2.0 + opt.label_pt * 0.35;
        doc.text(cx, top - 6.0, row_label, opt.label_pt, palette.text_color, "start", false, -90.0);
    }
    return doc;
}

// ---------------------------------------------------------------------------
// Scatter (t-SNE map)

struct ScatterOptions {
    double width = 640.0;
    double height = 480.0;
    double margin_frac = 0.05;
    double point_r = 3.5;
    double seed_r = 6.0;
    double label_pt = 10.0;
};

// Affine map of layout coordinates onto the canvas with margins; a degenerate
// axis collapses to the canvas center. The y axis is flipped so larger layout
// y draws higher. Seed lemmas get enlarged markers and bold labels.
inline SvgDocument render_scatter(const Layout2D& layout, const std::set<std::string>& seed_lemmas,
                                  const std::vector<std::string>& labels, const Palette& palette,
                                  const ScatterOptions& opt = {}) {
    const std::size_t n = layout.coords.size();
    if (n == 0) throw DataError("scatter needs at least one point");
    if (labels.size() != n) throw DataError("scatter labels must match layout size");
    validate_palette(palette);

    double min_x = layout.coords[0].first, max_x = min_x;
    double min_y = layout.coords[0].second, max_y = min_y;
    for (const auto& [x, y] : layout.coords) {
        min_x = std::min(min_x, x);
        max_x = std::max(max_x, x);
        min_y = std::min(min_y, y);
        max_y = std::max(max_y, y);
    }
    double mx = opt.width * opt.margin_frac, my = opt.height * opt.margin_frac;
    auto map_x = [&](double x) {
        if (max_x - min_x < 1e-300) return opt.width / 2.0;
        return mx + (x - min_x) / (max_x - min_x) * (opt.width - 2.0 * mx);
    };
    auto map_y = [&](double y) {
        if (max_y - min_y < 1e-300) return opt.height / 2.0;
        return opt.height - my - (y - min_y) / (max_y - min_y) * (opt.height - 2.0 * my);
    };

    SvgDocument doc(opt.width, opt.height);
    doc.rect(0, 0, opt.width, opt.height, palette.background);
    for (std::size_t i = 0; i < n; ++i) {
        bool is_seed = seed_lemmas.count(labels[i]) > 0;
        double x = map_x(layout.coords[i].first);
        double y = map_y(layout.coords[i].second);
        double r = is_seed ? opt.seed_r : opt.point_r;
        doc.circle(x, y, r, is_seed ? palette.colors[0] : palette.default_node);
        doc.text(x + r + 2.0, y + opt.label_pt * 0.35, labels[i], opt.label_pt, palette.text_color,
                 "start", is_seed);
    }
    return doc;
}

// ---------------------------------------------------------------------------
// Network

struct NetworkOptions {
    double width = 640.0;
    double height = 480.0;
    double margin_frac = 0.08;
    double r_min = 4.0;
    double r_max = 16.0;
    double label_pt = 10.0;
    std::string edge_color = "#9e9e9e";
};

// Edge stroke width equals display_weight (the [1, 5] scale maps straight to
// points); node fill comes from the group color, radius from an affine map of
// sqrt(frequency). Every node is labelled.
inline SvgDocument render_network(const SemanticGraph& graph, const Layout2D& layout,
                                  const Palette& palette, const NetworkOptions& opt = {}) {
    const std::size_t n = graph.nodes.size();
    if (layout.coords.size() != n) throw DataError("network layout must cover all nodes");
    validate_palette(palette);

    double mx = opt.width * opt.margin_frac, my = opt.height * opt.margin_frac;
    auto map_x = [&](double x) { return mx + x * (opt.width - 2.0 * mx); };
    auto map_y = [&](double y) { return opt.height - my - y * (opt.height - 2.0 * my); };

    double lo = 0.0, hi = 0.0;
    if (n > 0) {
        lo = hi = std::sqrt(static_cast<double>(graph.nodes[0].frequency));
        for (const auto& node : graph.nodes) {
            double s = std::sqrt(static_cast<double>(node.frequency));
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
    }
    auto radius = [&](long long freq) {
        if (hi - lo < 1e-12) return (opt.r_min + opt.r_max) / 2.0;
        double t = (std::sqrt(static_cast<double>(freq)) - lo) / (hi - lo);
        return opt.r_min + t * (opt.r_max - opt.r_min);
    };

    SvgDocument doc(opt.width, opt.height);
    doc.rect(0, 0, opt.width, opt.height, palette.background);

    for (const auto& e : graph.edges.edges) {
        const auto& a = layout.coords[static_cast<std::size_t>(e.i)];
        const auto& b = layout.coords[static_cast<std::size_t>(e.j)];
        doc.line(map_x(a.first), map_y(a.second), map_x(b.first), map_y(b.second), opt.edge_color,
                 e.display_weight, 0.7);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto& node = graph.nodes[i];
        std::string fill = palette.default_node;
        if (!node.group.empty()) {
            auto it = graph.groups.find(node.group);
            if (it != graph.groups.end()) fill = it->second.color;
        }
        doc.circle(map_x(layout.coords[i].first), map_y(layout.coords[i].second),
                   radius(node.frequency), fill, "#ffffff", 1.0);
    }
    for (std::size_t i = 0; i < n; ++i) {
        const auto& node = graph.nodes[i];
        double x = map_x(layout.coords[i].first);
        double y = map_y(layout.coords[i].second);
        doc.text(x, y - radius(node.frequency) - 3.0, node.label, opt.label_pt, palette.text_color,
                 "middle");
    }
    return doc;
}

// ---------------------------------------------------------------------------
// Tabular exports

// Dense matrix CSV: empty corner cell, labels across the header row and down
// the first column, values at full round-trip precision.
inline std::string matrix_csv(const DenseMatrix& m, const std::vector<std::string>& labels) {
    if (labels.size() != m.rows() || m.rows() != m.cols())
        throw DataError("matrix export needs a square matrix with matching labels");
    std::vector<std::string> header{""};
    header.insert(header.end(), labels.begin(), labels.end());
    std::string out = csv_row(header);
    for (std::size_t i = 0; i < m.rows(); ++i) {
        std::vector<std::string> row{labels[i]};
        for (std::size_t j = 0; j < m.cols(); ++j) row.push_back(fmt_double(m(i, j)));
        out += csv_row(row);
    }
    return out;
}

inline std::pair<DenseMatrix, std::vector<std::string>> parse_matrix_csv(const std::string& text) {
    auto rows = parse_csv(text);
    if (rows.size() < 2) throw DataError("matrix CSV needs a header and at least one row");
    std::vector<std::string> labels(rows[0].begin() + 1, rows[0].end());
    const std::size_t n = labels.size();
    if (rows.size() != n + 1) throw DataError("matrix CSV row count does not match header");
    DenseMatrix m(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        const auto& row = rows[i + 1];
        if (row.size() != n + 1) throw DataError("matrix CSV row " + std::to_string(i + 2) +
                                                 " has wrong cell count");
        if (row[0] != labels[i])
            throw DataError("matrix CSV row label '" + row[0] + "' does not match header '" +
                            labels[i] + "'");
        for (std::size_t j = 0; j < n; ++j) m(i, j) = parse_double(row[j + 1]);
    }
    return {std::move(m), std::move(labels)};
}

inline std::string matrix_json(const DenseMatrix& m, const std::vector<std::string>& labels,
                               const std::string& method) {
    if (labels.size() != m.rows() || m.rows() != m.cols())
        throw DataError("matrix export needs a square matrix with matching labels");
    nlohmann::ordered_json j;
    j["labels"] = labels;
    j["method"] = method;
    j["values"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
        nlohmann::ordered_json row = nlohmann::ordered_json::array();
        for (std::size_t jx = 0; jx < m.cols(); ++jx) row.push_back(m(i, jx));
        j["values"].push_back(std::move(row));
    }
    return j.dump(2) + "\n";
}

inline std::pair<DenseMatrix, std::vector<std::string>> parse_matrix_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    std::vector<std::string> labels = j.at("labels").get<std::vector<std::string>>();
    const std::size_t n = labels.size();
    DenseMatrix m(n, n, 0.0);
    const auto& values = j.at("values");
    if (values.size() != n) throw DataError("matrix JSON values do not match labels");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t jx = 0; jx < n; ++jx) m(i, jx) = values[i][jx].get<double>();
    return {std::move(m), std::move(labels)};
}

enum class MatrixFormat { csv, json };

inline void export_matrix(const SimilarityMatrix& s, const std::string& path, MatrixFormat format) {
    if (format == MatrixFormat::csv)
        write_file(path, matrix_csv(s.values, s.labels));
    else
        write_file(path, matrix_json(s.values, s.labels, method_name(s.method)));
}

// Layout export: header id,x,y. Identifier column carries the point's label
// when one exists, else its numeric id.
inline std::string layout_csv(const Layout2D& layout, const std::vector<std::string>& labels = {}) {
    if (!labels.empty() && labels.size() != layout.coords.size())
        throw DataError("layout labels must match coordinate count");
    std::string out = "id,x,y\n";
    for (std::size_t i = 0; i < layout.coords.size(); ++i) {
        std::string id = labels.empty() ? std::to_string(layout.ids[i]) : labels[i];
        out += csv_row({id, fmt_double(layout.coords[i].first), fmt_double(layout.coords[i].second)});
    }
    return out;
}

inline std::string trace_csv(const std::vector<double>& trace) {
    std::string out = "iteration,kl\n";
    for (std::size_t i = 0; i < trace.size(); ++i)
        out += csv_row({std::to_string(i), fmt_double(trace[i])});
    return out;
}

} // namespace cmap

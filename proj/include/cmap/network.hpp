#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmap/errors.hpp"
#include "cmap/rng.hpp"
#include "cmap/similarity.hpp"
#include "cmap/tokenize.hpp"
#include "cmap/tsne.hpp"

namespace cmap {

struct GraphNode {
    int id = 0;
    std::string label;
    std::string group; // empty = default group
    long long frequency = 0;
};

struct GroupDef {
    std::vector<std::string> members;
    std::string color; // 6-digit hex, e.g. "#1b9e77"
};

struct SemanticGraph {
    std::vector<GraphNode> nodes;
    EdgeList edges; // edge indices reference nodes[i].id
    std::map<std::string, GroupDef> groups;
};

struct ForceConfig {
    int iterations = 500;
    double area = 1.0;
    double cooling = 0.95;
    std::uint64_t rng_seed = 42;
};

// Nodes are the edge endpoints only (isolated vocabulary words are excluded);
// node ids are compacted to 0..n-1 preserving the edge-list label order.
// Group membership is exact lemma match; members absent from the graph
// produce warnings, never errors.
inline SemanticGraph build_graph(const EdgeList& edges, const Vocabulary& vocab,
                                 const std::map<std::string, GroupDef>& groups,
                                 std::vector<std::string>* warnings = nullptr) {
    if (edges.edges.empty()) throw DataError("no_edges: cannot build a graph from an empty edge list");

    std::set<int> used;
    for (const auto& e : edges.edges) {
        used.insert(e.i);
        used.insert(e.j);
    }

    SemanticGraph g;
    g.groups = groups;
    std::map<int, int> remap;
    std::map<std::string, std::string> lemma_group;
    for (const auto& [name, def] : groups)
        for (const auto& lemma : def.members)
            lemma_group[lemma] = name;

    for (int old_idx : used) {
        GraphNode node;
        node.id = static_cast<int>(g.nodes.size());
        node.label = edges.labels[static_cast<std::size_t>(old_idx)];
        if (auto it = lemma_group.find(node.label); it != lemma_group.end()) node.group = it->second;
        if (auto it = vocab.frequency.find(node.label); it != vocab.frequency.end())
            node.frequency = it->second;
        remap[old_idx] = node.id;
        g.nodes.push_back(std::move(node));
    }

    g.edges.threshold = edges.threshold;
    for (auto& n : g.nodes) g.edges.labels.push_back(n.label);
    for (const auto& e : edges.edges) {
        Edge out = e;
        out.i = remap[e.i];
        out.j = remap[e.j];
        g.edges.edges.push_back(out);
    }

    if (warnings) {
        std::set<std::string> present;
        for (const auto& n : g.nodes) present.insert(n.label);
        for (const auto& [name, def] : groups)
            for (const auto& lemma : def.members)
                if (!present.count(lemma))
                    warnings->push_back("group '" + name + "' member '" + lemma +
                                        "' is not a node in the graph");
    }
    return g;
}

// Classic Fruchterman-Reingold. Repulsion acts on all pairs, attraction on
// edges scaled by display_weight/5; displacement per iteration is capped by a
// geometrically cooled temperature. Fully serial, so a (graph, config) pair
// always yields the same coordinates. Final positions are normalized to the
// unit square.
inline Layout2D force_layout(const SemanticGraph& graph, const ForceConfig& config) {
    const std::size_t n = graph.nodes.size();
    if (n == 0) throw DataError("force_layout: graph has no nodes");
    if (config.iterations < 1) throw ConfigError("force iterations must be >= 1");
    if (!(config.cooling > 0.0 && config.cooling < 1.0))
        throw ConfigError("force cooling must be in (0, 1)");

    const double k = std::sqrt(config.area / static_cast<double>(n));
    Rng rng(config.rng_seed);
    std::vector<std::pair<double, double>> pos(n);
    for (auto& p : pos) {
        p.first = rng.uniform();
        p.second = rng.uniform();
    }

    // Deterministic tie-break direction for coincident points.
    auto separation = [](std::size_t i, std::size_t j) {
        double angle = 2.399963229728653 * static_cast<double>(i * 31 + j); // golden angle
        return std::pair<double, double>{1e-9 * std::cos(angle), 1e-9 * std::sin(angle)};
    };

    double temperature = 0.1 * std::sqrt(config.area);
    std::vector<std::pair<double, double>> disp(n);
    for (int iter = 0; iter < config.iterations; ++iter) {
        std::fill(disp.begin(), disp.end(), std::pair<double, double>{0.0, 0.0});

        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                double dx = pos[i].first - pos[j].first;
                double dy = pos[i].second - pos[j].second;
                double dist = std::sqrt(dx * dx + dy * dy);
                if (dist < 1e-12) {
                    auto [sx, sy] = separation(i, j);
                    dx = sx;
                    dy = sy;
                    dist = std::sqrt(dx * dx + dy * dy);
                }
                double force = k * k / dist;
                disp[i].first += dx / dist * force;
                disp[i].second += dy / dist * force;
                disp[j].first -= dx / dist * force;
                disp[j].second -= dy / dist * force;
            }
        }

        for (const auto& e : graph.edges.edges) {
            auto a = static_cast<std::size_t>(e.i);
            auto b = static_cast<std::size_t>(e.j);
            double dx = pos[a].first - pos[b].first;
            double dy = pos[a].second - pos[b].second;
            double dist = std::sqrt(dx * dx + dy * dy);
            if (dist < 1e-12) {
                auto [sx, sy] = separation(a, b);
                dx = sx;
                dy = sy;
                dist = std::sqrt(dx * dx + dy * dy);
            }
            double force = dist * dist / k * (e.display_weight / 5.0);
            disp[a].first -= dx / dist * force;
            disp[a].second -= dy / dist * force;
            disp[b].first += dx / dist * force;
            disp[b].second += dy / dist * force;
        }

        for (std::size_t i = 0; i < n; ++i) {
            double dx = disp[i].first;
            double dy = disp[i].second;
            double len = std::sqrt(dx * dx + dy * dy);
            if (len < 1e-12) continue;
            double step = std::min(len, temperature);
            pos[i].first += dx / len * step;
            pos[i].second += dy / len * step;
        }
        temperature *= config.cooling;
    }

    double min_x = pos[0].first, max_x = pos[0].first;
    double min_y = pos[0].second, max_y = pos[0].second;
    for (const auto& p : pos) {
        min_x = std::min(min_x, p.first);
        max_x = std::max(max_x, p.first);
        min_y = std::min(min_y, p.second);
        max_y = std::max(max_y, p.second);
    }
    auto norm = [](double v, double lo, double hi) {
        return hi - lo < 1e-12 ? 0.5 : (v - lo) / (hi - lo);
    };

    Layout2D layout;
    layout.ids.reserve(n);
    layout.coords.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        layout.ids.push_back(graph.nodes[i].id);
        layout.coords.push_back({norm(pos[i].first, min_x, max_x), norm(pos[i].second, min_y, max_y)});
    }
    return layout;
}

// JSON export mirroring the rendered network: nodes (with coordinates when a
// layout is supplied), edges by label, and the group palette.
inline std::string graph_json(const SemanticGraph& graph, const Layout2D* layout = nullptr) {
    nlohmann::ordered_json j;
    j["nodes"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
        const auto& n = graph.nodes[i];
        nlohmann::ordered_json node;
        node["id"] = n.id;
        node["label"] = n.label;
        node["group"] = n.group.empty() ? nlohmann::ordered_json(nullptr)
                                        : nlohmann::ordered_json(n.group);
        node["frequency"] = n.frequency;
        if (layout) {
            node["x"] = layout->coords[i].first;
            node["y"] = layout->coords[i].second;
        }
        j["nodes"].push_back(std::move(node));
    }
    j["edges"] = nlohmann::ordered_json::array();
    for (const auto& e : graph.edges.edges) {
        nlohmann::ordered_json edge;
        edge["source"] = graph.nodes[static_cast<std::size_t>(e.i)].label;
        edge["target"] = graph.nodes[static_cast<std::size_t>(e.j)].label;
        edge["similarity"] = e.similarity;
        edge["weight"] = e.display_weight;
        j["edges"].push_back(std::move(edge));
    }
    j["groups"] = nlohmann::ordered_json::array();
    for (const auto& [name, def] : graph.groups) {
        nlohmann::ordered_json group;
        group["name"] = name;
        group["color"] = def.color;
        group["members"] = def.members;
        j["groups"].push_back(std::move(group));
    }
    return j.dump(2) + "\n";
}

} // namespace cmap

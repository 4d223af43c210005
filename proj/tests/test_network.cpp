#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cmap/network.hpp"

using namespace cmap;

namespace {

EdgeList edge_list(std::vector<std::string> labels, std::vector<Edge> edges,
                   double threshold = 0.3) {
    EdgeList list;
    list.labels = std::move(labels);
    list.edges = std::move(edges);
    list.threshold = threshold;
    return list;
}

Vocabulary vocab_with(const std::map<std::string, long long>& freq) {
    Vocabulary v;
    for (const auto& [w, c] : freq) v.frequency[w] = c;
    return v;
}

double dist(const Layout2D& l, std::size_t a, std::size_t b) {
    double dx = l.coords[a].first - l.coords[b].first;
    double dy = l.coords[a].second - l.coords[b].second;
    return std::sqrt(dx * dx + dy * dy);
}

} // namespace

TEST_CASE("graph keeps only edge endpoints, compacted") {
    // label index 1 ("ghost") has no incident edge and must vanish
    auto edges = edge_list({"doctor", "ghost", "nurse", "money"},
                           {{0, 2, 0.9, 5.0}, {2, 3, 0.4, 1.0}});
    auto vocab = vocab_with({{"doctor", 7}, {"nurse", 4}, {"money", 3}, {"ghost", 1}});

    std::map<std::string, GroupDef> groups;
    groups["medical"] = {{"doctor", "nurse"}, "#1b9e77"};

    std::vector<std::string> warnings;
    auto g = build_graph(edges, vocab, groups, &warnings);

    REQUIRE(g.nodes.size() == 3);
    CHECK(g.nodes[0].label == "doctor");
    CHECK(g.nodes[1].label == "nurse");
    CHECK(g.nodes[2].label == "money");
    CHECK(g.nodes[0].id == 0);
    CHECK(g.nodes[2].id == 2);
    CHECK(g.nodes[0].group == "medical");
    CHECK(g.nodes[1].group == "medical");
    CHECK(g.nodes[2].group == ""); // default group
    CHECK(g.nodes[0].frequency == 7);

    REQUIRE(g.edges.edges.size() == 2);
    CHECK(g.edges.edges[0].i == 0); // remapped from old index 0
    CHECK(g.edges.edges[0].j == 1); // remapped from old index 2
    CHECK(g.edges.edges[1].i == 1);
    CHECK(g.edges.edges[1].j == 2);
    CHECK(g.edges.threshold == 0.3);
    CHECK(warnings.empty());
}

TEST_CASE("absent group members warn but do not fail") {
    auto edges = edge_list({"a", "b"}, {{0, 1, 0.5, 3.0}});
    std::map<std::string, GroupDef> groups;
    groups["g"] = {{"a", "zeppelin"}, "#d95f02"};

    std::vector<std::string> warnings;
    auto g = build_graph(edges, vocab_with({}), groups, &warnings);
    CHECK(g.nodes[0].group == "g");
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("zeppelin") != std::string::npos);
}

TEST_CASE("empty edge list cannot become a graph") {
    auto edges = edge_list({"a", "b"}, {});
    CHECK_THROWS_WITH(build_graph(edges, vocab_with({}), {}),
                      Catch::Matchers::ContainsSubstring("no_edges"));
}

TEST_CASE("graph json shape, with and without layout") {
    auto edges = edge_list({"doctor", "nurse"}, {{0, 1, 0.75, 5.0}});
    std::map<std::string, GroupDef> groups;
    groups["medical"] = {{"doctor"}, "#1b9e77"};
    auto g = build_graph(edges, vocab_with({{"doctor", 3}, {"nurse", 2}}), groups);

    auto plain = nlohmann::json::parse(graph_json(g));
    REQUIRE(plain["nodes"].size() == 2);
    CHECK(plain["nodes"][0]["id"] == 0);
    CHECK(plain["nodes"][0]["label"] == "doctor");
    CHECK(plain["nodes"][0]["group"] == "medical");
    CHECK(plain["nodes"][1]["group"].is_null());
    CHECK(plain["nodes"][0]["frequency"] == 3);
    CHECK_FALSE(plain["nodes"][0].contains("x"));

    REQUIRE(plain["edges"].size() == 1);
    CHECK(plain["edges"][0]["source"] == "doctor");
    CHECK(plain["edges"][0]["target"] == "nurse");
    CHECK(plain["edges"][0]["similarity"] == 0.75);
    CHECK(plain["edges"][0]["weight"] == 5.0);

    REQUIRE(plain["groups"].size() == 1);
    CHECK(plain["groups"][0]["name"] == "medical");
    CHECK(plain["groups"][0]["color"] == "#1b9e77");
    CHECK(plain["groups"][0]["members"] == nlohmann::json::array({"doctor"}));

    ForceConfig fc;
    fc.iterations = 50;
    auto layout = force_layout(g, fc);
    auto with_xy = nlohmann::json::parse(graph_json(g, &layout));
    CHECK(with_xy["nodes"][0].contains("x"));
    CHECK(with_xy["nodes"][0]["x"].get<double>() == layout.coords[0].first);
}

TEST_CASE("single-edge layout stays in bounds with distinct positions") {
    auto edges = edge_list({"a", "b"}, {{0, 1, 0.5, 3.0}});
    auto g = build_graph(edges, vocab_with({}), {});
    auto layout = force_layout(g, ForceConfig{});

    REQUIRE(layout.coords.size() == 2);
    for (const auto& [x, y] : layout.coords) {
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
        CHECK(y >= 0.0);
        CHECK(y <= 1.0);
    }
    CHECK(dist(layout, 0, 1) > 0.0);
}

TEST_CASE("layout is deterministic per seed") {
    auto edges = edge_list({"a", "b", "c"}, {{0, 1, 0.8, 5.0}, {1, 2, 0.4, 1.0}});
    auto g = build_graph(edges, vocab_with({}), {});

    auto l1 = force_layout(g, ForceConfig{});
    auto l2 = force_layout(g, ForceConfig{});
    CHECK(l1.coords == l2.coords); // bitwise

    ForceConfig other;
    other.rng_seed = 1234;
    auto l3 = force_layout(g, other);
    CHECK(l3.coords != l1.coords);
}

TEST_CASE("two cliques bridged by a weak edge separate") {
    std::vector<std::string> labels{"a0", "a1", "a2", "b0", "b1", "b2"};
    std::vector<Edge> edges;
    auto clique = [&](int base) {
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j)
                edges.push_back({base + i, base + j, 0.9, 5.0});
    };
    clique(0);
    clique(3);
    edges.push_back({0, 3, 0.3, 1.0}); // the bridge

    auto g = build_graph(edge_list(labels, edges), vocab_with({}), {});
    auto layout = force_layout(g, ForceConfig{});

    double intra = 0.0, inter = 0.0;
    int n_intra = 0, n_inter = 0;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j) {
            bool same = (i < 3) == (j < 3);
            (same ? intra : inter) += dist(layout, i, j);
            (same ? n_intra : n_inter) += 1;
        }
    intra /= n_intra;
    inter /= n_inter;
    CHECK(intra < inter);
}

TEST_CASE("heavier edges end up shorter on a symmetric star") {
    // center c with two spokes; only the display weights differ
    auto edges = edge_list({"c", "heavy", "light"},
                           {{0, 1, 0.5, 5.0}, {0, 2, 0.5, 1.0}});
    auto g = build_graph(edges, vocab_with({}), {});
    auto layout = force_layout(g, ForceConfig{});
    CHECK(dist(layout, 0, 1) < dist(layout, 0, 2));
}

TEST_CASE("force layout rejects bad configs") {
    auto g = build_graph(edge_list({"a", "b"}, {{0, 1, 0.5, 3.0}}), vocab_with({}), {});
    ForceConfig bad_iters;
    bad_iters.iterations = 0;
    CHECK_THROWS_AS(force_layout(g, bad_iters), ConfigError);
    ForceConfig bad_cooling;
    bad_cooling.cooling = 1.0;
    CHECK_THROWS_AS(force_layout(g, bad_cooling), ConfigError);
    SemanticGraph empty;
    CHECK_THROWS_AS(force_layout(empty, ForceConfig{}), DataError);
}

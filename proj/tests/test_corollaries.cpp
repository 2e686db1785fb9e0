#include <doctest.h>

#include <fstream>
#include <set>

#include "proofweave/corollaries.hpp"
#include "proofweave/json_io.hpp"
#include "proofweave/oracle.hpp"

using namespace proofweave;

namespace {

json load_json(const std::string& name) {
    std::ifstream in(std::string(PROOFWEAVE_FIXTURE_DIR) + "/" + name);
    REQUIRE(in.good());
    json j;
    in >> j;
    return j;
}

LocallyColoredGraph load_graph(const std::string& name) {
    return LocallyColoredGraph::build(graph_spec_from_json(load_json(name)));
}

EdgeColoring coloring_from(const json& j) {
    EdgeColoring ec;
    for (const auto& [k, v] : j.at("coloring").items()) ec[k] = v.get<std::string>();
    return ec;
}

EdgeColoring constant_coloring(const LocallyColoredGraph& g) {
    // edge-colored inputs carry their color on both ends already
    EdgeColoring ec;
    for (Edge e = 0; e < g.edge_count(); ++e)
        ec[g.edge_name(e)] = g.color_name(g.ends(e)[0].color);
    return ec;
}

}  // namespace

TEST_CASE("encoding of fig6: squares appear exactly on bicolored cycle edges") {
    LocallyColoredGraph upper = load_graph("fig6_upper.json");
    Encoding enc_up = encode_local_as_edge(upper);
    std::set<std::string> squares_up(enc_up.added.begin(), enc_up.added.end());
    CHECK(squares_up == std::set<std::string>{"sq_e0407", "sq_e1013", "sq_e1015", "sq_e1317"});

    LocallyColoredGraph lower = load_graph("fig6_lower.json");
    Encoding enc_low = encode_local_as_edge(lower);
    std::set<std::string> squares_low(enc_low.added.begin(), enc_low.added.end());
    CHECK(squares_low == std::set<std::string>{"sq_e0407", "sq_e1013"});

    // the lower encoding is not a sub-graph of the upper one: the edge 10-15 is
    // kept whole below but subdivided above
    CHECK(enc_low.graph.edge_index("e1015").has_value());
    CHECK(!enc_up.graph.edge_index("e1015").has_value());

    // key properties on both fixtures
    for (const LocallyColoredGraph* g : {&upper, &lower}) {
        Encoding enc = encode_local_as_edge(*g);
        CHECK(find_cuspfree_cycle(*g).has_value() ==
              find_cuspfree_cycle(enc.graph).has_value());
        for (Vertex v = 0; v < g->vertex_count(); ++v) {
            Vertex w = *enc.graph.vertex_index(g->vertex_name(v));
            CHECK(is_splitting(*g, v) == is_splitting(enc.graph, w));
        }
        for (const std::string& sq : enc.added)
            CHECK(!is_splitting(enc.graph, *enc.graph.vertex_index(sq)));
    }

    // the drawn filled vertices are the splitting ones
    {
        std::set<std::string> filled_up;
        for (Vertex v : brute_splitting(upper)) filled_up.insert(upper.vertex_name(v));
        CHECK(filled_up == std::set<std::string>{"n01", "n04", "n17"});
        std::set<std::string> filled_low;
        for (Vertex v : brute_splitting(lower)) filled_low.insert(lower.vertex_name(v));
        CHECK(filled_low == std::set<std::string>{"n01", "n04", "n10", "n15"});
    }

    // partial edges are rejected
    LocallyColoredGraph fig3 = load_graph("fig3.json");
    CHECK_THROWS_AS(encode_local_as_edge(fig3), CorollaryError);
}

TEST_CASE("encoding properties on random local colorings") {
    GeneratorConfig cfg;
    cfg.max_vertices = 6;
    cfg.max_edges = 8;
    for (uint64_t seed = 4000; seed < 4040; ++seed) {
        cfg.seed = seed;
        LocallyColoredGraph g = generate_graph(cfg);
        bool partial = false;
        for (Edge e = 0; e < g.edge_count(); ++e)
            if (!g.is_total(e)) partial = true;
        if (partial) continue;
        Encoding enc = encode_local_as_edge(g);
        CHECK(find_cuspfree_cycle(g).has_value() == find_cuspfree_cycle(enc.graph).has_value());
        for (Vertex v = 0; v < g.vertex_count(); ++v)
            CHECK(is_splitting(g, v) ==
                  is_splitting(enc.graph, *enc.graph.vertex_index(g.vertex_name(v))));
        for (const std::string& sq : enc.added)
            CHECK(!is_splitting(enc.graph, *enc.graph.vertex_index(sq)));
    }
}

TEST_CASE("classic Yeo on fig1") {
    LocallyColoredGraph g = load_graph("fig1.json");
    EdgeColoring ec = coloring_from(load_json("fig1_aux.json"));
    Vertex v = yeo_classic(g, ec);
    CHECK(g.vertex_name(v) == "a");
    CHECK(yeo_conclusion_holds(g, ec, v));

    // single vertex, no edges
    GraphSpec one;
    one.vertices = {"z"};
    one.colors = {"k"};
    LocallyColoredGraph g1 = LocallyColoredGraph::build(one);
    CHECK(yeo_classic(g1, {}) == 0);

    // a monochromatic triangle has cusps everywhere, so Yeo applies
    GraphSpec tri;
    tri.vertices = {"a", "b", "c"};
    tri.colors = {"k"};
    tri.edges = {{"ab", {{"a", "k"}, {"b", "k"}}},
                 {"bc", {{"b", "k"}, {"c", "k"}}},
                 {"ca", {{"c", "k"}, {"a", "k"}}}};
    LocallyColoredGraph gt = LocallyColoredGraph::build(tri);
    EdgeColoring mono = constant_coloring(gt);
    Vertex w = yeo_classic(gt, mono);
    CHECK(yeo_conclusion_holds(gt, mono, w));

    // a properly colored 4-cycle raises the alternating-cycle error
    GraphSpec sq;
    sq.vertices = {"a", "b", "c", "d"};
    sq.colors = {"0", "1"};
    sq.edges = {{"ab", {{"a", "0"}, {"b", "0"}}},
                {"bc", {{"b", "1"}, {"c", "1"}}},
                {"cd", {{"c", "0"}, {"d", "0"}}},
                {"da", {{"d", "1"}, {"a", "1"}}}};
    LocallyColoredGraph gs = LocallyColoredGraph::build(sq);
    try {
        yeo_classic(gs, constant_coloring(gs));
        CHECK(false);
    } catch (const CorollaryError& err) {
        CHECK(err.code == "AlternatingCycleExists");
        CHECK(err.witness.has_value());
    }
}

TEST_CASE("Kotzig") {
    // path a-b-c-d with F = {ab, cd}
    GraphSpec spec;
    spec.vertices = {"a", "b", "c", "d"};
    spec.colors = {"k"};
    spec.edges = {{"ab", {{"a", "k"}, {"b", "k"}}},
                  {"bc", {{"b", "k"}, {"c", "k"}}},
                  {"cd", {{"c", "k"}, {"d", "k"}}}};
    LocallyColoredGraph g = LocallyColoredGraph::build(spec);
    Edge e = kotzig(g, {"ab", "cd"});
    CHECK((g.edge_name(e) == "ab" || g.edge_name(e) == "cd"));
    CHECK(is_bridge(g, e));

    // single matched edge
    GraphSpec one;
    one.vertices = {"u", "v"};
    one.colors = {"k"};
    one.edges = {{"uv", {{"u", "k"}, {"v", "k"}}}};
    LocallyColoredGraph g1 = LocallyColoredGraph::build(one);
    CHECK(g1.edge_name(kotzig(g1, {"uv"})) == "uv");

    // 4-cycle: two perfect matchings, either one is not unique
    GraphSpec sq;
    sq.vertices = {"a", "b", "c", "d"};
    sq.colors = {"k"};
    sq.edges = {{"ab", {{"a", "k"}, {"b", "k"}}},
                {"bc", {{"b", "k"}, {"c", "k"}}},
                {"cd", {{"c", "k"}, {"d", "k"}}},
                {"da", {{"d", "k"}, {"a", "k"}}}};
    LocallyColoredGraph gs = LocallyColoredGraph::build(sq);
    try {
        kotzig(gs, {"ab", "cd"});
        CHECK(false);
    } catch (const CorollaryError& err) {
        CHECK(err.code == "MatchingNotUnique");
    }

    // not a perfect matching
    try {
        kotzig(g, {"ab"});
        CHECK(false);
    } catch (const CorollaryError& err) {
        CHECK(err.code == "NotPerfectMatching");
    }
}

TEST_CASE("Kotzig on generated unique-matching instances") {
    GeneratorConfig cfg;
    cfg.max_vertices = 10;
    for (uint64_t seed = 1; seed <= 60; ++seed) {
        cfg.seed = seed;
        MatchingInstance inst = generate_matching_instance(cfg);
        Edge e = kotzig(inst.graph, inst.matching);
        CHECK(is_bridge(inst.graph, e));
        bool in_f = false;
        for (const std::string& name : inst.matching)
            if (*inst.graph.edge_index(name) == e) in_f = true;
        CHECK(in_f);
    }
}

TEST_CASE("matching uniqueness equals absence of F-alternating cycles") {
    // enumerate all perfect matchings of small generated graphs and compare
    GeneratorConfig cfg;
    cfg.max_vertices = 8;
    cfg.max_edges = 10;
    for (uint64_t seed = 100; seed < 130; ++seed) {
        cfg.seed = seed;
        LocallyColoredGraph g = generate_graph(cfg);
        if (g.vertex_count() % 2 != 0 || g.vertex_count() == 0) continue;
        // enumerate perfect matchings
        std::vector<std::vector<Edge>> matchings;
        std::vector<Edge> cur;
        std::vector<char> used(g.vertex_count(), 0);
        std::function<void(Vertex)> rec = [&](Vertex v) {
            while (v < g.vertex_count() && used[v]) ++v;
            if (v == g.vertex_count()) {
                matchings.push_back(cur);
                return;
            }
            for (Edge e : g.edges_at(v)) {
                auto w = g.other_end(e, v);
                if (!w || used[*w]) continue;
                used[v] = used[*w] = 1;
                cur.push_back(e);
                rec(v + 1);
                cur.pop_back();
                used[v] = used[*w] = 0;
            }
        };
        rec(0);
        for (const auto& f : matchings) {
            std::vector<std::string> names;
            for (Edge e : f) names.push_back(g.edge_name(e));
            bool unique = matchings.size() == 1;
            try {
                kotzig(g, names);
                CHECK(unique);
            } catch (const CorollaryError& err) {
                if (err.code == "MatchingNotUnique") CHECK(!unique);
            }
        }
    }
}

TEST_CASE("Seymour-Giles on fig7") {
    LocallyColoredGraph g = load_graph("fig7.json");
    json aux = load_json("fig7_aux.json");
    std::map<std::string, std::string> phi;
    for (const auto& [k, v] : aux.at("phi").items()) phi[k] = v.get<std::string>();
    Vertex u = seymour_giles(g, phi);
    Edge fu = *g.edge_index(phi.at(g.vertex_name(u)));
    CHECK(is_bridge(g, fu));

    // star graph: every edge is a bridge
    GraphSpec star;
    star.vertices = {"c", "l1", "l2", "l3"};
    star.colors = {"k"};
    star.edges = {{"e1", {{"c", "k"}, {"l1", "k"}}},
                  {"e2", {{"c", "k"}, {"l2", "k"}}},
                  {"e3", {{"c", "k"}, {"l3", "k"}}}};
    LocallyColoredGraph gs = LocallyColoredGraph::build(star);
    std::map<std::string, std::string> sphi = {
        {"c", "e1"}, {"l1", "e1"}, {"l2", "e2"}, {"l3", "e3"}};
    Vertex su = seymour_giles(gs, sphi);
    CHECK(is_bridge(gs, *gs.edge_index(sphi.at(gs.vertex_name(su)))));

    // a triangle with phi a consistent orientation is phi-conformal
    GraphSpec tri;
    tri.vertices = {"a", "b", "c"};
    tri.colors = {"k"};
    tri.edges = {{"ab", {{"a", "k"}, {"b", "k"}}},
                 {"bc", {{"b", "k"}, {"c", "k"}}},
                 {"ca", {{"c", "k"}, {"a", "k"}}}};
    LocallyColoredGraph gt = LocallyColoredGraph::build(tri);
    std::map<std::string, std::string> tphi = {{"a", "ab"}, {"b", "bc"}, {"c", "ca"}};
    try {
        seymour_giles(gt, tphi);
        CHECK(false);
    } catch (const CorollaryError& err) {
        CHECK(err.code == "ConformalCycleExists");
    }
}

TEST_CASE("Grossman-Haggkvist") {
    // properly 2-colored 4-cycle yields the alternating cycle
    GraphSpec sq;
    sq.vertices = {"a", "b", "c", "d"};
    sq.colors = {"0", "1"};
    sq.edges = {{"ab", {{"a", "0"}, {"b", "0"}}},
                {"bc", {{"b", "1"}, {"c", "1"}}},
                {"cd", {{"c", "0"}, {"d", "0"}}},
                {"da", {{"d", "1"}, {"a", "1"}}}};
    LocallyColoredGraph gs = LocallyColoredGraph::build(sq);
    auto res = grossman_haggkvist(gs, constant_coloring(gs));
    REQUIRE(std::holds_alternative<Path>(res));
    CHECK(cusp_count(std::get<Path>(res)) == 0);

    // fig1 yields the filled splitting vertex
    LocallyColoredGraph g1 = load_graph("fig1.json");
    auto res1 = grossman_haggkvist(g1, coloring_from(load_json("fig1_aux.json")));
    REQUIRE(std::holds_alternative<Vertex>(res1));
    CHECK(g1.vertex_name(std::get<Vertex>(res1)) == "a");

    // one edge: a splitting vertex
    GraphSpec one;
    one.vertices = {"u", "v"};
    one.colors = {"k"};
    one.edges = {{"uv", {{"u", "k"}, {"v", "k"}}}};
    LocallyColoredGraph go = LocallyColoredGraph::build(one);
    auto reso = grossman_haggkvist(go, constant_coloring(go));
    CHECK(std::holds_alternative<Vertex>(reso));
}

TEST_CASE("Shoesmith-Smiley on fig8") {
    DirectedGraphView g = directed_from_json(load_json("fig8.json"));
    std::vector<std::string> s = {"u", "v", "x"};
    Vertex v = shoesmith_smiley(g, s);
    CHECK(turning_in_every_cycle(g, v));
    // the triangle's turning vertices are v (two sources) and x (two targets)
    std::string name = g.graph.vertex_name(v);
    CHECK((name == "v" || name == "x"));

    // a DAG poses no constraint: any vertex of S qualifies
    json dag = {{"vertices", {"a", "b"}},
                {"colors", {"k"}},
                {"edges",
                 {{{"id", "e"}, {"ends", {{{"v", "a"}, {"color", "k"}},
                                           {{"v", "b"}, {"color", "k"}}}}}}}};
    DirectedGraphView gd = directed_from_json(dag);
    CHECK(turning_in_every_cycle(gd, shoesmith_smiley(gd, {"b"})));

    // a consistently oriented 4-cycle has no turning vertex at all
    json cyc = {{"vertices", {"a", "b", "c", "d"}},
                {"colors", {"k"}},
                {"edges",
                 {
                     {{"id", "e1"}, {"ends", {{{"v", "a"}, {"color", "k"}},
                                              {{"v", "b"}, {"color", "k"}}}}},
                     {{"id", "e2"}, {"ends", {{{"v", "b"}, {"color", "k"}},
                                              {{"v", "c"}, {"color", "k"}}}}},
                     {{"id", "e3"}, {"ends", {{{"v", "c"}, {"color", "k"}},
                                              {{"v", "d"}, {"color", "k"}}}}},
                     {{"id", "e4"}, {"ends", {{{"v", "d"}, {"color", "k"}},
                                              {{"v", "a"}, {"color", "k"}}}}},
                 }}};
    DirectedGraphView gc = directed_from_json(cyc);
    try {
        shoesmith_smiley(gc, {"a", "b", "c", "d"});
        CHECK(false);
    } catch (const CorollaryError& err) {
        CHECK(err.code == "CycleWithoutTurningInS");
    }

    // S must be non-empty
    try {
        shoesmith_smiley(g, {});
        CHECK(false);
    } catch (const CorollaryError& err) {
        CHECK(err.code == "SEmpty");
    }
}

TEST_CASE("H-Yeo") {
    // complete H on the color set reduces to classic Yeo: fig1 again
    LocallyColoredGraph g1 = load_graph("fig1.json");
    EdgeColoring ec = coloring_from(load_json("fig1_aux.json"));
    PatternGraph h_complete;
    h_complete.colors = {"blue", "red"};
    h_complete.edges = {{"blue", "red"}};
    Vertex v = h_yeo(g1, ec, h_complete);
    CHECK(g1.vertex_name(v) == "a");

    // H with no edges: every cycle is vacuously non-H; all edges at a vertex
    // fall in one independent class
    PatternGraph h_empty;
    h_empty.colors = {"blue", "red"};
    Vertex w = h_yeo(g1, ec, h_empty);
    CHECK(w >= 0);

    // the 3-path G_v (colors a-b-c) is K_{1,2}, hence still complete
    // multipartite: only the 4-path breaks the condition
    GraphSpec star;
    star.vertices = {"c0", "l1", "l2", "l3"};
    star.colors = {"a", "b", "c"};
    star.edges = {{"e1", {{"c0", "a"}, {"l1", "a"}}},
                  {"e2", {{"c0", "b"}, {"l2", "b"}}},
                  {"e3", {{"c0", "c"}, {"l3", "c"}}}};
    LocallyColoredGraph gs = LocallyColoredGraph::build(star);
    PatternGraph h_path3;
    h_path3.colors = {"a", "b", "c"};
    h_path3.edges = {{"a", "b"}, {"b", "c"}};
    CHECK(h_yeo(gs, constant_coloring(gs), h_path3) >= 0);

    GraphSpec star4;
    star4.vertices = {"c0", "l1", "l2", "l3", "l4"};
    star4.colors = {"a", "b", "c", "d"};
    star4.edges = {{"e1", {{"c0", "a"}, {"l1", "a"}}},
                   {"e2", {{"c0", "b"}, {"l2", "b"}}},
                   {"e3", {{"c0", "c"}, {"l3", "c"}}},
                   {"e4", {{"c0", "d"}, {"l4", "d"}}}};
    LocallyColoredGraph gs4 = LocallyColoredGraph::build(star4);
    PatternGraph h_path4;
    h_path4.colors = {"a", "b", "c", "d"};
    h_path4.edges = {{"a", "b"}, {"b", "c"}, {"c", "d"}};
    try {
        h_yeo(gs4, constant_coloring(gs4), h_path4);
        CHECK(false);
    } catch (const CorollaryError& err) {
        CHECK(err.code == "NotCompleteMultipartite");
    }
}

TEST_CASE("corollary outputs revalidate on generated instances") {
    GeneratorConfig cfg;
    cfg.max_vertices = 7;
    cfg.max_edges = 9;
    int yeo_done = 0, gh_done = 0;
    for (uint64_t seed = 300; seed < 360; ++seed) {
        cfg.seed = seed;
        cfg.max_colors = 2;
        LocallyColoredGraph g = generate_graph(cfg);
        if (g.vertex_count() == 0) continue;
        GraphSpec spec = g.to_spec();
        for (auto& e : spec.edges)
            if (e.ends.size() == 2) e.ends[1].color = e.ends[0].color;
        LocallyColoredGraph ec_graph = LocallyColoredGraph::build(spec);
        EdgeColoring ec = constant_coloring(ec_graph);
        try {
            Vertex v = yeo_classic(ec_graph, ec);
            CHECK(yeo_conclusion_holds(ec_graph, ec, v));
            ++yeo_done;
        } catch (const CorollaryError& err) {
            CHECK(err.code == "AlternatingCycleExists");
        }
        auto res = grossman_haggkvist(ec_graph, ec);
        ++gh_done;
        if (std::holds_alternative<Path>(res)) {
            CHECK(cusp_count(std::get<Path>(res)) == 0);
        } else {
            CHECK(yeo_conclusion_holds(ec_graph, ec, std::get<Vertex>(res)));
        }
    }
    CHECK(yeo_done > 0);
    CHECK(gh_done > 0);
}

#include <doctest.h>

#include <fstream>
#include <set>

#include "proofweave/json_io.hpp"
#include "proofweave/oracle.hpp"
#include "proofweave/yeo.hpp"

using namespace proofweave;

namespace {

LocallyColoredGraph load_graph(const std::string& name) {
    std::ifstream in(std::string(PROOFWEAVE_FIXTURE_DIR) + "/" + name);
    REQUIRE(in.good());
    json j;
    in >> j;
    return LocallyColoredGraph::build(graph_spec_from_json(j));
}

std::vector<ExitSpec> load_exits(const LocallyColoredGraph& g, const std::string& name) {
    std::ifstream in(std::string(PROOFWEAVE_FIXTURE_DIR) + "/" + name);
    REQUIRE(in.good());
    json j;
    in >> j;
    std::vector<ExitSpec> out;
    for (const auto& x : j.at("exits")) {
        ExitSpec s;
        s.e = *g.edge_index(x.at("edge").get<std::string>());
        s.inside = *g.vertex_index(x.at("inside").get<std::string>());
        s.outside = *g.vertex_index(x.at("outside").get<std::string>());
        out.push_back(s);
    }
    return out;
}

Path mk_path(const LocallyColoredGraph& g, const std::vector<std::string>& seq) {
    PathValidation pv = path_validate(g, seq);
    REQUIRE(pv.ok);
    return pv.path;
}

std::set<std::string> color_names(const LocallyColoredGraph& g, const std::map<Color, Path>& m) {
    std::set<std::string> out;
    for (const auto& [c, p] : m) out.insert(g.color_name(c));
    return out;
}

}  // namespace

TEST_CASE("cusp-free reachability on fig3") {
    LocallyColoredGraph g = load_graph("fig3.json");
    Vertex u = *g.vertex_index("u"), v = *g.vertex_index("v"), x = *g.vertex_index("x");
    Color dashed = *g.color_index("dashed"), solid = *g.color_index("solid");

    // paths from (x, dashed) must not start with f (dashed at x), so the
    // witness goes around the triangle
    auto from_x = cuspfree_reach(g, {x, dashed}, u);
    CHECK(color_names(g, from_x) == std::set<std::string>{"solid"});
    CHECK(from_x.begin()->second.encode() == "x,g,v,e,u");
    // while (x, solid) reaches u directly through f
    Color solid2 = *g.color_index("solid");
    auto from_x2 = cuspfree_reach(g, {x, solid2}, u);
    CHECK(from_x2.begin()->second.encode() == "x,f,u");

    CHECK(cuspfree_reach(g, {v, solid}, v).empty());

    auto from_v = cuspfree_reach(g, {v, solid}, u);
    CHECK(color_names(g, from_v) == std::set<std::string>{"solid"});
    CHECK(from_v.begin()->second.encode() == "v,g,x,f,u");
}

TEST_CASE("min cusp cycles and splitting on fig3") {
    LocallyColoredGraph g = load_graph("fig3.json");
    Vertex u = *g.vertex_index("u"), v = *g.vertex_index("v"), x = *g.vertex_index("x");

    CHECK(min_cusp_cycles(g, u).empty());
    CHECK(is_splitting(g, u));

    auto cycles_v = min_cusp_cycles(g, v);
    REQUIRE(!cycles_v.empty());
    for (const Path& c : cycles_v) CHECK(cusp_count(c) == 1);
    CHECK(!is_splitting(g, v));
    CHECK(!is_splitting(g, x));

    // acyclic graph: every vertex splitting, no min-cusp cycles
    GraphSpec spec;
    spec.vertices = {"a", "b"};
    spec.colors = {"k"};
    spec.edges = {{"e", {{"a", "k"}, {"b", "k"}}}};
    LocallyColoredGraph tree = LocallyColoredGraph::build(spec);
    CHECK(min_cusp_cycles(tree, 0).empty());
    CHECK(is_splitting(tree, 0));
}

TEST_CASE("order is irreflexive and transitive on small random graphs") {
    GeneratorConfig cfg;
    cfg.max_vertices = 5;
    cfg.max_edges = 7;
    cfg.max_colors = 3;
    for (uint64_t seed = 100; seed < 112; ++seed) {
        cfg.seed = seed;
        LocallyColoredGraph g = generate_graph(cfg);
        std::vector<VertexColorPair> pairs = all_pairs(g);
        int n = static_cast<int>(pairs.size());
        std::vector<std::vector<char>> lt(n, std::vector<char>(n, 0));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) lt[i][j] = order_lt(g, pairs[i], pairs[j]).holds;
        for (int i = 0; i < n; ++i) CHECK(!lt[i][i]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    if (lt[i][j] && lt[j][k]) CHECK(lt[i][k]);
    }
}

TEST_CASE("cusp minimization rejects bad escape paths") {
    LocallyColoredGraph g = load_graph("fig3.json");
    Path omega = mk_path(g, {"v", "e", "u", "f", "x", "g", "v"});
    Path q = mk_path(g, {"u", "e", "v"});
    auto res = cusp_minimize(g, omega, *g.vertex_index("u"), *g.color_index("solid"), q);
    REQUIRE(std::holds_alternative<Violations>(res));
    const auto& bad = std::get<Violations>(res);
    CHECK(!bad.empty());
}

TEST_CASE("cusp minimization on a constructed instance") {
    // cycle v-a-u-x-v with a cusp at u, and an escape edge u-x hitting the
    // cycle on the far side
    GraphSpec spec;
    spec.vertices = {"a", "u", "v", "x"};
    spec.colors = {"c0", "c1", "c2"};
    auto edge = [&](const std::string& id, const std::string& p, const std::string& pc,
                    const std::string& q, const std::string& qc) {
        spec.edges.push_back({id, {{p, pc}, {q, qc}}});
    };
    edge("e1", "v", "c0", "a", "c0");
    edge("e2", "a", "c1", "u", "c0");
    edge("e3", "u", "c0", "x", "c0");
    edge("e4", "x", "c1", "v", "c1");
    edge("q1", "u", "c1", "x", "c2");
    LocallyColoredGraph g = LocallyColoredGraph::build(spec);

    Path omega = mk_path(g, {"v", "e1", "a", "e2", "u", "e3", "x", "e4", "v"});
    REQUIRE(cusp_count(omega) == 1);  // at u, color c0
    Path q = mk_path(g, {"u", "q1", "x"});
    auto res = cusp_minimize(g, omega, *g.vertex_index("u"), *g.color_index("c0"), q);
    REQUIRE(std::holds_alternative<CuspMinimizeResult>(res));
    const auto& ok = std::get<CuspMinimizeResult>(res);
    if (ok.branch == CuspMinimizeResult::Branch::Smaller) {
        CHECK(ok.cycle.verts.front() == *g.vertex_index("v"));
        CHECK(cusp_count(ok.cycle) < cusp_count(omega));
        CHECK(!has_cusp_at(ok.cycle, *g.vertex_index("v")));
    } else {
        CHECK(cusp_count(ok.cycle) == 0);
        CHECK(ok.cycle.contains_edge(*g.edge_index("q1")));
    }
}

TEST_CASE("cusp minimization search over small graphs finds both branches") {
    // brute-force search for instances of the lemma among generated graphs and
    // verify the postcondition every time it applies
    GeneratorConfig cfg;
    cfg.max_vertices = 6;
    cfg.max_edges = 8;
    int applied = 0;
    for (uint64_t seed = 200; seed < 230 && applied < 40; ++seed) {
        cfg.seed = seed;
        LocallyColoredGraph g = generate_graph(cfg);
        for (const Path& omega : enumerate_cycles(g)) {
            Vertex v = omega.verts.front();
            if (has_cusp_at(omega, v)) continue;
            for (const Cusp& cusp : path_cusps(omega)) {
                // escape paths: single edges off the cycle
                for (Edge q1 : g.edges_at(cusp.vertex)) {
                    auto w = g.other_end(q1, cusp.vertex);
                    if (!w) continue;
                    if (g.color_at(q1, cusp.vertex) == cusp.color) continue;
                    if (!omega.contains_vertex(*w)) continue;
                    if (omega.contains_edge(q1)) continue;
                    Path q;
                    q.g = &g;
                    q.verts = {cusp.vertex, *w};
                    q.edges = {q1};
                    auto res = cusp_minimize(g, omega, cusp.vertex, cusp.color, q);
                    if (!std::holds_alternative<CuspMinimizeResult>(res)) continue;
                    ++applied;
                    const auto& ok = std::get<CuspMinimizeResult>(res);
                    if (ok.branch == CuspMinimizeResult::Branch::Smaller) {
                        CHECK(ok.cycle.is_cycle());
                        CHECK(ok.cycle.verts.front() == v);
                        CHECK(!has_cusp_at(ok.cycle, v));
                        CHECK(cusp_count(ok.cycle) < cusp_count(omega));
                    } else {
                        CHECK(ok.cycle.is_cycle());
                        CHECK(cusp_count(ok.cycle) == 0);
                        CHECK(ok.cycle.contains_edge(q1));
                    }
                }
            }
        }
    }
    CHECK(applied > 0);
}

TEST_CASE("cusp minimization 2 reports named violations") {
    LocallyColoredGraph g = load_graph("fig3.json");
    Path omega = mk_path(g, {"v", "e", "u", "f", "x", "g", "v"});
    Path rho = mk_path(g, {"u"});
    Path chi = mk_path(g, {"u"});
    Path p = mk_path(g, {"v"});  // wrong source on purpose
    auto res = cusp_minimize2(g, omega, *g.vertex_index("u"), *g.vertex_index("u"),
                              *g.vertex_index("u"), rho, chi, *g.edge_index("e"), p);
    REQUIRE(std::holds_alternative<Violations>(res));
}

TEST_CASE("cusp minimization 2 degenerate case behaves like cusp minimization") {
    // same shape as the constructed instance with rho = chi = empty at kappa
    GraphSpec spec;
    spec.vertices = {"a", "l", "u", "v", "x"};
    spec.colors = {"c0", "c1", "c2"};
    auto edge = [&](const std::string& id, const std::string& p, const std::string& pc,
                    const std::string& q, const std::string& qc) {
        spec.edges.push_back({id, {{p, pc}, {q, qc}}});
    };
    edge("e1", "v", "c0", "a", "c0");
    edge("e2", "a", "c1", "u", "c0");
    edge("e3", "u", "c0", "x", "c0");
    edge("e4", "x", "c1", "v", "c1");
    edge("f1", "u", "c1", "l", "c0");
    edge("f2", "l", "c1", "x", "c2");
    LocallyColoredGraph g = LocallyColoredGraph::build(spec);
    Path omega = mk_path(g, {"v", "e1", "a", "e2", "u", "e3", "x", "e4", "v"});
    // x = y = kappa = u, rho/chi empty, exit edge f1 to l, then p = (l,f2,x)
    Path rho = mk_path(g, {"u"});
    Path chi = mk_path(g, {"u"});
    Path p = mk_path(g, {"l", "f2", "x"});
    auto res = cusp_minimize2(g, omega, *g.vertex_index("u"), *g.vertex_index("u"),
                              *g.vertex_index("u"), rho, chi, *g.edge_index("f1"), p);
    REQUIRE(std::holds_alternative<CuspMinimizeResult>(res));
    const auto& ok = std::get<CuspMinimizeResult>(res);
    if (ok.branch == CuspMinimizeResult::Branch::Smaller) {
        CHECK(cusp_count(ok.cycle) < cusp_count(omega));
        CHECK(!has_cusp_at(ok.cycle, *g.vertex_index("v")));
    } else {
        CHECK(cusp_count(ok.cycle) == 0);
        CHECK(ok.cycle.contains_edge(*g.edge_index("f1")));
    }
}

TEST_CASE("parametrized splitting on fig3 and fig1") {
    LocallyColoredGraph g3 = load_graph("fig3.json");
    ParamSplit r3 = find_splitting_param(g3, all_pairs(g3));
    REQUIRE(r3.status == ParamSplit::Status::Found);
    CHECK(g3.vertex_name(r3.vertex) == "u");
    CHECK(is_splitting(g3, r3.vertex));

    LocallyColoredGraph g1 = load_graph("fig1.json");
    ParamSplit r1 = find_splitting_param(g1, all_pairs(g1));
    REQUIRE(r1.status == ParamSplit::Status::Found);
    CHECK(g1.vertex_name(r1.vertex) == "a");  // the filled vertex
    CHECK(is_splitting(g1, r1.vertex));

    // empty P
    ParamSplit none = find_splitting_param(g3, {});
    CHECK(none.status == ParamSplit::Status::NoPairs);
}

TEST_CASE("parametrized splitting rejects graphs with cusp-free cycles") {
    // properly 2-colored 4-cycle
    GraphSpec spec;
    spec.vertices = {"a", "b", "c", "d"};
    spec.colors = {"0", "1"};
    spec.edges = {{"ab", {{"a", "0"}, {"b", "0"}}},
                  {"bc", {{"b", "1"}, {"c", "1"}}},
                  {"cd", {{"c", "0"}, {"d", "0"}}},
                  {"da", {{"d", "1"}, {"a", "1"}}}};
    LocallyColoredGraph g = LocallyColoredGraph::build(spec);
    ParamSplit r = find_splitting_param(g, all_pairs(g));
    CHECK(r.status == ParamSplit::Status::CuspFreeCycleExists);
    REQUIRE(r.witness_cycle.has_value());
    CHECK(cusp_count(*r.witness_cycle) == 0);
}

TEST_CASE("domination failures are reported") {
    LocallyColoredGraph g = load_graph("fig3.json");
    // P = a pair unrelated to the only cusp-point (u, solid)
    VertexColorPair lonely{*g.vertex_index("u"), *g.color_index("dotted")};
    ParamSplit r = find_splitting_param(g, {lonely});
    // the cusp-point (u, solid) is neither in P nor below the lonely pair
    CHECK(r.status == ParamSplit::Status::DominationFails);
    REQUIRE(r.witness_point.has_value());
    CHECK(g.vertex_name(r.witness_point->v) == "u");
}

TEST_CASE("maximal cusp-free unions on fig16") {
    LocallyColoredGraph g = load_graph("fig16.json");
    auto unions = max_cuspfree_unions(g);
    REQUIRE(unions.size() == 2);
    // omega1+2+3 has 6 vertices and 8 edges, omega4 is a triangle
    std::multiset<std::pair<size_t, size_t>> sizes;
    for (const auto& u : unions) sizes.insert({u.sub.verts.size(), u.sub.edges.size()});
    CHECK(sizes == std::multiset<std::pair<size_t, size_t>>{{3, 3}, {6, 8}});

    // no cusp-free cycle -> empty union set
    LocallyColoredGraph g3 = load_graph("fig3.json");
    CHECK(max_cuspfree_unions(g3).empty());

    // a single cusp-free triangle is its own union
    GraphSpec tri;
    tri.vertices = {"a", "b", "c"};
    tri.colors = {"0", "1", "2"};
    tri.edges = {{"ab", {{"a", "0"}, {"b", "0"}}},
                 {"bc", {{"b", "1"}, {"c", "1"}}},
                 {"ca", {{"c", "0"}, {"a", "1"}}}};
    auto tg = LocallyColoredGraph::build(tri);
    auto tu = max_cuspfree_unions(tg);
    REQUIRE(tu.size() == 1);
    CHECK(tu[0].sub.verts.size() == 3);
    CHECK(tu[0].sub.edges.size() == 3);
}

TEST_CASE("arrow connectedness") {
    // a cusp-free cycle is arrow-connected
    GraphSpec tri;
    tri.vertices = {"a", "b", "c"};
    tri.colors = {"0", "1", "2"};
    tri.edges = {{"ab", {{"a", "0"}, {"b", "0"}}},
                 {"bc", {{"b", "1"}, {"c", "1"}}},
                 {"ca", {{"c", "0"}, {"a", "1"}}}};
    auto tg = LocallyColoredGraph::build(tri);
    SubGraph whole{{0, 1, 2}, {0, 1, 2}};
    CHECK(is_arrow_connected(tg, whole));

    // fig16's unions are arrow-connected
    LocallyColoredGraph g = load_graph("fig16.json");
    auto unions = max_cuspfree_unions(g);
    for (const auto& u : unions) CHECK(is_arrow_connected(g, u.sub));

    // two vertex-disjoint cycles as one sub-graph are not
    GraphSpec two;
    two.vertices = {"a", "b", "c", "d"};
    two.colors = {"0", "1"};
    two.edges = {{"e1", {{"a", "0"}, {"b", "0"}}},
                 {"e2", {{"a", "1"}, {"b", "1"}}},
                 {"f1", {{"c", "0"}, {"d", "0"}}},
                 {"f2", {{"c", "1"}, {"d", "1"}}}};
    auto tg2 = LocallyColoredGraph::build(two);
    SubGraph both{{0, 1, 2, 3}, {0, 1, 2, 3}};
    CHECK(!is_arrow_connected(tg2, both));
}

TEST_CASE("terminality helper on small graphs") {
    // for an edge e = (v,u) whose pair (v, c(e,v)) is not a cusp-point, either
    // v lies on a cusp-free cycle or (v,a) < (u, c(e,u)) for every a != c(e,v)
    GeneratorConfig cfg;
    cfg.max_vertices = 5;
    cfg.max_edges = 7;
    cfg.max_colors = 3;
    for (uint64_t seed = 600; seed < 615; ++seed) {
        cfg.seed = seed;
        LocallyColoredGraph g = generate_graph(cfg);
        for (Edge e = 0; e < g.edge_count(); ++e) {
            if (!g.is_total(e)) continue;
            for (const auto& end : g.ends(e)) {
                Vertex v = end.v;
                Vertex u = *g.other_end(e, v);
                if (is_cusp_point(g, {v, g.color_at(e, v)})) continue;
                bool on_cf_cycle = find_cuspfree_cycle_through(g, v).has_value();
                if (on_cf_cycle) continue;
                for (Color a = 0; a < g.color_count(); ++a) {
                    if (a == g.color_at(e, v)) continue;
                    CHECK(order_lt(g, {v, a}, {u, g.color_at(e, u)}).holds);
                }
            }
        }
    }
}

TEST_CASE("mall graph splitting: exit hypothesis failures") {
    LocallyColoredGraph g17 = load_graph("fig17.json");
    auto ex17 = load_exits(g17, "fig17_aux.json");
    MallGraphSplit r17 = find_splitting_mall_graph(g17, ex17, all_pairs(g17));
    CHECK(r17.status == MallGraphSplit::Status::ExitH1Fails);
    CHECK(brute_splitting(g17).empty());

    LocallyColoredGraph g18 = load_graph("fig18.json");
    auto ex18 = load_exits(g18, "fig18_aux.json");
    MallGraphSplit r18 = find_splitting_mall_graph(g18, ex18, all_pairs(g18));
    CHECK(r18.status == MallGraphSplit::Status::ExitH1Fails);
    CHECK(brute_splitting(g18).empty());

    LocallyColoredGraph g19 = load_graph("fig19.json");
    auto ex19 = load_exits(g19, "fig19_aux.json");
    MallGraphSplit r19 = find_splitting_mall_graph(g19, ex19, all_pairs(g19));
    CHECK(r19.status == MallGraphSplit::Status::ExitH2Fails);
    CHECK(brute_splitting(g19).empty());
}

TEST_CASE("mall graph splitting: P overlapping P_out is rejected") {
    LocallyColoredGraph g = load_graph("fig20.json");
    auto exits = load_exits(g, "fig20_aux.json");
    MallGraphSplit r = find_splitting_mall_graph(g, exits, all_pairs(g));
    CHECK(r.status == MallGraphSplit::Status::POverlapsPout);
    CHECK(g.vertex_name(r.pair.v) == "v");
    CHECK(g.color_name(r.pair.color) == "violet");

    // the pair (v, violet) is maximal although v is not splitting
    Vertex v = *g.vertex_index("v");
    Color violet = *g.color_index("violet");
    CHECK(!is_splitting(g, v));
    for (const VertexColorPair& q : all_pairs(g))
        CHECK(!order_lt(g, {v, violet}, q).holds);

    // removing P_out from P makes the theorem applicable
    std::vector<VertexColorPair> pairs;
    for (const VertexColorPair& q : all_pairs(g))
        if (!(q.v == v && q.color == violet)) pairs.push_back(q);
    MallGraphSplit ok = find_splitting_mall_graph(g, exits, pairs);
    REQUIRE(ok.status == MallGraphSplit::Status::Found);
    CHECK(brute_is_splitting(g, ok.vertex));
}

TEST_CASE("mall graph splitting: drawn scc exits are structurally invalid") {
    LocallyColoredGraph g = load_graph("fig_scc.json");
    CHECK(brute_splitting(g).empty());
    // the two drawn cycles merge into one union through their shared vertex, so
    // both drawn exits land inside it
    auto unions = max_cuspfree_unions(g);
    REQUIRE(unions.size() == 1);
    std::vector<ExitSpec> exits = {
        {*g.edge_index("nce"), *g.vertex_index("n"), *g.vertex_index("ce")}};
    MallGraphSplit r = find_splitting_mall_graph(g, exits, all_pairs(g));
    CHECK(r.status == MallGraphSplit::Status::BadExit);
}

#include "proofweave/corollaries.hpp"

#include <algorithm>
#include <functional>
#include <set>

namespace proofweave {

namespace {

// Is edge e on some cycle of the underlying multigraph?
bool edge_on_cycle(const LocallyColoredGraph& g, Edge e) {
    if (!g.is_total(e)) return false;
    Vertex a = g.ends(e)[0].v, b = g.ends(e)[1].v;
    // path a..b avoiding e
    std::vector<char> visited(g.vertex_count(), 0);
    std::function<bool(Vertex)> dfs = [&](Vertex at) -> bool {
        if (at == b) return true;
        visited[at] = 1;
        for (Edge f : g.edges_at(at)) {
            if (f == e) continue;
            auto w = g.other_end(f, at);
            if (!w) continue;
            if (*w == b) return true;
            if (!visited[*w] && dfs(*w)) return true;
        }
        return false;
    };
    return dfs(a);
}

// recolored graphs keep the same sorted vertex/edge names, so paths found in
// them stay valid for the original graph once repointed
Path repoint(Path p, const LocallyColoredGraph& target) {
    p.g = &target;
    return p;
}

LocallyColoredGraph recolor(const LocallyColoredGraph& g,
                            const std::vector<std::string>& palette,
                            const std::function<std::string(Edge, Vertex)>& color) {
    GraphSpec spec = g.to_spec();
    spec.colors = palette;
    for (Edge e = 0; e < g.edge_count(); ++e)
        for (auto& end : spec.edges[e].ends) {
            Vertex v = *g.vertex_index(end.vertex);
            end.color = color(e, v);
        }
    return LocallyColoredGraph::build(spec);
}

}  // namespace

bool is_bridge(const LocallyColoredGraph& g, Edge e) { return !edge_on_cycle(g, e); }

LocallyColoredGraph lift_edge_coloring(const LocallyColoredGraph& g, const EdgeColoring& ec) {
    std::set<std::string> palette;
    for (const auto& [en, cn] : ec) palette.insert(cn);
    for (Edge e = 0; e < g.edge_count(); ++e)
        if (!ec.count(g.edge_name(e)))
            throw CorollaryError("MissingColor", "edge " + g.edge_name(e) + " uncolored");
    if (palette.empty()) palette.insert("k");
    return recolor(g, std::vector<std::string>(palette.begin(), palette.end()),
                   [&](Edge e, Vertex) { return ec.at(g.edge_name(e)); });
}

Encoding encode_local_as_edge(const LocallyColoredGraph& g) {
    for (Edge e = 0; e < g.edge_count(); ++e)
        if (!g.is_total(e)) throw CorollaryError("PartialEdge", "edge " + g.edge_name(e));

    GraphSpec spec;
    Encoding out;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        spec.vertices.push_back(g.vertex_name(v));
        out.vertex_origin[g.vertex_name(v)] = g.vertex_name(v);
    }
    std::set<std::string> palette;
    for (Color c = 0; c < g.color_count(); ++c) palette.insert(g.color_name(c));

    for (Edge e = 0; e < g.edge_count(); ++e) {
        Vertex v = g.ends(e)[0].v, u = g.ends(e)[1].v;
        std::string cv = g.color_name(g.color_at(e, v));
        std::string cu = g.color_name(g.color_at(e, u));
        if (cv == cu) {
            spec.edges.push_back({g.edge_name(e),
                                  {{g.vertex_name(v), cv}, {g.vertex_name(u), cu}}});
        } else if (edge_on_cycle(g, e)) {
            std::string mid = "sq_" + g.edge_name(e);
            spec.vertices.push_back(mid);
            out.added.push_back(mid);
            spec.edges.push_back(
                {g.edge_name(e) + "_1", {{g.vertex_name(v), cv}, {mid, cv}}});
            spec.edges.push_back(
                {g.edge_name(e) + "_2", {{mid, cu}, {g.vertex_name(u), cu}}});
        } else {
            // bridge: a single edge of an arbitrary color; take the first end's
            spec.edges.push_back({g.edge_name(e),
                                  {{g.vertex_name(v), cv}, {g.vertex_name(u), cv}}});
        }
    }
    spec.colors.assign(palette.begin(), palette.end());
    out.graph = LocallyColoredGraph::build(spec);
    return out;
}

Vertex yeo_classic(const LocallyColoredGraph& g, const EdgeColoring& ec) {
    if (g.vertex_count() == 0) throw CorollaryError("EmptyGraph", "Yeo needs a vertex");
    LocallyColoredGraph lifted = lift_edge_coloring(g, ec);
    ParamSplit res = find_splitting_param(lifted, all_pairs(lifted));
    if (res.status == ParamSplit::Status::CuspFreeCycleExists)
        throw CorollaryError("AlternatingCycleExists", "alternating cycle found",
                             repoint(*res.witness_cycle, g));
    if (res.status != ParamSplit::Status::Found)
        throw CorollaryError("Internal", "unexpected Yeo failure");
    return res.vertex;
}

bool yeo_conclusion_holds(const LocallyColoredGraph& g, const EdgeColoring& ec, Vertex v) {
    // no component of G - v is joined to v with edges of more than one color
    std::vector<char> visited(g.vertex_count(), 0);
    visited[v] = 1;
    std::vector<int> comp(g.vertex_count(), -1);
    int ncomp = 0;
    for (Vertex s = 0; s < g.vertex_count(); ++s) {
        if (visited[s]) continue;
        int id = ncomp++;
        std::vector<Vertex> stack = {s};
        visited[s] = 1;
        while (!stack.empty()) {
            Vertex at = stack.back();
            stack.pop_back();
            comp[at] = id;
            for (Edge e : g.edges_at(at)) {
                auto w = g.other_end(e, at);
                if (!w || *w == v || visited[*w]) continue;
                visited[*w] = 1;
                stack.push_back(*w);
            }
        }
    }
    std::vector<std::set<std::string>> colors(ncomp);
    for (Edge e : g.edges_at(v)) {
        auto w = g.other_end(e, v);
        if (!w) continue;
        colors[comp[*w]].insert(ec.at(g.edge_name(e)));
    }
    for (const auto& cs : colors)
        if (cs.size() > 1) return false;
    return true;
}

Edge kotzig(const LocallyColoredGraph& g, const std::vector<std::string>& matching) {
    std::set<Edge> fset;
    for (const std::string& name : matching) {
        auto e = g.edge_index(name);
        if (!e) throw CorollaryError("NotPerfectMatching", "unknown edge " + name);
        fset.insert(*e);
    }
    std::vector<int> deg(g.vertex_count(), 0);
    for (Edge e : fset) {
        if (!g.is_total(e)) throw CorollaryError("NotPerfectMatching", "partial edge in F");
        for (const auto& end : g.ends(e)) deg[end.v]++;
    }
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        if (deg[v] != 1)
            throw CorollaryError("NotPerfectMatching",
                                 "vertex " + g.vertex_name(v) + " not matched exactly once");

    LocallyColoredGraph colored = recolor(
        g, {"0", "1"}, [&](Edge e, Vertex) { return fset.count(e) ? "1" : "0"; });
    if (auto cyc = find_cuspfree_cycle(colored))
        throw CorollaryError("MatchingNotUnique", "F-alternating cycle found",
                             repoint(*cyc, g));
    ParamSplit res = find_splitting_param(colored, all_pairs(colored));
    if (res.status != ParamSplit::Status::Found)
        throw CorollaryError("Internal", "unexpected Kotzig failure");
    for (Edge e : g.edges_at(res.vertex))
        if (fset.count(e)) return e;
    throw CorollaryError("Internal", "splitting vertex without a matched edge");
}

Vertex seymour_giles(const LocallyColoredGraph& g,
                     const std::map<std::string, std::string>& phi) {
    if (g.vertex_count() == 0) throw CorollaryError("EmptyGraph", "empty graph");
    std::vector<Edge> phi_of(g.vertex_count(), -1);
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        auto it = phi.find(g.vertex_name(v));
        if (it == phi.end())
            throw CorollaryError("BadPhi", "phi undefined on " + g.vertex_name(v));
        auto e = g.edge_index(it->second);
        if (!e || !g.incident(*e, v))
            throw CorollaryError("BadPhi", "phi(" + g.vertex_name(v) + ") not incident");
        phi_of[v] = *e;
    }
    LocallyColoredGraph colored = recolor(g, {"0", "1"}, [&](Edge e, Vertex v) {
        return phi_of[v] == e ? "1" : "0";
    });
    if (auto cyc = find_cuspfree_cycle(colored))
        throw CorollaryError("ConformalCycleExists", "phi-conformal cycle found",
                             repoint(*cyc, g));
    ParamSplit res = find_splitting_param(colored, all_pairs(colored));
    if (res.status != ParamSplit::Status::Found)
        throw CorollaryError("Internal", "unexpected Seymour-Giles failure");
    return res.vertex;
}

std::variant<Vertex, Path> grossman_haggkvist(const LocallyColoredGraph& g,
                                              const EdgeColoring& ec) {
    if (g.vertex_count() == 0) throw CorollaryError("EmptyGraph", "empty graph");
    {
        std::set<std::string> palette;
        for (const auto& [e, c] : ec) palette.insert(c);
        if (palette.size() > 2)
            throw CorollaryError("BadColoring", "two colors expected");
    }
    LocallyColoredGraph lifted = lift_edge_coloring(g, ec);
    if (auto cyc = find_cuspfree_cycle(lifted)) return repoint(*cyc, g);
    ParamSplit res = find_splitting_param(lifted, all_pairs(lifted));
    if (res.status != ParamSplit::Status::Found)
        throw CorollaryError("Internal", "unexpected Grossman-Haggkvist failure");
    return res.vertex;
}

Vertex shoesmith_smiley(const DirectedGraphView& g, const std::vector<std::string>& s_set) {
    if (s_set.empty()) throw CorollaryError("SEmpty", "S must be non-empty");
    const LocallyColoredGraph& base = g.graph;
    std::vector<char> in_s(base.vertex_count(), 0);
    for (const std::string& name : s_set) {
        auto v = base.vertex_index(name);
        if (!v) throw CorollaryError("SEmpty", "unknown vertex " + name);
        in_s[*v] = 1;
    }
    // colors: 0/1 for S-sources/targets, a fresh color per edge elsewhere
    std::vector<std::string> palette = {"0", "1"};
    for (Edge e = 0; e < base.edge_count(); ++e) palette.push_back("e_" + base.edge_name(e));
    LocallyColoredGraph colored = recolor(base, palette, [&](Edge e, Vertex v) -> std::string {
        if (in_s[v] && g.src[e] == v) return "0";
        if (in_s[v] && g.tgt[e] == v) return "1";
        return "e_" + base.edge_name(e);
    });
    if (auto cyc = find_cuspfree_cycle(colored))
        throw CorollaryError("CycleWithoutTurningInS", "cycle avoids turning vertices of S",
                             repoint(*cyc, base));
    std::vector<VertexColorPair> pairs;
    for (Vertex v = 0; v < base.vertex_count(); ++v) {
        if (!in_s[v]) continue;
        pairs.push_back({v, *colored.color_index("0")});
        pairs.push_back({v, *colored.color_index("1")});
    }
    ParamSplit res = find_splitting_param(colored, pairs);
    if (res.status != ParamSplit::Status::Found)
        throw CorollaryError("Internal", "unexpected Shoesmith-Smiley failure");
    return res.vertex;
}

bool turning_in_every_cycle(const DirectedGraphView& g, Vertex v) {
    // every cycle through v turns at v: both incident cycle edges sourced at v
    // or both targeted at v
    const LocallyColoredGraph& base = g.graph;
    bool bad = false;
    std::vector<char> visited(base.vertex_count(), 0);
    visited[v] = 1;
    Edge first_edge = -1;
    std::function<bool(Vertex, Edge)> dfs = [&](Vertex at, Edge last) -> bool {
        for (Edge e : base.edges_at(at)) {
            if (e == last) continue;
            auto w = base.other_end(e, at);
            if (!w) continue;
            if (*w == v) {
                if (e == first_edge) continue;
                bool both_out = g.src[first_edge] == v && g.src[e] == v;
                bool both_in = g.tgt[first_edge] == v && g.tgt[e] == v;
                if (!both_out && !both_in) {
                    bad = true;
                    return true;
                }
                continue;
            }
            if (visited[*w]) continue;
            visited[*w] = 1;
            bool stop = dfs(*w, e);
            visited[*w] = 0;
            if (stop) return true;
        }
        return false;
    };
    for (Edge e : base.edges_at(v)) {
        auto w = base.other_end(e, v);
        if (!w) continue;
        first_edge = e;
        if (visited[*w]) {
            // neighbor is v itself: impossible, no loops
            continue;
        }
        visited[*w] = 1;
        bool stop = dfs(*w, e);
        visited[*w] = 0;
        if (stop) return false;
    }
    return !bad;
}

Vertex h_yeo(const LocallyColoredGraph& g, const EdgeColoring& ec, const PatternGraph& h) {
    if (g.vertex_count() == 0) throw CorollaryError("EmptyGraph", "empty graph");
    std::set<std::pair<std::string, std::string>> hedges;
    for (const auto& [a, b] : h.edges) {
        hedges.insert({a, b});
        hedges.insert({b, a});
    }
    auto linked = [&](const std::string& a, const std::string& b) {
        return hedges.count({a, b}) > 0;
    };

    // G_v: vertices = incident edges, adjacency via H; the independent classes
    // are the non-adjacency classes; complete multipartite means non-adjacency
    // is transitive and classes are fully joined.
    std::vector<std::map<Edge, int>> cls(g.vertex_count());
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        std::vector<Edge> inc = g.edges_at(v);
        int n = static_cast<int>(inc.size());
        auto adj = [&](int i, int j) {
            return linked(ec.at(g.edge_name(inc[i])), ec.at(g.edge_name(inc[j])));
        };
        // classes by non-adjacency
        std::vector<int> cl(n, -1);
        int next = 0;
        for (int i = 0; i < n; ++i) {
            if (cl[i] >= 0) continue;
            cl[i] = next;
            for (int j = i + 1; j < n; ++j)
                if (cl[j] < 0 && !adj(i, j)) cl[j] = next;
            ++next;
        }
        // complete multipartite check
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                bool same = cl[i] == cl[j];
                if (same == adj(i, j))
                    throw CorollaryError("NotCompleteMultipartite",
                                         "at vertex " + g.vertex_name(v));
            }
        for (int i = 0; i < n; ++i) cls[v][inc[i]] = cl[i];
    }

    std::vector<std::string> palette;
    int max_cls = 1;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        for (auto& [e, c] : cls[v]) max_cls = std::max(max_cls, c + 1);
    for (int i = 0; i < max_cls; ++i) palette.push_back("i" + std::to_string(i));
    LocallyColoredGraph colored = recolor(g, palette, [&](Edge e, Vertex v) {
        return "i" + std::to_string(cls[v].at(e));
    });
    if (auto cyc = find_cuspfree_cycle(colored))
        throw CorollaryError("HCycleExists", "H-cycle found", repoint(*cyc, g));
    ParamSplit res = find_splitting_param(colored, all_pairs(colored));
    if (res.status != ParamSplit::Status::Found)
        throw CorollaryError("Internal", "unexpected H-Yeo failure");
    return res.vertex;
}

}  // namespace proofweave

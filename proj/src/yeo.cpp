#include "proofweave/yeo.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <set>
#include <stdexcept>

namespace proofweave {

namespace {

// Depth-first enumeration of simple cusp-free paths from src. visit(path) is
// called after each extension and may return true to stop the whole walk.
// Vertices with avoid[v] set are never entered; edges with edge_ok[e] == 0 are
// never taken. When banned is set, the starting color must differ from it.
struct CuspFreeWalker {
    const LocallyColoredGraph& g;
    std::vector<char> visited;
    Path path;
    const std::vector<char>* avoid = nullptr;
    const std::vector<char>* edge_ok = nullptr;

    CuspFreeWalker(const LocallyColoredGraph& graph, Vertex src)
        : g(graph), visited(graph.vertex_count(), 0) {
        path.g = &graph;
        path.verts.push_back(src);
        visited[src] = 1;
    }

    template <typename Visit>
    void run(std::optional<Color> banned, Visit&& visit) {
        step(banned, visit);
    }

private:
    template <typename Visit>
    bool step(std::optional<Color> banned, Visit&& visit) {
        Vertex at = path.verts.back();
        for (Edge e : g.edges_at(at)) {
            if (edge_ok && !(*edge_ok)[e]) continue;
            auto w = g.other_end(e, at);
            if (!w || visited[*w]) continue;
            if (avoid && (*avoid)[*w]) continue;
            if (path.edges.empty()) {
                if (banned && g.color_at(e, at) == *banned) continue;
            } else {
                Edge prev = path.edges.back();
                if (e == prev) continue;
                if (g.color_at(e, at) == g.color_at(prev, at)) continue;  // cusp
            }
            path.edges.push_back(e);
            path.verts.push_back(*w);
            visited[*w] = 1;
            bool stop = visit(path);
            if (!stop) stop = step(banned, visit);
            visited[*w] = 0;
            path.verts.pop_back();
            path.edges.pop_back();
            if (stop) return true;
        }
        return false;
    }
};

// Enumeration of all simple paths from src (cusps allowed). close(cycle) is
// offered every closing edge back to src; either callback may stop the walk.
struct SimpleWalker {
    const LocallyColoredGraph& g;
    std::vector<char> visited;
    Path path;

    SimpleWalker(const LocallyColoredGraph& graph, Vertex src)
        : g(graph), visited(graph.vertex_count(), 0) {
        path.g = &graph;
        path.verts.push_back(src);
        visited[src] = 1;
    }

    template <typename Close>
    void run(Close&& close) {
        step(close);
    }

private:
    template <typename Close>
    bool step(Close&& close) {
        Vertex at = path.verts.back();
        Vertex src = path.verts.front();
        for (Edge e : g.edges_at(at)) {
            auto w = g.other_end(e, at);
            if (!w) continue;
            if (*w == src && !path.edges.empty() && e != path.edges.front()) {
                path.edges.push_back(e);
                path.verts.push_back(src);
                bool stop = close(path);
                path.verts.pop_back();
                path.edges.pop_back();
                if (stop) return true;
            }
            if (visited[*w]) continue;
            path.edges.push_back(e);
            path.verts.push_back(*w);
            visited[*w] = 1;
            bool stop = step(close);
            visited[*w] = 0;
            path.verts.pop_back();
            path.edges.pop_back();
            if (stop) return true;
        }
        return false;
    }
};

std::string canonical_cycle_key(const LocallyColoredGraph& g, const Path& cycle) {
    std::vector<std::string> ids;
    for (Edge e : cycle.edges) ids.push_back(g.edge_name(e));
    auto min_rotation = [](std::vector<std::string> v) {
        std::vector<std::string> best = v;
        for (size_t r = 1; r < v.size(); ++r) {
            std::rotate(v.begin(), v.begin() + 1, v.end());
            if (v < best) best = v;
        }
        return best;
    };
    std::vector<std::string> fwd = min_rotation(ids);
    std::reverse(ids.begin(), ids.end());
    std::vector<std::string> bwd = min_rotation(ids);
    const std::vector<std::string>& best = fwd < bwd ? fwd : bwd;
    std::string key;
    for (const auto& s : best) {
        key += s;
        key += '|';
    }
    return key;
}

int position_of(const Path& p, Vertex v) {
    for (int i = 0; i < static_cast<int>(p.verts.size()); ++i)
        if (p.verts[i] == v) return i;
    return -1;
}

}  // namespace

std::vector<VertexColorPair> cusp_points(const LocallyColoredGraph& g) {
    std::vector<VertexColorPair> out;
    for (Vertex v = 0; v < g.vertex_count(); ++v) {
        std::set<Color> seen, dup;
        for (Edge e : g.edges_at(v)) {
            Color c = g.color_at(e, v);
            if (!seen.insert(c).second) dup.insert(c);
        }
        for (Color c : dup) out.push_back({v, c});
    }
    return out;
}

bool is_cusp_point(const LocallyColoredGraph& g, VertexColorPair p) {
    int count = 0;
    for (Edge e : g.edges_at(p.v))
        if (g.color_at(e, p.v) == p.color) ++count;
    return count >= 2;
}

namespace {

// Runs visit on every cusp-free cycle anchored at src (wrap cusp excluded).
template <typename Visit>
void walk_cuspfree_cycles_from(const LocallyColoredGraph& g, Vertex src, Visit&& visit) {
    CuspFreeWalker walker(g, src);
    walker.run(std::nullopt, [&](const Path& p) {
        Vertex at = p.verts.back();
        Edge last = p.edges.back();
        for (Edge e : g.edges_at(at)) {
            auto w = g.other_end(e, at);
            if (!w || *w != src || e == last || e == p.edges.front()) continue;
            if (g.color_at(e, at) == g.color_at(last, at)) continue;
            if (g.color_at(e, src) == g.color_at(p.edges.front(), src)) continue;
            Path cycle = p;
            cycle.edges.push_back(e);
            cycle.verts.push_back(src);
            if (visit(cycle)) return true;
        }
        return false;
    });
}

}  // namespace

std::optional<Path> find_cuspfree_cycle(const LocallyColoredGraph& g) {
    std::optional<Path> found;
    for (Vertex s = 0; s < g.vertex_count() && !found; ++s) {
        walk_cuspfree_cycles_from(g, s, [&](const Path& cycle) {
            found = cycle;
            return true;
        });
    }
    return found;
}

std::optional<Path> find_cuspfree_cycle_through(const LocallyColoredGraph& g, Vertex v) {
    // a cusp-free cycle stays cusp-free under rotation, so anchoring at v works
    std::optional<Path> found;
    walk_cuspfree_cycles_from(g, v, [&](const Path& cycle) {
        found = cycle;
        return true;
    });
    return found;
}

std::optional<Path> find_cuspfree_cycle_through_edge(const LocallyColoredGraph& g, Edge e,
                                                     const SubGraph* within) {
    if (!g.is_total(e)) return std::nullopt;
    Vertex v = g.ends(e)[0].v;
    std::vector<char> avoid(g.vertex_count(), 0);
    std::vector<char> edge_ok(g.edge_count(), 1);
    if (within) {
        std::fill(avoid.begin(), avoid.end(), 1);
        std::fill(edge_ok.begin(), edge_ok.end(), 0);
        for (Vertex w : within->verts) avoid[w] = 0;
        for (Edge f : within->edges) edge_ok[f] = 1;
        if (avoid[v] || !edge_ok[e]) return std::nullopt;
    }
    std::optional<Path> found;
    CuspFreeWalker walker(g, v);
    walker.avoid = &avoid;
    walker.edge_ok = &edge_ok;
    walker.run(std::nullopt, [&](const Path& p) {
        Vertex at = p.verts.back();
        Edge last = p.edges.back();
        for (Edge f : g.edges_at(at)) {
            if (!edge_ok[f]) continue;
            auto w = g.other_end(f, at);
            if (!w || *w != v || f == last || f == p.edges.front()) continue;
            if (g.color_at(f, at) == g.color_at(last, at)) continue;
            if (g.color_at(f, v) == g.color_at(p.edges.front(), v)) continue;
            Path cycle = p;
            cycle.edges.push_back(f);
            cycle.verts.push_back(v);
            if (cycle.contains_edge(e)) {
                found = cycle;
                return true;
            }
        }
        return false;
    });
    return found;
}

std::vector<Path> enumerate_cuspfree_cycles(const LocallyColoredGraph& g) {
    std::vector<Path> out;
    std::set<std::string> seen;
    for (Vertex s = 0; s < g.vertex_count(); ++s) {
        walk_cuspfree_cycles_from(g, s, [&](const Path& cycle) {
            if (cycle.verts[0] != *std::min_element(cycle.verts.begin(), cycle.verts.end()))
                return false;
            if (seen.insert(canonical_cycle_key(g, cycle)).second) out.push_back(cycle);
            return false;
        });
    }
    return out;
}

std::map<Color, Path> cuspfree_reach(const LocallyColoredGraph& g, VertexColorPair from,
                                     Vertex to) {
    std::map<Color, Path> out;
    if (from.v == to) return out;
    CuspFreeWalker walker(g, from.v);
    walker.run(from.color, [&](const Path& p) {
        if (p.verts.back() == to) {
            Color beta = *p.ending_color();
            auto it = out.find(beta);
            if (it == out.end()) {
                out.emplace(beta, p);
            } else if (p.length() < it->second.length() ||
                       (p.length() == it->second.length() &&
                        p.encode() < it->second.encode())) {
                it->second = p;
            }
        }
        return false;
    });
    return out;
}

std::vector<Vertex> sobfnb_targets(const LocallyColoredGraph& g, VertexColorPair from) {
    std::set<Vertex> reached;
    CuspFreeWalker walker(g, from.v);
    walker.run(from.color, [&](const Path& p) {
        reached.insert(p.verts.back());
        return false;
    });
    return std::vector<Vertex>(reached.begin(), reached.end());
}

OrderWitness order_lt(const LocallyColoredGraph& g, VertexColorPair a, VertexColorPair b) {
    OrderWitness out;
    if (a.v == b.v) return out;
    std::vector<char> avoid(g.vertex_count(), 0);
    for (Vertex x : sobfnb_targets(g, b)) avoid[x] = 1;
    if (avoid[a.v]) return out;  // any witness would contain a.v
    CuspFreeWalker walker(g, a.v);
    walker.avoid = &avoid;
    walker.run(a.color, [&](const Path& p) {
        if (p.verts.back() == b.v && *p.ending_color() == b.color) {
            out.holds = true;
            out.witness = p;
            return true;
        }
        return false;
    });
    return out;
}

std::vector<Path> min_cusp_cycles(const LocallyColoredGraph& g, Vertex v) {
    std::vector<Path> best;
    int best_cusps = -1;
    SimpleWalker walker(g, v);
    walker.run([&](const Path& cycle) {
        Edge first = cycle.edges.front(), last = cycle.edges.back();
        if (g.color_at(first, v) == g.color_at(last, v)) return false;  // cusp at v
        int c = cusp_count(cycle);
        if (best_cusps < 0 || c < best_cusps) {
            best_cusps = c;
            best.clear();
        }
        if (c == best_cusps) best.push_back(cycle);
        return false;
    });
    std::sort(best.begin(), best.end(),
              [](const Path& a, const Path& b) { return a.encode() < b.encode(); });
    return best;
}

bool is_splitting(const LocallyColoredGraph& g, Vertex v) {
    bool found = false;
    SimpleWalker walker(g, v);
    walker.run([&](const Path& cycle) {
        Edge first = cycle.edges.front(), last = cycle.edges.back();
        if (g.color_at(first, v) == g.color_at(last, v)) return false;
        found = true;
        return true;
    });
    return !found;
}

std::variant<CuspMinimizeResult, Violations> cusp_minimize(const LocallyColoredGraph& g,
                                                           const Path& omega, Vertex u,
                                                           Color alpha, const Path& q) {
    (void)g;
    Violations bad;
    if (!omega.is_cycle()) bad.push_back("omega-cycle");
    Vertex v = omega.verts.front();
    if (omega.is_cycle() && has_cusp_at(omega, v)) bad.push_back("omega-no-cusp-at-source");
    bool cusp_found = false;
    for (const Cusp& c : path_cusps(omega))
        if (c.vertex == u && c.color == alpha) cusp_found = true;
    if (!cusp_found) bad.push_back("omega-cusp-at-u");
    bool q_shape_ok = q.is_simple() && !q.empty_path() && !q.endpoints_equal();
    if (!q_shape_ok) bad.push_back("q-simple-open");
    if (cusp_count(q) != 0) bad.push_back("q-cusp-free");
    if (q.verts.front() != u) bad.push_back("q-from-u");
    if (q_shape_ok && q.verts.front() == u && *q.starting_color() == alpha)
        bad.push_back("q-starting-color");
    Vertex x = q.verts.back();
    if (!omega.contains_vertex(x)) bad.push_back("q-ends-on-omega");
    for (size_t i = 0; i + 1 < q.verts.size(); ++i) {
        Vertex w = q.verts[i];
        if (w != u && omega.contains_vertex(w)) {
            bad.push_back("q-meets-omega-only-at-ends");
            break;
        }
    }
    if (!bad.empty()) return bad;

    Path w = omega;
    int n = w.length();
    // Orient omega so that x occurs after u, and when x is the source itself,
    // so that q's ending color differs from omega's starting color.
    if (x == v) {
        if (*w.starting_color() == *q.ending_color()) w = reverse_path(w);
    } else if (position_of(w, x) < position_of(w, u)) {
        w = reverse_path(w);
    }
    int pos_u = position_of(w, u);
    int pos_x = x == v ? n : position_of(w, x);

    Path sigma = concat_paths(concat_paths(subpath(w, 0, pos_u), q), subpath(w, pos_x, n));
    Path rev = reverse_path(w);
    Path d = concat_paths(q, subpath(rev, n - pos_x, n - pos_u));

    if (sigma.is_cycle() && !has_cusp_at(sigma, v) && cusp_count(sigma) < cusp_count(w))
        return CuspMinimizeResult{CuspMinimizeResult::Branch::Smaller, sigma};
    if (!(d.is_cycle() && cusp_count(d) == 0))
        throw std::logic_error("cusp_minimize: neither branch applies");
    return CuspMinimizeResult{CuspMinimizeResult::Branch::CuspFree, d};
}

std::variant<CuspMinimizeResult, Violations> cusp_minimize2(
    const LocallyColoredGraph& g, const Path& omega, Vertex x, Vertex y, Vertex kappa,
    const Path& rho, const Path& chi, Edge e, const Path& p) {
    Violations bad;
    Vertex v = omega.verts.front();
    if (!omega.is_cycle() || has_cusp_at(omega, v)) bad.push_back("omega-cycle-no-cusp-at-source");
    int pos_x = position_of(omega, x);
    int pos_y = position_of(omega, y);
    if (pos_x <= 0 || pos_y <= 0 || pos_x >= omega.length() || pos_y >= omega.length() ||
        x == v || y == v || pos_x > pos_y) {
        bad.push_back("xy-on-omega");
        return bad;
    }
    bool cusp_between = false;
    for (const Cusp& c : path_cusps(omega)) {
        int pos_c = position_of(omega, c.vertex);
        if (pos_c >= pos_x && pos_c <= pos_y) cusp_between = true;
    }
    if (!cusp_between) bad.push_back("cusp-between-x-y");
    if (rho.verts.front() != x || rho.verts.back() != kappa) bad.push_back("rho-x-to-kappa");
    if (chi.verts.front() != y || chi.verts.back() != kappa) bad.push_back("chi-y-to-kappa");
    if (!g.incident(e, kappa) || !g.is_total(e)) {
        bad.push_back("e-endpoints");
        return bad;
    }
    Vertex l = *g.other_end(e, kappa);

    Path kel;
    kel.g = &g;
    kel.verts = {kappa, l};
    kel.edges = {e};

    Path rho_e = concat_paths(rho, kel);
    Path chi_e = concat_paths(chi, kel);
    Color end_vx = g.color_at(omega.edges[pos_x - 1], x);
    Color start_yv = g.color_at(omega.edges[pos_y], y);
    if (!(rho_e.is_simple() && cusp_count(rho_e) == 0 && *rho_e.starting_color() != end_vx))
        bad.push_back("rho-e-cusp-free");
    if (!(chi_e.is_simple() && cusp_count(chi_e) == 0 && *chi_e.starting_color() != start_yv))
        bad.push_back("chi-e-cusp-free");

    // closure = omega[y..v] . omega[v..x]
    Path closure =
        concat_paths(subpath(omega, pos_y, omega.length()), subpath(omega, 0, pos_x));
    for (const Path* side : {&rho, &chi}) {
        for (Vertex w : side->verts)
            if (w != x && w != y && closure.contains_vertex(w)) {
                bad.push_back("rho-chi-meet-closure-only-at-xy");
                break;
            }
    }

    if (p.verts.front() != l) bad.push_back("p-from-l");
    Path kelp = kel;
    if (p.verts.front() == l && !p.empty_path()) kelp = concat_paths(kel, p);
    if (!(kelp.is_simple() && !kelp.endpoints_equal() && cusp_count(kelp) == 0))
        bad.push_back("kel-p-cusp-free-simple-open");
    if (!closure.contains_vertex(kelp.verts.back())) bad.push_back("p-target-on-closure");
    for (Vertex w : p.verts)
        if (rho.contains_vertex(w)) {
            bad.push_back("rho-p-disjoint");
            break;
        }
    for (Vertex w : p.verts)
        if (chi.contains_vertex(w)) {
            bad.push_back("chi-p-disjoint");
            break;
        }
    if (!bad.empty()) return bad;

    // Trim p so it meets the closure only at its target.
    Path pt = p;
    if (closure.contains_vertex(l)) {
        pt.verts = {l};
        pt.edges.clear();
    } else {
        for (size_t i = 1; i < p.verts.size(); ++i)
            if (closure.contains_vertex(p.verts[i])) {
                pt = subpath(p, 0, static_cast<int>(i));
                break;
            }
    }

    // kappa0: first vertex of rho belonging to chi.
    int k0_pos = -1;
    for (size_t i = 0; i < rho.verts.size(); ++i)
        if (chi.contains_vertex(rho.verts[i])) {
            k0_pos = static_cast<int>(i);
            break;
        }
    assert(k0_pos >= 0);
    Vertex kappa0 = rho.verts[k0_pos];
    Path rho0 = subpath(rho, 0, k0_pos);
    Path chi0 = subpath(chi, 0, position_of(chi, kappa0));
    Path chi1 = subpath(chi, position_of(chi, kappa0), chi.length());

    Path omega2 =
        concat_paths(concat_paths(subpath(omega, 0, pos_x), rho0),
                     concat_paths(reverse_path(chi0), subpath(omega, pos_y, omega.length())));
    if (!omega2.is_cycle() || has_cusp_at(omega2, v))
        throw std::logic_error("cusp_minimize2: omega' is not a valid replacement cycle");

    if (cusp_count(omega2) < cusp_count(omega))
        return CuspMinimizeResult{CuspMinimizeResult::Branch::Smaller, omega2};

    // omega' keeps a cusp at kappa0; plain cusp minimization finishes the job.
    Color cusp_color = -1;
    for (const Cusp& c : path_cusps(omega2))
        if (c.vertex == kappa0) cusp_color = c.color;
    if (cusp_color < 0) throw std::logic_error("cusp_minimize2: expected a cusp at kappa0");

    Path q = kel;
    if (!pt.empty_path()) q = concat_paths(q, pt);
    if (!chi1.empty_path()) q = concat_paths(chi1, q);

    auto inner = cusp_minimize(g, omega2, kappa0, cusp_color, q);
    if (std::holds_alternative<Violations>(inner))
        throw std::logic_error("cusp_minimize2: inner cusp_minimize preconditions failed");
    auto res = std::get<CuspMinimizeResult>(inner);
    if (res.branch == CuspMinimizeResult::Branch::Smaller) {
        if (cusp_count(res.cycle) >= cusp_count(omega))
            throw std::logic_error("cusp_minimize2: smaller branch did not shrink");
        return res;
    }
    if (!res.cycle.contains_edge(e))
        throw std::logic_error("cusp_minimize2: cusp-free branch misses the exit edge");
    return res;
}

std::vector<VertexColorPair> all_pairs(const LocallyColoredGraph& g) {
    std::vector<VertexColorPair> out;
    for (Vertex v = 0; v < g.vertex_count(); ++v)
        for (Color c = 0; c < g.color_count(); ++c) out.push_back({v, c});
    return out;
}

namespace {

// Per-call memo for the reachable-set side of the order: order_lt(a, b)
// recomputes the targets of b for every query otherwise.
struct OrderOracle {
    const LocallyColoredGraph& g;
    std::map<VertexColorPair, std::vector<char>> avoid_of;
    std::vector<char> scratch;

    explicit OrderOracle(const LocallyColoredGraph& graph) : g(graph) {}

    const std::vector<char>& avoid(const VertexColorPair& b) {
        // caching only pays off once the reach computations stop being trivial
        if (g.vertex_count() < 6) {
            scratch.assign(g.vertex_count(), 0);
            for (Vertex x : sobfnb_targets(g, b)) scratch[x] = 1;
            return scratch;
        }
        auto it = avoid_of.find(b);
        if (it != avoid_of.end()) return it->second;
        std::vector<char> mask(g.vertex_count(), 0);
        for (Vertex x : sobfnb_targets(g, b)) mask[x] = 1;
        return avoid_of.emplace(b, std::move(mask)).first->second;
    }

    bool lt(const VertexColorPair& a, const VertexColorPair& b) {
        if (a.v == b.v) return false;
        const std::vector<char>& mask = avoid(b);
        if (mask[a.v]) return false;
        bool holds = false;
        CuspFreeWalker walker(g, a.v);
        walker.avoid = &mask;
        walker.run(a.color, [&](const Path& p) {
            if (p.verts.back() == b.v && *p.ending_color() == b.color) {
                holds = true;
                return true;
            }
            return false;
        });
        return holds;
    }
};

bool dominates_cusp_points(OrderOracle& ord, const std::vector<VertexColorPair>& pairs,
                           std::optional<VertexColorPair>& witness) {
    std::set<VertexColorPair> pset(pairs.begin(), pairs.end());
    for (const VertexColorPair& cp : cusp_points(ord.g)) {
        if (pset.count(cp)) continue;
        bool dominated = false;
        for (const VertexColorPair& q : pairs)
            if (ord.lt(cp, q)) {
                dominated = true;
                break;
            }
        if (!dominated) {
            witness = cp;
            return false;
        }
    }
    return true;
}

std::optional<VertexColorPair> lex_first_maximal(OrderOracle& ord,
                                                 const std::vector<VertexColorPair>& pairs) {
    std::vector<VertexColorPair> sorted = pairs;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (const VertexColorPair& p : sorted) {
        bool beaten = false;
        for (const VertexColorPair& q : sorted) {
            if (p == q) continue;
            if (ord.lt(p, q)) {
                beaten = true;
                break;
            }
        }
        if (!beaten) return p;
    }
    return std::nullopt;
}

}  // namespace

ParamSplit find_splitting_param(const LocallyColoredGraph& g,
                                const std::vector<VertexColorPair>& pairs) {
    ParamSplit out;
    if (auto cyc = find_cuspfree_cycle(g)) {
        out.status = ParamSplit::Status::CuspFreeCycleExists;
        out.witness_cycle = *cyc;
        return out;
    }
    if (pairs.empty()) {
        out.status = ParamSplit::Status::NoPairs;
        return out;
    }
    OrderOracle ord(g);
    std::optional<VertexColorPair> bad;
    if (!dominates_cusp_points(ord, pairs, bad)) {
        out.status = ParamSplit::Status::DominationFails;
        out.witness_point = bad;
        return out;
    }
    auto best = lex_first_maximal(ord, pairs);
    assert(best.has_value());
    out.status = ParamSplit::Status::Found;
    out.pair = *best;
    out.vertex = best->v;
    return out;
}

std::vector<CycleUnion> max_cuspfree_unions(const LocallyColoredGraph& g) {
    std::vector<Path> cycles = enumerate_cuspfree_cycles(g);
    int n = static_cast<int>(cycles.size());
    std::vector<int> group(n);
    for (int i = 0; i < n; ++i) group[i] = i;
    std::function<int(int)> find = [&](int a) {
        while (group[a] != a) a = group[a] = group[group[a]];
        return a;
    };
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            bool share = false;
            for (Vertex v : cycles[j].verts)
                if (cycles[i].contains_vertex(v)) {
                    share = true;
                    break;
                }
            if (share) group[find(i)] = find(j);
        }
    std::map<int, CycleUnion> unions;
    for (int i = 0; i < n; ++i) {
        CycleUnion& u = unions[find(i)];
        u.cycles.push_back(cycles[i]);
        for (Vertex v : cycles[i].verts)
            if (!u.sub.contains_vertex(v)) u.sub.verts.push_back(v);
        for (Edge e : cycles[i].edges)
            if (!u.sub.contains_edge(e)) u.sub.edges.push_back(e);
    }
    std::vector<CycleUnion> out;
    for (auto& [k, u] : unions) {
        std::sort(u.sub.verts.begin(), u.sub.verts.end());
        std::sort(u.sub.edges.begin(), u.sub.edges.end());
        out.push_back(std::move(u));
    }
    std::sort(out.begin(), out.end(), [](const CycleUnion& a, const CycleUnion& b) {
        return a.sub.verts < b.sub.verts;
    });
    return out;
}

bool is_arrow_connected(const LocallyColoredGraph& g, const SubGraph& s) {
    std::vector<char> avoid(g.vertex_count(), 1);
    std::vector<char> edge_ok(g.edge_count(), 0);
    for (Vertex v : s.verts) avoid[v] = 0;
    for (Edge e : s.edges) edge_ok[e] = 1;
    for (Vertex v : s.verts) {
        for (Vertex u : s.verts) {
            if (v == u) continue;
            for (Color alpha = 0; alpha < g.color_count(); ++alpha) {
                bool reached = false;
                CuspFreeWalker walker(g, v);
                walker.avoid = &avoid;
                walker.edge_ok = &edge_ok;
                walker.run(alpha, [&](const Path& p) {
                    if (p.verts.back() == u) {
                        reached = true;
                        return true;
                    }
                    return false;
                });
                if (!reached) return false;
            }
        }
    }
    return true;
}

MallGraphSplit find_splitting_mall_graph(const LocallyColoredGraph& g,
                                         const std::vector<ExitSpec>& exits,
                                         const std::vector<VertexColorPair>& pairs) {
    MallGraphSplit out;
    std::vector<CycleUnion> unions = max_cuspfree_unions(g);
    if (exits.size() != unions.size()) {
        out.status = MallGraphSplit::Status::BadExit;
        return out;
    }
    // Assign each exit to the union containing its inside endpoint.
    std::vector<int> exit_of(unions.size(), -1);
    for (size_t k = 0; k < exits.size(); ++k) {
        const ExitSpec& ex = exits[k];
        if (!g.incident(ex.e, ex.inside) || !g.incident(ex.e, ex.outside) ||
            ex.inside == ex.outside) {
            out.status = MallGraphSplit::Status::BadExit;
            return out;
        }
        bool placed = false;
        for (size_t i = 0; i < unions.size(); ++i) {
            if (unions[i].sub.contains_vertex(ex.inside)) {
                if (exit_of[i] != -1 || unions[i].sub.contains_vertex(ex.outside)) {
                    out.status = MallGraphSplit::Status::BadExit;
                    out.omega_index = static_cast<int>(i);
                    return out;
                }
                exit_of[i] = static_cast<int>(k);
                placed = true;
                break;
            }
        }
        if (!placed) {
            out.status = MallGraphSplit::Status::BadExit;
            return out;
        }
    }
    std::vector<VertexColorPair> p_out;
    for (size_t i = 0; i < unions.size(); ++i) {
        const ExitSpec& ex = exits[exit_of[i]];
        VertexColorPair inside_pair{ex.inside, g.color_at(ex.e, ex.inside)};
        VertexColorPair outside_pair{ex.outside, g.color_at(ex.e, ex.outside)};
        if (is_cusp_point(g, inside_pair)) {
            out.status = MallGraphSplit::Status::ExitH1Fails;
            out.omega_index = static_cast<int>(i);
            return out;
        }
        if (!is_cusp_point(g, outside_pair)) {
            out.status = MallGraphSplit::Status::ExitH2Fails;
            out.omega_index = static_cast<int>(i);
            return out;
        }
        p_out.push_back(inside_pair);
    }
    for (const VertexColorPair& p : pairs)
        for (const VertexColorPair& q : p_out)
            if (p == q) {
                out.status = MallGraphSplit::Status::POverlapsPout;
                out.pair = p;
                return out;
            }
    if (pairs.empty()) {
        out.status = MallGraphSplit::Status::NoPairs;
        return out;
    }
    OrderOracle ord(g);
    std::optional<VertexColorPair> bad;
    if (!dominates_cusp_points(ord, pairs, bad)) {
        out.status = MallGraphSplit::Status::DominationFails;
        out.witness_point = bad;
        return out;
    }
    auto best = lex_first_maximal(ord, pairs);
    assert(best.has_value());
    out.status = MallGraphSplit::Status::Found;
    out.pair = *best;
    out.vertex = best->v;
    return out;
}

}  // namespace proofweave

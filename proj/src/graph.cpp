#include "proofweave/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace proofweave {

namespace {

int find_sorted(const std::vector<std::string>& names, const std::string& s) {
    auto it = std::lower_bound(names.begin(), names.end(), s);
    if (it == names.end() || *it != s) return -1;
    return static_cast<int>(it - names.begin());
}

}  // namespace

LocallyColoredGraph LocallyColoredGraph::build(const GraphSpec& spec) {
    LocallyColoredGraph g;
    g.vertex_names_ = spec.vertices;
    g.color_names_ = spec.colors;
    std::sort(g.vertex_names_.begin(), g.vertex_names_.end());
    std::sort(g.color_names_.begin(), g.color_names_.end());
    if (std::adjacent_find(g.vertex_names_.begin(), g.vertex_names_.end()) != g.vertex_names_.end())
        throw BuildError("DuplicateId", "duplicate vertex id");
    if (std::adjacent_find(g.color_names_.begin(), g.color_names_.end()) != g.color_names_.end())
        throw BuildError("DuplicateId", "duplicate color id");

    std::vector<const GraphSpec::EdgeSpec*> order;
    order.reserve(spec.edges.size());
    for (const auto& e : spec.edges) order.push_back(&e);
    std::sort(order.begin(), order.end(),
              [](const auto* a, const auto* b) { return a->id < b->id; });
    for (size_t i = 1; i < order.size(); ++i)
        if (order[i]->id == order[i - 1]->id) throw BuildError("DuplicateId", "duplicate edge id " + order[i]->id);

    for (const auto* es : order) {
        if (es->ends.size() > 2) throw BuildError("LoopEdge", "edge " + es->id + " has more than two ends");
        std::vector<End> ends;
        for (const auto& end : es->ends) {
            int v = find_sorted(g.vertex_names_, end.vertex);
            if (v < 0) throw BuildError("UnknownVertex", "edge " + es->id + " references " + end.vertex);
            int c = find_sorted(g.color_names_, end.color);
            if (c < 0) throw BuildError("MissingColor", "edge " + es->id + " end " + end.vertex + " uses " + end.color);
            ends.push_back({v, c});
        }
        if (ends.size() == 2 && ends[0].v == ends[1].v)
            throw BuildError("LoopEdge", "edge " + es->id + " is a loop");
        std::sort(ends.begin(), ends.end(), [](const End& a, const End& b) { return a.v < b.v; });
        g.edge_names_.push_back(es->id);
        g.ends_.push_back(std::move(ends));
    }

    g.incident_.assign(g.vertex_names_.size(), {});
    for (Edge e = 0; e < g.edge_count(); ++e)
        for (const End& end : g.ends_[e]) g.incident_[end.v].push_back(e);
    return g;
}

std::optional<Vertex> LocallyColoredGraph::vertex_index(const std::string& name) const {
    int i = find_sorted(vertex_names_, name);
    if (i < 0) return std::nullopt;
    return i;
}

std::optional<Edge> LocallyColoredGraph::edge_index(const std::string& name) const {
    int i = find_sorted(edge_names_, name);
    if (i < 0) return std::nullopt;
    return i;
}

std::optional<Color> LocallyColoredGraph::color_index(const std::string& name) const {
    int i = find_sorted(color_names_, name);
    if (i < 0) return std::nullopt;
    return i;
}

bool LocallyColoredGraph::incident(Edge e, Vertex v) const {
    for (const End& end : ends_[e])
        if (end.v == v) return true;
    return false;
}

Color LocallyColoredGraph::color_at(Edge e, Vertex v) const {
    for (const End& end : ends_[e])
        if (end.v == v) return end.color;
    throw BuildError("UnknownVertex", "color_at on non-incident pair");
}

std::optional<Vertex> LocallyColoredGraph::other_end(Edge e, Vertex v) const {
    if (ends_[e].size() != 2) return std::nullopt;
    if (ends_[e][0].v == v) return ends_[e][1].v;
    if (ends_[e][1].v == v) return ends_[e][0].v;
    return std::nullopt;
}

GraphSpec LocallyColoredGraph::to_spec() const {
    GraphSpec spec;
    spec.vertices = vertex_names_;
    spec.colors = color_names_;
    for (Edge e = 0; e < edge_count(); ++e) {
        GraphSpec::EdgeSpec es;
        es.id = edge_names_[e];
        for (const End& end : ends_[e])
            es.ends.push_back({vertex_names_[end.v], color_names_[end.color]});
        spec.edges.push_back(std::move(es));
    }
    return spec;
}

bool Path::is_simple() const {
    std::set<Edge> es(edges.begin(), edges.end());
    if (es.size() != edges.size()) return false;
    std::set<Vertex> vs;
    for (size_t i = 0; i + 1 < verts.size(); ++i)
        if (!vs.insert(verts[i]).second) return false;
    // The target may only repeat the source.
    if (verts.size() >= 2 && vs.count(verts.back()) && verts.back() != verts.front()) return false;
    return true;
}

bool Path::is_cycle() const { return !empty_path() && endpoints_equal() && is_simple(); }

bool Path::contains_vertex(Vertex v) const {
    return std::find(verts.begin(), verts.end(), v) != verts.end();
}

bool Path::contains_edge(Edge e) const {
    return std::find(edges.begin(), edges.end(), e) != edges.end();
}

std::optional<Color> Path::starting_color() const {
    if (empty_path()) return std::nullopt;
    return g->color_at(edges.front(), verts.front());
}

std::optional<Color> Path::ending_color() const {
    if (empty_path()) return std::nullopt;
    return g->color_at(edges.back(), verts.back());
}

std::string Path::encode() const {
    std::string s = g->vertex_name(verts[0]);
    for (size_t i = 0; i < edges.size(); ++i) {
        s += ',';
        s += g->edge_name(edges[i]);
        s += ',';
        s += g->vertex_name(verts[i + 1]);
    }
    return s;
}

PathValidation path_validate(const LocallyColoredGraph& g,
                             const std::vector<std::string>& sequence) {
    PathValidation out;
    if (sequence.empty() || sequence.size() % 2 == 0) {
        out.error = "NotAlternating";
        return out;
    }
    Path p;
    p.g = &g;
    for (size_t i = 0; i < sequence.size(); ++i) {
        if (i % 2 == 0) {
            auto v = g.vertex_index(sequence[i]);
            if (!v) {
                out.error = "NotAlternating";
                return out;
            }
            p.verts.push_back(*v);
        } else {
            auto e = g.edge_index(sequence[i]);
            if (!e) {
                out.error = "NotAlternating";
                return out;
            }
            p.edges.push_back(*e);
        }
    }
    for (size_t i = 0; i < p.edges.size(); ++i) {
        Vertex a = p.verts[i], b = p.verts[i + 1];
        if (a == b || !g.incident(p.edges[i], a) || !g.incident(p.edges[i], b) ||
            !g.is_total(p.edges[i])) {
            out.error = "EndpointMismatch";
            return out;
        }
    }
    out.ok = true;
    out.path = p;
    out.simple = p.is_simple();
    out.closed = !p.empty_path() && p.endpoints_equal();
    out.open = !out.closed;
    out.cycle = p.is_cycle();
    return out;
}

std::vector<Cusp> path_cusps(const Path& p) {
    std::vector<Cusp> cusps;
    const LocallyColoredGraph& g = *p.g;
    for (size_t i = 0; i + 1 < p.edges.size(); ++i) {
        Edge e = p.edges[i], f = p.edges[i + 1];
        Vertex v = p.verts[i + 1];
        if (e != f && g.color_at(e, v) == g.color_at(f, v))
            cusps.push_back({e, v, f, g.color_at(e, v)});
    }
    if (!p.empty_path() && p.endpoints_equal()) {
        Edge e = p.edges.back(), f = p.edges.front();
        Vertex v = p.verts.front();
        if (e != f && g.color_at(e, v) == g.color_at(f, v))
            cusps.push_back({e, v, f, g.color_at(e, v)});
    }
    return cusps;
}

int cusp_count(const Path& p) { return static_cast<int>(path_cusps(p).size()); }

bool has_cusp_at(const Path& p, Vertex v) {
    for (const Cusp& c : path_cusps(p))
        if (c.vertex == v) return true;
    return false;
}

Path reverse_path(const Path& p) {
    Path r;
    r.g = p.g;
    r.verts.assign(p.verts.rbegin(), p.verts.rend());
    r.edges.assign(p.edges.rbegin(), p.edges.rend());
    return r;
}

Path concat_paths(const Path& p1, const Path& p2) {
    if (p1.target() != p2.source())
        throw BuildError("EndpointMismatch", "concat endpoints differ");
    Path r = p1;
    r.verts.insert(r.verts.end(), p2.verts.begin() + 1, p2.verts.end());
    r.edges.insert(r.edges.end(), p2.edges.begin(), p2.edges.end());
    return r;
}

Path subpath(const Path& p, int from_pos, int to_pos) {
    if (from_pos > to_pos || from_pos < 0 || to_pos >= static_cast<int>(p.verts.size()))
        throw BuildError("OccurrenceOrder", "subpath occurrence positions out of order");
    Path r;
    r.g = p.g;
    r.verts.assign(p.verts.begin() + from_pos, p.verts.begin() + to_pos + 1);
    r.edges.assign(p.edges.begin() + from_pos, p.edges.begin() + to_pos);
    return r;
}

ConcatReport concat_checked(const Path& p1, const Path& p2) {
    ConcatReport rep;
    rep.result = concat_paths(p1, p2);
    rep.result_simple = rep.result.is_simple();

    auto common_vertices = [&]() {
        std::set<Vertex> s1(p1.verts.begin(), p1.verts.end());
        std::set<Vertex> common;
        for (Vertex v : p2.verts)
            if (s1.count(v)) common.insert(v);
        return common;
    };

    // Simple open paths whose shared vertices are target(p1)=source(p2) and
    // possibly target(p2)=source(p1), with distinct glue edges.
    if (p1.is_simple() && p2.is_simple() && !p1.empty_path() && !p2.empty_path() &&
        !p1.endpoints_equal() && !p2.endpoints_equal()) {
        auto common = common_vertices();
        std::set<Vertex> allowed{p1.target()};
        if (p2.target() == p1.source()) allowed.insert(p1.source());
        bool only_allowed = true;
        for (Vertex v : common)
            if (!allowed.count(v)) only_allowed = false;
        if (only_allowed && p1.edges.back() != p2.edges.front())
            rep.lemma_simple_paths = true;
    }

    // Simple open-or-empty paths meeting exactly at the glue vertex.
    bool p1ok = p1.is_simple() && (p1.empty_path() || !p1.endpoints_equal());
    bool p2ok = p2.is_simple() && (p2.empty_path() || !p2.endpoints_equal());
    if (p1ok && p2ok) {
        auto common = common_vertices();
        if (common.size() == 1 && common.count(p1.target()))
            rep.lemma_disjoint_simple_paths = true;
    }
    return rep;
}

namespace {

struct UnionFind {
    std::vector<int> parent;
    explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

std::vector<Component> connected_components(const LocallyColoredGraph& g) {
    int nv = g.vertex_count(), ne = g.edge_count();
    UnionFind uf(nv + ne);
    for (Edge e = 0; e < ne; ++e)
        for (const auto& end : g.ends(e)) uf.unite(nv + e, end.v);

    std::map<int, Component> comps;
    for (Vertex v = 0; v < nv; ++v) comps[uf.find(v)].verts.push_back(v);
    for (Edge e = 0; e < ne; ++e) comps[uf.find(nv + e)].edges.push_back(e);

    std::vector<Component> out;
    for (auto& [root, c] : comps) out.push_back(std::move(c));
    std::sort(out.begin(), out.end(), [](const Component& a, const Component& b) {
        int av = a.verts.empty() ? -1 : a.verts.front();
        int bv = b.verts.empty() ? -1 : b.verts.front();
        if (av != bv) return av < bv;
        int ae = a.edges.empty() ? -1 : a.edges.front();
        int be = b.edges.empty() ? -1 : b.edges.front();
        return ae < be;
    });
    return out;
}

bool SubGraph::contains_vertex(Vertex v) const {
    return std::find(verts.begin(), verts.end(), v) != verts.end();
}

bool SubGraph::contains_edge(Edge e) const {
    return std::find(edges.begin(), edges.end(), e) != edges.end();
}

}  // namespace proofweave

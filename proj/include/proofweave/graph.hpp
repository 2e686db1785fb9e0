#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace proofweave {

// Indices into the owning graph's sorted name tables.
using Vertex = int;
using Edge = int;
using Color = int;

struct BuildError : std::runtime_error {
    std::string code;
    BuildError(std::string c, const std::string& msg)
        : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

// Input description of a locally colored partial multigraph.
struct GraphSpec {
    struct End {
        std::string vertex;
        std::string color;
    };
    struct EdgeSpec {
        std::string id;
        std::vector<End> ends;  // 0, 1 or 2 entries
    };
    std::vector<std::string> vertices;
    std::vector<std::string> colors;
    std::vector<EdgeSpec> edges;
};

// Finite undirected partial multigraph with a color per (edge, endpoint) pair.
// Vertices, edges and colors are interned; indices follow the sorted name order,
// which makes every iteration in the library deterministic.
class LocallyColoredGraph {
public:
    struct End {
        Vertex v;
        Color color;
    };

    static LocallyColoredGraph build(const GraphSpec& spec);

    int vertex_count() const { return static_cast<int>(vertex_names_.size()); }
    int edge_count() const { return static_cast<int>(edge_names_.size()); }
    int color_count() const { return static_cast<int>(color_names_.size()); }

    const std::string& vertex_name(Vertex v) const { return vertex_names_[v]; }
    const std::string& edge_name(Edge e) const { return edge_names_[e]; }
    const std::string& color_name(Color c) const { return color_names_[c]; }

    std::optional<Vertex> vertex_index(const std::string& name) const;
    std::optional<Edge> edge_index(const std::string& name) const;
    std::optional<Color> color_index(const std::string& name) const;

    const std::vector<End>& ends(Edge e) const { return ends_[e]; }
    bool is_total(Edge e) const { return ends_[e].size() == 2; }
    bool incident(Edge e, Vertex v) const;

    // Defined exactly on incident (edge, vertex) pairs.
    Color color_at(Edge e, Vertex v) const;
    // Endpoint distinct from v, when the edge is total.
    std::optional<Vertex> other_end(Edge e, Vertex v) const;

    const std::vector<Edge>& edges_at(Vertex v) const { return incident_[v]; }

    GraphSpec to_spec() const;

private:
    std::vector<std::string> vertex_names_;
    std::vector<std::string> edge_names_;
    std::vector<std::string> color_names_;
    std::vector<std::vector<End>> ends_;
    std::vector<std::vector<Edge>> incident_;
};

// Alternating vertex/edge sequence (v0, e1, v1, ..., en, vn), n >= 0.
struct Path {
    const LocallyColoredGraph* g = nullptr;
    std::vector<Vertex> verts;  // size n+1
    std::vector<Edge> edges;    // size n

    bool empty_path() const { return edges.empty(); }
    int length() const { return static_cast<int>(edges.size()); }
    Vertex source() const { return verts.front(); }
    Vertex target() const { return verts.back(); }
    bool endpoints_equal() const { return verts.front() == verts.back(); }
    bool is_simple() const;
    // Non-empty simple closed path.
    bool is_cycle() const;
    bool contains_vertex(Vertex v) const;
    bool contains_edge(Edge e) const;

    std::optional<Color> starting_color() const;
    std::optional<Color> ending_color() const;

    std::string encode() const;  // "v0,e1,v1,..." by names, for deterministic ordering
};

struct Cusp {
    Edge left;
    Vertex vertex;
    Edge right;
    Color color;
};

struct VertexColorPair {
    Vertex v;
    Color color;
    friend bool operator==(const VertexColorPair& a, const VertexColorPair& b) {
        return a.v == b.v && a.color == b.color;
    }
    friend bool operator<(const VertexColorPair& a, const VertexColorPair& b) {
        return a.v != b.v ? a.v < b.v : a.color < b.color;
    }
};

struct PathValidation {
    bool ok = false;
    std::string error;  // NotAlternating | EndpointMismatch when !ok
    Path path;
    bool simple = false;
    bool open = false;
    bool closed = false;
    bool cycle = false;
};

// Checks a raw alternating name sequence against the graph.
PathValidation path_validate(const LocallyColoredGraph& g,
                             const std::vector<std::string>& sequence);

// All cusps of the path, wrap-around pair included for closed paths.
std::vector<Cusp> path_cusps(const Path& p);
int cusp_count(const Path& p);
bool has_cusp_at(const Path& p, Vertex v);

Path reverse_path(const Path& p);
// Requires target(p1) == source(p2); throws BuildError("EndpointMismatch").
Path concat_paths(const Path& p1, const Path& p2);
// Sub-path between vertex occurrence positions (0-based positions into verts).
// Throws BuildError("OccurrenceOrder") when from > to.
Path subpath(const Path& p, int from_pos, int to_pos);

struct ConcatReport {
    bool lemma_simple_paths = false;           // hypotheses of the simple-concat lemma
    bool lemma_disjoint_simple_paths = false;  // hypotheses of the disjoint variant
    bool result_simple = false;
    Path result;
};
// Concatenates and reports which concatenation lemma hypotheses held.
ConcatReport concat_checked(const Path& p1, const Path& p2);

struct Component {
    std::vector<Vertex> verts;
    std::vector<Edge> edges;
};

// Partition of vertices and edges into connected components; an edge with no
// endpoint forms a component on its own.
std::vector<Component> connected_components(const LocallyColoredGraph& g);

// Sub-graph of a locally colored graph, as vertex and edge index sets.
struct SubGraph {
    std::vector<Vertex> verts;
    std::vector<Edge> edges;
    bool contains_vertex(Vertex v) const;
    bool contains_edge(Edge e) const;
};

}  // namespace proofweave

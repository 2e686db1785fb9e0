#pragma once

#include <map>
#include <optional>
#include <variant>

#include "proofweave/graph.hpp"
#include "proofweave/yeo.hpp"

namespace proofweave {

// Directed view over a total graph: per-edge source/target, distinct.
struct DirectedGraphView {
    LocallyColoredGraph graph;
    std::vector<Vertex> src, tgt;  // per edge
};

// Pattern graph for H-colorings: vertices are color ids, simple edges.
struct PatternGraph {
    std::vector<std::string> colors;
    std::vector<std::pair<std::string, std::string>> edges;
};

struct CorollaryError : std::runtime_error {
    std::string code;
    std::optional<Path> witness;
    CorollaryError(std::string c, const std::string& msg, std::optional<Path> w = std::nullopt)
        : std::runtime_error(c + ": " + msg), code(std::move(c)), witness(std::move(w)) {}
};

struct Encoding {
    LocallyColoredGraph graph;          // edge-colored (constant per edge)
    std::vector<std::string> added;     // names of subdividing vertices
    std::map<std::string, std::string> vertex_origin;  // encoded vertex -> original
};
// The edge-coloring encoding of a local coloring: equal ends copy the edge,
// unequal ends on a cycle get a subdividing vertex, bridges take one end's
// color.
Encoding encode_local_as_edge(const LocallyColoredGraph& g);

// An edge-coloring given as edge -> color name; lifted internally.
using EdgeColoring = std::map<std::string, std::string>;
LocallyColoredGraph lift_edge_coloring(const LocallyColoredGraph& g, const EdgeColoring& ec);

Vertex yeo_classic(const LocallyColoredGraph& g, const EdgeColoring& ec);

// matching edges given by name
Edge kotzig(const LocallyColoredGraph& g, const std::vector<std::string>& matching);

// phi: vertex name -> incident edge name
Vertex seymour_giles(const LocallyColoredGraph& g,
                     const std::map<std::string, std::string>& phi);

std::variant<Vertex, Path> grossman_haggkvist(const LocallyColoredGraph& g,
                                              const EdgeColoring& ec);

Vertex shoesmith_smiley(const DirectedGraphView& g, const std::vector<std::string>& s_set);

Vertex h_yeo(const LocallyColoredGraph& g, const EdgeColoring& ec, const PatternGraph& h);

// Definition-level revalidations used by the tests and the CLI reports.
bool is_bridge(const LocallyColoredGraph& g, Edge e);
bool yeo_conclusion_holds(const LocallyColoredGraph& g, const EdgeColoring& ec, Vertex v);
bool turning_in_every_cycle(const DirectedGraphView& g, Vertex v);

}  // namespace proofweave

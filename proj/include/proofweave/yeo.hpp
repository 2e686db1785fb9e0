#pragma once

#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "proofweave/graph.hpp"

namespace proofweave {

// All (v, alpha) realized by a cusp of two incident edges, sorted.
std::vector<VertexColorPair> cusp_points(const LocallyColoredGraph& g);
bool is_cusp_point(const LocallyColoredGraph& g, VertexColorPair p);

// Some cusp-free cycle of g, if any.
std::optional<Path> find_cuspfree_cycle(const LocallyColoredGraph& g);

// All cusp-free cycles, one representative per rotation/reflection class.
std::vector<Path> enumerate_cuspfree_cycles(const LocallyColoredGraph& g);

// Some cusp-free cycle containing v, if any.
std::optional<Path> find_cuspfree_cycle_through(const LocallyColoredGraph& g, Vertex v);

// Some cusp-free cycle containing edge e using only the given sub-graph.
std::optional<Path> find_cuspfree_cycle_through_edge(const LocallyColoredGraph& g, Edge e,
                                                     const SubGraph* within);

// Colors beta with (from) ~> (to, beta), each with one witness path.
std::map<Color, Path> cuspfree_reach(const LocallyColoredGraph& g, VertexColorPair from,
                                     Vertex to);

// Vertices occurring on some simple open cusp-free path from `from.v` whose
// starting color is not `from.color` (the targets of the relation ~>).
std::vector<Vertex> sobfnb_targets(const LocallyColoredGraph& g, VertexColorPair from);

struct OrderWitness {
    bool holds = false;
    std::optional<Path> witness;
};
// The no-return strengthening of ~>: a strict partial order on vertex-color pairs.
OrderWitness order_lt(const LocallyColoredGraph& g, VertexColorPair a, VertexColorPair b);

// Cycles with source v, no cusp at v, of minimal cusp count (both orientations).
std::vector<Path> min_cusp_cycles(const LocallyColoredGraph& g, Vertex v);

// Every cycle through v has a cusp at v.
bool is_splitting(const LocallyColoredGraph& g, Vertex v);

struct CuspMinimizeResult {
    enum class Branch { CuspFree, Smaller };
    Branch branch;
    Path cycle;
};
using Violations = std::vector<std::string>;

// Cusp minimization: either a cusp-free cycle containing q, or a cycle from
// omega's source with no cusp there and strictly fewer cusps.
std::variant<CuspMinimizeResult, Violations> cusp_minimize(const LocallyColoredGraph& g,
                                                           const Path& omega, Vertex u,
                                                           Color alpha, const Path& q);

// The two-anchor generalization used by the MALL splitting theorem.
std::variant<CuspMinimizeResult, Violations> cusp_minimize2(
    const LocallyColoredGraph& g, const Path& omega, Vertex x, Vertex y, Vertex kappa,
    const Path& rho, const Path& chi, Edge e, const Path& p);

struct ParamSplit {
    enum class Status { Found, CuspFreeCycleExists, DominationFails, NoPairs };
    Status status;
    Vertex vertex = -1;
    VertexColorPair pair{-1, -1};
    std::optional<Path> witness_cycle;
    std::optional<VertexColorPair> witness_point;
};

// Parametrized local Yeo: vertex of a maximal element of P, P dominating
// cusp-points, in a graph without cusp-free cycle.
ParamSplit find_splitting_param(const LocallyColoredGraph& g,
                                const std::vector<VertexColorPair>& pairs);

// Convenience: every (vertex, color) pair of the graph.
std::vector<VertexColorPair> all_pairs(const LocallyColoredGraph& g);

struct CycleUnion {
    SubGraph sub;
    std::vector<Path> cycles;  // the cusp-free cycles merged into this union
};

// Maximal connected unions of cusp-free cycles.
std::vector<CycleUnion> max_cuspfree_unions(const LocallyColoredGraph& g);

// For all v != u in S and every color alpha of g, some path inside S gives
// (v, alpha) ~> (u, beta).
bool is_arrow_connected(const LocallyColoredGraph& g, const SubGraph& s);

struct ExitSpec {
    Edge e;
    Vertex inside;
    Vertex outside;
};

struct MallGraphSplit {
    enum class Status {
        Found,
        BadExit,
        ExitH1Fails,
        ExitH2Fails,
        POverlapsPout,
        DominationFails,
        NoPairs
    };
    Status status;
    int omega_index = -1;
    Vertex vertex = -1;
    VertexColorPair pair{-1, -1};
    std::optional<VertexColorPair> witness_point;
};

// Yeo with exit functions: tolerates cusp-free cycles provided each maximal
// connected union has an exit edge satisfying H1/H2, and P avoids P_out.
MallGraphSplit find_splitting_mall_graph(const LocallyColoredGraph& g,
                                         const std::vector<ExitSpec>& exits,
                                         const std::vector<VertexColorPair>& pairs);

}  // namespace proofweave

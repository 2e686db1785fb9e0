#pragma once

#include <map>
#include <optional>
#include <set>
#include <variant>

#include "proofweave/formula.hpp"
#include "proofweave/graph.hpp"
#include "proofweave/mll.hpp"
#include "proofweave/yeo.hpp"

namespace proofweave {

struct MallError : std::runtime_error {
    std::string code;
    MallError(std::string c, const std::string& msg)
        : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

// A sequent with shared open hypotheses. Hypotheses are sub-formula
// occurrences of the conclusions, identified by the root location of the
// occurrence; their sub-trees are pruned from the syntactic forest but their
// partial edges remain.
struct MallSequent {
    std::vector<Formula> concs;
    std::vector<int> hyp_locs;
};

struct AxLink {
    int a, b;  // leaf locations, a < b
    friend bool operator<(const AxLink& x, const AxLink& y) {
        return x.a != y.a ? x.a < y.a : x.b < y.b;
    }
    friend bool operator==(const AxLink& x, const AxLink& y) { return x.a == y.a && x.b == y.b; }
};
using Linking = std::vector<AxLink>;  // kept sorted

struct MallNet {
    MallSequent seq;
    std::vector<Linking> linkings;  // kept sorted, duplicates removed
};

void canonicalize(MallNet& net);
bool same_net(const MallNet& a, const MallNet& b);

// Syntactic forest of a sequent with hypotheses.
struct Forest {
    struct Node {
        FKind kind;
        std::string atom;  // leaves
        int loc = -1;
        int parent = -1;       // node index, -1 for roots
        int child_l = -1;      // node index, -1 when leaf or pruned side
        int child_r = -1;
        int hyp_l = -1;        // index into hyps when the left arg is a hypothesis
        int hyp_r = -1;
        std::string path;      // "0.L.R"
        int root_index = -1;   // index into seq.concs
    };
    struct HypEdge {
        int parent = -1;  // node index, -1 when the hypothesis is a whole conclusion
        int loc = -1;     // location of the hypothesis occurrence
        std::string path;
        int root_index = -1;
    };
    std::vector<Node> nodes;
    std::vector<HypEdge> hyps;
    std::vector<int> roots;  // node index per conclusion, -1 when the root is a hypothesis
    std::map<int, int> node_by_loc;
    std::map<std::string, int> node_by_path;

    bool is_additive(int n) const {
        return nodes[n].kind == FKind::With || nodes[n].kind == FKind::Plus;
    }
    bool is_leaf(int n) const {
        return nodes[n].kind == FKind::Atom || nodes[n].kind == FKind::NegAtom;
    }
    std::optional<int> leaf_by_path(const std::string& p) const;
};

Forest build_forest(const MallSequent& seq);

struct Resolution {
    std::vector<char> kept;             // per forest node
    std::vector<int> leaves;            // kept leaf nodes, sorted
    std::map<int, int> additive_choice; // kept additive node -> 0 (left) / 1 (right)
};

// Additive resolutions delete one argument of every additive vertex without
// deleting a hypothesis edge; with-resolutions only resolve with-vertices.
std::vector<Resolution> enumerate_resolutions(const Forest& f, bool with_only);

// Net validation: links pair dual leaves and each linking partitions the
// leaves of exactly one additive resolution.
struct CheckedNet {
    Forest forest;
    std::vector<Resolution> additive;          // all additive resolutions
    std::vector<Resolution> withres;           // all with-resolutions
    std::vector<int> res_of_linking;           // index into additive, per linking
    MallNet net;
};
CheckedNet check_linkings(const MallNet& net);

struct Toggling {
    std::vector<int> toggled;                        // with-node indices
    std::vector<std::pair<AxLink, int>> dependencies;  // (link, with-node)
};
Toggling toggling_analysis(const CheckedNet& cn, const std::vector<int>& linking_subset);

// The directed partial graph of a set of linkings, with its MALL well-coloring.
struct LinkingGraph {
    LocallyColoredGraph colored;
    std::vector<int> kept_nodes;                    // forest nodes present
    std::vector<AxLink> ax_links;                   // one ax-vertex per link
    std::vector<std::pair<int, int>> jump_edges;    // (ax index, with-node)
    // name helpers
    std::string node_vertex_name(const Forest& f, int node) const;
    std::string ax_vertex_name(const Forest& f, const AxLink& l) const;
};
LinkingGraph build_linking_graph(const CheckedNet& cn, const std::vector<int>& linking_subset);

struct CriterionReport {
    bool p1 = false, p2 = false, p3 = false;
    bool p2c = false;  // set when the connected variant is requested
    bool connected_checked = false;
    std::string p1_witness;  // textual description of the failing resolution
    std::string p2_witness;
    std::string p3_witness;
    std::string p2c_witness;
    bool all() const { return p1 && p2 && p3 && (!connected_checked || p2c); }
    bool standard() const { return p1 && p2 && p3; }
};
CriterionReport check_criterion(const MallNet& net, bool connected_variant);

// The well-colored linking graph of the whole net, with a self-check of the
// coloring clauses (pairwise distinct at non-pw vertices, shared in-color and
// distinct conclusion at pw-vertices).
struct MallColoring {
    LinkingGraph graph;
    bool clauses_ok = false;
    std::vector<VertexColorPair> cusp_pts;
};
MallColoring well_color_mall(const MallNet& net);

struct ExitJump {
    AxLink link;      // the ax-vertex the jump leaves from
    int with_node;    // forest node of the target with-vertex
    std::string ax_name, with_name;
};
// Exit jump out of a union of switching cycles of G_theta (Omega given as a
// sub-graph of the colored linking graph of the full net).
std::variant<ExitJump, Violations> find_exit_jump(const CheckedNet& cn, const SubGraph& omega,
                                                  const LinkingGraph& full);

enum class MallStrategy { Any, Pw, Terminal, NonAx };
std::optional<MallStrategy> mall_strategy_from(const std::string& s);

struct MallSplit {
    bool ok = false;
    std::string error;  // NotCorrect | Empty
    // the splitting vertex: either a forest node or an ax-vertex
    bool is_ax = false;
    int node = -1;
    AxLink ax{-1, -1};
    std::string vertex_name;
};
MallSplit find_splitting_mallnet(const MallNet& net, MallStrategy strategy);

struct MallSplitParts {
    enum class Kind { Sub, TerminalTensor, TerminalPar, TerminalWith, TerminalPlus, Ax };
    Kind kind;
    std::vector<MallNet> nets;  // per kind: see split_at
    int plus_side = -1;         // TerminalPlus
    AxLink ax{-1, -1};          // Ax
    Formula ax_neg, ax_pos;
};
// Decomposes the net at a splitting vertex; every output re-passes P1-P3.
MallSplitParts split_at(const MallNet& net, const MallSplit& vertex, bool recheck = true);

Deriv sequentialize_mall(const MallNet& net, MallStrategy strategy);

// Fig-20-style translation of a MALL derivation to a net; validates the
// hypothesis slice constraint.
MallNet desequentialize_mall(const Deriv& d);

// Slice constraint alone (every slice carries every hypothesis occurrence).
bool hyp_slice_constraint_holds(const Deriv& d);

}  // namespace proofweave

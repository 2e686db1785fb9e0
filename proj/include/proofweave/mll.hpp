#pragma once

#include <map>
#include <memory>
#include <optional>
#include <variant>

#include "proofweave/formula.hpp"
#include "proofweave/graph.hpp"
#include "proofweave/yeo.hpp"

namespace proofweave {

enum class VKind { Ax, Cut, Tensor, Par };

std::string vkind_name(VKind k);
std::optional<VKind> vkind_from(const std::string& s);

struct PsError : std::runtime_error {
    std::string code;
    PsError(std::string c, const std::string& msg)
        : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

// Pre-validation description (mirrors the JSON net format).
struct RawPs {
    struct V {
        std::string id;
        std::string kind;
    };
    struct E {
        std::string id;
        std::string src, tgt;  // empty = undefined
        std::string type;      // empty allowed when untyped
    };
    std::vector<V> vertices;
    std::vector<E> edges;
    bool untyped = false;
};

// Directed acyclic partial graph with rule-labeled vertices and formula-typed
// edges; vertices/edges are kept sorted by id.
struct ProofStructure {
    std::vector<VKind> kinds;
    std::vector<std::string> vnames;
    std::vector<std::string> enames;
    std::vector<int> esrc, etgt;  // -1 = undefined
    std::vector<Formula> etypes;  // null entries when untyped
    bool untyped = false;

    int vcount() const { return static_cast<int>(kinds.size()); }
    int ecount() const { return static_cast<int>(enames.size()); }
    bool empty() const { return kinds.empty() && enames.empty(); }
    std::vector<int> premises(int v) const;     // edges with target v
    std::vector<int> conclusions(int v) const;  // edges with source v
    std::vector<int> ps_premises() const;       // edges without source
    std::vector<int> ps_conclusions() const;    // edges without target
    bool is_terminal(int v) const;
    bool is_closed() const { return ps_premises().empty(); }
};

ProofStructure validate_ps(const RawPs& raw);

struct WellColoring {
    LocallyColoredGraph graph;  // same vertex/edge names; palette solid/dotted/dashed
    std::vector<VertexColorPair> cusp_pts;
    bool clauses_ok = false;
};
// Three-color scheme (solid/dotted on initial pairs, dashed on conclusions,
// solid on par premises); vertex/edge indices agree with the structure.
WellColoring well_color(const ProofStructure& ps);

struct DrReport {
    bool correct = false;
    std::optional<Path> switching_cycle;  // in the well-colored graph
    int degree = 0;                       // defined when correct
};
DrReport dr_check(const ProofStructure& ps);

// ---------------------------------------------------------------------------
// Derivations (shared between the MLL and MALL systems)

enum class Rule { Ax, Cut, Tensor, Par, Mix2, Mix0, Hyp, With, Plus1, Plus2 };

std::string rule_name(Rule r);

struct DerivError : std::runtime_error {
    std::string code;
    DerivError(std::string c, const std::string& msg)
        : std::runtime_error(c + ": " + msg), code(std::move(c)) {}
};

struct Derivation;
using Deriv = std::shared_ptr<const Derivation>;

struct Derivation {
    Rule rule;
    std::vector<Deriv> subs;
    std::vector<Formula> conclusion;  // canonical order: principal first
    std::vector<Formula> hypotheses;  // hyp-rule formulas (shared ones deduped)
    Formula pa, pb;                   // principal formulas taken from the subs
    Formula principal;                // formula introduced by the rule itself
};

Deriv d_ax(const Formula& pos, LocGen& gen);                 // conclusion [pos^, pos]
Deriv d_ax_pair(const Formula& neg, const Formula& pos);
Deriv d_hyp(const Formula& a);
Deriv d_mix0();
Deriv d_mix2(const Deriv& a, const Deriv& b);
Deriv d_tensor(const Deriv& a, const Formula& fa, const Deriv& b, const Formula& fb, int loc);
Deriv d_par(const Deriv& a, const Formula& fa, const Formula& fb, int loc);
Deriv d_cut(const Deriv& a, const Formula& fa, const Deriv& b, const Formula& fb);
Deriv d_with(const Deriv& a, const Formula& fa, const Deriv& b, const Formula& fb, int loc);
Deriv d_plus1(const Deriv& a, const Formula& fa, const Formula& other, int loc);
Deriv d_plus2(const Deriv& a, const Formula& fb, const Formula& other, int loc);

int count_rule(const Deriv& d, Rule r);
bool derivation_is_mll(const Deriv& d);
int max_location(const Deriv& d);

// Replaces every (hyp) leaf on `hyp` in host by provider.
Deriv substitute(const Deriv& provider, const Formula& hyp, const Deriv& host);
Deriv mixretore_normalize(const Deriv& d);

struct DeseqResult {
    ProofStructure ps;
    // vertex index -> preorder index of the rule it came from
    std::vector<int> vertex_rule;
};
DeseqResult desequentialize(const Deriv& d);

// The order on par-vertices induced by cusp-free par-paths.
bool order_parr(const ProofStructure& ps, int v, int u);

enum class MllStrategy { AllPairs, Sections, Terminal, NonAx, DirectPar };
std::optional<MllStrategy> mll_strategy_from(const std::string& s);

struct SplitPs {
    bool ok = false;
    std::string error;  // NotCorrect | Empty
    int vertex = -1;
};
SplitPs find_splitting_ps(const ProofStructure& ps, MllStrategy strategy);

Deriv sequentialize(const ProofStructure& ps, MllStrategy strategy);

// Isomorphism of labeled directed partial graphs; vertex kinds and untagged
// edge types must match, locations are ignored.
bool iso_check(const ProofStructure& a, const ProofStructure& b);

// Either the connected components (every par has a proper cycle) or a witness
// par-vertex lacking one.
std::variant<std::vector<ProofStructure>, int> almost_connected_decompose(
    const ProofStructure& ps);

// Definition-level connectedness probe, independent of the degree computation.
bool cf_connected(const ProofStructure& ps);

struct SubStructure {
    std::vector<int> verts;
    std::vector<int> edges;
};
// Smallest connected DR-correct sub-structure with v terminal.
SubStructure kingdom(const ProofStructure& ps, int v);

std::vector<ProofStructure> ps_components(const ProofStructure& ps);
ProofStructure ps_restrict(const ProofStructure& ps, const std::vector<int>& verts,
                           const std::vector<int>& edges);

}  // namespace proofweave

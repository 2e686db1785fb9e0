#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace proofweave {

enum class FKind { Atom, NegAtom, Tensor, Par, With, Plus };

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

// Immutable localized formula tree. Every node carries a location tag; a
// formula never uses the same location twice.
struct FormulaNode {
    FKind kind;
    std::string atom;  // Atom / NegAtom only
    int loc = -1;
    Formula left, right;
};

struct FormulaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Monotonic location source.
struct LocGen {
    int next = 0;
    int fresh() { return next++; }
};

Formula mk_atom(const std::string& name, int loc);
Formula mk_natom(const std::string& name, int loc);
Formula mk_bin(FKind kind, Formula l, Formula r, int loc);

bool is_atomic(const Formula& f);
bool is_mll(const Formula& f);

// De Morgan dual with fresh locations.
Formula dual(const Formula& f, LocGen& gen);

bool untagged_equal(const Formula& a, const Formula& b);
bool untagged_dual(const Formula& a, const Formula& b);
bool localized_equal(const Formula& a, const Formula& b);

void collect_locations(const Formula& f, std::vector<int>& out);
std::vector<int> locations(const Formula& f);
// Fresh copy of the whole tree with new locations.
Formula relabel(const Formula& f, LocGen& gen);

// ASCII syntax: atoms [A-Za-z][A-Za-z0-9]*, dual ^, tensor *, par @, with &,
// plus +; binary connectives need explicit parentheses when nested.
std::string print_formula(const Formula& f);
Formula parse_formula(const std::string& text, LocGen& gen);
std::vector<Formula> parse_sequent(const std::string& text, LocGen& gen);

}  // namespace proofweave

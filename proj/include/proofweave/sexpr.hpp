#pragma once

#include <string>

#include "proofweave/mll.hpp"

namespace proofweave {

// Canonical S-expression form: (ax F) (hyp F) (mix0) (mix2 d d)
// (cut [i j] d d) (tensor [i j] d d) (par [i j] d) (with [i j] d d)
// (plus1 [i] F d) (plus2 [i] F d). Index arguments select the principal
// formulas inside the sub-derivations' conclusions and are omitted when zero.
// Compound formulas are written as quoted strings.
std::string render_derivation_sexpr(const Deriv& d);

// Indented rule tree with sequents, for human consumption.
std::string render_derivation_text(const Deriv& d);

Deriv parse_derivation_sexpr(const std::string& text, LocGen& gen);

std::string sequent_to_string(const std::vector<Formula>& fs);

}  // namespace proofweave

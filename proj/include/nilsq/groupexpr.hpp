#pragma once

#include <string>

#include "nilsq/group.hpp"

namespace nilsq {

// Parse a finitely generated abelian group expression:
//   expr := term ('+' term)*
//   term := '0' | 'Z' ['^' uint] | 'Z/' uint
// with arbitrary whitespace between tokens. Cyclic orders must be >= 2 and
// exponents >= 1; orders may exceed machine range (decimal big integers).
// Throws std::invalid_argument with the offending position on bad input.
// Accepts everything CanonicalGroup::to_string produces, so the two functions
// round-trip.
CanonicalGroup parse_group_expr(const std::string& text);

// Canonical printed form ("0", "Z", "Z^2 + Z/2 + Z/4", ...).
std::string group_expr_to_string(const CanonicalGroup& g);

}  // namespace nilsq

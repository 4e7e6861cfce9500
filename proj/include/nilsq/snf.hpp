#pragma once

#include "nilsq/matrix.hpp"

#include <optional>
#include <tuple>
#include <vector>

namespace nilsq {

// Smith normal form with unimodular transforms: U * A * V == D, where D is
// diagonal with non-negative entries d_1 | d_2 | ... | d_r followed by zeros.
// U (rows x rows) and V (cols x cols) are unimodular; their exact inverses are
// tracked alongside so no matrix inversion is ever needed downstream.
struct SmithResult {
  IntMat D;
  IntMat U, Uinv;  // U * Uinv == I
  IntMat V, Vinv;  // V * Vinv == I
  int rank = 0;
  std::vector<Int> diag;  // min(rows, cols) entries, divisibility chain, >= 0

  // Nonzero, non-unit diagonal entries (the torsion data of coker).
  std::vector<Int> nonunit_factors() const {
    std::vector<Int> f;
    for (const Int& d : diag)
      if (d > 1) f.push_back(d);
    return f;
  }
};

SmithResult smith(const IntMat& a);

// Invariant factors without transform tracking. Uses sparse elimination with
// small-pivot/min-fill selection and falls back to dense reduction on the
// residual block; intended for large chain differentials where only the
// cokernel structure is needed.
struct InvariantFactors {
  std::vector<Int> factors;  // non-unit, nonzero, divisibility chain
  int rank = 0;              // number of nonzero diagonal entries (units included)
};

InvariantFactors invariant_factors(const IntMat& a);
InvariantFactors invariant_factors_sparse(int rows, int cols,
                                          const std::vector<std::tuple<int, int, Int>>& entries);

// Basis of the integer kernel lattice {x : A x = 0}; columns form a basis of a
// saturated sublattice (direct summand) of Z^cols.
IntMat kernel_basis(const IntMat& a);

// Solve A x = b over the integers. Returns std::nullopt when no integral
// solution exists.
std::optional<std::vector<Int>> solve(const IntMat& a, const std::vector<Int>& b);

// Columnwise solve A X = B.
std::optional<IntMat> solve_mat(const IntMat& a, const IntMat& b);

// Column Hermite normal form of the lattice spanned by the columns of A:
// returns a matrix whose columns are a canonical basis (column echelon,
// pivots positive, entries right of a pivot reduced). Zero columns dropped.
IntMat column_hnf(const IntMat& a);

// Determinant by fraction-free (Bareiss) elimination. Used in tests.
Int det(const IntMat& a);

// Normalize a multiset of cyclic orders (>= 0, 0 meaning Z) into a
// divisibility chain; unit entries are dropped. Zero entries pass through as
// free summands and are returned in `free_rank_out`.
std::vector<Int> divisibility_chain(std::vector<Int> orders, int& free_rank_out);

}  // namespace nilsq

#pragma once

#include <vector>

#include "nilsq/chain.hpp"
#include "nilsq/matrix.hpp"
#include "nilsq/quadratic.hpp"

namespace nilsq {

// A truncated simplicial abelian group, degreewise free of finite rank, with
// face and degeneracy matrices through the truncation degree. All simplicial
// identities are validated on construction.
class SimplicialAbelianGroup {
 public:
  // ranks[q] for q = 0..T; face[q][i] : K_q -> K_{q-1} for 1 <= q <= T,
  // 0 <= i <= q; degen[q][i] : K_q -> K_{q+1} for 0 <= q < T, 0 <= i <= q.
  SimplicialAbelianGroup(std::vector<int> ranks, std::vector<std::vector<IntMat>> face,
                         std::vector<std::vector<IntMat>> degen);

  int truncation() const { return static_cast<int>(ranks_.size()) - 1; }
  int rank(int q) const;
  const IntMat& face(int q, int i) const;
  const IntMat& degen(int q, int i) const;

 private:
  void validate() const;
  std::vector<int> ranks_;
  std::vector<std::vector<IntMat>> face_;
  std::vector<std::vector<IntMat>> degen_;
};

// Inverse Dold-Kan correspondence through a truncation degree: the value at
// [q] is the direct sum of Y_k over surjections [q] ->> [k], with operators
// acting through epi-mono factorization. Y must be supported in degrees >= 0.
SimplicialAbelianGroup denormalize(const ChainComplex& y, int truncation);

// Moore complex: N_q is the intersection of ker d_i over i > 0 with boundary
// d_0, in canonical (HNF) bases. Boundaries are honest through the truncation
// degree; homology at stale_degree itself is not trustworthy because the
// boundary from one degree higher is missing.
struct NormalizedComplex {
  ChainComplex complex;
  int stale_degree;
};
NormalizedComplex normalize(const SimplicialAbelianGroup& k);

// Degreewise application of the quadratic tensor - (x) M. The components of M
// must be free; a module with torsion components is rejected because the
// degreewise values would not be free abelian.
SimplicialAbelianGroup apply_quadratic_degreewise(const SimplicialAbelianGroup& k,
                                                  const QuadraticZModule& m);

// Complex of non-degenerate coordinates of the degreewise quadratic
// construction on denormalize(y, top), with the alternating-sum boundary.
// Canonically isomorphic to the Moore complex of the same construction (the
// degenerate part splits off as a direct summand), but built directly on the
// non-degenerate basis so it stays small. Boundaries are honest through
// degree `top`.
ChainComplex m_sharp_complex(const ChainComplex& y, const QuadraticZModule& m, int top);

// H_n of the degreewise quadratic construction on y, via m_sharp_complex with
// truncation n+1.
CanonicalGroup m_sharp_oracle(const ChainComplex& y, const QuadraticZModule& m, int n);

}  // namespace nilsq

#pragma once

#include "nilsq/group.hpp"

namespace nilsq {

// Closed-form homotopy-group tables for spheres and Moore objects in the
// categories of simplicial groups of nilpotency class <= r.

// Nilpotency class of the ambient category.
enum class NilCategory { nil2, nil3, nil4, nil5 };

// A single table cell: the stem-k homotopy group of the (n+1)-sphere,
// i.e. pi_{n+k+1}(S^{n+1}) computed in the chosen category.  The class-r
// group model of the sphere S^{n+1} is indexed by n, so S^2 <-> n = 1 and
// S^3 <-> n = 2.
struct HomotopyQuery {
  NilCategory category = NilCategory::nil2;
  int n = 1;  // sphere dimension parameter, >= 1
  int k = 0;  // stem
};

// pi_{n+k+1}(S^{n+1}) in the given category.
//
// Class 2 and class 3 are closed formulas valid for all n >= 1 and all k
// (cells the class-3 table leaves unlisted -- n < k < 2n with k = 1 mod 4,
// and k >= 2n -- evaluate to 0).  Class 4 and class 5 are known only for
// S^2 (n = 1) and S^3 (n = 2); any other n throws std::domain_error with a
// message containing "open in source".
CanonicalGroup pi_sphere(const HomotopyQuery& q);
CanonicalGroup pi_sphere(NilCategory category, int n, int k);

// pi_{n+k} of the class-2 Moore object M(A, n): the eight-case table
//   A (k=0); A(x)Z2 (0<k<n odd); A*Z2 (0<k<n even); Gamma(A) (k=n odd);
//   Lambda^2(A) (+) A*Z2 (k=n even); R(A) (k=n+1 even); Omega(A) (k=n+1 odd);
//   0 otherwise.
// Requires n >= 1; k may be any integer.
CanonicalGroup pi_moore(const CanonicalGroup& a, int n, int k);

// pi_{n+q} of the exterior-square fiber of the class-2 sphere model:
//   Z if n odd and q = n; Z/2 if q in {1, 3, ..., 2*floor(n/2) - 1}; else 0.
// Requires n >= 1.
CanonicalGroup pi_lambda2_sphere(int n, int q);

// pi_{n+k} of the degree-p Lie functor applied to K(Z, n), p an odd prime:
//   Z/p iff k = 2*i*(p-1) - 1 for some 1 <= i <= floor(n/2); else 0.
// Requires n >= 1; throws std::invalid_argument unless p is an odd prime.
CanonicalGroup pi_lie_p(long long p, int n, int k);

}  // namespace nilsq

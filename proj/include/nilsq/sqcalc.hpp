#pragma once

#include <string>
#include <vector>

#include "nilsq/chain.hpp"
#include "nilsq/group.hpp"
#include "nilsq/hom.hpp"
#include "nilsq/quadratic.hpp"

namespace nilsq {

// ---------------------------------------------------------------------------
// Values of the square calculus.
//
// Every value of the bidegree operator Sq_{n,m}(A, D) (and of its graded
// assembly) is a finite direct sum of labeled summands, each of which sits in
// its own short exact sequence
//
//   Ext(A, ext_arg)  >--delta-->  group  --mu->>  Hom(A, hom_arg).
//
// Pure Ext summands have hom_arg = 0 and delta an isomorphism; pure Hom
// summands have ext_arg = 0 and mu an isomorphism. The extension-type
// summands (the bype functors) carry genuinely non-split sequence data.
// ---------------------------------------------------------------------------

struct SqSummand {
  std::string label;   // human-readable, e.g. "Ext(A,D(x)Z2)" or "GammaT#(A,D)"
  std::string origin;  // dispatch provenance: case tag "I".."XI", or "(i,j)" pair
  CanonicalGroup group;
  CanonicalGroup ext_arg;  // Ext(A, ext_arg) is the kernel end
  CanonicalGroup hom_arg;  // Hom(A, hom_arg) is the cokernel end
  Homomorphism delta;      // Ext(A, ext_arg).value() -> group
  Homomorphism mu;         // group -> Hom(A, hom_arg).value()
};

struct SqValue {
  CanonicalGroup group;  // direct sum of the summand groups
  std::vector<SqSummand> summands;

  CanonicalGroup ext_end() const;  // direct sum of the summand ext_args
  CanonicalGroup hom_end() const;  // direct sum of the summand hom_args
  std::string describe() const;
};

// Value of one of the three bype functors (or of the triple torsion
// analogue), together with its binatural short exact sequence.
struct BypeValue {
  CanonicalGroup group;
  CanonicalGroup ext_arg;
  CanonicalGroup hom_arg;
  Homomorphism delta;  // Ext(A, ext_arg).value() -> group
  Homomorphism mu;     // group -> Hom(A, hom_arg).value()
};

enum class BypeKind { lambdaT, gammaT, lsharp };

// lambdaT / gammaT: homotopy classes from the length-one resolution of A into
// the three-term complex of the exterior / divided square over the minimal
// resolution of B (computed chain-level; the sequence is not split).
// lsharp: the tensor pairing of B with the duality module of A, with its
// Ext(A, Lambda^2 B) >--> L#(A,B) -->> Hom(A, B(x)Z2) sequence built
// slot-wise. Order consistency |group| = |Ext end| * |Hom end| is enforced.
BypeValue bype_functor(BypeKind kind, const CanonicalGroup& a, const CanonicalGroup& b);

// Triple torsion analogue Trp(A; B, C): homotopy classes from the resolution
// of A into the tensor product of the resolutions of B and C, with sequence
// Ext(A, B*C) >--> Trp(A;B,C) -->> Hom(A, B(x)C).
BypeValue trp(const CanonicalGroup& a, const CanonicalGroup& b, const CanonicalGroup& c);

// ---------------------------------------------------------------------------
// Bidegree dispatch. The case is selected by k = n - m and m alone.
// ---------------------------------------------------------------------------

struct SqCase {
  std::string tag;       // "I" .. "XI"
  std::string symbolic;  // e.g. "Ext(A,Gamma(D)) (+) Hom(A,D*Z2)"
};

// Pure dispatch on (n, m); requires m >= 1.
SqCase sq_case(int n, int m);

// The bidegree operator Sq_{n,m}(A, D).
SqValue sq_nm(const CanonicalGroup& a, const CanonicalGroup& d, int n, int m);

// Off-diagonal operator Sq_{n,i,j}(A; D, E) for 1 <= i < j:
//   n = i+j+1 -> Hom(A, D*E);  n = i+j -> Trp(A; D, E);
//   n = i+j-1 -> Ext(A, D(x)E);  otherwise 0.
SqValue sq_nij(const CanonicalGroup& a, const CanonicalGroup& d, const CanonicalGroup& e,
               int n, int i, int j);

// Full graded assembly over a finitely supported graded group B (degrees >= 1):
//   sq_full(A, B, n) = (+)_m Sq_{n,m}(A, B_m)  (+)  (+)_{i<j} Sq_{n,i,j}(A; B_i, B_j).
SqValue sq_full(const CanonicalGroup& a, const GradedGroup& b, int n);

// Sq_n(B) := sq_full(Z, B, n).
SqValue sq_graded(const GradedGroup& b, int n);

// ---------------------------------------------------------------------------
// Stable operator and stabilization.
// ---------------------------------------------------------------------------

// Sq_k^stable(A, D) for k >= 1:
//   k even: Ext(A, D(x)Z2) (+) Hom(A, D*Z2)
//   k odd:  Ext(A, D*Z2)   (+) Hom(A, D(x)Z2)
SqValue stable_sq(const CanonicalGroup& a, const CanonicalGroup& d, int k);

struct StabilizeResult {
  bool out_of_range = false;  // k = n - m <= 0: no stable counterpart
  bool identity = false;      // 0 < k < m-1: already stable
  SqValue unstable;
  SqValue stable;
  std::vector<std::string> unstable_labels;  // labels of non-stable summands
  std::string describe() const;
};

// Component-level comparison of Sq_{n,m}(A,D) with Sq_{n-m}^stable(A,D).
StabilizeResult stabilize(const CanonicalGroup& a, const CanonicalGroup& d, int n, int m);

// Natural stabilization maps between classical quadratic functor values.
Homomorphism sigma_gamma(const CanonicalGroup& d);  // Gamma(D) -> D (x) Z/2
Homomorphism nu_r(const CanonicalGroup& d);         // R(D)     -> D  *  Z/2
Homomorphism nu_omega(const CanonicalGroup& d);     // Omega(D) -> D (x) Z/2

// The stabilization map on coefficient forms, sq_nm(Z,D,n,m).group ->
// stable_sq(Z,D,n-m).group, assembled summand-wise (identity in the stable
// range, sigma/nu/projection on the unstable diagonal cases). Requires
// k = n - m >= 1.
Homomorphism zform_stabilization(const CanonicalGroup& d, int n, int m);

// ---------------------------------------------------------------------------
// Maps induced by an extension class alpha in Ext(A, B).
// ---------------------------------------------------------------------------

// The map ^k[n](alpha) between coefficient forms,
//   sq_nm(Z, A, n+k, n).group  ->  sq_nm(Z, B, n+k, n+1).group.
// Defined for odd k (zero map) and for the listed even cases
//   ^2[1], ^2[2], ^2[3] (and the explicitly zero ^3[2], ^3[3], ^3[4] fall
// under odd k). Any other (k, n) is rejected with "not defined in source".
Homomorphism ext_induced(int k, int n, const ExtClass& alpha);

// The shift map {n,m}(alpha): sq_nm(A, D, n, m).group ->
// sq_nm(A, D', n, m+1).group for alpha in Ext(D, D'), assembled through the
// summand sequences from Ext(A, ^{n+1-m}[m](alpha)) and
// Hom(A, ^{n-m}[m](alpha)); one of the two superscripts is always odd, so
// exactly one column contributes.
Homomorphism shift_map(int n, int m, const ExtClass& alpha, const CanonicalGroup& a);

// ---------------------------------------------------------------------------
// Table emission.
// ---------------------------------------------------------------------------

enum class TableFormat { markdown, csv, json };

// Symbolic table of sq_case cells over rows m = 1..max_m, columns n = 1..max_n.
std::string sq_table(int max_n, int max_m, TableFormat fmt);
// Same region evaluated at A = Z with the given coefficient group D.
std::string sq_table(const CanonicalGroup& d, int max_n, int max_m, TableFormat fmt);

// The three fixed low-dimensional tables (symbolic):
//   1: rows m = 1..4, columns n = 1..3
//   2: rows m = 2..5, columns n = 4..5
//   3: rows m = 2..6, columns n = 6..7
std::string printed_table(int which, TableFormat fmt);

}  // namespace nilsq

#pragma once

#include "nilsq/group.hpp"

#include <vector>

namespace nilsq {

// Minimal free resolution 0 -> X1 --d--> X0 -> A -> 0 of a canonical group:
// X0 = Z^{num_gens}, X1 = Z^{#torsion}, d(eps_j) = d_j * e_{torsion_gen(j)}.
struct Resolution {
  CanonicalGroup A;
  IntMat d;  // num_gens x t
  int t() const { return d.cols(); }
  int torsion_gen(int j) const { return A.free_rank() + j; }
};

Resolution minimal_resolution(const CanonicalGroup& a);

// Chain-map lift of f: A -> B to the minimal resolutions: f0 on X0 (the
// canonical generator matrix itself), f1 on X1 with d_B f1 = f0 d_A.
struct ResLift {
  IntMat f0, f1;
};

ResLift lift_to_resolutions(const CanonicalGroup& a, const CanonicalGroup& b, const IntMat& f0);
ResLift lift_to_resolutions(const Homomorphism& f);

// Element of Ext(A, B), stored as a representative chain map from the minimal
// resolution of A into that of B shifted by one degree; concretely a matrix
// X1(A) -> X0(B), i.e. B.num_gens() rows by #torsion(A) columns. Two
// representatives are equal iff they differ by s d_A + d_B t (a chain
// homotopy), decided by an integer linear solve.
class ExtClass {
 public:
  ExtClass(CanonicalGroup a, CanonicalGroup b, IntMat rep);
  static ExtClass zero(const CanonicalGroup& a, const CanonicalGroup& b);

  const CanonicalGroup& a() const { return a_; }
  const CanonicalGroup& b() const { return b_; }
  const IntMat& rep() const { return rep_; }

  bool is_zero() const;
  bool equal(const ExtClass& o) const;
  ExtClass operator+(const ExtClass& o) const;
  ExtClass operator-() const;
  ExtClass scaled(const Int& c) const;

 private:
  CanonicalGroup a_, b_;
  IntMat rep_;
};

// Shared representation of the four binary functor values: a direct sum of
// cyclic groups indexed by generator pairs, canonicalized through a
// PresentedGroup. `order` == 0 denotes a Z summand.
struct CyclicPair {
  int i = 0, j = 0;
  Int order;
};

class PairGroup {
 public:
  PairGroup() = default;
  explicit PairGroup(std::vector<CyclicPair> basis);
  const std::vector<CyclicPair>& basis() const { return basis_; }
  const CanonicalGroup& value() const { return pres_.canon(); }
  const PresentedGroup& pres() const { return pres_; }
  std::vector<Int> canon_from_raw(const std::vector<Int>& raw) const { return pres_.coords(raw); }
  std::vector<Int> raw_from_canon(const std::vector<Int>& c) const { return pres_.lift(c); }

 private:
  std::vector<CyclicPair> basis_;
  PresentedGroup pres_;
};

// Hom(A, B): one cyclic summand per generator pair (i of B, j of A); the
// basis map sends e_j to mult * e_i.
class HomGroup {
 public:
  HomGroup(CanonicalGroup a, CanonicalGroup b);
  const CanonicalGroup& value() const { return pg_.value(); }
  const CanonicalGroup& a() const { return a_; }
  const CanonicalGroup& b() const { return b_; }

  Homomorphism to_hom(const std::vector<Int>& canon_coords) const;
  IntMat to_matrix(const std::vector<Int>& canon_coords) const;
  std::vector<Int> from_matrix(const IntMat& f) const;
  std::vector<Int> from_hom(const Homomorphism& f) const;

 private:
  CanonicalGroup a_, b_;
  PairGroup pg_;
  std::vector<Int> mult_;  // generator multiplier per basis pair
};

// Ext(A, B) = ⊕_{j torsion gen of A} B / d_j B, with representative-level
// element semantics.
class ExtGroup {
 public:
  ExtGroup(CanonicalGroup a, CanonicalGroup b);
  const CanonicalGroup& value() const { return pg_.value(); }
  const CanonicalGroup& a() const { return a_; }
  const CanonicalGroup& b() const { return b_; }

  ExtClass to_class(const std::vector<Int>& canon_coords) const;
  std::vector<Int> from_rep(const IntMat& rep) const;
  std::vector<Int> from_class(const ExtClass& c) const { return from_rep(c.rep()); }

 private:
  CanonicalGroup a_, b_;
  PairGroup pg_;
};

// A ⊗ B with basis pairs e_i ⊗ f_j.
class TensorGroup {
 public:
  TensorGroup(CanonicalGroup a, CanonicalGroup b);
  const CanonicalGroup& value() const { return pg_.value(); }
  const CanonicalGroup& a() const { return a_; }
  const CanonicalGroup& b() const { return b_; }
  const PairGroup& pairs() const { return pg_; }

  // Canonical coordinates of the elementary tensor x ⊗ y.
  std::vector<Int> elem(const std::vector<Int>& x, const std::vector<Int>& y) const;

 private:
  CanonicalGroup a_, b_;
  PairGroup pg_;
};

// Tor(A, B) = A * B, with its standard embedding into ⊕_{j torsion(A)} B:
// the basis pair (j, i) is the element (b_i / g) f_i sitting in slot j.
class TorGroup {
 public:
  TorGroup(CanonicalGroup a, CanonicalGroup b);
  const CanonicalGroup& value() const { return pg_.value(); }
  const CanonicalGroup& a() const { return a_; }
  const CanonicalGroup& b() const { return b_; }
  const PairGroup& pairs() const { return pg_; }

  // Slot embedding: element of Tor as a matrix B.num_gens() x #torsion(A),
  // column j = the slot-j component.
  IntMat slot_matrix(const std::vector<Int>& canon_coords) const;
  std::vector<Int> from_slot_matrix(const IntMat& m) const;

 private:
  CanonicalGroup a_, b_;
  PairGroup pg_;
};

enum class BinKind { hom, ext, tensor, tor };

CanonicalGroup binary_functor(BinKind kind, const CanonicalGroup& a, const CanonicalGroup& b);

enum class Slot { left, right };

// Functoriality in one slot. Covariant everywhere except Hom/Ext in the left
// slot, which are contravariant: there the returned map goes from
// F(cod f, other) to F(dom f, other).
Homomorphism induced_map(BinKind kind, const Homomorphism& f, Slot slot,
                         const CanonicalGroup& other);

// Snake-lemma connecting map A*C -> B⊗C of the six-term sequence obtained by
// tensoring the extension classified by alpha with C. Additive in alpha.
Homomorphism connecting_map(const ExtClass& alpha, const CanonicalGroup& c);

}  // namespace nilsq

#pragma once

#include "nilsq/snf.hpp"

#include <string>
#include <vector>

namespace nilsq {

// Finitely generated abelian group in invariant-factor form:
//   Z^free_rank  +  Z/d_1 + ... + Z/d_k,   d_1 | d_2 | ... | d_k,  d_i >= 2.
//
// Generator convention used by every coordinate vector in the library: the
// free generators come first (indices 0 .. free_rank-1, printed as Z^r), then
// the torsion generators in ascending invariant-factor order. gen_order
// returns 0 for infinite order.
class CanonicalGroup {
 public:
  CanonicalGroup() = default;  // the zero group
  CanonicalGroup(int free_rank, std::vector<Int> torsion);

  static CanonicalGroup zero() { return CanonicalGroup(); }
  static CanonicalGroup free_group(int rank) { return CanonicalGroup(rank, {}); }
  // order 0 -> Z, order 1 -> 0, order d >= 2 -> Z/d.
  static CanonicalGroup cyclic(const Int& order);
  // Recanonicalizes (e.g. Z/2 + Z/3 = Z/6).
  static CanonicalGroup direct_sum(const CanonicalGroup& a, const CanonicalGroup& b);
  // Canonical group with the given multiset of cyclic orders (0 meaning Z).
  static CanonicalGroup from_orders(const std::vector<Int>& orders);

  int free_rank() const { return free_rank_; }
  const std::vector<Int>& torsion() const { return torsion_; }
  int num_gens() const { return free_rank_ + int(torsion_.size()); }
  Int gen_order(int i) const;
  bool is_zero() const { return free_rank_ == 0 && torsion_.empty(); }
  bool is_finite() const { return free_rank_ == 0; }
  // Group order; 0 denotes infinite.
  Int order() const;

  // Reduce a coordinate vector: torsion coordinates into [0, d), free
  // coordinates untouched.
  std::vector<Int> reduce(std::vector<Int> x) const;
  std::vector<Int> zero_elem() const { return std::vector<Int>(size_t(num_gens()), Int(0)); }

  // "0", "Z", "Z/4", "Z^2 + Z/2 + Z/4".
  std::string to_string() const;

  bool operator==(const CanonicalGroup& o) const {
    return free_rank_ == o.free_rank_ && torsion_ == o.torsion_;
  }
  bool operator!=(const CanonicalGroup& o) const { return !(*this == o); }

 private:
  int free_rank_ = 0;
  std::vector<Int> torsion_;
};

// Presentation of an abelian group: Z^gens / column span of `relations`
// (relations has `gens` rows; a zero-column matrix presents the free group).
// Canonicalization data (SNF of the relation matrix) is computed on
// construction and cached, giving exact coordinates in the canonical form and
// integral lifts back.
class PresentedGroup {
 public:
  PresentedGroup() : PresentedGroup(0, IntMat(0, 0)) {}
  PresentedGroup(int gens, IntMat relations);
  static PresentedGroup from_canonical(const CanonicalGroup& g);

  int gens() const { return gens_; }
  const IntMat& relations() const { return rel_; }
  const CanonicalGroup& canon() const { return canon_; }

  // Canonical coordinates of a generator-coordinate vector (length gens()),
  // reduced; length canon().num_gens().
  std::vector<Int> coords(const std::vector<Int>& x) const;
  // Integral preimage of canonical coordinates: coords(lift(c)) == reduce(c).
  std::vector<Int> lift(const std::vector<Int>& c) const;
  // Matrix versions, columnwise.
  IntMat coords_mat(const IntMat& x) const;
  IntMat lift_mat(const IntMat& c) const;

  bool elements_equal(const std::vector<Int>& x, const std::vector<Int>& y) const;

 private:
  int gens_ = 0;
  IntMat rel_;
  CanonicalGroup canon_;
  bool identity_coords_ = false;  // canonical presentations skip the SNF maps
  IntMat u_, uinv_;               // from SNF of rel_ when needed
  std::vector<int> canon_row_;    // canonical generator -> SNF row index
};

// Homomorphism between presented groups, stored by its action on generators:
// column j of `matrix` is the image of generator j of the domain, in
// generator coordinates of the codomain. Well-formedness (the relation
// lattice of the domain maps into that of the codomain) is verified on
// construction. Equality is modulo codomain relations.
class Homomorphism {
 public:
  Homomorphism(PresentedGroup dom, PresentedGroup cod, IntMat matrix);
  static Homomorphism identity(const PresentedGroup& g);
  static Homomorphism zero(const PresentedGroup& dom, const PresentedGroup& cod);
  // Convenience: canonical presentations on both sides.
  static Homomorphism between_canonical(const CanonicalGroup& dom, const CanonicalGroup& cod,
                                        IntMat matrix);

  const PresentedGroup& dom() const { return dom_; }
  const PresentedGroup& cod() const { return cod_; }
  const IntMat& matrix() const { return m_; }

  std::vector<Int> apply(const std::vector<Int>& x) const { return m_.mul_vec(x); }
  // Canonical coordinates in, canonical coordinates out.
  std::vector<Int> apply_canonical(const std::vector<Int>& c) const;
  IntMat canonical_matrix() const;  // action on canonical generators

  Homomorphism compose(const Homomorphism& inner) const;  // (*this) ∘ inner
  Homomorphism operator+(const Homomorphism& o) const;
  Homomorphism operator-(const Homomorphism& o) const;
  Homomorphism negated() const;
  Homomorphism scaled(const Int& c) const;

  bool is_zero() const;
  bool equal(const Homomorphism& o) const;

 private:
  Homomorphism(PresentedGroup dom, PresentedGroup cod, IntMat matrix, bool check);
  PresentedGroup dom_, cod_;
  IntMat m_;
  friend Homomorphism unchecked_hom(PresentedGroup, PresentedGroup, IntMat);
};

// Internal fast path for maps already known to be well formed.
Homomorphism unchecked_hom(PresentedGroup dom, PresentedGroup cod, IntMat matrix);

// Subgroup or quotient presented with explicit structure map:
//  - kernel(f):   `group` = ker f, `map` = inclusion ker -> dom (canonical gens).
//  - image(f):    `group` = im f,  `map` = inclusion im -> cod.
//  - cokernel(f): `group` = coker, `map` = projection cod -> coker.
struct Subquotient {
  PresentedGroup group;
  Homomorphism map;
};

Subquotient kernel(const Homomorphism& f);
Subquotient image(const Homomorphism& f);
Subquotient cokernel(const Homomorphism& f);

// All elements of a finite group as reduced coordinate vectors, in
// lexicographic order. Throws on infinite groups and above the global
// 2^16-element search bound.
std::vector<std::vector<Int>> enumerate_elements(const CanonicalGroup& g);

}  // namespace nilsq

#pragma once

#include <map>
#include <string>
#include <vector>

#include "nilsq/group.hpp"
#include "nilsq/hom.hpp"
#include "nilsq/matrix.hpp"

namespace nilsq {

// Bounded chain complex of finitely generated free abelian groups. Degrees
// outside [lo, hi] are zero; d_q maps degree q to degree q-1 and d d = 0 is
// validated on construction.
class ChainComplex {
 public:
  ChainComplex() = default;  // the zero complex
  // ranks[k] is the rank in degree lo+k; boundaries[k] is d_{lo+k+1}, an
  // IntMat of shape ranks[k] x ranks[k+1].
  ChainComplex(int lo, std::vector<int> ranks, std::vector<IntMat> boundaries);

  static ChainComplex zero() { return ChainComplex(); }
  static ChainComplex concentrated(int degree, int rank);

  bool is_zero() const { return ranks_.empty(); }
  int lo() const { return lo_; }
  int hi() const { return lo_ + int(ranks_.size()) - 1; }
  int rank(int q) const;
  // d_q : C_q -> C_{q-1}; always shaped rank(q-1) x rank(q).
  IntMat boundary(int q) const;
  int total_rank() const;

  bool operator==(const ChainComplex& o) const {
    return lo_ == o.lo_ && ranks_ == o.ranks_ && d_ == o.d_;
  }
  bool operator!=(const ChainComplex& o) const { return !(*this == o); }

  std::string to_string() const;
  std::string to_json_string() const;
  static ChainComplex from_json_string(const std::string& s);

 private:
  int lo_ = 0;
  std::vector<int> ranks_;  // empty = zero complex
  std::vector<IntMat> d_;   // d_[k] = d_{lo+k+1}
};

ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b);
// Degree shift by k with d(s^k x) = (-1)^{k|x|} d x.
ChainComplex suspension(const ChainComplex& y, int k);
// Tensor product with Koszul signs d(x (x) y) = dx (x) y + (-1)^{|x|} x (x) dy.
// Degree-n summands are ordered by ascending degree of the left factor.
ChainComplex tensor_complex(const ChainComplex& y, const ChainComplex& z);

// Homology in canonical form (invariant factors of d_{n+1} plus free rank).
CanonicalGroup homology(const ChainComplex& y, int n);

// Homology with explicit cycle coordinates: `cycles` columns form a basis of
// ker d_n and `pres` presents H_n on that basis.
struct HomologyData {
  CanonicalGroup group;
  IntMat cycles;
  PresentedGroup pres;

  std::vector<Int> coords_of_cycle(const std::vector<Int>& v) const;
  std::vector<Int> cycle_from_coords(const std::vector<Int>& c) const;
};
HomologyData homology_data(const ChainComplex& y, int n);

// Finitely supported graded abelian group.
class GradedGroup {
 public:
  GradedGroup() = default;
  void set(int degree, const CanonicalGroup& g);
  CanonicalGroup at(int degree) const;
  const std::map<int, CanonicalGroup>& parts() const { return parts_; }
  bool operator==(const GradedGroup& o) const { return parts_ == o.parts_; }
  bool operator!=(const GradedGroup& o) const { return !(*this == o); }
  std::string to_string() const;

 private:
  std::map<int, CanonicalGroup> parts_;  // zero groups are never stored
};

GradedGroup graded_homology(const ChainComplex& y);

// Free complex concentrated in degrees n, n+1 with H_n = a (a short free
// resolution placed at degree n).
ChainComplex moore_complex(const CanonicalGroup& a, int n);
// Direct sum of moore_complex(b_n, n) over the support of b.
ChainComplex canonical_complex(const GradedGroup& b);

// Degreewise map of complexes commuting with the boundaries.
class ChainMap {
 public:
  ChainMap(ChainComplex src, ChainComplex tgt, std::map<int, IntMat> comps);
  static ChainMap zero(const ChainComplex& src, const ChainComplex& tgt);
  static ChainMap identity(const ChainComplex& c);

  const ChainComplex& src() const { return src_; }
  const ChainComplex& tgt() const { return tgt_; }
  // f_q : src_q -> tgt_q; always shaped tgt.rank(q) x src.rank(q).
  IntMat component(int q) const;

  ChainMap compose(const ChainMap& inner) const;  // (*this) o inner
  ChainMap operator+(const ChainMap& o) const;
  ChainMap operator-(const ChainMap& o) const;
  ChainMap negated() const;
  ChainMap scaled(const Int& c) const;
  bool is_zero() const;

 private:
  ChainComplex src_, tgt_;
  std::map<int, IntMat> comps_;  // zero components are never stored
};

// Gaussian-elimination reduction: repeatedly cancels unit boundary entries.
// The reduced complex is chain homotopy equivalent to the original; when
// requested, the equivalence data (iota: reduced -> original,
// proj: original -> reduced, h: original_q -> original_{q+1}) is accumulated
// and satisfies proj o iota = id and id - iota o proj = d h + h d.
struct Reduction {
  ChainComplex original;
  ChainComplex reduced;
  bool with_transfers = false;
  std::map<int, IntMat> iota, proj, h;

  IntMat iota_at(int q) const;  // original.rank(q) x reduced.rank(q)
  IntMat proj_at(int q) const;  // reduced.rank(q) x original.rank(q)
  IntMat h_at(int q) const;     // original.rank(q+1) x original.rank(q)
};
Reduction morse_reduce(const ChainComplex& y, bool with_transfers = false);

// The group of chain maps src -> tgt modulo chain homotopy, computed from
// integer solution lattices (chain-map kernel modulo null-homotopic image)
// and canonicalized; representatives can be extracted for every class and
// any chain map can be located in the group.
class HomotopyClasses {
 public:
  HomotopyClasses(const ChainComplex& src, const ChainComplex& tgt);

  const CanonicalGroup& group() const { return pres_.canon(); }
  const ChainComplex& src() const { return rc_.original; }
  const ChainComplex& tgt() const { return ry_.original; }

  ChainMap rep(const std::vector<Int>& canon_coords) const;
  std::vector<Int> coords(const ChainMap& f) const;

  // Reduced-level access (maps between the internally reduced complexes).
  const Reduction& src_reduction() const { return rc_; }
  const Reduction& tgt_reduction() const { return ry_; }
  ChainMap rep_reduced(const std::vector<Int>& canon_coords) const;
  std::vector<Int> coords_reduced(const ChainMap& f) const;

 private:
  struct Block {
    int q = 0, rows = 0, cols = 0, offset = 0;
  };

  std::vector<Int> vec_of(const ChainMap& f) const;
  ChainMap map_of(const std::vector<Int>& v) const;

  Reduction rc_, ry_;
  std::vector<Block> blocks_;
  int nvars_ = 0;
  IntMat kernel_;  // nvars x k: lattice of chain maps (reduced level)
  PresentedGroup pres_;
};

HomotopyClasses homotopy_classes(const ChainComplex& src, const ChainComplex& tgt);

// Homotopy classes [C(A,n), Y] together with the short exact sequence
//   Ext(A, H_{n+1} Y) >--Delta--> group --mu->> Hom(A, H_n Y).
struct PseudoHomology {
  CanonicalGroup group;
  HomotopyClasses classes;   // source moore_complex(A, n), target reduced Y
  Reduction target;          // reduction of the given Y with transfers
  HomologyData h_n, h_n1;    // homology data of the reduced target
  Homomorphism Delta;        // Ext(A, H_{n+1}Y).value() -> group
  Homomorphism mu;           // group -> Hom(A, H_nY).value()

  // Representatives as maps into the original Y.
  ChainMap rep(const std::vector<Int>& canon_coords) const;
  std::vector<Int> coords(const ChainMap& f) const;
};
PseudoHomology pseudo_homology(const CanonicalGroup& a, int n, const ChainComplex& y);

}  // namespace nilsq

#include "nilsq/hom.hpp"

#include <map>
#include <stdexcept>

namespace nilsq {

Resolution minimal_resolution(const CanonicalGroup& a) {
  int t = int(a.torsion().size());
  IntMat d(a.num_gens(), t);
  for (int j = 0; j < t; ++j) d.at(a.free_rank() + j, j) = a.torsion()[size_t(j)];
  return {a, d};
}

ResLift lift_to_resolutions(const CanonicalGroup& a, const CanonicalGroup& b, const IntMat& f0) {
  if (f0.rows() != b.num_gens() || f0.cols() != a.num_gens())
    throw std::invalid_argument("lift_to_resolutions: shape mismatch");
  const int ta = int(a.torsion().size()), tb = int(b.torsion().size());
  IntMat f1(tb, ta);
  for (int j = 0; j < ta; ++j) {
    const Int& aj = a.torsion()[size_t(j)];
    const int gj = a.free_rank() + j;
    for (int i = 0; i < b.free_rank(); ++i)
      if (f0.at(i, gj) != 0)
        throw std::invalid_argument("lift_to_resolutions: not well defined (free coordinate)");
    for (int l = 0; l < tb; ++l) {
      const Int& bl = b.torsion()[size_t(l)];
      Int num = aj * f0.at(b.free_rank() + l, gj);
      if (num % bl != 0)
        throw std::invalid_argument("lift_to_resolutions: not well defined (torsion coordinate)");
      f1.at(l, j) = num / bl;
    }
  }
  return {f0, f1};
}

ResLift lift_to_resolutions(const Homomorphism& f) {
  return lift_to_resolutions(f.dom().canon(), f.cod().canon(), f.canonical_matrix());
}

// ---------------------------------------------------------------------------
// ExtClass

ExtClass::ExtClass(CanonicalGroup a, CanonicalGroup b, IntMat rep)
    : a_(std::move(a)), b_(std::move(b)), rep_(std::move(rep)) {
  if (rep_.rows() != b_.num_gens() || rep_.cols() != int(a_.torsion().size()))
    throw std::invalid_argument("ExtClass: representative shape mismatch");
}

ExtClass ExtClass::zero(const CanonicalGroup& a, const CanonicalGroup& b) {
  return ExtClass(a, b, IntMat::zero(b.num_gens(), int(a.torsion().size())));
}

namespace {

// Does v lie in a*Z^n + (torsion relation lattice of B)?
bool column_in_shifted_lattice(const CanonicalGroup& b, const Int& a, const std::vector<Int>& v) {
  IntMat relb = PresentedGroup::from_canonical(b).relations();
  IntMat lattice = IntMat::hstack(IntMat::identity(b.num_gens()).scaled(a), relb);
  return solve(lattice, v).has_value();
}

}  // namespace

bool ExtClass::is_zero() const { return equal(zero(a_, b_)); }

bool ExtClass::equal(const ExtClass& o) const {
  if (a_ != o.a_ || b_ != o.b_) return false;
  IntMat diff = rep_ - o.rep_;
  // Chain homotopy s d_A + d_B t exists iff each column j lands in
  // a_j * Z^{B gens} + relation lattice of B.
  for (int j = 0; j < diff.cols(); ++j)
    if (!column_in_shifted_lattice(b_, a_.torsion()[size_t(j)], diff.col(j))) return false;
  return true;
}

ExtClass ExtClass::operator+(const ExtClass& o) const {
  if (a_ != o.a_ || b_ != o.b_) throw std::invalid_argument("ExtClass+: group mismatch");
  return ExtClass(a_, b_, rep_ + o.rep_);
}

ExtClass ExtClass::operator-() const { return ExtClass(a_, b_, -rep_); }

ExtClass ExtClass::scaled(const Int& c) const { return ExtClass(a_, b_, rep_.scaled(c)); }

// ---------------------------------------------------------------------------
// PairGroup

PairGroup::PairGroup(std::vector<CyclicPair> basis) : basis_(std::move(basis)) {
  const int n = int(basis_.size());
  int finite = 0;
  for (const CyclicPair& p : basis_)
    if (p.order != 0) ++finite;
  IntMat rel(n, finite);
  int c = 0;
  for (int k = 0; k < n; ++k)
    if (basis_[size_t(k)].order != 0) rel.at(k, c++) = basis_[size_t(k)].order;
  pres_ = PresentedGroup(n, rel);
}

// ---------------------------------------------------------------------------
// HomGroup

HomGroup::HomGroup(CanonicalGroup a, CanonicalGroup b) : a_(std::move(a)), b_(std::move(b)) {
  std::vector<CyclicPair> basis;
  for (int j = 0; j < a_.num_gens(); ++j)
    for (int i = 0; i < b_.num_gens(); ++i) {
      Int aj = a_.gen_order(j), bi = b_.gen_order(i);
      Int g, mult;
      if (aj == 0) {
        g = bi;  // Hom(Z, Z/b) = Z/b, Hom(Z, Z) = Z
        mult = 1;
      } else if (bi == 0) {
        continue;  // Hom(Z/a, Z) = 0
      } else {
        g = gcd_int(aj, bi);
        mult = bi / g;
      }
      if (g == 1) continue;
      basis.push_back({i, j, g});
      mult_.push_back(mult);
    }
  pg_ = PairGroup(std::move(basis));
}

IntMat HomGroup::to_matrix(const std::vector<Int>& canon_coords) const {
  std::vector<Int> raw = pg_.raw_from_canon(canon_coords);
  IntMat f(b_.num_gens(), a_.num_gens());
  for (size_t k = 0; k < pg_.basis().size(); ++k) {
    const CyclicPair& p = pg_.basis()[k];
    f.at(p.i, p.j) += raw[k] * mult_[k];
  }
  return f;
}

Homomorphism HomGroup::to_hom(const std::vector<Int>& canon_coords) const {
  return Homomorphism::between_canonical(a_, b_, to_matrix(canon_coords));
}

std::vector<Int> HomGroup::from_matrix(const IntMat& f) const {
  if (f.rows() != b_.num_gens() || f.cols() != a_.num_gens())
    throw std::invalid_argument("HomGroup::from_matrix: shape mismatch");
  std::vector<Int> raw(pg_.basis().size(), Int(0));
  for (size_t k = 0; k < pg_.basis().size(); ++k) {
    const CyclicPair& p = pg_.basis()[k];
    Int bi = b_.gen_order(p.i);
    if (bi == 0) {
      raw[k] = f.at(p.i, p.j);
    } else {
      Int x = mod_floor(f.at(p.i, p.j), bi);
      if (x % mult_[k] != 0)
        throw std::invalid_argument("HomGroup::from_matrix: matrix is not a homomorphism");
      raw[k] = x / mult_[k];
    }
  }
  return pg_.canon_from_raw(raw);
}

std::vector<Int> HomGroup::from_hom(const Homomorphism& f) const {
  return from_matrix(f.canonical_matrix());
}

// ---------------------------------------------------------------------------
// ExtGroup

ExtGroup::ExtGroup(CanonicalGroup a, CanonicalGroup b) : a_(std::move(a)), b_(std::move(b)) {
  std::vector<CyclicPair> basis;
  for (int j = 0; j < int(a_.torsion().size()); ++j)
    for (int i = 0; i < b_.num_gens(); ++i) {
      Int aj = a_.torsion()[size_t(j)];
      Int bi = b_.gen_order(i);
      Int g = (bi == 0) ? aj : gcd_int(aj, bi);
      if (g == 1) continue;
      basis.push_back({i, j, g});
    }
  pg_ = PairGroup(std::move(basis));
}

ExtClass ExtGroup::to_class(const std::vector<Int>& canon_coords) const {
  std::vector<Int> raw = pg_.raw_from_canon(canon_coords);
  IntMat rep(b_.num_gens(), int(a_.torsion().size()));
  for (size_t k = 0; k < pg_.basis().size(); ++k) {
    const CyclicPair& p = pg_.basis()[k];
    rep.at(p.i, p.j) += raw[k];
  }
  return ExtClass(a_, b_, rep);
}

std::vector<Int> ExtGroup::from_rep(const IntMat& rep) const {
  if (rep.rows() != b_.num_gens() || rep.cols() != int(a_.torsion().size()))
    throw std::invalid_argument("ExtGroup::from_rep: shape mismatch");
  std::vector<Int> raw(pg_.basis().size(), Int(0));
  for (size_t k = 0; k < pg_.basis().size(); ++k) {
    const CyclicPair& p = pg_.basis()[k];
    raw[k] = mod_floor(rep.at(p.i, p.j), p.order);
  }
  return pg_.canon_from_raw(raw);
}

// ---------------------------------------------------------------------------
// TensorGroup

TensorGroup::TensorGroup(CanonicalGroup a, CanonicalGroup b) : a_(std::move(a)), b_(std::move(b)) {
  std::vector<CyclicPair> basis;
  for (int i = 0; i < a_.num_gens(); ++i)
    for (int j = 0; j < b_.num_gens(); ++j) {
      Int ai = a_.gen_order(i), bj = b_.gen_order(j);
      Int g = (ai == 0) ? bj : (bj == 0 ? ai : gcd_int(ai, bj));
      if (g == 1) continue;
      basis.push_back({i, j, g});
    }
  pg_ = PairGroup(std::move(basis));
}

std::vector<Int> TensorGroup::elem(const std::vector<Int>& x, const std::vector<Int>& y) const {
  if (int(x.size()) != a_.num_gens() || int(y.size()) != b_.num_gens())
    throw std::invalid_argument("TensorGroup::elem: size mismatch");
  std::vector<Int> raw(pg_.basis().size(), Int(0));
  for (size_t k = 0; k < pg_.basis().size(); ++k) {
    const CyclicPair& p = pg_.basis()[k];
    raw[k] = x[size_t(p.i)] * y[size_t(p.j)];
  }
  return pg_.canon_from_raw(raw);
}

// ---------------------------------------------------------------------------
// TorGroup
//
// Pair indices: j runs over torsion generators of A, i over torsion
// generators of B (both as torsion indices, not generator indices).

TorGroup::TorGroup(CanonicalGroup a, CanonicalGroup b) : a_(std::move(a)), b_(std::move(b)) {
  std::vector<CyclicPair> basis;
  for (int j = 0; j < int(a_.torsion().size()); ++j)
    for (int i = 0; i < int(b_.torsion().size()); ++i) {
      Int g = gcd_int(a_.torsion()[size_t(j)], b_.torsion()[size_t(i)]);
      if (g == 1) continue;
      basis.push_back({i, j, g});
    }
  pg_ = PairGroup(std::move(basis));
}

IntMat TorGroup::slot_matrix(const std::vector<Int>& canon_coords) const {
  std::vector<Int> raw = pg_.raw_from_canon(canon_coords);
  IntMat m(b_.num_gens(), int(a_.torsion().size()));
  for (size_t k = 0; k < pg_.basis().size(); ++k) {
    const CyclicPair& p = pg_.basis()[k];
    Int bi = b_.torsion()[size_t(p.i)];
    m.at(b_.free_rank() + p.i, p.j) += raw[k] * (bi / p.order);
  }
  return m;
}

std::vector<Int> TorGroup::from_slot_matrix(const IntMat& m) const {
  if (m.rows() != b_.num_gens() || m.cols() != int(a_.torsion().size()))
    throw std::invalid_argument("TorGroup::from_slot_matrix: shape mismatch");
  std::vector<Int> raw(pg_.basis().size(), Int(0));
  // Free coordinates of each slot must vanish (slot contents are torsion
  // elements killed by a_j).
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < b_.free_rank(); ++i)
      if (m.at(i, j) != 0)
        throw std::invalid_argument("TorGroup::from_slot_matrix: slot has free component");
  // Entries at torsion coordinates not divisible by b_i/g would mean the slot
  // element is not killed by a_j.
  IntMat seen(m.rows(), m.cols());
  for (size_t k = 0; k < pg_.basis().size(); ++k) {
    const CyclicPair& p = pg_.basis()[k];
    Int bi = b_.torsion()[size_t(p.i)];
    Int step = bi / p.order;
    Int v = mod_floor(m.at(b_.free_rank() + p.i, p.j), bi);
    if (v % step != 0)
      throw std::invalid_argument("TorGroup::from_slot_matrix: slot element not annihilated");
    raw[k] = v / step;
    seen.at(b_.free_rank() + p.i, p.j) = 1;
  }
  // Slots whose pair was dropped (gcd 1) must carry trivial entries.
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < int(b_.torsion().size()); ++i) {
      if (seen.at(b_.free_rank() + i, j) != 0) continue;
      Int bi = b_.torsion()[size_t(i)];
      if (mod_floor(m.at(b_.free_rank() + i, j), bi) != 0)
        throw std::invalid_argument("TorGroup::from_slot_matrix: slot element not annihilated");
    }
  return pg_.canon_from_raw(raw);
}

// ---------------------------------------------------------------------------
// binary_functor / induced_map / connecting_map

CanonicalGroup binary_functor(BinKind kind, const CanonicalGroup& a, const CanonicalGroup& b) {
  switch (kind) {
    case BinKind::hom:
      return HomGroup(a, b).value();
    case BinKind::ext:
      return ExtGroup(a, b).value();
    case BinKind::tensor:
      return TensorGroup(a, b).value();
    case BinKind::tor:
      return TorGroup(a, b).value();
  }
  throw std::logic_error("binary_functor: bad kind");
}

namespace {

// Column k of the returned matrix: image of the k-th canonical generator.
template <typename SourceValue, typename Fn>
IntMat assemble(const SourceValue& src_value, const CanonicalGroup& tgt_value, Fn&& gen_image) {
  IntMat m(tgt_value.num_gens(), src_value.num_gens());
  for (int k = 0; k < src_value.num_gens(); ++k) {
    std::vector<Int> e(size_t(src_value.num_gens()), Int(0));
    e[size_t(k)] = 1;
    m.set_col(k, gen_image(e));
  }
  return m;
}

}  // namespace

Homomorphism induced_map(BinKind kind, const Homomorphism& f, Slot slot,
                         const CanonicalGroup& other) {
  const CanonicalGroup A = f.dom().canon();
  const CanonicalGroup A2 = f.cod().canon();
  const IntMat F = f.canonical_matrix();

  switch (kind) {
    case BinKind::tensor: {
      TensorGroup S(slot == Slot::left ? A : other, slot == Slot::left ? other : A);
      TensorGroup T(slot == Slot::left ? A2 : other, slot == Slot::left ? other : A2);
      std::map<std::pair<int, int>, size_t> tidx;
      for (size_t k = 0; k < T.pairs().basis().size(); ++k)
        tidx[{T.pairs().basis()[k].i, T.pairs().basis()[k].j}] = k;
      IntMat m = assemble(S.value(), T.value(), [&](const std::vector<Int>& e) {
        std::vector<Int> raw = S.pairs().raw_from_canon(e);
        std::vector<Int> traw(T.pairs().basis().size(), Int(0));
        for (size_t k = 0; k < S.pairs().basis().size(); ++k) {
          if (raw[k] == 0) continue;
          const CyclicPair& p = S.pairs().basis()[k];
          if (slot == Slot::left) {
            for (int m2 = 0; m2 < A2.num_gens(); ++m2) {
              if (F.at(m2, p.i) == 0) continue;
              auto it = tidx.find({m2, p.j});
              if (it != tidx.end()) traw[it->second] += raw[k] * F.at(m2, p.i);
            }
          } else {
            for (int m2 = 0; m2 < A2.num_gens(); ++m2) {
              if (F.at(m2, p.j) == 0) continue;
              auto it = tidx.find({p.i, m2});
              if (it != tidx.end()) traw[it->second] += raw[k] * F.at(m2, p.j);
            }
          }
        }
        return T.pairs().canon_from_raw(traw);
      });
      return Homomorphism::between_canonical(S.value(), T.value(), std::move(m));
    }
    case BinKind::hom: {
      if (slot == Slot::left) {
        // Contravariant: Hom(A2, C) -> Hom(A, C), phi -> phi ∘ f.
        HomGroup S(A2, other), T(A, other);
        IntMat m = assemble(S.value(), T.value(), [&](const std::vector<Int>& e) {
          return T.from_matrix(S.to_matrix(e) * F);
        });
        return Homomorphism::between_canonical(S.value(), T.value(), std::move(m));
      }
      HomGroup S(other, A), T(other, A2);
      IntMat m = assemble(S.value(), T.value(), [&](const std::vector<Int>& e) {
        return T.from_matrix(F * S.to_matrix(e));
      });
      return Homomorphism::between_canonical(S.value(), T.value(), std::move(m));
    }
    case BinKind::ext: {
      if (slot == Slot::left) {
        // Contravariant: Ext(A2, C) -> Ext(A, C), rep -> rep ∘ f1.
        ResLift lift = lift_to_resolutions(A, A2, F);
        ExtGroup S(A2, other), T(A, other);
        IntMat m = assemble(S.value(), T.value(), [&](const std::vector<Int>& e) {
          return T.from_rep(S.to_class(e).rep() * lift.f1);
        });
        return Homomorphism::between_canonical(S.value(), T.value(), std::move(m));
      }
      ExtGroup S(other, A), T(other, A2);
      IntMat m = assemble(S.value(), T.value(), [&](const std::vector<Int>& e) {
        return T.from_rep(F * S.to_class(e).rep());
      });
      return Homomorphism::between_canonical(S.value(), T.value(), std::move(m));
    }
    case BinKind::tor: {
      if (slot == Slot::left) {
        ResLift lift = lift_to_resolutions(A, A2, F);
        TorGroup S(A, other), T(A2, other);
        IntMat m = assemble(S.value(), T.value(), [&](const std::vector<Int>& e) {
          return T.from_slot_matrix(S.slot_matrix(e) * lift.f1.transpose());
        });
        return Homomorphism::between_canonical(S.value(), T.value(), std::move(m));
      }
      TorGroup S(other, A), T(other, A2);
      IntMat m = assemble(S.value(), T.value(), [&](const std::vector<Int>& e) {
        return T.from_slot_matrix(F * S.slot_matrix(e));
      });
      return Homomorphism::between_canonical(S.value(), T.value(), std::move(m));
    }
  }
  throw std::logic_error("induced_map: bad kind");
}

Homomorphism connecting_map(const ExtClass& alpha, const CanonicalGroup& c) {
  TorGroup S(alpha.a(), c);
  TensorGroup T(alpha.b(), c);
  const IntMat& chi = alpha.rep();
  std::map<std::pair<int, int>, size_t> tidx;
  for (size_t k = 0; k < T.pairs().basis().size(); ++k)
    tidx[{T.pairs().basis()[k].i, T.pairs().basis()[k].j}] = k;
  IntMat m(T.value().num_gens(), S.value().num_gens());
  for (int g = 0; g < S.value().num_gens(); ++g) {
    std::vector<Int> e(size_t(S.value().num_gens()), Int(0));
    e[size_t(g)] = 1;
    IntMat slot = S.slot_matrix(e);  // c-content per torsion generator of A
    std::vector<Int> traw(T.pairs().basis().size(), Int(0));
    for (int j = 0; j < slot.cols(); ++j)
      for (int i = 0; i < slot.rows(); ++i) {
        if (slot.at(i, j) == 0) continue;
        for (int bm = 0; bm < alpha.b().num_gens(); ++bm) {
          if (chi.at(bm, j) == 0) continue;
          auto it = tidx.find({bm, i});
          if (it != tidx.end()) traw[it->second] += chi.at(bm, j) * slot.at(i, j);
        }
      }
    m.set_col(g, T.pairs().canon_from_raw(traw));
  }
  return Homomorphism::between_canonical(S.value(), T.value(), std::move(m));
}

}  // namespace nilsq

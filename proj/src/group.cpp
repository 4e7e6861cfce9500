#include "nilsq/group.hpp"

#include <stdexcept>

namespace nilsq {

CanonicalGroup::CanonicalGroup(int free_rank, std::vector<Int> torsion)
    : free_rank_(free_rank), torsion_(std::move(torsion)) {
  if (free_rank < 0) throw std::invalid_argument("CanonicalGroup: negative rank");
  for (size_t i = 0; i < torsion_.size(); ++i) {
    if (torsion_[i] < 2) throw std::invalid_argument("CanonicalGroup: invariant factor < 2");
    if (i > 0 && torsion_[i] % torsion_[i - 1] != 0)
      throw std::invalid_argument("CanonicalGroup: divisibility chain violated");
  }
}

CanonicalGroup CanonicalGroup::cyclic(const Int& order) {
  if (order < 0) throw std::invalid_argument("cyclic: negative order");
  if (order == 0) return free_group(1);
  if (order == 1) return zero();
  return CanonicalGroup(0, {order});
}

CanonicalGroup CanonicalGroup::from_orders(const std::vector<Int>& orders) {
  int free_rank = 0;
  std::vector<Int> chain = divisibility_chain(orders, free_rank);
  return CanonicalGroup(free_rank, std::move(chain));
}

CanonicalGroup CanonicalGroup::direct_sum(const CanonicalGroup& a, const CanonicalGroup& b) {
  std::vector<Int> orders;
  orders.insert(orders.end(), a.torsion_.begin(), a.torsion_.end());
  orders.insert(orders.end(), b.torsion_.begin(), b.torsion_.end());
  for (int i = 0; i < a.free_rank_ + b.free_rank_; ++i) orders.push_back(0);
  return from_orders(orders);
}

Int CanonicalGroup::gen_order(int i) const {
  if (i < 0 || i >= num_gens()) throw std::out_of_range("gen_order: index");
  if (i < free_rank_) return 0;
  return torsion_[size_t(i - free_rank_)];
}

Int CanonicalGroup::order() const {
  if (free_rank_ > 0) return 0;
  Int o = 1;
  for (const Int& d : torsion_) o *= d;
  return o;
}

std::vector<Int> CanonicalGroup::reduce(std::vector<Int> x) const {
  if (int(x.size()) != num_gens()) throw std::invalid_argument("reduce: size mismatch");
  for (size_t i = 0; i < torsion_.size(); ++i) {
    Int& v = x[size_t(free_rank_) + i];
    v = mod_floor(v, torsion_[i]);
  }
  return x;
}

std::string CanonicalGroup::to_string() const {
  if (is_zero()) return "0";
  std::string s;
  if (free_rank_ == 1)
    s = "Z";
  else if (free_rank_ > 1)
    s = "Z^" + std::to_string(free_rank_);
  for (const Int& d : torsion_) {
    if (!s.empty()) s += " + ";
    s += "Z/" + d.str();
  }
  return s;
}

PresentedGroup::PresentedGroup(int gens, IntMat relations) : gens_(gens), rel_(std::move(relations)) {
  if (rel_.rows() != gens_) throw std::invalid_argument("PresentedGroup: relation rows != gens");

  // Detect the canonical diagonal presentation (free rows zero, one relation
  // column per torsion generator, orders a divisibility chain laid out after
  // the free block). In that case coordinates are the identity.
  SmithResult s = smith(rel_);
  int rank = s.rank;
  std::vector<Int> tor;
  std::vector<int> torsion_rows;
  for (int i = 0; i < rank; ++i)
    if (s.diag[size_t(i)] > 1) {
      tor.push_back(s.diag[size_t(i)]);
      torsion_rows.push_back(i);
    }
  canon_ = CanonicalGroup(gens_ - rank, tor);

  // Canonical generator order: free first (SNF rows rank..gens-1), then
  // torsion ascending (SNF rows with diag > 1).
  canon_row_.clear();
  for (int i = rank; i < gens_; ++i) canon_row_.push_back(i);
  for (int r : torsion_rows) canon_row_.push_back(r);

  // Fast path: the presentation is exactly the canonical one.
  identity_coords_ = true;
  if (rel_.cols() != int(tor.size()) || int(tor.size()) + canon_.free_rank() != gens_) {
    identity_coords_ = false;
  } else {
    for (int j = 0; j < rel_.cols() && identity_coords_; ++j)
      for (int i = 0; i < gens_; ++i) {
        Int expect = (i == canon_.free_rank() + j) ? tor[size_t(j)] : Int(0);
        if (rel_.at(i, j) != expect) {
          identity_coords_ = false;
          break;
        }
      }
  }
  if (identity_coords_) {
    canon_row_.clear();
    for (int i = 0; i < gens_; ++i) canon_row_.push_back(i);
  } else {
    u_ = s.U;
    uinv_ = s.Uinv;
  }
}

PresentedGroup PresentedGroup::from_canonical(const CanonicalGroup& g) {
  IntMat rel(g.num_gens(), int(g.torsion().size()));
  for (int j = 0; j < int(g.torsion().size()); ++j)
    rel.at(g.free_rank() + j, j) = g.torsion()[size_t(j)];
  return PresentedGroup(g.num_gens(), rel);
}

std::vector<Int> PresentedGroup::coords(const std::vector<Int>& x) const {
  if (int(x.size()) != gens_) throw std::invalid_argument("coords: size mismatch");
  if (identity_coords_) return canon_.reduce(x);
  std::vector<Int> z = u_.mul_vec(x);
  std::vector<Int> c(size_t(canon_.num_gens()));
  for (int g = 0; g < canon_.num_gens(); ++g) c[size_t(g)] = z[size_t(canon_row_[size_t(g)])];
  return canon_.reduce(c);
}

std::vector<Int> PresentedGroup::lift(const std::vector<Int>& c) const {
  if (int(c.size()) != canon_.num_gens()) throw std::invalid_argument("lift: size mismatch");
  if (identity_coords_) return canon_.reduce(c);
  std::vector<Int> z(size_t(gens_), Int(0));
  for (int g = 0; g < canon_.num_gens(); ++g) z[size_t(canon_row_[size_t(g)])] = c[size_t(g)];
  return uinv_.mul_vec(z);
}

IntMat PresentedGroup::coords_mat(const IntMat& x) const {
  if (x.rows() != gens_) throw std::invalid_argument("coords_mat: row mismatch");
  IntMat r(canon_.num_gens(), x.cols());
  for (int j = 0; j < x.cols(); ++j) r.set_col(j, coords(x.col(j)));
  return r;
}

IntMat PresentedGroup::lift_mat(const IntMat& c) const {
  if (c.rows() != canon_.num_gens()) throw std::invalid_argument("lift_mat: row mismatch");
  IntMat r(gens_, c.cols());
  for (int j = 0; j < c.cols(); ++j) r.set_col(j, lift(c.col(j)));
  return r;
}

bool PresentedGroup::elements_equal(const std::vector<Int>& x, const std::vector<Int>& y) const {
  return coords(x) == coords(y);
}

namespace {

bool columns_in_lattice(const IntMat& lattice, const IntMat& cols) {
  if (cols.is_zero()) return true;
  if (lattice.cols() == 0) return cols.is_zero();
  return solve_mat(lattice, cols).has_value();
}

}  // namespace

Homomorphism::Homomorphism(PresentedGroup dom, PresentedGroup cod, IntMat matrix)
    : Homomorphism(std::move(dom), std::move(cod), std::move(matrix), true) {}

Homomorphism::Homomorphism(PresentedGroup dom, PresentedGroup cod, IntMat matrix, bool check)
    : dom_(std::move(dom)), cod_(std::move(cod)), m_(std::move(matrix)) {
  if (m_.rows() != cod_.gens() || m_.cols() != dom_.gens())
    throw std::invalid_argument("Homomorphism: matrix shape mismatch");
  if (check) {
    IntMat carried = m_ * dom_.relations();
    if (!columns_in_lattice(cod_.relations(), carried))
      throw std::invalid_argument("Homomorphism: relations not carried into codomain lattice");
  }
}

Homomorphism unchecked_hom(PresentedGroup dom, PresentedGroup cod, IntMat matrix) {
  return Homomorphism(std::move(dom), std::move(cod), std::move(matrix), false);
}

Homomorphism Homomorphism::identity(const PresentedGroup& g) {
  return unchecked_hom(g, g, IntMat::identity(g.gens()));
}

Homomorphism Homomorphism::zero(const PresentedGroup& dom, const PresentedGroup& cod) {
  return unchecked_hom(dom, cod, IntMat::zero(cod.gens(), dom.gens()));
}

Homomorphism Homomorphism::between_canonical(const CanonicalGroup& dom, const CanonicalGroup& cod,
                                             IntMat matrix) {
  return Homomorphism(PresentedGroup::from_canonical(dom), PresentedGroup::from_canonical(cod),
                      std::move(matrix));
}

std::vector<Int> Homomorphism::apply_canonical(const std::vector<Int>& c) const {
  return cod_.coords(m_.mul_vec(dom_.lift(c)));
}

IntMat Homomorphism::canonical_matrix() const {
  IntMat r(cod_.canon().num_gens(), dom_.canon().num_gens());
  for (int j = 0; j < dom_.canon().num_gens(); ++j) {
    std::vector<Int> e(size_t(dom_.canon().num_gens()), Int(0));
    e[size_t(j)] = 1;
    r.set_col(j, apply_canonical(e));
  }
  return r;
}

Homomorphism Homomorphism::compose(const Homomorphism& inner) const {
  if (inner.cod_.gens() != dom_.gens())
    throw std::invalid_argument("compose: middle group mismatch");
  return unchecked_hom(inner.dom_, cod_, m_ * inner.m_);
}

Homomorphism Homomorphism::operator+(const Homomorphism& o) const {
  return unchecked_hom(dom_, cod_, m_ + o.m_);
}

Homomorphism Homomorphism::operator-(const Homomorphism& o) const {
  return unchecked_hom(dom_, cod_, m_ - o.m_);
}

Homomorphism Homomorphism::negated() const { return unchecked_hom(dom_, cod_, -m_); }

Homomorphism Homomorphism::scaled(const Int& c) const {
  return unchecked_hom(dom_, cod_, m_.scaled(c));
}

bool Homomorphism::is_zero() const { return columns_in_lattice(cod_.relations(), m_); }

bool Homomorphism::equal(const Homomorphism& o) const {
  if (m_.rows() != o.m_.rows() || m_.cols() != o.m_.cols()) return false;
  return columns_in_lattice(cod_.relations(), m_ - o.m_);
}

Subquotient kernel(const Homomorphism& f) {
  // x in ker(f) iff f(x) lies in the codomain relation lattice. Solve
  // [M | R_cod] * (x; y)^T = 0 and project the kernel lattice onto x.
  const IntMat& M = f.matrix();
  const IntMat& Rc = f.cod().relations();
  IntMat stacked = IntMat::hstack(M, Rc);
  IntMat K = kernel_basis(stacked);
  IntMat L = K.submatrix(0, f.dom().gens(), 0, K.cols());
  // The admissible lattice L contains the domain relation lattice; a clean
  // basis for it:
  IntMat B = column_hnf(IntMat::hstack(L, f.dom().relations()));
  // Relations of the subgroup: w with B w in the domain relation lattice.
  IntMat stacked2 = IntMat::hstack(B, f.dom().relations());
  IntMat K2 = kernel_basis(stacked2);
  IntMat W = K2.submatrix(0, B.cols(), 0, K2.cols());
  PresentedGroup ker_group(B.cols(), column_hnf(W));
  Homomorphism incl = unchecked_hom(ker_group, f.dom(), B);
  return {ker_group, incl};
}

Subquotient image(const Homomorphism& f) {
  // Lattice spanned by the image columns together with codomain relations,
  // modulo codomain relations.
  IntMat B = column_hnf(IntMat::hstack(f.matrix(), f.cod().relations()));
  IntMat stacked = IntMat::hstack(B, f.cod().relations());
  IntMat K = kernel_basis(stacked);
  IntMat W = K.submatrix(0, B.cols(), 0, K.cols());
  PresentedGroup im_group(B.cols(), column_hnf(W));
  Homomorphism incl = unchecked_hom(im_group, f.cod(), B);
  return {im_group, incl};
}

Subquotient cokernel(const Homomorphism& f) {
  IntMat rel = IntMat::hstack(f.cod().relations(), f.matrix());
  PresentedGroup coker_group(f.cod().gens(), rel);
  Homomorphism proj = unchecked_hom(f.cod(), coker_group, IntMat::identity(f.cod().gens()));
  return {coker_group, proj};
}

std::vector<std::vector<Int>> enumerate_elements(const CanonicalGroup& g) {
  if (!g.is_finite()) throw std::runtime_error("infinite enumeration");
  Int order = g.order();
  if (order > 65536) throw std::runtime_error("enumeration cap exceeded (2^16)");
  std::vector<std::vector<Int>> out;
  out.reserve(size_t(order));
  std::vector<Int> cur(size_t(g.num_gens()), Int(0));
  while (true) {
    out.push_back(cur);
    int i = g.num_gens() - 1;
    while (i >= 0) {
      cur[size_t(i)] += 1;
      if (cur[size_t(i)] < g.gen_order(i)) break;
      cur[size_t(i)] = 0;
      --i;
    }
    if (i < 0) break;
  }
  return out;
}

}  // namespace nilsq

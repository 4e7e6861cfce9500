#include "nilsq/quadratic.hpp"

#include <stdexcept>
#include <utility>

#include "nilsq/snf.hpp"

namespace nilsq {

QuadraticZModule::QuadraticZModule(CanonicalGroup e, CanonicalGroup ee, IntMat h, IntMat p)
    : e_(std::move(e)), ee_(std::move(ee)), h_(std::move(h)), p_(std::move(p)) {
  if (h_.rows() != ee_.num_gens() || h_.cols() != e_.num_gens())
    throw std::invalid_argument("quadratic module: H has wrong shape");
  if (p_.rows() != e_.num_gens() || p_.cols() != ee_.num_gens())
    throw std::invalid_argument("quadratic module: P has wrong shape");
  Homomorphism h_map = Homomorphism::between_canonical(e_, ee_, h_);
  Homomorphism p_map = Homomorphism::between_canonical(ee_, e_, p_);
  Homomorphism hph = Homomorphism::between_canonical(e_, ee_, h_ * p_ * h_);
  Homomorphism php = Homomorphism::between_canonical(ee_, e_, p_ * h_ * p_);
  if (!hph.equal(h_map.scaled(2)))
    throw std::invalid_argument("quadratic module: HPH != 2H");
  if (!php.equal(p_map.scaled(2)))
    throw std::invalid_argument("quadratic module: PHP != 2P");
}

Homomorphism QuadraticZModule::h_hom() const {
  return Homomorphism::between_canonical(e_, ee_, h_);
}

Homomorphism QuadraticZModule::p_hom() const {
  return Homomorphism::between_canonical(ee_, e_, p_);
}

QuadraticZModule QuadraticZModule::tensor_square() {
  return QuadraticZModule(CanonicalGroup::free_group(1), CanonicalGroup::free_group(2),
                          IntMat::from_rows({{1}, {1}}), IntMat::from_rows({{1, 1}}));
}

QuadraticZModule QuadraticZModule::exterior_square() {
  return QuadraticZModule(CanonicalGroup::zero(), CanonicalGroup::free_group(1), IntMat(1, 0),
                          IntMat(0, 1));
}

QuadraticZModule QuadraticZModule::divided_square() {
  return QuadraticZModule(CanonicalGroup::free_group(1), CanonicalGroup::free_group(1),
                          IntMat::from_rows({{1}}), IntMat::from_rows({{2}}));
}

QuadraticZModule QuadraticZModule::symmetric_square() {
  return QuadraticZModule(CanonicalGroup::free_group(1), CanonicalGroup::free_group(1),
                          IntMat::from_rows({{2}}), IntMat::from_rows({{1}}));
}

QuadraticZModule QuadraticZModule::mod_two() {
  return QuadraticZModule(CanonicalGroup::cyclic(2), CanonicalGroup::zero(), IntMat(0, 1),
                          IntMat(1, 0));
}

std::string QuadraticZModule::to_string() const {
  std::string s = "(M_e=" + e_.to_string() + ", M_ee=" + ee_.to_string();
  s += ", H=" + h_.to_string() + ", P=" + p_.to_string() + ")";
  return s;
}

IntMat quad_free_induced(const QuadraticZModule& m, const IntMat& f) {
  QuadBasis tgt(f.rows(), m);
  QuadBasis src(f.cols(), m);
  const int me = tgt.me, mee = tgt.mee;
  IntMat ph = m.p() * m.h();    // me x me
  IntMat hpm1 = m.h() * m.p();  // mee x mee, HP - 1 below
  for (int b = 0; b < mee; ++b) hpm1.at(b, b) -= 1;
  IntMat out(tgt.rank(), src.rank());

  // e-generators e_k (x) m_a.
  for (int k = 0; k < src.r; ++k) {
    for (int a = 0; a < me; ++a) {
      const int col = src.e_index(k, a);
      for (int i = 0; i < tgt.r; ++i) {
        const Int& ci = f.at(i, k);
        if (ci == 0) continue;
        out.at(tgt.e_index(i, a), col) += ci;
        Int c2 = ci * (ci - 1) / 2;
        if (c2 != 0)
          for (int a2 = 0; a2 < me; ++a2)
            out.at(tgt.e_index(i, a2), col) += c2 * ph.at(a2, a);
        for (int l = i + 1; l < tgt.r; ++l) {
          const Int& cl = f.at(l, k);
          if (cl == 0) continue;
          Int cc = ci * cl;
          for (int b = 0; b < mee; ++b)
            out.at(tgt.ee_index(i, l, b), col) += cc * m.h().at(b, a);
        }
      }
    }
  }

  // ee-generators [e_k, e_l] (x) n_b, k < l; bilinear with folding rules.
  for (int k = 0; k < src.r; ++k) {
    for (int l = k + 1; l < src.r; ++l) {
      for (int b = 0; b < mee; ++b) {
        const int col = src.ee_index(k, l, b);
        for (int i = 0; i < tgt.r; ++i) {
          const Int& ci = f.at(i, k);
          if (ci == 0) continue;
          for (int j = 0; j < tgt.r; ++j) {
            const Int& dj = f.at(j, l);
            if (dj == 0) continue;
            Int cd = ci * dj;
            if (i < j) {
              out.at(tgt.ee_index(i, j, b), col) += cd;
            } else if (i == j) {
              for (int a = 0; a < me; ++a)
                out.at(tgt.e_index(i, a), col) += cd * m.p().at(a, b);
            } else {
              for (int b2 = 0; b2 < mee; ++b2)
                out.at(tgt.ee_index(j, i, b2), col) += cd * hpm1.at(b2, b);
            }
          }
        }
      }
    }
  }
  return out;
}

IntMat quad_free_relations(const QuadraticZModule& m, int r) {
  QuadBasis qb(r, m);
  int ncols = 0;
  for (int a = 0; a < qb.me; ++a)
    if (m.e().gen_order(a) != 0) ncols += r;
  for (int b = 0; b < qb.mee; ++b)
    if (m.ee().gen_order(b) != 0) ncols += qb.pairs();
  IntMat rel(qb.rank(), ncols);
  int c = 0;
  for (int i = 0; i < r; ++i)
    for (int a = 0; a < qb.me; ++a) {
      Int d = m.e().gen_order(a);
      if (d != 0) rel.at(qb.e_index(i, a), c++) = d;
    }
  for (int i = 0; i < r; ++i)
    for (int j = i + 1; j < r; ++j)
      for (int b = 0; b < qb.mee; ++b) {
        Int d = m.ee().gen_order(b);
        if (d != 0) rel.at(qb.ee_index(i, j, b), c++) = d;
      }
  return rel;
}

PresentedGroup quad_free_tensor(const QuadraticZModule& m, int r) {
  QuadBasis qb(r, m);
  return PresentedGroup(qb.rank(), quad_free_relations(m, r));
}

namespace {

// HP - 1 on the ee-generators; an involution by the module laws.
IntMat hp_minus_one(const QuadraticZModule& m) {
  IntMat hpm1 = m.h() * m.p();
  for (int b = 0; b < m.ee().num_gens(); ++b) hpm1.at(b, b) -= 1;
  return hpm1;
}

// Fold the formal bracket [x_k, x_l] (x) n_b (indices into a rank-r basis)
// into the basis of (Z^r) (x) M, scaled by `c`, accumulating into column
// `col` of `out` with row offset `off`.
void fold_bracket(IntMat& out, int off, int col, const QuadBasis& qb, const QuadraticZModule& m,
                  const IntMat& hpm1, int k, int l, int b, const Int& c) {
  if (k < l) {
    out.at(off + qb.ee_index(k, l, b), col) += c;
  } else if (k == l) {
    for (int a = 0; a < qb.me; ++a) out.at(off + qb.e_index(k, a), col) += c * m.p().at(a, b);
  } else {
    for (int b2 = 0; b2 < qb.mee; ++b2)
      out.at(off + qb.ee_index(l, k, b2), col) += c * hpm1.at(b2, b);
  }
}

}  // namespace

QuadComplex quad_complex_presented(const IntMat& rel, const QuadraticZModule& m) {
  const int r0 = rel.rows(), r1 = rel.cols();
  const int mee = m.ee().num_gens();
  QuadBasis q0(r0, m), q1(r1, m);
  IntMat hpm1 = hp_minus_one(m);

  PresentedGroup c0 = quad_free_tensor(m, r0);

  // c1 = (Y1 (x) M) (+) (Y1 (x) Y0 (x) M_ee), mixed slot (i,j,b) at
  // q1.rank() + (i*r0 + j)*mee + b.
  const int mixed = r1 * r0 * mee;
  const int n1 = q1.rank() + mixed;
  auto mixed_index = [&](int i, int j, int b) { return q1.rank() + (i * r0 + j) * mee + b; };
  IntMat qrel = quad_free_relations(m, r1);
  int mt = 0;
  for (int b = 0; b < mee; ++b)
    if (m.ee().gen_order(b) != 0) mt += r1 * r0;
  IntMat rel1(n1, qrel.cols() + mt);
  for (int r = 0; r < qrel.rows(); ++r)
    for (int c = 0; c < qrel.cols(); ++c) rel1.at(r, c) = qrel.at(r, c);
  {
    int c = qrel.cols();
    for (int i = 0; i < r1; ++i)
      for (int j = 0; j < r0; ++j)
        for (int b = 0; b < mee; ++b) {
          Int d = m.ee().gen_order(b);
          if (d != 0) rel1.at(mixed_index(i, j, b), c++) = d;
        }
  }
  PresentedGroup c1(n1, rel1);

  // c2 = Y1 (x) Y1 (x) M_ee over all ordered pairs, slot (k,l,b) at
  // (k*r1 + l)*mee + b.
  const int n2 = r1 * r1 * mee;
  auto c2_index = [&](int k, int l, int b) { return (k * r1 + l) * mee + b; };
  int t2 = 0;
  for (int b = 0; b < mee; ++b)
    if (m.ee().gen_order(b) != 0) t2 += r1 * r1;
  IntMat rel2(n2, t2);
  {
    int c = 0;
    for (int k = 0; k < r1; ++k)
      for (int l = 0; l < r1; ++l)
        for (int b = 0; b < mee; ++b) {
          Int d = m.ee().gen_order(b);
          if (d != 0) rel2.at(c2_index(k, l, b), c++) = d;
        }
  }
  PresentedGroup c2(n2, rel2);

  // delta1: the Y1 (x) M block is the induced map of the presentation matrix;
  // a mixed generator a_i (x) e_j (x) n_b maps to the bracket [d(a_i), e_j] (x) n_b.
  IntMat d1(q0.rank(), n1);
  {
    IntMat left = quad_free_induced(m, rel);
    for (int r = 0; r < q0.rank(); ++r)
      for (int c = 0; c < q1.rank(); ++c) d1.at(r, c) = left.at(r, c);
    for (int i = 0; i < r1; ++i)
      for (int j = 0; j < r0; ++j)
        for (int b = 0; b < mee; ++b) {
          int col = mixed_index(i, j, b);
          for (int w = 0; w < r0; ++w) {
            const Int& cw = rel.at(w, i);
            if (cw == 0) continue;
            fold_bracket(d1, 0, col, q0, m, hpm1, w, j, b, cw);
          }
        }
  }
  Homomorphism delta1(c1, c0, d1);

  // delta2: a_k (x) a_l (x) n_b  |->  [a_k, a_l] (x) n_b - a_k (x) d(a_l) (x) n_b.
  IntMat d2(n1, n2);
  for (int k = 0; k < r1; ++k)
    for (int l = 0; l < r1; ++l)
      for (int b = 0; b < mee; ++b) {
        int col = c2_index(k, l, b);
        fold_bracket(d2, 0, col, q1, m, hpm1, k, l, b, Int(1));
        for (int j = 0; j < r0; ++j) {
          const Int& cj = rel.at(j, l);
          if (cj != 0) d2.at(mixed_index(k, j, b), col) -= cj;
        }
      }
  Homomorphism delta2(c2, c1, d2);

  return {m, rel, std::move(c0), std::move(c1), std::move(c2), std::move(delta1),
          std::move(delta2)};
}

QuadComplex quad_complex(const CanonicalGroup& a, const QuadraticZModule& m) {
  return quad_complex_presented(minimal_resolution(a).d, m);
}

QuadTensorData quad_tensor_data(const CanonicalGroup& a, const QuadraticZModule& m) {
  QuadComplex cx = quad_complex(a, m);
  Subquotient q = cokernel(cx.delta1);  // keeps the generators of c0
  return {std::move(cx), std::move(q.group)};
}

std::vector<Int> QuadTensorData::element(const std::vector<Int>& a_coords, int m_e_gen) const {
  const int r0 = cx.y0();
  const int me = cx.m.e().num_gens(), mee = cx.m.ee().num_gens();
  if (static_cast<int>(a_coords.size()) != r0)
    throw std::invalid_argument("element: coordinate length mismatch");
  if (m_e_gen < 0 || m_e_gen >= me) throw std::invalid_argument("element: no such generator");
  QuadBasis q0(r0, cx.m);
  IntMat ph = cx.m.p() * cx.m.h();
  std::vector<Int> v(static_cast<size_t>(cx.c0.gens()), Int(0));
  for (int i = 0; i < r0; ++i) {
    const Int& ci = a_coords[i];
    if (ci == 0) continue;
    v[q0.e_index(i, m_e_gen)] += ci;
    Int c2 = ci * (ci - 1) / 2;
    if (c2 != 0)
      for (int a2 = 0; a2 < me; ++a2) v[q0.e_index(i, a2)] += c2 * ph.at(a2, m_e_gen);
    for (int l = i + 1; l < r0; ++l) {
      const Int& cl = a_coords[l];
      if (cl == 0) continue;
      Int cc = ci * cl;
      for (int b = 0; b < mee; ++b) v[q0.ee_index(i, l, b)] += cc * cx.m.h().at(b, m_e_gen);
    }
  }
  return quotient.coords(v);
}

std::vector<Int> QuadTensorData::pair_element(const std::vector<Int>& a_coords,
                                              const std::vector<Int>& a2_coords,
                                              int m_ee_gen) const {
  const int r0 = cx.y0();
  const int mee = cx.m.ee().num_gens();
  if (static_cast<int>(a_coords.size()) != r0 || static_cast<int>(a2_coords.size()) != r0)
    throw std::invalid_argument("pair_element: coordinate length mismatch");
  if (m_ee_gen < 0 || m_ee_gen >= mee)
    throw std::invalid_argument("pair_element: no such generator");
  QuadBasis q0(r0, cx.m);
  IntMat hpm1 = hp_minus_one(cx.m);
  IntMat acc(cx.c0.gens(), 1);
  for (int i = 0; i < r0; ++i) {
    const Int& ci = a_coords[i];
    if (ci == 0) continue;
    for (int j = 0; j < r0; ++j) {
      const Int& dj = a2_coords[j];
      if (dj == 0) continue;
      fold_bracket(acc, 0, 0, q0, cx.m, hpm1, i, j, m_ee_gen, ci * dj);
    }
  }
  std::vector<Int> v(static_cast<size_t>(cx.c0.gens()));
  for (int r = 0; r < cx.c0.gens(); ++r) v[static_cast<size_t>(r)] = acc.at(r, 0);
  return quotient.coords(v);
}

CanonicalGroup quad_tensor(const CanonicalGroup& a, const QuadraticZModule& m) {
  return quad_tensor_data(a, m).value();
}

CanonicalGroup quad_tensor_presented(const IntMat& rel, const QuadraticZModule& m) {
  QuadComplex cx = quad_complex_presented(rel, m);
  return cokernel(cx.delta1).group.canon();
}

QuadTorsionData quad_torsion_data_presented(const IntMat& rel, const QuadraticZModule& m) {
  QuadComplex cx = quad_complex_presented(rel, m);
  Subquotient k1 = kernel(cx.delta1);
  // Factor delta2 through the inclusion of the kernel: solve
  // [B | R_c1] * (x; y) = delta2 and keep the kernel coordinates x.
  IntMat big = IntMat::hstack(k1.map.matrix(), cx.c1.relations());
  auto sol = solve_mat(big, cx.delta2.matrix());
  if (!sol) throw std::logic_error("quadratic torsion: delta2 does not land in ker(delta1)");
  IntMat fac = sol->submatrix(0, k1.group.gens(), 0, sol->cols());
  Homomorphism factored(cx.c2, k1.group, fac);
  Subquotient prime = cokernel(factored);
  CanonicalGroup dp = kernel(cx.delta2).group.canon();
  return {std::move(cx), std::move(k1), std::move(factored), std::move(prime), std::move(dp)};
}

QuadTorsionData quad_torsion_data(const CanonicalGroup& a, const QuadraticZModule& m) {
  return quad_torsion_data_presented(minimal_resolution(a).d, m);
}

QuadTorsionPair quad_torsion(const CanonicalGroup& a, const QuadraticZModule& m) {
  return quad_torsion_data(a, m).pair();
}

QuadTorsionPair quad_torsion_presented(const IntMat& rel, const QuadraticZModule& m) {
  return quad_torsion_data_presented(rel, m).pair();
}

Homomorphism quad_tensor_induced(const Homomorphism& f, const QuadraticZModule& m) {
  const CanonicalGroup& a = f.dom().canon();
  const CanonicalGroup& b = f.cod().canon();
  ResLift lf = lift_to_resolutions(a, b, f.canonical_matrix());
  QuadTensorData da = quad_tensor_data(a, m);
  QuadTensorData db = quad_tensor_data(b, m);
  Homomorphism q(da.quotient, db.quotient, quad_free_induced(m, lf.f0));
  return Homomorphism::between_canonical(da.value(), db.value(), q.canonical_matrix());
}

Homomorphism quad_torsion_induced(const Homomorphism& f, const QuadraticZModule& m) {
  const CanonicalGroup& a = f.dom().canon();
  const CanonicalGroup& b = f.cod().canon();
  ResLift lf = lift_to_resolutions(a, b, f.canonical_matrix());
  QuadTorsionData da = quad_torsion_data(a, m);
  QuadTorsionData db = quad_torsion_data(b, m);
  const int r0a = da.cx.y0(), r1a = da.cx.y1();
  const int r0b = db.cx.y0(), r1b = db.cx.y1();
  const int mee = m.ee().num_gens();
  QuadBasis q1a(r1a, m), q1b(r1b, m);

  // Chain map on c1: induced map of f1 on the Y1 (x) M block, f1 (x) f0 (x) id
  // on the mixed block.
  IntMat c1map(db.cx.c1.gens(), da.cx.c1.gens());
  IntMat tf1 = quad_free_induced(m, lf.f1);
  for (int r = 0; r < tf1.rows(); ++r)
    for (int c = 0; c < tf1.cols(); ++c) c1map.at(r, c) = tf1.at(r, c);
  for (int i = 0; i < r1a; ++i)
    for (int j = 0; j < r0a; ++j)
      for (int k = 0; k < r1b; ++k) {
        const Int& fk = lf.f1.at(k, i);
        if (fk == 0) continue;
        for (int l = 0; l < r0b; ++l) {
          const Int& fl = lf.f0.at(l, j);
          if (fl == 0) continue;
          Int prod = fk * fl;
          for (int b = 0; b < mee; ++b)
            c1map.at(q1b.rank() + (k * r0b + l) * mee + b,
                     q1a.rank() + (i * r0a + j) * mee + b) += prod;
        }
      }

  // Restrict to the kernels of delta1 and descend through the cokernels of
  // the factored delta2.
  IntMat img = c1map * da.ker1.map.matrix();
  IntMat big = IntMat::hstack(db.ker1.map.matrix(), db.cx.c1.relations());
  auto sol = solve_mat(big, img);
  if (!sol) throw std::logic_error("quadratic torsion: induced map does not preserve kernels");
  IntMat kk = sol->submatrix(0, db.ker1.group.gens(), 0, sol->cols());
  Homomorphism pr(da.prime.group, db.prime.group, kk);
  return Homomorphism::between_canonical(da.prime.group.canon(), db.prime.group.canon(),
                                         pr.canonical_matrix());
}

namespace {

QuadraticZModule classical_module(ClassicalKind kind) {
  switch (kind) {
    case ClassicalKind::lambda2:
    case ClassicalKind::omega:
      return QuadraticZModule::exterior_square();
    case ClassicalKind::gamma:
    case ClassicalKind::r:
      return QuadraticZModule::divided_square();
    case ClassicalKind::sp2:
      return QuadraticZModule::symmetric_square();
    case ClassicalKind::tensor_square:
      return QuadraticZModule::tensor_square();
    case ClassicalKind::tensor_z2:
      return QuadraticZModule::mod_two();
  }
  throw std::logic_error("classical_module: unreachable");
}

bool classical_is_torsion(ClassicalKind kind) {
  return kind == ClassicalKind::omega || kind == ClassicalKind::r;
}

}  // namespace

CanonicalGroup classical(ClassicalKind kind, const CanonicalGroup& a) {
  QuadraticZModule m = classical_module(kind);
  if (classical_is_torsion(kind)) return quad_torsion(a, m).prime;
  return quad_tensor(a, m);
}

Homomorphism classical_induced(ClassicalKind kind, const Homomorphism& f) {
  QuadraticZModule m = classical_module(kind);
  if (classical_is_torsion(kind)) return quad_torsion_induced(f, m);
  return quad_tensor_induced(f, m);
}

CanonicalGroup cross_effect(const QuadraticZModule& m, const CanonicalGroup& a,
                            const CanonicalGroup& b) {
  Resolution ra = minimal_resolution(a);
  Resolution rb = minimal_resolution(b);
  IntMat rel = IntMat::block_diag(ra.d, rb.d);
  QuadComplex cab = quad_complex_presented(rel, m);
  Subquotient qab = cokernel(cab.delta1);

  QuadTensorData da = quad_tensor_data(a, m);
  QuadTensorData db = quad_tensor_data(b, m);
  const int na = a.num_gens(), nb = b.num_gens();
  IntMat ret_a(na, na + nb), ret_b(nb, na + nb);
  for (int i = 0; i < na; ++i) ret_a.at(i, i) = 1;
  for (int i = 0; i < nb; ++i) ret_b.at(i, na + i) = 1;
  IntMat t = IntMat::vstack(quad_free_induced(m, ret_a), quad_free_induced(m, ret_b));
  PresentedGroup tgt(da.quotient.gens() + db.quotient.gens(),
                     IntMat::block_diag(da.quotient.relations(), db.quotient.relations()));
  Homomorphism retract(qab.group, tgt, t);
  return kernel(retract).group.canon();
}

QuadraticZModule l_module(const CanonicalGroup& a) {
  const int f = a.free_rank();
  const auto& tors = a.torsion();
  std::vector<int> evens;
  for (size_t j = 0; j < tors.size(); ++j)
    if (tors[j] % 2 == 0) evens.push_back(static_cast<int>(j));
  // Hom(A, Z/2): one Z/2 per free generator, then one per even torsion factor.
  const int he = f + static_cast<int>(evens.size());
  CanonicalGroup e(0, std::vector<Int>(static_cast<size_t>(he), Int(2)));
  // Ext(A, Z): the torsion of A.
  CanonicalGroup ee(0, tors);
  IntMat h(static_cast<int>(tors.size()), he);
  for (size_t s = 0; s < evens.size(); ++s)
    h.at(evens[s], f + static_cast<int>(s)) = tors[static_cast<size_t>(evens[s])] / 2;
  IntMat p(he, static_cast<int>(tors.size()));
  return QuadraticZModule(std::move(e), std::move(ee), std::move(h), std::move(p));
}

GradedGroup graded_square(SquareKind kind, const GradedGroup& b) {
  for (const auto& [deg, g] : b.parts()) {
    (void)g;
    if (deg <= 0) throw std::invalid_argument("graded square: support must be in degrees >= 1");
  }
  GradedGroup out;
  if (b.parts().empty()) return out;
  const int hi = b.parts().rbegin()->first;
  std::map<int, CanonicalGroup> acc;
  auto add = [&](int deg, const CanonicalGroup& g) {
    if (g.is_zero()) return;
    auto it = acc.find(deg);
    if (it == acc.end())
      acc.emplace(deg, g);
    else
      it->second = CanonicalGroup::direct_sum(it->second, g);
  };
  const BinKind bin = (kind == SquareKind::tensor) ? BinKind::tensor : BinKind::tor;
  for (int i = 1; i <= hi; ++i) {
    CanonicalGroup bi = b.at(i);
    if (bi.is_zero()) continue;
    for (int j = 1; j < i; ++j) {
      CanonicalGroup aug = b.at(j);
      if (j % 2 == 1) aug = CanonicalGroup::direct_sum(aug, CanonicalGroup::cyclic(2));
      add(i + j, binary_functor(bin, bi, aug));
    }
    CanonicalGroup diag;
    if (kind == SquareKind::tensor)
      diag = (i % 2 == 1) ? classical(ClassicalKind::gamma, bi)
                          : classical(ClassicalKind::lambda2, bi);
    else
      diag = (i % 2 == 1) ? classical(ClassicalKind::r, bi) : classical(ClassicalKind::omega, bi);
    add(2 * i, diag);
  }
  for (const auto& [deg, g] : acc) out.set(deg, g);
  return out;
}

}  // namespace nilsq

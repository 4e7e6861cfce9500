#include "nilsq/sqcalc.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"

#include "nilsq/snf.hpp"

namespace nilsq {
namespace {

CanonicalGroup zee() { return CanonicalGroup::free_group(1); }
CanonicalGroup ztwo() { return CanonicalGroup::cyclic(2); }

Homomorphism zero_between(const CanonicalGroup& dom, const CanonicalGroup& cod) {
  return Homomorphism::between_canonical(dom, cod, IntMat(cod.num_gens(), dom.num_gens()));
}

Homomorphism identity_on(const CanonicalGroup& g) {
  return Homomorphism::between_canonical(g, g, IntMat::identity(g.num_gens()));
}

// Ordered direct sum with tracked inclusions and projections. The canonical
// form of the total agrees with CanonicalGroup::direct_sum over the parts.
struct SumEmbedding {
  CanonicalGroup total;
  std::vector<Homomorphism> incl, proj;
};

SumEmbedding sum_embedding(const std::vector<CanonicalGroup>& parts) {
  IntMat rel(0, 0);
  int gens = 0;
  for (const auto& g : parts) {
    rel = IntMat::block_diag(rel, PresentedGroup::from_canonical(g).relations());
    gens += g.num_gens();
  }
  PresentedGroup ps(gens, rel);
  SumEmbedding out;
  out.total = ps.canon();
  IntMat lift = ps.lift_mat(IntMat::identity(out.total.num_gens()));
  int off = 0;
  for (const auto& g : parts) {
    int n = g.num_gens();
    IntMat emb(gens, n);
    for (int k = 0; k < n; ++k) emb.at(off + k, k) = 1;
    out.incl.push_back(Homomorphism::between_canonical(g, out.total, ps.coords_mat(emb)));
    out.proj.push_back(Homomorphism::between_canonical(
        out.total, g, lift.submatrix(off, off + n, 0, out.total.num_gens())));
    off += n;
  }
  return out;
}

// |group| must equal |Ext(A, ext_arg)| * |Hom(A, hom_arg)| whenever finite.
void enforce_order(const CanonicalGroup& group, const CanonicalGroup& ext_arg,
                   const CanonicalGroup& hom_arg, const CanonicalGroup& a, const char* what) {
  if (!group.is_finite()) return;
  CanonicalGroup eg = binary_functor(BinKind::ext, a, ext_arg);
  CanonicalGroup hg = binary_functor(BinKind::hom, a, hom_arg);
  if (!hg.is_finite() || group.order() != eg.order() * hg.order())
    throw std::logic_error(std::string(what) + ": sequence order mismatch");
}

SqSummand ext_summand(std::string label, std::string origin, const CanonicalGroup& a,
                      const CanonicalGroup& earg) {
  CanonicalGroup g = binary_functor(BinKind::ext, a, earg);
  SqSummand s{std::move(label), std::move(origin), g,        earg,
              CanonicalGroup(), identity_on(g),    zero_between(g, CanonicalGroup())};
  enforce_order(s.group, s.ext_arg, s.hom_arg, a, "Ext summand");
  return s;
}

SqSummand hom_summand(std::string label, std::string origin, const CanonicalGroup& a,
                      const CanonicalGroup& harg) {
  CanonicalGroup g = binary_functor(BinKind::hom, a, harg);
  SqSummand s{std::move(label), std::move(origin), g,
              CanonicalGroup(), harg,
              zero_between(CanonicalGroup(), g), identity_on(g)};
  enforce_order(s.group, s.ext_arg, s.hom_arg, a, "Hom summand");
  return s;
}

SqSummand bype_summand(std::string label, std::string origin, const BypeValue& v) {
  return SqSummand{std::move(label), std::move(origin), v.group, v.ext_arg,
                   v.hom_arg,        v.delta,           v.mu};
}

SqValue make_value(std::vector<SqSummand> summands) {
  CanonicalGroup g;
  for (const auto& s : summands) g = CanonicalGroup::direct_sum(g, s.group);
  return SqValue{g, std::move(summands)};
}

// lambdaT / gammaT: the three-term complex of the constant module over the
// minimal resolution of B, mapped into from the resolution of A.
BypeValue t_functor(const QuadraticZModule& m, const CanonicalGroup& a,
                    const CanonicalGroup& b) {
  QuadComplex cx = quad_complex(b, m);
  if (cx.c0.relations().cols() != 0 || cx.c1.relations().cols() != 0 ||
      cx.c2.relations().cols() != 0)
    throw std::logic_error("t_functor: expected a torsion-free constant module");
  ChainComplex y(0, {cx.c0.gens(), cx.c1.gens(), cx.c2.gens()},
                 {cx.delta1.matrix(), cx.delta2.matrix()});
  PseudoHomology ph = pseudo_homology(a, 0, y);
  BypeValue v{ph.group, ph.h_n1.group, ph.h_n.group, ph.Delta, ph.mu};
  enforce_order(v.group, v.ext_arg, v.hom_arg, a, "T functor");
  return v;
}

// L#(A,B) = B (x) L(A) with the sequence
//   Ext(A, Lambda^2 B) >--delta--> L#(A,B) --mu->> Hom(A, B (x) Z2)
// built slot-wise on the 0-level of the pairing complex.
BypeValue lsharp_value(const CanonicalGroup& a, const CanonicalGroup& b) {
  const QuadraticZModule lm = l_module(a);
  QuadTensorData data = quad_tensor_data(b, lm);
  const CanonicalGroup value = data.value();
  const int r0 = data.cx.y0();
  const int me = lm.e().num_gens();
  const int mee = lm.ee().num_gens();
  const int tors_a = int(a.torsion().size());
  if (mee != tors_a) throw std::logic_error("lsharp: ee basis mismatch");

  // e-generators of L(A) are duals: free duals first, then duals of the even
  // torsion generators; dual_src maps each to its generator of A.
  std::vector<int> dual_src;
  for (int s = 0; s < a.free_rank(); ++s) dual_src.push_back(s);
  for (int j = 0; j < tors_a; ++j)
    if (a.torsion()[size_t(j)] % 2 == 0) dual_src.push_back(a.free_rank() + j);
  if (int(dual_src.size()) != me) throw std::logic_error("lsharp: dual basis mismatch");

  // Hom end: B (x) Z2, with slot coordinates shared through its own pairing.
  QuadTensorData tz2 = quad_tensor_data(b, QuadraticZModule::mod_two());
  const CanonicalGroup bz2 = tz2.value();
  HomGroup hg(a, bz2);
  PresentedGroup hom_pres = PresentedGroup::from_canonical(hg.value());

  QuadBasis qb(r0, lm);
  IntMat mu_cols(hom_pres.gens(), data.cx.c0.gens());
  for (int i = 0; i < r0; ++i) {
    std::vector<Int> unit(size_t(tz2.cx.c0.gens()), Int(0));
    unit[size_t(i)] = 1;
    std::vector<Int> ebar = tz2.quotient.coords(unit);  // class of e_i (x) 1
    for (int t = 0; t < me; ++t) {
      IntMat fm(bz2.num_gens(), a.num_gens());
      for (int rg = 0; rg < bz2.num_gens(); ++rg) fm.at(rg, dual_src[size_t(t)]) = ebar[size_t(rg)];
      std::vector<Int> c = hg.from_matrix(fm);
      for (int rg = 0; rg < hom_pres.gens(); ++rg) mu_cols.at(rg, qb.e_index(i, t)) = c[size_t(rg)];
    }
  }
  Homomorphism mu_pres(data.quotient, hom_pres, mu_cols);
  Homomorphism mu =
      Homomorphism::between_canonical(value, hg.value(), mu_pres.canonical_matrix());

  // Ext end: lift representatives through the exterior-square quotient of the
  // same resolution and place them in the ee-slots.
  QuadTensorData lam = quad_tensor_data(b, QuadraticZModule::exterior_square());
  const CanonicalGroup l2b = lam.value();
  ExtGroup eg(a, l2b);
  const CanonicalGroup& egv = eg.value();
  IntMat delta_cols(value.num_gens(), egv.num_gens());
  for (int gidx = 0; gidx < egv.num_gens(); ++gidx) {
    std::vector<Int> unit(size_t(egv.num_gens()), Int(0));
    unit[size_t(gidx)] = 1;
    ExtClass cls = eg.to_class(unit);
    std::vector<Int> c0vec(size_t(data.cx.c0.gens()), Int(0));
    for (int c = 0; c < tors_a; ++c) {
      std::vector<Int> lcan(size_t(l2b.num_gens()), Int(0));
      for (int rg = 0; rg < l2b.num_gens(); ++rg) lcan[size_t(rg)] = cls.rep().at(rg, c);
      std::vector<Int> raw = lam.quotient.lift(lcan);  // pair-slot coordinates
      for (int p = 0; p < int(raw.size()); ++p)
        c0vec[size_t(r0 * me + p * mee + c)] += raw[size_t(p)];
    }
    std::vector<Int> vcan = data.quotient.coords(c0vec);
    for (int rg = 0; rg < value.num_gens(); ++rg) delta_cols.at(rg, gidx) = vcan[size_t(rg)];
  }
  Homomorphism delta = Homomorphism::between_canonical(egv, value, delta_cols);

  BypeValue v{value, l2b, bz2, delta, mu};
  enforce_order(v.group, v.ext_arg, v.hom_arg, a, "L#");
  return v;
}

// --- splitting solvers -------------------------------------------------------

IntMat kron(const IntMat& x, const IntMat& y) {
  IntMat out(x.rows() * y.rows(), x.cols() * y.cols());
  for (int i = 0; i < x.rows(); ++i)
    for (int j = 0; j < x.cols(); ++j) {
      if (x.at(i, j) == 0) continue;
      for (int p = 0; p < y.rows(); ++p)
        for (int q = 0; q < y.cols(); ++q)
          out.at(i * y.rows() + p, j * y.cols() + q) = x.at(i, j) * y.at(p, q);
    }
  return out;
}

IntMat vec_col(const IntMat& m) {  // column-major vectorization
  IntMat v(m.rows() * m.cols(), 1);
  for (int j = 0; j < m.cols(); ++j)
    for (int i = 0; i < m.rows(); ++i) v.at(j * m.rows() + i, 0) = m.at(i, j);
  return v;
}

IntMat unvec_col(const IntMat& v, int rows, int cols) {
  IntMat m(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) m.at(i, j) = v.at(j * rows + i, 0);
  return m;
}

IntMat hstack3(const IntMat& a, const IntMat& b, const IntMat& c) {
  return IntMat::hstack(IntMat::hstack(a, b), c);
}

// Retraction rho of an injective delta: E -> G (canonical groups):
// rho o delta = id_E. Solves R*D = I mod rel(E), R*rel(G) subset rel(E).
Homomorphism retraction_of(const Homomorphism& delta) {
  const CanonicalGroup& e = delta.dom().canon();
  const CanonicalGroup& g = delta.cod().canon();
  if (e.is_zero()) return zero_between(g, e);
  IntMat d = delta.canonical_matrix();  // g x e
  IntMat rel_e = PresentedGroup::from_canonical(e).relations();
  IntMat rel_g = PresentedGroup::from_canonical(g).relations();
  int ne = e.num_gens(), ng = g.num_gens();
  IntMat ie = IntMat::identity(ne);
  // Unknowns: vec(R) [ne*ng], vec(S1) [rel_e.cols()*ne], vec(S2) [rel_e.cols()*rel_g.cols()]
  IntMat a1 = hstack3(kron(d.transpose(), ie), -kron(ie, rel_e),
                      IntMat(ne * ne, rel_e.cols() * rel_g.cols()));
  IntMat a2 = hstack3(kron(rel_g.transpose(), ie),
                      IntMat(ne * rel_g.cols(), rel_e.cols() * ne),
                      -kron(IntMat::identity(rel_g.cols()), rel_e));
  IntMat big = IntMat::vstack(a1, a2);
  IntMat rhs = IntMat::vstack(vec_col(ie), IntMat(ne * rel_g.cols(), 1));
  auto sol = solve_mat(big, rhs);
  if (!sol) throw std::runtime_error("sequence does not split: no retraction");
  IntMat r = unvec_col(sol->submatrix(0, ne * ng, 0, 1), ne, ng);
  return Homomorphism::between_canonical(g, e, r);
}

// Section sigma of a surjective mu: G -> H: mu o sigma = id_H.
Homomorphism section_of(const Homomorphism& mu) {
  const CanonicalGroup& g = mu.dom().canon();
  const CanonicalGroup& h = mu.cod().canon();
  if (h.is_zero()) return zero_between(h, g);
  IntMat m = mu.canonical_matrix();  // h x g
  IntMat rel_g = PresentedGroup::from_canonical(g).relations();
  IntMat rel_h = PresentedGroup::from_canonical(h).relations();
  int ngens = g.num_gens(), nh = h.num_gens();
  IntMat ih = IntMat::identity(nh);
  // Unknowns: vec(S) [ngens*nh], vec(W1) [rel_h.cols()*nh], vec(W2) [rel_g.cols()*rel_h.cols()]
  IntMat a1 = hstack3(kron(ih, m), -kron(ih, rel_h),
                      IntMat(nh * nh, rel_g.cols() * rel_h.cols()));
  IntMat a2 = hstack3(kron(rel_h.transpose(), IntMat::identity(ngens)),
                      IntMat(ngens * rel_h.cols(), rel_h.cols() * nh),
                      -kron(IntMat::identity(rel_h.cols()), rel_g));
  IntMat big = IntMat::vstack(a1, a2);
  IntMat rhs = IntMat::vstack(vec_col(ih), IntMat(ngens * rel_h.cols(), 1));
  auto sol = solve_mat(big, rhs);
  if (!sol) throw std::runtime_error("sequence does not split: no section");
  IntMat s = unvec_col(sol->submatrix(0, ngens * nh, 0, 1), ngens, nh);
  return Homomorphism::between_canonical(h, g, s);
}

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

}  // namespace

// --- SqValue -----------------------------------------------------------------

CanonicalGroup SqValue::ext_end() const {
  CanonicalGroup g;
  for (const auto& s : summands) g = CanonicalGroup::direct_sum(g, s.ext_arg);
  return g;
}

CanonicalGroup SqValue::hom_end() const {
  CanonicalGroup g;
  for (const auto& s : summands) g = CanonicalGroup::direct_sum(g, s.hom_arg);
  return g;
}

std::string SqValue::describe() const {
  if (summands.empty()) return "0";
  std::vector<std::string> parts;
  for (const auto& s : summands)
    parts.push_back(s.label + " [" + s.origin + "] = " + s.group.to_string());
  return join(parts, "  (+)  ") + "  ==  " + group.to_string();
}

// --- bype functors -----------------------------------------------------------

BypeValue bype_functor(BypeKind kind, const CanonicalGroup& a, const CanonicalGroup& b) {
  switch (kind) {
    case BypeKind::lambdaT:
      return t_functor(QuadraticZModule::exterior_square(), a, b);
    case BypeKind::gammaT:
      return t_functor(QuadraticZModule::divided_square(), a, b);
    case BypeKind::lsharp:
      return lsharp_value(a, b);
  }
  throw std::logic_error("bype_functor: bad kind");
}

BypeValue trp(const CanonicalGroup& a, const CanonicalGroup& b, const CanonicalGroup& c) {
  ChainComplex y = tensor_complex(moore_complex(b, 0), moore_complex(c, 0));
  PseudoHomology ph = pseudo_homology(a, 0, y);
  BypeValue v{ph.group, ph.h_n1.group, ph.h_n.group, ph.Delta, ph.mu};
  enforce_order(v.group, v.ext_arg, v.hom_arg, a, "Trp");
  return v;
}

// --- dispatch ----------------------------------------------------------------

SqCase sq_case(int n, int m) {
  if (m < 1) throw std::invalid_argument("sq: m must be >= 1");
  int k = n - m;
  if (k < 0 || k > m + 1) return {"XI", "0"};
  if (k == 0)
    return m == 1 ? SqCase{"I", "Ext(A,Gamma(D))"} : SqCase{"II", "Ext(A,D(x)Z2)"};
  if (k == m + 1)
    return k % 2 == 0 ? SqCase{"III", "Hom(A,R(D))"} : SqCase{"IV", "Hom(A,Omega(D))"};
  if (k == m)
    return k % 2 == 0 ? SqCase{"IX", "Lambda^2T#(A,D) (+) Hom(A,D*Z2)"}
                      : SqCase{"X", "GammaT#(A,D)"};
  if (k == m - 1)
    return k % 2 == 0 ? SqCase{"VII", "Ext(A,Gamma(D)) (+) Hom(A,D*Z2)"}
                      : SqCase{"VIII", "L#(A,D) (+) Ext(A,D*Z2)"};
  return k % 2 == 0 ? SqCase{"V", "Ext(A,D(x)Z2) (+) Hom(A,D*Z2)"}
                    : SqCase{"VI", "Ext(A,D*Z2) (+) Hom(A,D(x)Z2)"};
}

SqValue sq_nm(const CanonicalGroup& a, const CanonicalGroup& d, int n, int m) {
  SqCase cs = sq_case(n, m);
  CanonicalGroup dx = binary_functor(BinKind::tensor, d, ztwo());  // D (x) Z2
  CanonicalGroup ds = binary_functor(BinKind::tor, d, ztwo());     // D  *  Z2
  std::vector<SqSummand> ss;
  if (cs.tag == "I") {
    ss.push_back(ext_summand("Ext(A,Gamma(D))", "I", a, classical(ClassicalKind::gamma, d)));
  } else if (cs.tag == "II") {
    ss.push_back(ext_summand("Ext(A,D(x)Z2)", "II", a, dx));
  } else if (cs.tag == "III") {
    ss.push_back(hom_summand("Hom(A,R(D))", "III", a, classical(ClassicalKind::r, d)));
  } else if (cs.tag == "IV") {
    ss.push_back(hom_summand("Hom(A,Omega(D))", "IV", a, classical(ClassicalKind::omega, d)));
  } else if (cs.tag == "V") {
    ss.push_back(ext_summand("Ext(A,D(x)Z2)", "V", a, dx));
    ss.push_back(hom_summand("Hom(A,D*Z2)", "V", a, ds));
  } else if (cs.tag == "VI") {
    ss.push_back(ext_summand("Ext(A,D*Z2)", "VI", a, ds));
    ss.push_back(hom_summand("Hom(A,D(x)Z2)", "VI", a, dx));
  } else if (cs.tag == "VII") {
    ss.push_back(ext_summand("Ext(A,Gamma(D))", "VII", a, classical(ClassicalKind::gamma, d)));
    ss.push_back(hom_summand("Hom(A,D*Z2)", "VII", a, ds));
  } else if (cs.tag == "VIII") {
    ss.push_back(bype_summand("L#(A,D)", "VIII", bype_functor(BypeKind::lsharp, a, d)));
    ss.push_back(ext_summand("Ext(A,D*Z2)", "VIII", a, ds));
  } else if (cs.tag == "IX") {
    ss.push_back(
        bype_summand("Lambda^2T#(A,D)", "IX", bype_functor(BypeKind::lambdaT, a, d)));
    ss.push_back(hom_summand("Hom(A,D*Z2)", "IX", a, ds));
  } else if (cs.tag == "X") {
    ss.push_back(bype_summand("GammaT#(A,D)", "X", bype_functor(BypeKind::gammaT, a, d)));
  }
  return make_value(std::move(ss));
}

SqValue sq_nij(const CanonicalGroup& a, const CanonicalGroup& d, const CanonicalGroup& e,
               int n, int i, int j) {
  if (i < 1 || j <= i) throw std::invalid_argument("sq: off-diagonal needs 1 <= i < j");
  std::string ij = "(" + std::to_string(i) + "," + std::to_string(j) + ")";
  std::vector<SqSummand> ss;
  if (n == i + j + 1) {
    ss.push_back(hom_summand("Hom(A,Bi*Bj)", ij, a, binary_functor(BinKind::tor, d, e)));
  } else if (n == i + j) {
    ss.push_back(bype_summand("Trp(A;Bi,Bj)", ij, trp(a, d, e)));
  } else if (n == i + j - 1) {
    ss.push_back(ext_summand("Ext(A,Bi(x)Bj)", ij, a, binary_functor(BinKind::tensor, d, e)));
  }
  return make_value(std::move(ss));
}

SqValue sq_full(const CanonicalGroup& a, const GradedGroup& b, int n) {
  for (const auto& [deg, part] : b.parts()) {
    (void)part;
    if (deg < 1) throw std::invalid_argument("sq: graded group must live in degrees >= 1");
  }
  std::vector<SqSummand> ss;
  for (const auto& [m, part] : b.parts()) {
    SqValue v = sq_nm(a, part, n, m);
    for (auto& s : v.summands) {
      s.origin = "m=" + std::to_string(m) + ":" + s.origin;
      ss.push_back(std::move(s));
    }
  }
  for (auto it = b.parts().begin(); it != b.parts().end(); ++it)
    for (auto jt = std::next(it); jt != b.parts().end(); ++jt) {
      SqValue v = sq_nij(a, it->second, jt->second, n, it->first, jt->first);
      for (auto& s : v.summands) ss.push_back(std::move(s));
    }
  return make_value(std::move(ss));
}

SqValue sq_graded(const GradedGroup& b, int n) { return sq_full(zee(), b, n); }

// --- stable operator ---------------------------------------------------------

SqValue stable_sq(const CanonicalGroup& a, const CanonicalGroup& d, int k) {
  if (k < 1) throw std::invalid_argument("stable operator is defined for k >= 1");
  CanonicalGroup dx = binary_functor(BinKind::tensor, d, ztwo());
  CanonicalGroup ds = binary_functor(BinKind::tor, d, ztwo());
  std::vector<SqSummand> ss;
  if (k % 2 == 0) {
    ss.push_back(ext_summand("Ext(A,D(x)Z2)", "stable", a, dx));
    ss.push_back(hom_summand("Hom(A,D*Z2)", "stable", a, ds));
  } else {
    ss.push_back(ext_summand("Ext(A,D*Z2)", "stable", a, ds));
    ss.push_back(hom_summand("Hom(A,D(x)Z2)", "stable", a, dx));
  }
  return make_value(std::move(ss));
}

std::string StabilizeResult::describe() const {
  if (out_of_range) return "out of range: the stable operator needs k = n - m >= 1";
  if (identity) return "identity: already in the stable range (k < m-1)";
  std::string out = "unstable summands: ";
  out += unstable_labels.empty() ? "(none)" : join(unstable_labels, ", ");
  out += "; unstable value " + unstable.group.to_string();
  out += "; stable value " + stable.group.to_string();
  return out;
}

StabilizeResult stabilize(const CanonicalGroup& a, const CanonicalGroup& d, int n, int m) {
  SqCase cs = sq_case(n, m);
  StabilizeResult r;
  int k = n - m;
  if (k <= 0) {
    r.out_of_range = true;
    return r;
  }
  r.unstable = sq_nm(a, d, n, m);
  r.stable = stable_sq(a, d, k);
  if (k < m - 1) {
    r.identity = true;
    return r;
  }
  // The diagonal quadratic parts do not survive stabilization.
  for (const auto& s : r.unstable.summands) {
    bool unstable_part = (cs.tag == "III" && s.label == "Hom(A,R(D))") ||
                         (cs.tag == "IV" && s.label == "Hom(A,Omega(D))") ||
                         (cs.tag == "VII" && s.label == "Ext(A,Gamma(D))") ||
                         (cs.tag == "VIII" && s.label == "L#(A,D)") ||
                         (cs.tag == "IX" && s.label == "Lambda^2T#(A,D)") ||
                         (cs.tag == "X" && s.label == "GammaT#(A,D)");
    if (unstable_part) r.unstable_labels.push_back(s.label);
  }
  return r;
}

// --- stabilization maps ------------------------------------------------------

Homomorphism sigma_gamma(const CanonicalGroup& d) {
  QuadTensorData gam = quad_tensor_data(d, QuadraticZModule::divided_square());
  QuadTensorData tz2 = quad_tensor_data(d, QuadraticZModule::mod_two());
  IntMat cols(tz2.quotient.gens(), gam.quotient.gens());
  for (int i = 0; i < gam.cx.y0(); ++i) cols.at(i, i) = 1;  // gamma(e_i) -> e_i (x) 1
  Homomorphism pres(gam.quotient, tz2.quotient, cols);
  return Homomorphism::between_canonical(gam.value(), tz2.value(), pres.canonical_matrix());
}

namespace {

// Sum over the even cyclic pieces of D of  incl_* o (cyclic map) o proj_*.
Homomorphism additive_nu(ClassicalKind kind, const CanonicalGroup& d, BinKind via) {
  CanonicalGroup src = classical(kind, d);
  CanonicalGroup tgt = binary_functor(via, d, ztwo());
  Homomorphism total = zero_between(src, tgt);
  for (int i = 0; i < d.num_gens(); ++i) {
    Int o = d.gen_order(i);
    if (o == 0 || o % 2 != 0) continue;  // only even cyclic pieces contribute
    CanonicalGroup ci = CanonicalGroup::cyclic(o);
    IntMat pr(1, d.num_gens());
    pr.at(0, i) = 1;
    IntMat in(d.num_gens(), 1);
    in.at(i, 0) = 1;
    Homomorphism proj = Homomorphism::between_canonical(d, ci, pr);
    Homomorphism incl = Homomorphism::between_canonical(ci, d, in);
    CanonicalGroup csrc = classical(kind, ci);            // Z/o or Z/2
    CanonicalGroup ctgt = binary_functor(via, ci, ztwo());  // Z/2
    Homomorphism middle =
        Homomorphism::between_canonical(csrc, ctgt, IntMat::from_rows({{1}}));
    Homomorphism piece = induced_map(via, incl, Slot::left, ztwo())
                             .compose(middle)
                             .compose(classical_induced(kind, proj));
    total = total + piece;
  }
  return total;
}

}  // namespace

Homomorphism nu_r(const CanonicalGroup& d) {
  return additive_nu(ClassicalKind::r, d, BinKind::tor);
}

Homomorphism nu_omega(const CanonicalGroup& d) {
  return additive_nu(ClassicalKind::omega, d, BinKind::tensor);
}

Homomorphism zform_stabilization(const CanonicalGroup& d, int n, int m) {
  int k = n - m;
  if (k < 1) throw std::invalid_argument("stabilization is defined for k = n - m >= 1");
  SqValue s = sq_nm(zee(), d, n, m);
  SqValue t = stable_sq(zee(), d, k);
  const CanonicalGroup& tgt = t.group;  // the Hom part; Ext(Z,-) vanishes
  std::vector<CanonicalGroup> parts;
  parts.reserve(s.summands.size());
  for (const auto& x : s.summands) parts.push_back(x.group);
  SumEmbedding se = sum_embedding(parts);
  Homomorphism total = zero_between(s.group, tgt);
  for (size_t idx = 0; idx < s.summands.size(); ++idx) {
    const SqSummand& sm = s.summands[idx];
    Homomorphism piece = zero_between(sm.group, tgt);
    if (sm.label == "Hom(A,D*Z2)" || sm.label == "Hom(A,D(x)Z2)") {
      piece = sm.mu;  // identity onto the stable Hom end
    } else if (sm.label == "Hom(A,R(D))") {
      piece = nu_r(d).compose(sm.mu);
    } else if (sm.label == "Hom(A,Omega(D))") {
      piece = nu_omega(d).compose(sm.mu);
    } else if (sm.label == "GammaT#(A,D)") {
      piece = sigma_gamma(d).compose(sm.mu);
    } else if (sm.label == "L#(A,D)") {
      piece = sm.mu;  // L#(Z,D) identifies with Hom(Z, D (x) Z2)
    }
    // Ext summands and the Lambda^2 part die stably (zero at A = Z anyway for
    // the Ext parts; the Lambda^2 part is killed by the suspension).
    total = total + piece.compose(se.proj[idx]);
  }
  return total;
}

// --- maps induced by an extension class --------------------------------------

namespace {

CanonicalGroup zform(const CanonicalGroup& x, int n, int m) {
  return sq_nm(zee(), x, n, m).group;
}

}  // namespace

Homomorphism ext_induced(int k, int n, const ExtClass& alpha) {
  if (n < 1) throw std::invalid_argument("ext-induced map needs a degree n >= 1");
  const CanonicalGroup& a = alpha.a();
  const CanonicalGroup& b = alpha.b();
  if (k % 2 != 0) return zero_between(zform(a, n + k, n), zform(b, n + k, n + 1));
  if (k != 2 || n > 3)
    throw std::invalid_argument("ext-induced map ^" + std::to_string(k) + "[" +
                                std::to_string(n) + "] not defined in source");
  Homomorphism bd = connecting_map(alpha, ztwo());  // A*Z2 -> B(x)Z2
  if (n == 3) return bd;
  if (n == 2) {
    // Domain Lambda^2(A) (+) A*Z2: precompose with the projection to A*Z2.
    SqValue s = sq_nm(zee(), a, 4, 2);
    std::vector<CanonicalGroup> parts;
    for (const auto& x : s.summands) parts.push_back(x.group);
    SumEmbedding se = sum_embedding(parts);
    return bd.compose(s.summands[1].mu).compose(se.proj[1]);
  }
  return bd.compose(nu_r(a));  // n == 1: through the natural map R(A) -> A*Z2
}

Homomorphism shift_map(int n, int m, const ExtClass& alpha, const CanonicalGroup& a) {
  SqValue s = sq_nm(a, alpha.a(), n, m);
  SqValue t = sq_nm(a, alpha.b(), n, m + 1);
  Homomorphism total = zero_between(s.group, t.group);
  if (alpha.is_zero() || s.group.is_zero() || t.group.is_zero()) return total;
  std::vector<CanonicalGroup> sparts, tparts;
  for (const auto& x : s.summands) sparts.push_back(x.group);
  for (const auto& x : t.summands) tparts.push_back(x.group);
  SumEmbedding se = sum_embedding(sparts);
  SumEmbedding te = sum_embedding(tparts);

  int ke = n + 1 - m, kh = n - m;
  if (kh % 2 != 0) {
    // Only the Ext column contributes.
    std::vector<CanonicalGroup> xs, xt;
    for (const auto& x : s.summands) xs.push_back(x.ext_arg);
    for (const auto& x : t.summands) xt.push_back(x.ext_arg);
    SumEmbedding xe = sum_embedding(xs);
    SumEmbedding xte = sum_embedding(xt);
    if (xe.total.is_zero() || xte.total.is_zero()) return total;
    Homomorphism emap = ext_induced(ke, m, alpha);
    if (!(xe.total == emap.dom().canon()) || !(xte.total == emap.cod().canon()))
      throw std::logic_error("shift map: Ext ends disagree with the coefficient forms");
    CanonicalGroup exs = binary_functor(BinKind::ext, a, xe.total);
    CanonicalGroup ext_t = binary_functor(BinKind::ext, a, xte.total);
    Homomorphism phi = zero_between(s.group, exs);
    for (size_t i = 0; i < s.summands.size(); ++i) {
      if (s.summands[i].ext_arg.is_zero() || s.summands[i].group.is_zero()) continue;
      Homomorphism rho = retraction_of(s.summands[i].delta);
      phi = phi + induced_map(BinKind::ext, xe.incl[i], Slot::right, a)
                      .compose(rho)
                      .compose(se.proj[i]);
    }
    Homomorphism ecol = induced_map(BinKind::ext, emap, Slot::right, a);
    Homomorphism psi = zero_between(ext_t, t.group);
    for (size_t j = 0; j < t.summands.size(); ++j) {
      if (t.summands[j].ext_arg.is_zero()) continue;
      psi = psi + te.incl[j]
                      .compose(t.summands[j].delta)
                      .compose(induced_map(BinKind::ext, xte.proj[j], Slot::right, a));
    }
    total = psi.compose(ecol).compose(phi);
  } else {
    // Only the Hom column contributes.
    std::vector<CanonicalGroup> hs, ht;
    for (const auto& x : s.summands) hs.push_back(x.hom_arg);
    for (const auto& x : t.summands) ht.push_back(x.hom_arg);
    SumEmbedding he = sum_embedding(hs);
    SumEmbedding hte = sum_embedding(ht);
    if (he.total.is_zero() || hte.total.is_zero()) return total;
    Homomorphism hmap = ext_induced(kh, m, alpha);
    if (!(he.total == hmap.dom().canon()) || !(hte.total == hmap.cod().canon()))
      throw std::logic_error("shift map: Hom ends disagree with the coefficient forms");
    CanonicalGroup hom_s = binary_functor(BinKind::hom, a, he.total);
    CanonicalGroup hom_t = binary_functor(BinKind::hom, a, hte.total);
    Homomorphism phi = zero_between(s.group, hom_s);
    for (size_t i = 0; i < s.summands.size(); ++i) {
      if (s.summands[i].hom_arg.is_zero() || s.summands[i].group.is_zero()) continue;
      phi = phi + induced_map(BinKind::hom, he.incl[i], Slot::right, a)
                      .compose(s.summands[i].mu)
                      .compose(se.proj[i]);
    }
    Homomorphism hcol = induced_map(BinKind::hom, hmap, Slot::right, a);
    Homomorphism psi = zero_between(hom_t, t.group);
    for (size_t j = 0; j < t.summands.size(); ++j) {
      if (t.summands[j].hom_arg.is_zero() || t.summands[j].group.is_zero()) continue;
      Homomorphism sec = section_of(t.summands[j].mu);
      psi = psi + te.incl[j]
                      .compose(sec)
                      .compose(induced_map(BinKind::hom, hte.proj[j], Slot::right, a));
    }
    total = psi.compose(hcol).compose(phi);
  }
  return total;
}

// --- table emission ------------------------------------------------------------

namespace {

std::string cell_text(int n, int m, const CanonicalGroup* d) {
  if (d == nullptr) return sq_case(n, m).symbolic;
  return sq_nm(zee(), *d, n, m).group.to_string();
}

std::string emit_table(int m_lo, int m_hi, int n_lo, int n_hi, TableFormat fmt,
                       const CanonicalGroup* d) {
  if (m_lo < 1 || m_hi < m_lo || n_hi < n_lo)
    throw std::invalid_argument("table: empty or invalid region");
  std::ostringstream out;
  switch (fmt) {
    case TableFormat::markdown: {
      out << "| m \\ n |";
      for (int n = n_lo; n <= n_hi; ++n) out << " " << n << " |";
      out << "\n|---|";
      for (int n = n_lo; n <= n_hi; ++n) out << "---|";
      out << "\n";
      for (int m = m_lo; m <= m_hi; ++m) {
        out << "| " << m << " |";
        for (int n = n_lo; n <= n_hi; ++n) out << " " << cell_text(n, m, d) << " |";
        out << "\n";
      }
      return out.str();
    }
    case TableFormat::csv: {
      out << "m";
      for (int n = n_lo; n <= n_hi; ++n) out << ",n=" << n;
      out << "\n";
      for (int m = m_lo; m <= m_hi; ++m) {
        out << m;
        for (int n = n_lo; n <= n_hi; ++n) {
          std::string cell = cell_text(n, m, d);
          bool quote = cell.find(',') != std::string::npos;
          out << "," << (quote ? "\"" + cell + "\"" : cell);
        }
        out << "\n";
      }
      return out.str();
    }
    case TableFormat::json: {
      nlohmann::json j;
      j["rows"] = "m";
      j["columns"] = "n";
      if (d != nullptr) j["coefficients"] = d->to_string();
      j["cells"] = nlohmann::json::array();
      for (int m = m_lo; m <= m_hi; ++m)
        for (int n = n_lo; n <= n_hi; ++n) {
          nlohmann::json cell;
          cell["m"] = m;
          cell["n"] = n;
          cell["case"] = sq_case(n, m).tag;
          cell["value"] = cell_text(n, m, d);
          j["cells"].push_back(cell);
        }
      return j.dump(2);
    }
  }
  throw std::logic_error("table: bad format");
}

}  // namespace

std::string sq_table(int max_n, int max_m, TableFormat fmt) {
  return emit_table(1, max_m, 1, max_n, fmt, nullptr);
}

std::string sq_table(const CanonicalGroup& d, int max_n, int max_m, TableFormat fmt) {
  return emit_table(1, max_m, 1, max_n, fmt, &d);
}

std::string printed_table(int which, TableFormat fmt) {
  switch (which) {
    case 1:
      return emit_table(1, 4, 1, 3, fmt, nullptr);
    case 2:
      return emit_table(2, 5, 4, 5, fmt, nullptr);
    case 3:
      return emit_table(2, 6, 6, 7, fmt, nullptr);
    default:
      throw std::invalid_argument("printed_table: which must be 1, 2 or 3");
  }
}

}  // namespace nilsq

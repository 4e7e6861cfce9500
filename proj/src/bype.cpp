#include "nilsq/bype.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "nilsq/groupexpr.hpp"
#include "nilsq/quadratic.hpp"
#include "nilsq/snf.hpp"
#include "nilsq/sqcalc.hpp"

namespace nilsq {
namespace {

// --- shared small helpers (same conventions as the square calculus) ----------

CanonicalGroup zee() { return CanonicalGroup::free_group(1); }
CanonicalGroup ztwo() { return CanonicalGroup::cyclic(2); }

Homomorphism zero_between(const CanonicalGroup& dom, const CanonicalGroup& cod) {
  return Homomorphism::between_canonical(dom, cod, IntMat(cod.num_gens(), dom.num_gens()));
}

// f after g, on canonical coordinates.
Homomorphism comp(const Homomorphism& f, const Homomorphism& g) {
  return Homomorphism::between_canonical(g.dom().canon(), f.cod().canon(),
                                         f.canonical_matrix() * g.canonical_matrix());
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

// Retraction rho of an injective delta: E -> G: rho o delta = id_E.
Homomorphism retraction_of(const Homomorphism& delta) {
  const CanonicalGroup& e = delta.dom().canon();
  const CanonicalGroup& g = delta.cod().canon();
  if (e.is_zero()) return zero_between(g, e);
  IntMat d = delta.canonical_matrix();  // g x e
  IntMat rel_e = PresentedGroup::from_canonical(e).relations();
  IntMat rel_g = PresentedGroup::from_canonical(g).relations();
  int ne = e.num_gens(), ng = g.num_gens();
  IntMat ie = IntMat::identity(ne);
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

// --- summand taxonomy ---------------------------------------------------------

enum class SKind { pure_ext, pure_hom, t_diag, lsharp, trp_cross, hom_cross, ext_cross };

struct SummandInfo {
  SKind kind = SKind::pure_ext;
  bool diag = false;
  int m = 0;
  int i = 0, j = 0;
  std::string tag;
};

SummandInfo classify(const SqSummand& s) {
  SummandInfo out;
  const std::string& o = s.origin;
  if (!o.empty() && o[0] == '(') {
    out.diag = false;
    size_t comma = o.find(',');
    out.i = std::stoi(o.substr(1, comma - 1));
    out.j = std::stoi(o.substr(comma + 1, o.size() - comma - 2));
    if (s.label == "Trp(A;Bi,Bj)")
      out.kind = SKind::trp_cross;
    else if (s.label == "Hom(A,Bi*Bj)")
      out.kind = SKind::hom_cross;
    else if (s.label == "Ext(A,Bi(x)Bj)")
      out.kind = SKind::ext_cross;
    else
      throw std::logic_error("unrecognized off-diagonal summand label: " + s.label);
    return out;
  }
  if (o.rfind("m=", 0) != 0) throw std::logic_error("unrecognized summand origin: " + o);
  size_t colon = o.find(':');
  out.diag = true;
  out.m = std::stoi(o.substr(2, colon - 2));
  out.tag = o.substr(colon + 1);
  if (s.label == "L#(A,D)")
    out.kind = SKind::lsharp;
  else if (s.label == "Lambda^2T#(A,D)" || s.label == "GammaT#(A,D)")
    out.kind = SKind::t_diag;
  else if (s.label.rfind("Ext(", 0) == 0)
    out.kind = SKind::pure_ext;
  else if (s.label.rfind("Hom(", 0) == 0)
    out.kind = SKind::pure_hom;
  else
    throw std::logic_error("unrecognized summand label: " + s.label);
  return out;
}

struct SqView {
  SqValue val{CanonicalGroup(), {}};
  SumEmbedding se;
  std::vector<SummandInfo> info;
  std::map<int, std::vector<int>> diag;
  std::map<std::pair<int, int>, std::vector<int>> cross;
};

SqView make_view(const CanonicalGroup& a, const GradedGroup& b, int d) {
  SqView v;
  if (d >= 1 && !b.parts().empty()) v.val = sq_full(a, b, d);
  std::vector<CanonicalGroup> parts;
  for (const auto& s : v.val.summands) parts.push_back(s.group);
  v.se = sum_embedding(parts);
  for (int k = 0; k < int(v.val.summands.size()); ++k) {
    SummandInfo si = classify(v.val.summands[k]);
    if (si.diag)
      v.diag[si.m].push_back(k);
    else
      v.cross[{si.i, si.j}].push_back(k);
    v.info.push_back(si);
  }
  return v;
}

std::string summand_key(const SqSummand& s) { return s.origin + "|" + s.label; }

struct CellMaps {
  SumEmbedding se;
  Homomorphism incl, proj;  // cell total <-> view total
};

CellMaps cell_maps(const SqView& v, const std::vector<int>& idx) {
  std::vector<CanonicalGroup> parts;
  for (int k : idx) parts.push_back(v.val.summands[k].group);
  SumEmbedding se = sum_embedding(parts);
  Homomorphism incl = zero_between(se.total, v.se.total);
  Homomorphism proj = zero_between(v.se.total, se.total);
  for (size_t l = 0; l < idx.size(); ++l) {
    incl = incl + comp(v.se.incl[size_t(idx[l])], se.proj[l]);
    proj = proj + comp(se.incl[l], v.se.proj[size_t(idx[l])]);
  }
  return CellMaps{std::move(se), std::move(incl), std::move(proj)};
}

// --- mod 2 frames --------------------------------------------------------------

bool even_order(const Int& d) { return d == 0 || d % 2 == 0; }

std::vector<int> t2_list(const CanonicalGroup& g) {
  std::vector<int> out;
  for (int i = 0; i < g.num_gens(); ++i)
    if (even_order(g.gen_order(i))) out.push_back(i);
  return out;
}

std::vector<int> s2_list(const CanonicalGroup& g) {
  std::vector<int> out;
  for (int i = g.free_rank(); i < g.num_gens(); ++i)
    if (g.gen_order(i) % 2 == 0) out.push_back(i);
  return out;
}

int t2_dim(const CanonicalGroup& g) { return int(t2_list(g).size()); }
int s2_dim(const CanonicalGroup& g) { return int(s2_list(g).size()); }

Int bit(const Int& v) { return ((v % 2) + 2) % 2; }

// Basis slot of the pair at generator `gen` in Tensor(d, Z2), or -1.
int tz2_slot(const PairGroup& pg, int gen) {
  for (int k = 0; k < int(pg.basis().size()); ++k)
    if (pg.basis()[size_t(k)].i == gen) return k;
  return -1;
}

// Basis slot of the pair at torsion index `tj` in Tor(d, Z2), or -1.
int sz2_slot(const PairGroup& pg, int tj) {
  for (int k = 0; k < int(pg.basis().size()); ++k)
    if (pg.basis()[size_t(k)].j == tj) return k;
  return -1;
}

// Canonical value coordinates -> bits over the t2 frame of d.
std::vector<Int> t2_bits_from_value(const CanonicalGroup& d, const TensorGroup& tg,
                                    const std::vector<Int>& canon) {
  std::vector<Int> raw = tg.pairs().raw_from_canon(canon);
  std::vector<int> frame = t2_list(d);
  std::vector<Int> out(frame.size(), Int(0));
  for (size_t s = 0; s < frame.size(); ++s) {
    int k = tz2_slot(tg.pairs(), frame[s]);
    if (k >= 0) out[s] = bit(raw[size_t(k)]);
  }
  return out;
}

std::vector<Int> s2_bits_from_value(const CanonicalGroup& d, const TorGroup& tg,
                                    const std::vector<Int>& canon) {
  std::vector<Int> raw = tg.pairs().raw_from_canon(canon);
  std::vector<int> frame = s2_list(d);
  std::vector<Int> out(frame.size(), Int(0));
  for (size_t s = 0; s < frame.size(); ++s) {
    int k = sz2_slot(tg.pairs(), frame[s] - d.free_rank());
    if (k >= 0) out[s] = bit(raw[size_t(k)]);
  }
  return out;
}

// F2 matrix of f (x) Z2 between the t2 frames of dom and cod.
IntMat tensor2_matrix(const Homomorphism& f) {
  CanonicalGroup dom = f.dom().canon(), cod = f.cod().canon();
  TensorGroup td(dom, ztwo()), tc(cod, ztwo());
  Homomorphism ind = induced_map(BinKind::tensor, f, Slot::left, ztwo());
  std::vector<int> frame = t2_list(dom);
  IntMat out(t2_dim(cod), int(frame.size()));
  for (size_t s = 0; s < frame.size(); ++s) {
    int k = tz2_slot(td.pairs(), frame[s]);
    if (k < 0) continue;
    std::vector<Int> raw(td.pairs().basis().size(), Int(0));
    raw[size_t(k)] = 1;
    std::vector<Int> img = ind.apply_canonical(td.pairs().canon_from_raw(raw));
    std::vector<Int> bits = t2_bits_from_value(cod, tc, img);
    for (int r = 0; r < out.rows(); ++r) out.at(r, int(s)) = bits[size_t(r)];
  }
  return out;
}

// F2 matrix of f (*) Z2 between the s2 frames of dom and cod.
IntMat tor2_matrix(const Homomorphism& f) {
  CanonicalGroup dom = f.dom().canon(), cod = f.cod().canon();
  TorGroup td(dom, ztwo()), tc(cod, ztwo());
  Homomorphism ind = induced_map(BinKind::tor, f, Slot::left, ztwo());
  std::vector<int> frame = s2_list(dom);
  IntMat out(s2_dim(cod), int(frame.size()));
  for (size_t s = 0; s < frame.size(); ++s) {
    int k = sz2_slot(td.pairs(), frame[s] - dom.free_rank());
    if (k < 0) continue;
    std::vector<Int> raw(td.pairs().basis().size(), Int(0));
    raw[size_t(k)] = 1;
    std::vector<Int> img = ind.apply_canonical(td.pairs().canon_from_raw(raw));
    std::vector<Int> bits = s2_bits_from_value(cod, tc, img);
    for (int r = 0; r < out.rows(); ++r) out.at(r, int(s)) = bits[size_t(r)];
  }
  return out;
}

// --- two-stage tensor complexes -------------------------------------------------

struct PairLayout {
  Resolution r1, r2;
  int g1 = 0, t1 = 0, g2 = 0, t2 = 0;
  int off01 = -1, off10 = -1;
  int rank0 = 0, rank1 = 0, rank2 = 0;
};

PairLayout pair_layout(const CanonicalGroup& b1, const CanonicalGroup& b2) {
  PairLayout L{minimal_resolution(b1), minimal_resolution(b2)};
  L.g1 = L.r1.A.num_gens();
  L.t1 = L.r1.t();
  L.g2 = L.r2.A.num_gens();
  L.t2 = L.r2.t();
  L.rank0 = L.g1 * L.g2;
  int off = 0;
  if (L.g1 * L.t2 > 0) {
    L.off01 = off;
    off += L.g1 * L.t2;
  }
  if (L.t1 * L.g2 > 0) {
    L.off10 = off;
    off += L.t1 * L.g2;
  }
  L.rank1 = off;
  L.rank2 = L.t1 * L.t2;
  return L;
}

ChainComplex pair_complex_of(const CanonicalGroup& b1, const CanonicalGroup& b2) {
  return tensor_complex(moore_complex(b1, 0), moore_complex(b2, 0));
}

struct PairData {
  PairLayout L;
  ChainComplex y;
};

PairData make_pair_data(const CanonicalGroup& b1, const CanonicalGroup& b2) {
  PairData p{pair_layout(b1, b2), pair_complex_of(b1, b2)};
  if (p.y.rank(0) != p.L.rank0 || p.y.rank(1) != p.L.rank1 || p.y.rank(2) != p.L.rank2)
    throw std::logic_error("tensor layout mismatch");
  return p;
}

void emplace_block(IntMat& m, int r0, int c0, const IntMat& blk, const Int& scale = Int(1)) {
  for (int r = 0; r < blk.rows(); ++r)
    for (int c = 0; c < blk.cols(); ++c)
      if (blk.at(r, c) != 0) m.at(r0 + r, c0 + c) += scale * blk.at(r, c);
}

// Degree-lowering block family keyed by the source chain degree.
using DropBlocks = std::map<int, IntMat>;

// Leg family for a degree-preserving map on the left factor and a
// degree-lowering representative e : X1(b_j) -> X0(b'_{j'}) on the right.
DropBlocks right_alpha_leg(const PairLayout& src, const PairLayout& tgt, const ResLift& fl,
                           const IntMat& e) {
  DropBlocks g;
  if (src.off01 >= 0) {
    IntMat g1(tgt.rank0, src.rank1);
    emplace_block(g1, 0, src.off01, kron(fl.f0, e));
    g[1] = std::move(g1);
  }
  if (src.rank2 > 0 && tgt.off10 >= 0) {
    IntMat g2(tgt.rank1, src.rank2);
    emplace_block(g2, tgt.off10, 0, kron(fl.f1, e));
    g[2] = std::move(g2);
  }
  return g;
}

// Mirror family: representative on the left, degree-preserving on the right.
DropBlocks left_alpha_leg(const PairLayout& src, const PairLayout& tgt, const IntMat& e,
                          const ResLift& fr) {
  DropBlocks g;
  if (src.off10 >= 0) {
    IntMat g1(tgt.rank0, src.rank1);
    emplace_block(g1, 0, src.off10, kron(e, fr.f0));
    g[1] = std::move(g1);
  }
  if (src.rank2 > 0 && tgt.off01 >= 0) {
    IntMat g2(tgt.rank1, src.rank2);
    emplace_block(g2, tgt.off01, 0, kron(e, fr.f1), Int(-1));
    g[2] = std::move(g2);
  }
  return g;
}

// Representatives on both legs; lowers degree by two.
DropBlocks double_alpha_leg(const PairLayout& src, const PairLayout& tgt, const IntMat& ei,
                            const IntMat& ej) {
  DropBlocks g;
  if (src.rank2 > 0 && tgt.rank0 > 0) g[2] = kron(ei, ej);
  return g;
}

// --- quadratic complexes ---------------------------------------------------------

QuadraticZModule diag_module(int m) {
  return (m % 2 == 1) ? QuadraticZModule::divided_square() : QuadraticZModule::exterior_square();
}

struct DiagChain {
  QuadComplex qc;
  ChainComplex y;
};

DiagChain diag_chain(const CanonicalGroup& d, const QuadraticZModule& mod) {
  QuadComplex qc = quad_complex(d, mod);
  if (qc.c0.relations().cols() != 0 || qc.c1.relations().cols() != 0 ||
      qc.c2.relations().cols() != 0)
    throw std::logic_error("diag chain: expected free stages");
  ChainComplex y(0, {qc.c0.gens(), qc.c1.gens(), qc.c2.gens()},
                 {qc.delta1.matrix(), qc.delta2.matrix()});
  return DiagChain{std::move(qc), std::move(y)};
}

// c0 coordinates of the bracket [x, y] of two level-0 vectors, paired with the
// ee generator eb.
std::vector<Int> fold_bracket0(const QuadraticZModule& mod, int r0, const std::vector<Int>& x,
                               const std::vector<Int>& y, int eb) {
  QuadBasis q0(r0, mod);
  int me = mod.e().num_gens();
  int mee = mod.ee().num_gens();
  IntMat twist = mod.h() * mod.p() - IntMat::identity(mee);
  std::vector<Int> out(size_t(q0.rank()), Int(0));
  for (int a = 0; a < r0; ++a) {
    if (x[size_t(a)] == 0) continue;
    for (int c = 0; c < r0; ++c) {
      Int coef = x[size_t(a)] * y[size_t(c)];
      if (coef == 0) continue;
      if (a < c) {
        out[size_t(q0.ee_index(a, c, eb))] += coef;
      } else if (a == c) {
        for (int u = 0; u < me; ++u)
          out[size_t(q0.e_index(a, u))] += coef * mod.p().at(u, eb);
      } else {
        for (int v = 0; v < mee; ++v)
          out[size_t(q0.ee_index(c, a, v))] += coef * twist.at(v, eb);
      }
    }
  }
  return out;
}

// Chain-level symmetrization of the quadratic complex of (d, mod) into the
// two-fold tensor complex of d's resolution. Validated on construction.
ChainMap h_transformation(const DiagChain& dc, const PairLayout& l, const ChainComplex& t) {
  const QuadComplex& qc = dc.qc;
  const QuadraticZModule& mod = qc.m;
  int g = qc.y0(), tt = qc.y1();
  int me = mod.e().num_gens();
  int mee = mod.ee().num_gens();
  if (mee != 1 || me > 1) throw std::logic_error("symmetrization: unsupported module shape");
  Int eps = (mod.h() * mod.p()).at(0, 0) - 1;
  Int h00 = me > 0 ? mod.h().at(0, 0) : Int(0);
  const IntMat& rel = qc.rel;
  QuadBasis q0(g, mod), q1(tt, mod);
  IntMat f0(l.rank0, qc.c0.gens());
  for (int i = 0; i < g; ++i)
    for (int u = 0; u < me; ++u) f0.at(i * g + i, q0.e_index(i, u)) += h00;
  for (int i = 0; i < g; ++i)
    for (int j = i + 1; j < g; ++j) {
      f0.at(i * g + j, q0.ee_index(i, j, 0)) += 1;
      f0.at(j * g + i, q0.ee_index(i, j, 0)) += eps;
    }
  IntMat f1(l.rank1, qc.c1.gens());
  auto bslot = [&](int s, int k) { return l.off10 + s * g + k; };
  auto aslot = [&](int j, int s) { return l.off01 + j * tt + s; };
  for (int s = 0; s < tt; ++s)
    for (int u = 0; u < me; ++u)
      for (int k = 0; k < g; ++k)
        if (rel.at(k, s) != 0) f1.at(bslot(s, k), q1.e_index(s, u)) += h00 * rel.at(k, s);
  for (int s = 0; s < tt; ++s)
    for (int lidx = s + 1; lidx < tt; ++lidx)
      for (int k = 0; k < g; ++k) {
        if (rel.at(k, lidx) != 0)
          f1.at(bslot(s, k), q1.ee_index(s, lidx, 0)) += rel.at(k, lidx);
        if (rel.at(k, s) != 0)
          f1.at(bslot(lidx, k), q1.ee_index(s, lidx, 0)) += eps * rel.at(k, s);
      }
  for (int s = 0; s < tt; ++s)
    for (int j = 0; j < g; ++j) {
      int col = q1.rank() + (s * g + j) * mee;
      f1.at(bslot(s, j), col) += 1;
      if (l.off01 >= 0) f1.at(aslot(j, s), col) += eps;
    }
  IntMat f2(l.rank2, qc.c2.gens());
  for (int s = 0; s < tt; ++s)
    for (int lidx = 0; lidx < tt; ++lidx)
      f2.at(lidx * tt + s, (s * tt + lidx) * mee) += -eps;
  return ChainMap(dc.y, t, {{0, f0}, {1, f1}, {2, f2}});
}

// Functorial chain map of quadratic complexes along a resolution lift.
ChainMap quad_chain_map(const DiagChain& src, const DiagChain& tgt, const ResLift& lf) {
  const QuadraticZModule& mod = src.qc.m;
  int g = src.qc.y0(), tt = src.qc.y1();
  int gp = tgt.qc.y0(), tp = tgt.qc.y1();
  int mee = mod.ee().num_gens();
  IntMat f0 = quad_free_induced(mod, lf.f0);
  QuadBasis q1s(tt, mod), q1t(tp, mod);
  IntMat f1(tgt.qc.c1.gens(), src.qc.c1.gens());
  emplace_block(f1, 0, 0, quad_free_induced(mod, lf.f1));
  for (int i = 0; i < tt; ++i)
    for (int j = 0; j < g; ++j)
      for (int b = 0; b < mee; ++b) {
        int c = q1s.rank() + (i * g + j) * mee + b;
        for (int ip = 0; ip < tp; ++ip) {
          if (lf.f1.at(ip, i) == 0) continue;
          for (int jp = 0; jp < gp; ++jp) {
            Int v = lf.f1.at(ip, i) * lf.f0.at(jp, j);
            if (v != 0) f1.at(q1t.rank() + (ip * gp + jp) * mee + b, c) += v;
          }
        }
      }
  IntMat f2(tgt.qc.c2.gens(), src.qc.c2.gens());
  for (int k = 0; k < tt; ++k)
    for (int lidx = 0; lidx < tt; ++lidx)
      for (int b = 0; b < mee; ++b)
        for (int kp = 0; kp < tp; ++kp) {
          if (lf.f1.at(kp, k) == 0) continue;
          for (int lp = 0; lp < tp; ++lp) {
            Int v = lf.f1.at(kp, k) * lf.f1.at(lp, lidx);
            if (v != 0) f2.at((kp * tp + lp) * mee + b, (k * tt + lidx) * mee + b) += v;
          }
        }
  return ChainMap(src.y, tgt.y, {{0, f0}, {1, f1}, {2, f2}});
}

// Degree-preserving chain map of two-fold tensor complexes from lifts on the
// two factors.
ChainMap pair_chain_map(const PairData& src, const PairData& tgt, const ResLift& fi,
                        const ResLift& fj) {
  IntMat f0 = kron(fi.f0, fj.f0);
  IntMat f1(tgt.L.rank1, src.L.rank1);
  if (src.L.off01 >= 0 && tgt.L.off01 >= 0)
    emplace_block(f1, tgt.L.off01, src.L.off01, kron(fi.f0, fj.f1));
  if (src.L.off10 >= 0 && tgt.L.off10 >= 0)
    emplace_block(f1, tgt.L.off10, src.L.off10, kron(fi.f1, fj.f0));
  IntMat f2 = kron(fi.f1, fj.f1);
  return ChainMap(src.y, tgt.y, {{0, f0}, {1, f1}, {2, f2}});
}

// Leg family pairing a lowered left leg with a level-preserving right leg,
// landing in the quadratic complex of the target column.
DropBlocks pair_embed_blocks(const PairLayout& src, const DiagChain& tgt, const IntMat& e,
                             const ResLift& fr) {
  const QuadraticZModule& mod = tgt.qc.m;
  int gp = tgt.qc.y0(), tp = tgt.qc.y1();
  int mee = mod.ee().num_gens();
  if (mee != 1) throw std::logic_error("pair embed: unsupported module shape");
  Int eps = (mod.h() * mod.p()).at(0, 0) - 1;
  QuadBasis q1(tp, mod);
  DropBlocks g;
  if (src.off10 >= 0) {
    IntMat g1(tgt.qc.c0.gens(), src.rank1);
    for (int s = 0; s < src.t1; ++s) {
      std::vector<Int> ecol(size_t(gp), Int(0));
      for (int p = 0; p < gp; ++p) ecol[size_t(p)] = e.at(p, s);
      for (int k = 0; k < src.g2; ++k) {
        std::vector<Int> fcol(size_t(gp), Int(0));
        for (int w = 0; w < gp; ++w) fcol[size_t(w)] = fr.f0.at(w, k);
        std::vector<Int> fold = fold_bracket0(mod, gp, ecol, fcol, 0);
        for (int r = 0; r < int(fold.size()); ++r)
          if (fold[size_t(r)] != 0) g1.at(r, src.off10 + s * src.g2 + k) += fold[size_t(r)];
      }
    }
    g[1] = std::move(g1);
  }
  if (src.rank2 > 0) {
    IntMat g2(tgt.qc.c1.gens(), src.rank2);
    for (int s = 0; s < src.t1; ++s)
      for (int lidx = 0; lidx < src.t2; ++lidx)
        for (int p = 0; p < gp; ++p) {
          if (e.at(p, s) == 0) continue;
          for (int m2 = 0; m2 < tp; ++m2) {
            Int v = -eps * e.at(p, s) * fr.f1.at(m2, lidx);
            if (v != 0) g2.at(q1.rank() + (m2 * gp + p) * mee, s * src.t2 + lidx) += v;
          }
        }
    g[2] = std::move(g2);
  }
  return g;
}

// Composite of f : moore(a, p) -> (target of g's source grading) with a
// degree-lowering family; result is validated against moore(a, p - dd).
ChainMap drops_compose(const CanonicalGroup& a, int p, int dd, const ChainMap& f,
                       const DropBlocks& g, const ChainComplex& yp) {
  std::map<int, IntMat> comps;
  for (const auto& [u, gu] : g) comps[u - dd] = gu * f.component(u);
  return ChainMap(moore_complex(a, p - dd), yp, comps);
}

// --- cycle realizations -----------------------------------------------------------

// Columns: c1 cycles representing the canonical generators of the level-one
// homology, through the kernel/cokernel construction of the torsion functor.
IntMat cycle_matrix_for_h1(const QuadTorsionData& qtd) {
  const PresentedGroup& pg = qtd.prime.group;
  int n = pg.canon().num_gens();
  IntMat lifts = pg.lift_mat(IntMat::identity(n));
  return qtd.ker1.map.matrix() * lifts;
}

// Chain representative moore(a, 1) -> dc.y of a homomorphism into the level-one
// homology, whose values (canonical coordinates) are the columns of h1_values.
ChainMap hom_chain_rep(const CanonicalGroup& a, const IntMat& h1_values, const DiagChain& dc,
                       const QuadTorsionData& qtd) {
  IntMat cyc = cycle_matrix_for_h1(qtd);
  IntMat f1 = cyc * h1_values;
  IntMat rel_a = minimal_resolution(a).d;
  IntMat rhs = f1 * rel_a;
  auto f2 = solve_mat(dc.y.boundary(2), rhs);
  if (!f2) throw std::logic_error("hom representative: boundary correction unsolvable");
  return ChainMap(moore_complex(a, 1), dc.y, {{1, f1}, {2, *f2}});
}

// Chain representative moore(a, 1) -> pair complex of a homomorphism into the
// torsion product, realized slot-wise from its canonical slot form.
ChainMap tor_hom_rep(const CanonicalGroup& a, const TorGroup& tor, const IntMat& hmat,
                     const PairData& pd, const ChainComplex& y) {
  const PairLayout& L = pd.L;
  int free1 = L.r1.A.free_rank();
  IntMat f1(L.rank1, a.num_gens());
  for (int ag = 0; ag < a.num_gens(); ++ag) {
    std::vector<Int> coords(size_t(hmat.rows()), Int(0));
    for (int r = 0; r < hmat.rows(); ++r) coords[size_t(r)] = hmat.at(r, ag);
    IntMat s = tor.slot_matrix(coords);
    for (int p = 0; p < L.t1; ++p) {
      std::vector<Int> yhat(size_t(L.g2), Int(0));
      bool nonzero = false;
      for (int k = 0; k < L.g2; ++k) {
        yhat[size_t(k)] = s.at(k, p);
        if (yhat[size_t(k)] != 0) nonzero = true;
      }
      if (!nonzero) continue;
      Int dp = L.r1.A.torsion()[size_t(p)];
      IntMat rhs(L.g2, 1);
      for (int k = 0; k < L.g2; ++k) rhs.at(k, 0) = dp * yhat[size_t(k)];
      auto v = solve_mat(L.r2.d, rhs);
      if (!v) throw std::logic_error("torsion representative: lift failed");
      for (int k = 0; k < L.g2; ++k)
        if (yhat[size_t(k)] != 0) f1.at(L.off10 + p * L.g2 + k, ag) += yhat[size_t(k)];
      for (int lidx = 0; lidx < L.t2; ++lidx)
        if (v->at(lidx, 0) != 0)
          f1.at(L.off01 + (free1 + p) * L.t2 + lidx, ag) -= v->at(lidx, 0);
    }
  }
  IntMat rel_a = minimal_resolution(a).d;
  IntMat rhs = f1 * rel_a;
  auto f2 = solve_mat(y.boundary(2), rhs);
  if (!f2) throw std::logic_error("torsion representative: boundary correction unsolvable");
  return ChainMap(moore_complex(a, 1), y, {{1, f1}, {2, *f2}});
}

// Degree-one component of a chain realization dc.y -> moore(xt, 1) of the
// residue map nu, prescribed on the generator cycles of the level-one homology.
IntMat nu_chain_component(const DiagChain& dc, const QuadTorsionData& qtd,
                          const Homomorphism& nu, const CanonicalGroup& xt) {
  IntMat cyc = cycle_matrix_for_h1(qtd);
  IntMat nm = nu.canonical_matrix();
  IntMat relw = minimal_resolution(xt).d;
  int c1 = dc.y.rank(1), c2 = dc.y.rank(2);
  int w1 = xt.num_gens(), w2 = relw.cols();
  int h1n = cyc.cols();
  IntMat d2 = dc.y.boundary(2);
  int n1 = c1 * w1, n2 = c2 * w2, n3 = h1n * w2;
  IntMat a1 = hstack3(kron(d2.transpose(), IntMat::identity(w1)),
                      -kron(IntMat::identity(c2), relw), IntMat(c2 * w1, n3));
  IntMat a2 = hstack3(kron(cyc.transpose(), IntMat::identity(w1)), IntMat(h1n * w1, n2),
                      -kron(IntMat::identity(h1n), relw));
  IntMat big = IntMat::vstack(a1, a2);
  IntMat rhs = IntMat::vstack(IntMat(c2 * w1, 1), vec_col(nm));
  auto sol = solve_mat(big, rhs);
  if (!sol) throw std::logic_error("stable residue: chain realization unsolvable");
  return unvec_col(sol->submatrix(0, n1, 0, 1), w1, c1);
}

// --- coefficient arguments ---------------------------------------------------------

enum class CoeffArg { gamma, rfun, omega, tensor_z2, tor_z2 };

CoeffArg coeff_of_label(const std::string& label) {
  if (label.find("Gamma(D)") != std::string::npos) return CoeffArg::gamma;
  if (label.find("Omega(D)") != std::string::npos) return CoeffArg::omega;
  if (label.find("R(D)") != std::string::npos) return CoeffArg::rfun;
  if (label.find("D(x)Z2") != std::string::npos) return CoeffArg::tensor_z2;
  if (label.find("D*Z2") != std::string::npos) return CoeffArg::tor_z2;
  throw std::logic_error("unrecognized coefficient label: " + label);
}

Homomorphism coeff_induced(CoeffArg c, const Homomorphism& f) {
  switch (c) {
    case CoeffArg::gamma:
      return classical_induced(ClassicalKind::gamma, f);
    case CoeffArg::rfun:
      return classical_induced(ClassicalKind::r, f);
    case CoeffArg::omega:
      return classical_induced(ClassicalKind::omega, f);
    case CoeffArg::tensor_z2:
      return induced_map(BinKind::tensor, f, Slot::left, ztwo());
    case CoeffArg::tor_z2:
      return induced_map(BinKind::tor, f, Slot::left, ztwo());
  }
  throw std::logic_error("unreachable");
}

// --- reading bottom-level composites into value coordinates ------------------------

// Tensor-value coordinates of a vector over the bottom of a pair complex.
std::vector<Int> tensor_value_of_bottom(const TensorGroup& tg, const PairLayout& L,
                                        const std::vector<Int>& v) {
  std::vector<Int> raw(tg.pairs().basis().size(), Int(0));
  for (size_t k = 0; k < tg.pairs().basis().size(); ++k) {
    const CyclicPair& p = tg.pairs().basis()[k];
    raw[k] = v[size_t(p.i) * size_t(L.g2) + size_t(p.j)];
  }
  return tg.pairs().canon_from_raw(raw);
}

// Class coordinates in Ext(a, vgroup) of a bottom-level matrix whose columns
// (indexed by the torsion of a) convert to vgroup by `to_value`.
std::vector<Int> ext_read(const CanonicalGroup& a, const CanonicalGroup& vgroup, const IntMat& m,
                          const std::function<std::vector<Int>(const std::vector<Int>&)>& to_value) {
  ExtGroup eg(a, vgroup);
  IntMat rep(vgroup.num_gens(), m.cols());
  for (int j = 0; j < m.cols(); ++j) {
    std::vector<Int> col(size_t(m.rows()), Int(0));
    for (int i = 0; i < m.rows(); ++i) col[size_t(i)] = m.at(i, j);
    std::vector<Int> val = to_value(col);
    for (int i = 0; i < vgroup.num_gens(); ++i) rep.at(i, j) = val[size_t(i)];
  }
  return eg.from_class(ExtClass(a, vgroup, rep));
}

// --- the induced map on the square functor ------------------------------------------

Homomorphism induced_square_full(const CanonicalGroup& a, const GradedGroup& b,
                                 const GradedGroup& bp, int d, const GradedMaps& phi,
                                 const ExtWitness& alpha) {
  SqView sv = make_view(a, b, d), tv = make_view(a, bp, d);
  Homomorphism acc = zero_between(sv.se.total, tv.se.total);
  if (sv.se.total.is_zero() || tv.se.total.is_zero()) return acc;

  std::map<std::string, int> tkey;
  for (int k = 0; k < int(tv.val.summands.size()); ++k) tkey[summand_key(tv.val.summands[k])] = k;

  auto phi_at = [&](int m) -> Homomorphism {
    auto it = phi.find(m);
    if (it != phi.end()) return it->second;
    return zero_between(b.at(m), bp.at(m));
  };
  auto alpha_at = [&](int m) -> std::optional<ExtClass> {
    auto it = alpha.find(m);
    if (it == alpha.end() || it->second.is_zero()) return std::nullopt;
    return it->second;
  };

  std::map<int, ResLift> lifts;
  auto lift_of = [&](int m) -> const ResLift& {
    auto it = lifts.find(m);
    if (it == lifts.end()) it = lifts.emplace(m, lift_to_resolutions(phi_at(m))).first;
    return it->second;
  };
  std::map<int, std::unique_ptr<DiagChain>> dcB, dcBp;
  auto diag_of = [&](std::map<int, std::unique_ptr<DiagChain>>& c, const GradedGroup& gg,
                     int m) -> DiagChain& {
    auto it = c.find(m);
    if (it == c.end())
      it = c.emplace(m, std::make_unique<DiagChain>(diag_chain(gg.at(m), diag_module(m)))).first;
    return *it->second;
  };
  std::map<int, std::unique_ptr<PseudoHomology>> phB, phBp;
  auto ph_diag = [&](std::map<int, std::unique_ptr<PseudoHomology>>& c,
                     std::map<int, std::unique_ptr<DiagChain>>& dcc, const GradedGroup& gg,
                     int m) -> PseudoHomology& {
    auto it = c.find(m);
    if (it == c.end())
      it = c.emplace(m, std::make_unique<PseudoHomology>(
                            pseudo_homology(a, 0, diag_of(dcc, gg, m).y)))
               .first;
    return *it->second;
  };
  std::map<std::pair<int, int>, std::unique_ptr<PairData>> pcB, pcBp;
  auto pair_of = [&](std::map<std::pair<int, int>, std::unique_ptr<PairData>>& c,
                     const GradedGroup& gg, int i, int j) -> PairData& {
    auto key = std::make_pair(i, j);
    auto it = c.find(key);
    if (it == c.end())
      it = c.emplace(key, std::make_unique<PairData>(make_pair_data(gg.at(i), gg.at(j)))).first;
    return *it->second;
  };
  std::map<std::pair<int, int>, std::unique_ptr<PseudoHomology>> phxB, phxBp;
  auto ph_pair = [&](std::map<std::pair<int, int>, std::unique_ptr<PseudoHomology>>& c,
                     std::map<std::pair<int, int>, std::unique_ptr<PairData>>& pcc,
                     const GradedGroup& gg, int i, int j) -> PseudoHomology& {
    auto key = std::make_pair(i, j);
    auto it = c.find(key);
    if (it == c.end())
      it = c.emplace(key, std::make_unique<PseudoHomology>(
                              pseudo_homology(a, 0, pair_of(pcc, gg, i, j).y)))
               .first;
    return *it->second;
  };

  auto add_block = [&](int si, int ti, const IntMat& bm) {
    Homomorphism blk = Homomorphism::between_canonical(sv.val.summands[size_t(si)].group,
                                                       tv.val.summands[size_t(ti)].group, bm);
    acc = acc + comp(tv.se.incl[size_t(ti)], comp(blk, sv.se.proj[size_t(si)]));
  };
  auto unit_coords = [](const CanonicalGroup& g, int k) {
    std::vector<Int> u(size_t(g.num_gens()), Int(0));
    u[size_t(k)] = 1;
    return u;
  };

  // -- level-preserving blocks, one per matching summand --------------------------
  for (int si = 0; si < int(sv.val.summands.size()); ++si) {
    const SqSummand& s = sv.val.summands[size_t(si)];
    const SummandInfo& in = sv.info[size_t(si)];
    if (s.group.is_zero()) continue;
    auto it = tkey.find(summand_key(s));
    if (it == tkey.end()) continue;
    int ti = it->second;
    const SqSummand& t = tv.val.summands[size_t(ti)];
    if (t.group.is_zero()) continue;

    switch (in.kind) {
      case SKind::pure_ext:
      case SKind::ext_cross: {
        Homomorphism am =
            in.diag ? coeff_induced(coeff_of_label(s.label), phi_at(in.m))
                    : comp(induced_map(BinKind::tensor, phi_at(in.j), Slot::right, bp.at(in.i)),
                           induced_map(BinKind::tensor, phi_at(in.i), Slot::left, b.at(in.j)));
        Homomorphism push = induced_map(BinKind::ext, am, Slot::right, a);
        Homomorphism blk = comp(t.delta, comp(push, retraction_of(s.delta)));
        acc = acc + comp(tv.se.incl[size_t(ti)], comp(blk, sv.se.proj[size_t(si)]));
        break;
      }
      case SKind::pure_hom:
      case SKind::hom_cross: {
        Homomorphism am =
            in.diag ? coeff_induced(coeff_of_label(s.label), phi_at(in.m))
                    : comp(induced_map(BinKind::tor, phi_at(in.j), Slot::right, bp.at(in.i)),
                           induced_map(BinKind::tor, phi_at(in.i), Slot::left, b.at(in.j)));
        Homomorphism push = induced_map(BinKind::hom, am, Slot::right, a);
        Homomorphism blk = comp(section_of(t.mu), comp(push, s.mu));
        acc = acc + comp(tv.se.incl[size_t(ti)], comp(blk, sv.se.proj[size_t(si)]));
        break;
      }
      case SKind::t_diag: {
        if (phi_at(in.m).is_zero()) break;
        DiagChain& ys = diag_of(dcB, b, in.m);
        DiagChain& yt = diag_of(dcBp, bp, in.m);
        ChainMap fmap = quad_chain_map(ys, yt, lift_of(in.m));
        PseudoHomology& ps = ph_diag(phB, dcB, b, in.m);
        PseudoHomology& pt = ph_diag(phBp, dcBp, bp, in.m);
        if (!(ps.group == s.group)) throw std::logic_error("summand/classes mismatch");
        IntMat bm(t.group.num_gens(), s.group.num_gens());
        for (int gi = 0; gi < s.group.num_gens(); ++gi) {
          ChainMap rep = ps.rep(unit_coords(s.group, gi));
          ChainMap image(moore_complex(a, 0), yt.y,
                         {{0, fmap.component(0) * rep.component(0)},
                          {1, fmap.component(1) * rep.component(1)}});
          std::vector<Int> c = pt.coords(image);
          for (int r = 0; r < bm.rows(); ++r) bm.at(r, gi) = c[size_t(r)];
        }
        add_block(si, ti, bm);
        break;
      }
      case SKind::lsharp: {
        Homomorphism blk = quad_tensor_induced(phi_at(in.m), l_module(a));
        acc = acc + comp(tv.se.incl[size_t(ti)], comp(blk, sv.se.proj[size_t(si)]));
        break;
      }
      case SKind::trp_cross: {
        if (phi_at(in.i).is_zero() && phi_at(in.j).is_zero()) break;
        PairData& ys = pair_of(pcB, b, in.i, in.j);
        PairData& yt = pair_of(pcBp, bp, in.i, in.j);
        ChainMap fmap = pair_chain_map(ys, yt, lift_of(in.i), lift_of(in.j));
        PseudoHomology& ps = ph_pair(phxB, pcB, b, in.i, in.j);
        PseudoHomology& pt = ph_pair(phxBp, pcBp, bp, in.i, in.j);
        if (!(ps.group == s.group)) throw std::logic_error("summand/classes mismatch");
        IntMat bm(t.group.num_gens(), s.group.num_gens());
        for (int gi = 0; gi < s.group.num_gens(); ++gi) {
          ChainMap rep = ps.rep(unit_coords(s.group, gi));
          ChainMap image(moore_complex(a, 0), yt.y,
                         {{0, fmap.component(0) * rep.component(0)},
                          {1, fmap.component(1) * rep.component(1)}});
          std::vector<Int> c = pt.coords(image);
          for (int r = 0; r < bm.rows(); ++r) bm.at(r, gi) = c[size_t(r)];
        }
        add_block(si, ti, bm);
        break;
      }
    }
  }

  // -- diagonal shift blocks along alpha ------------------------------------------
  for (const auto& [m, idxs] : sv.diag) {
    auto al = alpha_at(m);
    if (!al) continue;
    if (bp.parts().count(m + 1) == 0) continue;
    auto tit = tv.diag.find(m + 1);
    if (tit == tv.diag.end()) continue;
    CellMaps cs = cell_maps(sv, idxs);
    CellMaps ct = cell_maps(tv, tit->second);
    if (cs.se.total.is_zero() || ct.se.total.is_zero()) continue;
    Homomorphism sm = shift_map(d, m, *al, a);
    acc = acc + comp(ct.incl, comp(sm, cs.proj));
  }

  // -- symmetrization blocks (diagonal sources into the adjacent cross cell) ------
  for (const auto& [m, idxs] : sv.diag) {
    auto al = alpha_at(m);
    if (!al) continue;
    if (phi_at(m).is_zero()) continue;
    if (bp.parts().count(m) == 0 || bp.parts().count(m + 1) == 0) continue;
    IntMat e = al->rep();
    if (d == 2 * m) {
      int si = -1;
      for (int k : idxs)
        if (sv.info[size_t(k)].kind == SKind::t_diag) si = k;
      if (si < 0 || sv.val.summands[size_t(si)].group.is_zero()) continue;
      auto xt = tv.cross.find({m, m + 1});
      if (xt == tv.cross.end()) continue;
      int ti = xt->second[0];
      if (tv.info[size_t(ti)].kind != SKind::ext_cross)
        throw std::logic_error("expected a tensor-coefficient cross cell");
      const SqSummand& t = tv.val.summands[size_t(ti)];
      if (t.group.is_zero()) continue;
      const SqSummand& s = sv.val.summands[size_t(si)];
      DiagChain& ys = diag_of(dcB, b, m);
      PairData smm = make_pair_data(b.at(m), b.at(m));
      ChainMap hc = h_transformation(ys, smm.L, smm.y);
      PairData& yt = pair_of(pcBp, bp, m, m + 1);
      DropBlocks g = right_alpha_leg(smm.L, yt.L, lift_of(m), e);
      if (g.count(1) == 0) continue;
      PseudoHomology& ps = ph_diag(phB, dcB, b, m);
      TensorGroup tg(bp.at(m), bp.at(m + 1));
      CanonicalGroup tval = binary_functor(BinKind::tensor, bp.at(m), bp.at(m + 1));
      IntMat bm(t.group.num_gens(), s.group.num_gens());
      for (int gi = 0; gi < s.group.num_gens(); ++gi) {
        ChainMap rep = ps.rep(unit_coords(s.group, gi));
        IntMat m0 = g.at(1) * hc.component(1) * rep.component(1);
        std::vector<Int> cls = ext_read(a, tval, m0, [&](const std::vector<Int>& col) {
          return tensor_value_of_bottom(tg, yt.L, col);
        });
        std::vector<Int> c = t.delta.apply_canonical(cls);
        for (int r = 0; r < bm.rows(); ++r) bm.at(r, gi) = c[size_t(r)];
      }
      add_block(si, ti, bm);
    } else if (d == 2 * m + 1) {
      int si = -1;
      for (int k : idxs)
        if (sv.info[size_t(k)].kind == SKind::pure_hom) si = k;
      if (si < 0 || sv.val.summands[size_t(si)].group.is_zero()) continue;
      const SqSummand& s = sv.val.summands[size_t(si)];
      CoeffArg ca = coeff_of_label(s.label);
      if (ca != CoeffArg::rfun && ca != CoeffArg::omega) continue;
      auto xt = tv.cross.find({m, m + 1});
      if (xt == tv.cross.end()) continue;
      int ti = xt->second[0];
      if (tv.info[size_t(ti)].kind != SKind::trp_cross)
        throw std::logic_error("expected a torsion-triple cross cell");
      const SqSummand& t = tv.val.summands[size_t(ti)];
      if (t.group.is_zero()) continue;
      DiagChain& ys = diag_of(dcB, b, m);
      QuadTorsionData qtd = quad_torsion_data(b.at(m), diag_module(m));
      if (!(qtd.prime.group.canon() == s.hom_arg))
        throw std::logic_error("torsion coefficient mismatch");
      PairData smm = make_pair_data(b.at(m), b.at(m));
      ChainMap hc = h_transformation(ys, smm.L, smm.y);
      PairData& yt = pair_of(pcBp, bp, m, m + 1);
      DropBlocks g = right_alpha_leg(smm.L, yt.L, lift_of(m), e);
      PseudoHomology& pt = ph_pair(phxBp, pcBp, bp, m, m + 1);
      if (!(pt.group == t.group)) throw std::logic_error("summand/classes mismatch");
      HomGroup hg(a, s.hom_arg);
      IntMat bm(t.group.num_gens(), s.group.num_gens());
      for (int gi = 0; gi < s.group.num_gens(); ++gi) {
        IntMat hv = hg.to_matrix(unit_coords(s.group, gi));
        ChainMap f = hom_chain_rep(a, hv, ys, qtd);
        ChainMap hcf(moore_complex(a, 1), smm.y,
                     {{1, hc.component(1) * f.component(1)},
                      {2, hc.component(2) * f.component(2)}});
        ChainMap h = drops_compose(a, 1, 1, hcf, g, yt.y);
        std::vector<Int> c = pt.coords(h);
        for (int r = 0; r < bm.rows(); ++r) bm.at(r, gi) = c[size_t(r)];
      }
      add_block(si, ti, bm);
    }
  }

  // -- cross-cell blocks along alpha ------------------------------------------------
  for (const auto& [ij, idxs] : sv.cross) {
    int i = ij.first, j = ij.second;
    int si = idxs[0];
    const SqSummand& s = sv.val.summands[size_t(si)];
    const SummandInfo& in = sv.info[size_t(si)];
    if (s.group.is_zero()) continue;
    if (in.kind == SKind::ext_cross) continue;
    bool is_trp = (in.kind == SKind::trp_cross);
    PairData& ys = pair_of(pcB, b, i, j);

    std::vector<ChainMap> reps;
    reps.reserve(size_t(s.group.num_gens()));
    if (is_trp) {
      PseudoHomology& ps = ph_pair(phxB, pcB, b, i, j);
      if (!(ps.group == s.group)) throw std::logic_error("summand/classes mismatch");
      for (int gi = 0; gi < s.group.num_gens(); ++gi)
        reps.push_back(ps.rep(unit_coords(s.group, gi)));
    } else {
      TorGroup torg(b.at(i), b.at(j));
      HomGroup hg(a, s.hom_arg);
      for (int gi = 0; gi < s.group.num_gens(); ++gi)
        reps.push_back(tor_hom_rep(a, torg, hg.to_matrix(unit_coords(s.group, gi)), ys, ys.y));
    }

    auto write_ext_cross = [&](int ti, const DropBlocks& g, int key, bool doubled) {
      const SqSummand& t = tv.val.summands[size_t(ti)];
      if (t.group.is_zero()) return;
      const SummandInfo& tin = tv.info[size_t(ti)];
      TensorGroup tg(bp.at(tin.i), bp.at(tin.j));
      CanonicalGroup tval = binary_functor(BinKind::tensor, bp.at(tin.i), bp.at(tin.j));
      PairLayout lt = pair_layout(bp.at(tin.i), bp.at(tin.j));
      IntMat bm(t.group.num_gens(), s.group.num_gens());
      for (int gi = 0; gi < s.group.num_gens(); ++gi) {
        IntMat m0 = g.at(key) * reps[size_t(gi)].component(doubled ? 2 : 1);
        std::vector<Int> cls = ext_read(a, tval, m0, [&](const std::vector<Int>& col) {
          return tensor_value_of_bottom(tg, lt, col);
        });
        std::vector<Int> c = t.delta.apply_canonical(cls);
        for (int r = 0; r < bm.rows(); ++r) bm.at(r, gi) = c[size_t(r)];
      }
      add_block(si, ti, bm);
    };
    auto write_trp = [&](int ti, const DropBlocks& g, PairData& yt, PseudoHomology& pt) {
      const SqSummand& t = tv.val.summands[size_t(ti)];
      if (t.group.is_zero()) return;
      if (!(pt.group == t.group)) throw std::logic_error("summand/classes mismatch");
      IntMat bm(t.group.num_gens(), s.group.num_gens());
      for (int gi = 0; gi < s.group.num_gens(); ++gi) {
        ChainMap h = drops_compose(a, 1, 1, reps[size_t(gi)], g, yt.y);
        std::vector<Int> c = pt.coords(h);
        for (int r = 0; r < bm.rows(); ++r) bm.at(r, gi) = c[size_t(r)];
      }
      add_block(si, ti, bm);
    };

    // right leg lowered: (i, j) -> (i, j+1)
    if (auto aj = alpha_at(j);
        aj && bp.parts().count(i) && bp.parts().count(j + 1) && !phi_at(i).is_zero()) {
      auto tcell = tv.cross.find({i, j + 1});
      if (tcell != tv.cross.end()) {
        PairData& yt = pair_of(pcBp, bp, i, j + 1);
        DropBlocks g = right_alpha_leg(ys.L, yt.L, lift_of(i), aj->rep());
        if (is_trp) {
          if (g.count(1)) write_ext_cross(tcell->second[0], g, 1, false);
        } else {
          if (!g.empty()) write_trp(tcell->second[0], g, yt, ph_pair(phxBp, pcBp, bp, i, j + 1));
        }
      }
    }
    // left leg lowered: (i, j) -> (i+1, j), or into the diagonal cell at i+1 == j
    if (auto ai = alpha_at(i);
        ai && bp.parts().count(j) && bp.parts().count(i + 1) && !phi_at(j).is_zero()) {
      if (i + 1 < j) {
        auto tcell = tv.cross.find({i + 1, j});
        if (tcell != tv.cross.end()) {
          PairData& yt = pair_of(pcBp, bp, i + 1, j);
          DropBlocks g = left_alpha_leg(ys.L, yt.L, ai->rep(), lift_of(j));
          if (is_trp) {
            if (g.count(1)) write_ext_cross(tcell->second[0], g, 1, false);
          } else {
            if (!g.empty()) write_trp(tcell->second[0], g, yt, ph_pair(phxBp, pcBp, bp, i + 1, j));
          }
        }
      } else {
        auto tcell = tv.diag.find(j);
        if (tcell != tv.diag.end()) {
          DiagChain& qt = diag_of(dcBp, bp, j);
          DropBlocks g = pair_embed_blocks(ys.L, qt, ai->rep(), lift_of(j));
          if (is_trp) {
            if (g.count(1)) {
              QuadTensorData qd = quad_tensor_data(bp.at(j), diag_module(j));
              CanonicalGroup qval = qd.value();
              int ti = -1;
              for (int k : tcell->second) {
                const SummandInfo& tin = tv.info[size_t(k)];
                if (tin.kind == SKind::lsharp) ti = k;
                if (tin.kind == SKind::pure_ext &&
                    coeff_of_label(tv.val.summands[size_t(k)].label) == CoeffArg::gamma)
                  ti = k;
              }
              if (ti >= 0 && !tv.val.summands[size_t(ti)].group.is_zero()) {
                const SqSummand& t = tv.val.summands[size_t(ti)];
                if (!(t.ext_arg == qval)) throw std::logic_error("embed coefficient mismatch");
                IntMat bm(t.group.num_gens(), s.group.num_gens());
                for (int gi = 0; gi < s.group.num_gens(); ++gi) {
                  IntMat m0 = g.at(1) * reps[size_t(gi)].component(1);
                  std::vector<Int> cls = ext_read(
                      a, qval, m0,
                      [&](const std::vector<Int>& col) { return qd.quotient.coords(col); });
                  std::vector<Int> c = t.delta.apply_canonical(cls);
                  for (int r = 0; r < bm.rows(); ++r) bm.at(r, gi) = c[size_t(r)];
                }
                add_block(si, ti, bm);
              }
            }
          } else {
            int ti = -1;
            for (int k : tcell->second)
              if (tv.info[size_t(k)].kind == SKind::t_diag) ti = k;
            if (ti >= 0 && !tv.val.summands[size_t(ti)].group.is_zero() && !g.empty()) {
              const SqSummand& t = tv.val.summands[size_t(ti)];
              PseudoHomology& pt = ph_diag(phBp, dcBp, bp, j);
              if (!(pt.group == t.group)) throw std::logic_error("summand/classes mismatch");
              IntMat bm(t.group.num_gens(), s.group.num_gens());
              for (int gi = 0; gi < s.group.num_gens(); ++gi) {
                ChainMap h = drops_compose(a, 1, 1, reps[size_t(gi)], g, qt.y);
                std::vector<Int> c = pt.coords(h);
                for (int r = 0; r < bm.rows(); ++r) bm.at(r, gi) = c[size_t(r)];
              }
              add_block(si, ti, bm);
            }
          }
        }
      }
    }
    // both legs lowered (torsion sources only): (i, j) -> (i+1, j+1)
    if (!is_trp) {
      auto ai = alpha_at(i);
      auto aj = alpha_at(j);
      if (ai && aj && bp.parts().count(i + 1) && bp.parts().count(j + 1)) {
        auto tcell = tv.cross.find({i + 1, j + 1});
        if (tcell != tv.cross.end()) {
          PairLayout lt = pair_layout(bp.at(i + 1), bp.at(j + 1));
          DropBlocks g = double_alpha_leg(ys.L, lt, ai->rep(), aj->rep());
          if (g.count(2)) write_ext_cross(tcell->second[0], g, 2, true);
        }
      }
    }
  }

  return acc;
}

// --- contravariant change of the test group -----------------------------------------

Homomorphism square_pullback_full(const Homomorphism& phi_n, const GradedGroup& bp, int d) {
  CanonicalGroup an = phi_n.dom().canon(), apn = phi_n.cod().canon();
  SqView sv = make_view(apn, bp, d), tv = make_view(an, bp, d);
  Homomorphism acc = zero_between(sv.se.total, tv.se.total);
  if (sv.se.total.is_zero() || tv.se.total.is_zero()) return acc;
  if (sv.val.summands.size() != tv.val.summands.size())
    throw std::logic_error("pullback: summand list mismatch");
  ResLift lf = lift_to_resolutions(phi_n);

  auto unit_coords = [](const CanonicalGroup& g, int k) {
    std::vector<Int> u(size_t(g.num_gens()), Int(0));
    u[size_t(k)] = 1;
    return u;
  };

  for (int k = 0; k < int(sv.val.summands.size()); ++k) {
    const SqSummand& s = sv.val.summands[size_t(k)];
    const SqSummand& t = tv.val.summands[size_t(k)];
    const SummandInfo& in = sv.info[size_t(k)];
    if (summand_key(s) != summand_key(t)) throw std::logic_error("pullback: summand order mismatch");
    if (s.group.is_zero() || t.group.is_zero()) continue;
    Homomorphism blk = zero_between(s.group, t.group);
    switch (in.kind) {
      case SKind::pure_ext:
      case SKind::ext_cross: {
        Homomorphism push = induced_map(BinKind::ext, phi_n, Slot::left, s.ext_arg);
        blk = comp(t.delta, comp(push, retraction_of(s.delta)));
        break;
      }
      case SKind::pure_hom:
      case SKind::hom_cross: {
        Homomorphism push = induced_map(BinKind::hom, phi_n, Slot::left, s.hom_arg);
        blk = comp(section_of(t.mu), comp(push, s.mu));
        break;
      }
      case SKind::t_diag: {
        DiagChain dc = diag_chain(bp.at(in.m), diag_module(in.m));
        PseudoHomology psrc = pseudo_homology(apn, 0, dc.y);
        PseudoHomology ph = pseudo_homology(an, 0, dc.y);
        if (!(psrc.group == s.group) || !(ph.group == t.group))
          throw std::logic_error("summand/classes mismatch");
        IntMat bm(t.group.num_gens(), s.group.num_gens());
        for (int gi = 0; gi < s.group.num_gens(); ++gi) {
          ChainMap rep = psrc.rep(unit_coords(s.group, gi));
          ChainMap image(moore_complex(an, 0), dc.y,
                         {{0, rep.component(0) * lf.f0}, {1, rep.component(1) * lf.f1}});
          std::vector<Int> c = ph.coords(image);
          for (int r = 0; r < bm.rows(); ++r) bm.at(r, gi) = c[size_t(r)];
        }
        blk = Homomorphism::between_canonical(s.group, t.group, bm);
        break;
      }
      case SKind::trp_cross: {
        PairData pd = make_pair_data(bp.at(in.i), bp.at(in.j));
        PseudoHomology psrc = pseudo_homology(apn, 0, pd.y);
        PseudoHomology ph = pseudo_homology(an, 0, pd.y);
        if (!(psrc.group == s.group) || !(ph.group == t.group))
          throw std::logic_error("summand/classes mismatch");
        IntMat bm(t.group.num_gens(), s.group.num_gens());
        for (int gi = 0; gi < s.group.num_gens(); ++gi) {
          ChainMap rep = psrc.rep(unit_coords(s.group, gi));
          ChainMap image(moore_complex(an, 0), pd.y,
                         {{0, rep.component(0) * lf.f0}, {1, rep.component(1) * lf.f1}});
          std::vector<Int> c = ph.coords(image);
          for (int r = 0; r < bm.rows(); ++r) bm.at(r, gi) = c[size_t(r)];
        }
        blk = Homomorphism::between_canonical(s.group, t.group, bm);
        break;
      }
      case SKind::lsharp: {
        QuadraticZModule lmp = l_module(apn), lm = l_module(an);
        // dual of phi on the e level
        std::vector<int> dsrc, dsrcp;
        for (int f = 0; f < an.free_rank(); ++f) dsrc.push_back(f);
        for (int tj = 0; tj < int(an.torsion().size()); ++tj)
          if (an.torsion()[size_t(tj)] % 2 == 0) dsrc.push_back(an.free_rank() + tj);
        for (int f = 0; f < apn.free_rank(); ++f) dsrcp.push_back(f);
        for (int tj = 0; tj < int(apn.torsion().size()); ++tj)
          if (apn.torsion()[size_t(tj)] % 2 == 0) dsrcp.push_back(apn.free_rank() + tj);
        if (int(dsrc.size()) != lm.e().num_gens() || int(dsrcp.size()) != lmp.e().num_gens())
          throw std::logic_error("dual basis mismatch");
        IntMat fmat = phi_n.canonical_matrix();
        IntMat le(lm.e().num_gens(), lmp.e().num_gens());
        for (int r = 0; r < le.rows(); ++r)
          for (int c = 0; c < le.cols(); ++c)
            le.at(r, c) = bit(fmat.at(dsrcp[size_t(c)], dsrc[size_t(r)]));
        IntMat lee = lf.f1.transpose();
        Homomorphism le_hom = Homomorphism::between_canonical(lmp.e(), lm.e(), le);
        Homomorphism lee_hom = Homomorphism::between_canonical(lmp.ee(), lm.ee(), lee);
        Homomorphism hsrc = Homomorphism::between_canonical(lmp.e(), lmp.ee(), lmp.h());
        Homomorphism htgt = Homomorphism::between_canonical(lm.e(), lm.ee(), lm.h());
        if (!comp(lee_hom, hsrc).equal(comp(htgt, le_hom)))
          throw std::logic_error("dual module map incompatible with h");
        QuadTensorData qdp = quad_tensor_data(bp.at(in.m), lmp);
        QuadTensorData qd = quad_tensor_data(bp.at(in.m), lm);
        int r0 = qdp.cx.y0();
        QuadBasis q0p(r0, lmp), q0(r0, lm);
        IntMat l0(qd.cx.c0.gens(), qdp.cx.c0.gens());
        for (int i = 0; i < r0; ++i)
          for (int ap = 0; ap < lmp.e().num_gens(); ++ap)
            for (int am = 0; am < lm.e().num_gens(); ++am)
              if (le.at(am, ap) != 0) l0.at(q0.e_index(i, am), q0p.e_index(i, ap)) += le.at(am, ap);
        for (int i = 0; i < r0; ++i)
          for (int j = i + 1; j < r0; ++j)
            for (int bp2 = 0; bp2 < lmp.ee().num_gens(); ++bp2)
              for (int bm2 = 0; bm2 < lm.ee().num_gens(); ++bm2)
                if (lee.at(bm2, bp2) != 0)
                  l0.at(q0.ee_index(i, j, bm2), q0p.ee_index(i, j, bp2)) += lee.at(bm2, bp2);
        IntMat m = qd.quotient.coords_mat(l0 * qdp.quotient.lift_mat(
                                                    IntMat::identity(s.group.num_gens())));
        blk = Homomorphism::between_canonical(s.group, t.group, m);
        break;
      }
    }
    acc = acc + comp(tv.se.incl[size_t(k)], comp(blk, sv.se.proj[size_t(k)]));
  }
  return acc;
}

// Columns spanning the image of Ext(A_n, b'_{n+1}) pushed through the summand
// inclusions delta of Sq_d(B'; A_n); used as the ambiguity lattice of beta.
// The extension halves of the summands of the square at degree d are, cell by
// cell, the values of the corresponding summands of the integral square at
// degree d+1.  The pairing is order-preserving inside each cell once both
// lists are filtered down to the entries that can carry those halves: on the
// source side the entries with an extension argument, on the target side the
// entries whose value survives a free argument.
namespace {

bool carries_ext(SKind k) {
  return k == SKind::pure_ext || k == SKind::t_diag || k == SKind::lsharp ||
         k == SKind::ext_cross || k == SKind::trp_cross;
}

bool carries_value_at_free(SKind k) {
  return k == SKind::pure_hom || k == SKind::t_diag || k == SKind::lsharp ||
         k == SKind::trp_cross || k == SKind::hom_cross;
}

}  // namespace

IntMat delta_image_matrix(const CanonicalGroup& an, const GradedGroup& bp, int d,
                          const Homomorphism& bnext) {
  SqView tv = make_view(an, bp, d);
  SqView gv = make_view(zee(), bp, d + 1);
  CanonicalGroup src = bnext.dom().canon();
  ExtGroup eg(an, src);
  if (eg.value().is_zero() || tv.se.total.is_zero())
    return IntMat(tv.se.total.num_gens(), 0);
  Homomorphism acc = zero_between(eg.value(), tv.se.total);
  auto pair_cell = [&](const std::vector<int>& sidx, const std::vector<int>* tidx) {
    std::vector<int> svec, tvec;
    for (int k : sidx)
      if (carries_ext(tv.info[size_t(k)].kind)) svec.push_back(k);
    if (tidx)
      for (int k : *tidx)
        if (carries_value_at_free(gv.info[size_t(k)].kind)) tvec.push_back(k);
    if (svec.size() != tvec.size())
      throw std::logic_error("alignment mismatch between consecutive squares");
    for (size_t p = 0; p < svec.size(); ++p) {
      const SqSummand& t = tv.val.summands[size_t(svec[p])];
      if (!(gv.val.summands[size_t(tvec[p])].group == t.ext_arg))
        throw std::logic_error("alignment mismatch between consecutive squares");
      if (t.ext_arg.is_zero() || t.group.is_zero()) continue;
      Homomorphism g_s = comp(gv.se.proj[size_t(tvec[p])], bnext);
      Homomorphism push = induced_map(BinKind::ext, g_s, Slot::right, an);
      acc = acc + comp(tv.se.incl[size_t(svec[p])], comp(t.delta, push));
    }
  };
  for (const auto& [m, idxs] : tv.diag) {
    auto it = gv.diag.find(m);
    pair_cell(idxs, it == gv.diag.end() ? nullptr : &it->second);
  }
  for (const auto& [ij, idxs] : tv.cross) {
    auto it = gv.cross.find(ij);
    pair_cell(idxs, it == gv.cross.end() ? nullptr : &it->second);
  }
  return acc.canonical_matrix();
}

// --- F2 helpers ---------------------------------------------------------------------

IntMat mod2(const IntMat& m) { return m.reduced_mod(2); }

int f2_rank(IntMat m) {
  m = mod2(m);
  int r = 0;
  for (int c = 0; c < m.cols() && r < m.rows(); ++c) {
    int piv = -1;
    for (int i = r; i < m.rows(); ++i)
      if (m.at(i, c) % 2 != 0) {
        piv = i;
        break;
      }
    if (piv < 0) continue;
    m.swap_rows(piv, r);
    for (int i = 0; i < m.rows(); ++i)
      if (i != r && m.at(i, c) % 2 != 0)
        for (int j = c; j < m.cols(); ++j) m.at(i, j) = bit(m.at(i, j) + m.at(r, j));
    ++r;
  }
  return r;
}

// Solve a x = b over F2 (a, b integer matrices read mod 2).
bool f2_solvable(const IntMat& a, const IntMat& b) {
  if (a.rows() != b.rows()) throw std::logic_error("f2_solvable: shape mismatch");
  if (a.rows() == 0) return true;
  IntMat big = IntMat::hstack(mod2(a), IntMat::diag(std::vector<Int>(size_t(a.rows()), Int(2))));
  return solve_mat(big, mod2(b)).has_value();
}

bool is_zero_mod2(const IntMat& m) { return mod2(m).is_zero(); }

// --- JSON helpers ---------------------------------------------------------------------

using nlohmann::json;

json mat_json(const IntMat& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(to_string(m.at(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

IntMat mat_parse(const json& j, int rows, int cols, const std::string& where) {
  if (!j.is_array() || int(j.size()) != rows)
    throw std::invalid_argument(where + ": expected " + std::to_string(rows) + " rows");
  IntMat m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const json& row = j[size_t(i)];
    if (!row.is_array() || int(row.size()) != cols)
      throw std::invalid_argument(where + ": expected " + std::to_string(cols) + " columns");
    for (int c = 0; c < cols; ++c) m.at(i, c) = Int(row[size_t(c)].get<std::string>());
  }
  return m;
}

json vec_json(const std::vector<Int>& v) {
  json out = json::array();
  for (const Int& x : v) out.push_back(to_string(x));
  return out;
}

std::vector<Int> vec_parse(const json& j, int len, const std::string& where) {
  if (!j.is_array() || int(j.size()) != len)
    throw std::invalid_argument(where + ": expected " + std::to_string(len) + " coordinates");
  std::vector<Int> out(size_t(len), Int(0));
  for (int i = 0; i < len; ++i) out[size_t(i)] = Int(j[size_t(i)].get<std::string>());
  return out;
}

json graded_json(const GradedGroup& g) {
  json out = json::object();
  for (const auto& [deg, part] : g.parts()) out[std::to_string(deg)] = part.to_string();
  return out;
}

GradedGroup graded_parse(const json& j, const std::string& where) {
  if (!j.is_object()) throw std::invalid_argument(where + ": expected an object");
  GradedGroup g;
  for (auto it = j.begin(); it != j.end(); ++it) {
    int deg = 0;
    try {
      deg = std::stoi(it.key());
    } catch (const std::exception&) {
      throw std::invalid_argument(where + ": bad degree key \"" + it.key() + "\"");
    }
    g.set(deg, parse_group_expr(it.value().get<std::string>()));
  }
  return g;
}

std::pair<int, int> nk_parse(const std::string& key, const std::string& where) {
  size_t comma = key.find(',');
  if (comma == std::string::npos)
    throw std::invalid_argument(where + ": expected \"n,k\" key, got \"" + key + "\"");
  try {
    return {std::stoi(key.substr(0, comma)), std::stoi(key.substr(comma + 1))};
  } catch (const std::exception&) {
    throw std::invalid_argument(where + ": bad \"n,k\" key \"" + key + "\"");
  }
}

std::string nk_key(const std::pair<int, int>& nk) {
  return std::to_string(nk.first) + "," + std::to_string(nk.second);
}

}  // namespace

// --- public surface ---------------------------------------------------------------------

std::string ValidationReport::to_string() const {
  if (ok) return "OK";
  std::ostringstream os;
  for (const auto& i : issues) os << i.where << ": " << i.message << "\n";
  return os.str();
}

std::vector<int> t2_gens(const CanonicalGroup& g) { return t2_list(g); }
std::vector<int> s2_gens(const CanonicalGroup& g) { return s2_list(g); }

std::vector<SummandSpan> beta_layout(const CanonicalGroup& a, const GradedGroup& b, int d) {
  SqView v = make_view(a, b, d);
  std::vector<SummandSpan> out;
  for (const auto& s : v.val.summands) out.push_back({s.origin, s.label, s.group});
  return out;
}

CanonicalGroup beta_total(const CanonicalGroup& a, const GradedGroup& b, int d) {
  return make_view(a, b, d).se.total;
}

std::vector<std::vector<Int>> split_beta(const CanonicalGroup& a, const GradedGroup& b, int d,
                                         const std::vector<Int>& coords) {
  SqView v = make_view(a, b, d);
  if (int(coords.size()) != v.se.total.num_gens())
    throw std::invalid_argument("split_beta: coordinate length mismatch");
  std::vector<std::vector<Int>> out;
  for (size_t k = 0; k < v.val.summands.size(); ++k)
    out.push_back(v.se.proj[k].apply_canonical(coords));
  return out;
}

std::vector<Int> assemble_beta(const CanonicalGroup& a, const GradedGroup& b, int d,
                               const std::vector<std::vector<Int>>& blocks) {
  SqView v = make_view(a, b, d);
  if (blocks.size() != v.val.summands.size())
    throw std::invalid_argument("assemble_beta: block count mismatch");
  std::vector<Int> acc(size_t(v.se.total.num_gens()), Int(0));
  for (size_t k = 0; k < blocks.size(); ++k) {
    std::vector<Int> part = v.se.incl[k].apply_canonical(blocks[k]);
    acc = add_vec(acc, part);
  }
  return v.se.total.reduce(acc);
}

ValidationReport validate_bype(const Bype& x) {
  ValidationReport rep;
  auto issue = [&](const std::string& where, const std::string& msg) {
    rep.ok = false;
    rep.issues.push_back({where, msg});
  };
  for (const auto& [n, part] : x.groups.parts()) {
    (void)part;
    if (n < 1) issue("groups", "degree " + std::to_string(n) + " below 1");
  }
  if (!rep.ok) return rep;

  std::set<int> degrees;
  for (const auto& [n, part] : x.groups.parts()) {
    (void)part;
    if (n >= 2) degrees.insert(n);
  }
  for (const auto& [n, h] : x.b) {
    (void)h;
    degrees.insert(n);
  }
  for (const auto& [n, v] : x.beta) {
    (void)v;
    degrees.insert(n);
  }

  for (int n : degrees) {
    std::string bw = "b[" + std::to_string(n) + "]";
    std::string pw = "beta[" + std::to_string(n) + "]";
    if (n < 2) {
      if (x.b.count(n)) issue(bw, "components are defined for degrees >= 2 only");
      if (x.beta.count(n)) issue(pw, "representatives are defined for degrees >= 2 only");
      continue;
    }
    CanonicalGroup bn = x.groups.at(n);
    if (bn.is_zero() && (x.b.count(n) || x.beta.count(n))) {
      issue(x.b.count(n) ? bw : pw, "entry at a degree where the graded group vanishes");
      continue;
    }
    if (bn.is_zero()) continue;
    int d = n - 1;
    SqView gv = make_view(zee(), x.groups, d);
    SqView av = make_view(bn, x.groups, d);
    bool shapes_ok = true;
    if (x.b.count(n)) {
      const Homomorphism& h = x.b.at(n);
      if (!(h.dom().canon() == bn)) {
        issue(bw, "domain differs from the graded group at this degree");
        shapes_ok = false;
      }
      if (!(h.cod().canon() == gv.se.total)) {
        issue(bw, "codomain differs from the coefficient square at degree " + std::to_string(d));
        shapes_ok = false;
      }
    }
    if (x.beta.count(n) && int(x.beta.at(n).size()) != av.se.total.num_gens()) {
      issue(pw, "coordinate length " + std::to_string(x.beta.at(n).size()) + ", expected " +
                    std::to_string(av.se.total.num_gens()));
      shapes_ok = false;
    }
    if (!shapes_ok) continue;
    if (av.val.summands.size() != gv.val.summands.size())
      throw std::logic_error("alignment mismatch between test groups");
    std::vector<Int> beta = x.beta.count(n)
                                ? av.se.total.reduce(x.beta.at(n))
                                : std::vector<Int>(size_t(av.se.total.num_gens()), Int(0));
    Homomorphism bmap = x.b.count(n) ? x.b.at(n) : zero_between(bn, gv.se.total);
    for (size_t k = 0; k < av.val.summands.size(); ++k) {
      const SqSummand& s = av.val.summands[k];
      if (!(gv.val.summands[k].group == s.hom_arg))
        throw std::logic_error("alignment mismatch between test groups");
      if (s.hom_arg.is_zero()) continue;
      HomGroup hg(bn, s.hom_arg);
      std::vector<Int> lhs = s.mu.apply_canonical(av.se.proj[k].apply_canonical(beta));
      std::vector<Int> rhs = hg.from_hom(comp(gv.se.proj[k], bmap));
      if (hg.value().reduce(lhs) != hg.value().reduce(rhs))
        issue(pw, "mu(beta) differs from b in summand " + summand_key(s));
    }
  }
  return rep;
}

Bype make_bype(const GradedGroup& groups, const std::map<int, Homomorphism>& b) {
  Bype x{groups, b, {}};
  for (const auto& [n, part] : groups.parts()) {
    (void)part;
    if (n < 1) throw std::invalid_argument("make_bype: degrees must be >= 1");
  }
  for (const auto& [n, bn] : b) {
    std::string where = "b[" + std::to_string(n) + "]";
    if (n < 2) throw std::invalid_argument("make_bype: " + where + " needs degree >= 2");
    CanonicalGroup dom = groups.at(n);
    if (!(bn.dom().canon() == dom))
      throw std::invalid_argument("make_bype: " + where + " has the wrong domain");
    int d = n - 1;
    SqView gv = make_view(zee(), groups, d);
    SqView av = make_view(dom, groups, d);
    if (!(bn.cod().canon() == gv.se.total))
      throw std::invalid_argument("make_bype: " + where + " has the wrong codomain");
    if (av.se.total.is_zero()) {
      if (!bn.is_zero())
        throw std::invalid_argument("make_bype: " + where + " cannot lift into a zero square");
      x.beta[n] = std::vector<Int>();
      continue;
    }
    IntMat mu_rows(0, av.se.total.num_gens());
    IntMat rel(0, 0);
    std::vector<Int> rhs;
    for (size_t k = 0; k < av.val.summands.size(); ++k) {
      const SqSummand& s = av.val.summands[k];
      if (!(gv.val.summands[k].group == s.hom_arg))
        throw std::logic_error("alignment mismatch between test groups");
      HomGroup hg(dom, s.hom_arg);
      mu_rows = IntMat::vstack(mu_rows, comp(s.mu, av.se.proj[k]).canonical_matrix());
      rel = IntMat::block_diag(rel, PresentedGroup::from_canonical(hg.value()).relations());
      std::vector<Int> part_rhs = hg.from_hom(comp(gv.se.proj[k], bn));
      rhs.insert(rhs.end(), part_rhs.begin(), part_rhs.end());
    }
    auto sol = solve(IntMat::hstack(mu_rows, rel), rhs);
    if (!sol)
      throw std::invalid_argument("make_bype: " + where + " does not lift through mu");
    std::vector<Int> beta(sol->begin(), sol->begin() + av.se.total.num_gens());
    x.beta[n] = av.se.total.reduce(beta);
  }
  return x;
}

Homomorphism induced_square_map(const CanonicalGroup& a, const GradedGroup& b,
                                const GradedGroup& bp, int d, const GradedMaps& phi,
                                const ExtWitness& alpha) {
  return induced_square_full(a, b, bp, d, phi, alpha);
}

Homomorphism square_pullback(const Homomorphism& phi_n, const GradedGroup& bp, int d) {
  return square_pullback_full(phi_n, bp, d);
}

bool check_morphism(const Bype& x, const Bype& xp, const GradedMaps& phi,
                    const ExtWitness& alpha) {
  const GradedGroup& b = x.groups;
  const GradedGroup& bpg = xp.groups;
  for (const auto& [n, f] : phi)
    if (!(f.dom().canon() == b.at(n)) || !(f.cod().canon() == bpg.at(n)))
      throw std::invalid_argument("check_morphism: phi[" + std::to_string(n) +
                                  "] endpoints mismatch");
  for (const auto& [n, al] : alpha)
    if (!(al.a() == b.at(n)) || !(al.b() == bpg.at(n + 1)))
      throw std::invalid_argument("check_morphism: alpha[" + std::to_string(n) +
                                  "] endpoints mismatch");
  int hi = 1;
  for (const auto& [n, part] : b.parts()) {
    (void)part;
    hi = std::max(hi, n);
  }
  for (const auto& [n, part] : bpg.parts()) {
    (void)part;
    hi = std::max(hi, n);
  }
  for (const auto& [n, h] : x.b) {
    (void)h;
    hi = std::max(hi, n);
  }
  for (const auto& [n, h] : xp.b) {
    (void)h;
    hi = std::max(hi, n);
  }

  for (int n = 2; n <= hi; ++n) {
    int d = n - 1;
    CanonicalGroup an = b.at(n), apn = bpg.at(n);

    // coefficient level
    Homomorphism fh = induced_square_full(zee(), b, bpg, d, phi, alpha);
    Homomorphism bn = x.b.count(n) ? x.b.at(n) : zero_between(an, fh.dom().canon());
    Homomorphism bpn = xp.b.count(n) ? xp.b.at(n) : zero_between(apn, fh.cod().canon());
    Homomorphism phin =
        phi.count(n) ? phi.at(n) : zero_between(an, apn);
    if (!comp(fh, bn).equal(comp(bpn, phin))) return false;

    // representative level
    Homomorphism fp = induced_square_full(an, b, bpg, d, phi, alpha);
    CanonicalGroup tgt = fp.cod().canon();
    if (tgt.is_zero()) continue;
    std::vector<Int> bx = x.beta.count(n)
                              ? fp.dom().canon().reduce(x.beta.at(n))
                              : std::vector<Int>(size_t(fp.dom().canon().num_gens()), Int(0));
    std::vector<Int> lhs = fp.apply_canonical(bx);
    Homomorphism pph = square_pullback_full(phin, bpg, d);
    std::vector<Int> bxp = xp.beta.count(n)
                               ? pph.dom().canon().reduce(xp.beta.at(n))
                               : std::vector<Int>(size_t(pph.dom().canon().num_gens()), Int(0));
    std::vector<Int> rhs = pph.apply_canonical(bxp);
    std::vector<Int> diff = tgt.reduce(sub_vec(lhs, rhs));
    if (is_zero_vec(diff)) continue;
    Homomorphism bnext = xp.b.count(n + 1)
                             ? xp.b.at(n + 1)
                             : zero_between(bpg.at(n + 1), beta_total(zee(), bpg, d + 1));
    IntMat img = delta_image_matrix(an, bpg, d, bnext);
    IntMat relt = PresentedGroup::from_canonical(tgt).relations();
    if (!solve(IntMat::hstack(img, relt), diff)) return false;
  }
  return true;
}

std::optional<ExtWitness> find_morphism_witness(const Bype& x, const Bype& xp,
                                                const GradedMaps& phi) {
  std::vector<int> degs;
  std::vector<ExtGroup> egs;
  std::vector<std::vector<std::vector<Int>>> lists;
  Int total = 1;
  for (const auto& [n, part] : x.groups.parts()) {
    if (xp.groups.parts().count(n + 1) == 0) continue;
    ExtGroup eg(part, xp.groups.at(n + 1));
    if (eg.value().is_zero()) continue;
    total *= eg.value().order();
    if (total > 65536)
      throw std::runtime_error("search truncated: witness space exceeds 2^16 candidates");
    degs.push_back(n);
    lists.push_back(enumerate_elements(eg.value()));
    egs.push_back(eg);
  }
  std::vector<size_t> idx(degs.size(), 0);
  while (true) {
    ExtWitness w;
    for (size_t i = 0; i < degs.size(); ++i) {
      const std::vector<Int>& coords = lists[i][idx[i]];
      if (!is_zero_vec(coords)) w.emplace(degs[i], egs[i].to_class(coords));
    }
    if (check_morphism(x, xp, phi, w)) return w;
    size_t pos = 0;
    while (pos < idx.size()) {
      if (++idx[pos] < lists[pos].size()) break;
      idx[pos] = 0;
      ++pos;
    }
    if (pos == idx.size()) break;
    if (idx.empty()) break;
  }
  return std::nullopt;
}

ValidationReport validate_stable_bype(const StableBype& s) {
  ValidationReport rep;
  auto issue = [&](const std::string& where, const std::string& msg) {
    rep.ok = false;
    rep.issues.push_back({where, msg});
  };
  for (const auto& [n, part] : s.groups.parts()) {
    (void)part;
    if (n < 1) issue("groups", "degree " + std::to_string(n) + " below 1");
  }
  auto check_bits = [&](const IntMat& m, const std::string& where) {
    for (int i = 0; i < m.rows(); ++i)
      for (int j = 0; j < m.cols(); ++j)
        if (m.at(i, j) != 0 && m.at(i, j) != 1) {
          issue(where, "entries must be bits (0/1)");
          return;
        }
  };
  for (const auto& [nk, m] : s.b) {
    auto [n, k] = nk;
    std::string where = "b[" + nk_key(nk) + "]";
    if (k < 2) {
      issue(where, "the k=1 component vanishes identically; components need k >= 2");
      continue;
    }
    int rows = (k % 2 == 0) ? t2_dim(s.groups.at(n - k)) : s2_dim(s.groups.at(n - k));
    int cols = t2_dim(s.groups.at(n));
    if (m.rows() != rows || m.cols() != cols)
      issue(where, "shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                       ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    else
      check_bits(m, where);
  }
  for (const auto& [nk, m] : s.beta) {
    auto [n, k] = nk;
    std::string where = "beta[" + nk_key(nk) + "]";
    if (k < 1) {
      issue(where, "components need k >= 1");
      continue;
    }
    int rows = (k % 2 == 1) ? t2_dim(s.groups.at(n - k)) : s2_dim(s.groups.at(n - k));
    int cols = s2_dim(s.groups.at(n));
    if (m.rows() != rows || m.cols() != cols)
      issue(where, "shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                       ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
    else
      check_bits(m, where);
  }
  return rep;
}

StableBype stabilize_bype(const Bype& x) {
  StableBype out{x.groups, {}, {}};
  const GradedGroup& b = x.groups;
  for (const auto& [n, part] : b.parts()) {
    if (n < 2 || part.is_zero()) continue;
    int d = n - 1;
    // -- coefficient side -----------------------------------------------------
    if (x.b.count(n) && !x.b.at(n).is_zero()) {
      const Homomorphism& bn = x.b.at(n);
      SqView gv = make_view(zee(), b, d);
      for (const auto& [m, idxs] : gv.diag) {
        int k = n - m;
        if (k < 2) continue;
        CellMaps cm = cell_maps(gv, idxs);
        if (cm.se.total.is_zero()) continue;
        Homomorphism cellb = comp(cm.proj, bn);
        if (cellb.is_zero()) continue;
        Homomorphism zf = zform_stabilization(b.at(m), d, m);
        Homomorphism st = comp(zf, cellb);
        SqValue stv = stable_sq(zee(), b.at(m), k - 1);
        std::vector<CanonicalGroup> stparts;
        for (const auto& ssum : stv.summands) stparts.push_back(ssum.group);
        SumEmbedding ste = sum_embedding(stparts);
        int hs = -1;
        for (int q = 0; q < int(stv.summands.size()); ++q)
          if (stv.summands[size_t(q)].label.rfind("Hom(", 0) == 0) hs = q;
        if (hs < 0) throw std::logic_error("stable operator without a residue part");
        CanonicalGroup xtv = stv.summands[size_t(hs)].hom_arg;
        HomGroup hg(zee(), xtv);
        Homomorphism homco = comp(ste.proj[size_t(hs)], st);
        IntMat vals = homco.canonical_matrix();
        std::vector<int> frame = t2_list(part);
        int rows = (k % 2 == 0) ? t2_dim(b.at(m)) : s2_dim(b.at(m));
        IntMat blk(rows, int(frame.size()));
        TensorGroup tmx(b.at(m), ztwo());
        TorGroup smx(b.at(m), ztwo());
        for (int g = 0; g < part.num_gens(); ++g) {
          std::vector<Int> coords(size_t(vals.rows()), Int(0));
          for (int r = 0; r < vals.rows(); ++r) coords[size_t(r)] = vals.at(r, g);
          IntMat xcol = hg.to_matrix(coords);
          std::vector<Int> xval(size_t(xcol.rows()), Int(0));
          for (int r = 0; r < xcol.rows(); ++r) xval[size_t(r)] = xcol.at(r, 0);
          std::vector<Int> bits = (k % 2 == 0) ? t2_bits_from_value(b.at(m), tmx, xval)
                                               : s2_bits_from_value(b.at(m), smx, xval);
          auto slot = std::find(frame.begin(), frame.end(), g);
          if (slot == frame.end()) {
            if (!is_zero_vec(xtv.reduce(xval)))
              throw std::logic_error("stable component does not factor through the mod-2 frame");
            continue;
          }
          int col = int(slot - frame.begin());
          for (int r = 0; r < rows; ++r) blk.at(r, col) = bits[size_t(r)];
        }
        if (!is_zero_mod2(blk)) {
          auto key = std::make_pair(n, k);
          auto it = out.b.find(key);
          if (it == out.b.end())
            out.b.emplace(key, mod2(blk));
          else
            it->second = mod2(it->second + blk);
        }
      }
    }
    // -- representative side ----------------------------------------------------
    if (x.beta.count(n)) {
      SqView av = make_view(part, b, d);
      std::vector<Int> beta = av.se.total.reduce(x.beta.at(n));
      if (!is_zero_vec(beta)) {
        for (size_t si = 0; si < av.val.summands.size(); ++si) {
          const SqSummand& s = av.val.summands[si];
          const SummandInfo& in = av.info[si];
          if (!in.diag) continue;  // off-diagonal parts carry no stable residue slot
          int m = in.m, k = n - m;
          if (k < 1 || s.group.is_zero()) continue;
          std::vector<Int> partc = s.group.reduce(av.se.proj[si].apply_canonical(beta));
          if (is_zero_vec(partc)) continue;
          CanonicalGroup xtv = (k % 2 == 1)
                                   ? binary_functor(BinKind::tensor, b.at(m), ztwo())
                                   : binary_functor(BinKind::tor, b.at(m), ztwo());
          if (xtv.is_zero()) continue;
          std::optional<std::vector<Int>> cls;
          if (in.kind == SKind::pure_ext) {
            CoeffArg ca = coeff_of_label(s.label);
            if (ca == CoeffArg::gamma) {
              Homomorphism push =
                  induced_map(BinKind::ext, sigma_gamma(b.at(m)), Slot::right, part);
              cls = push.apply_canonical(partc);
            } else {
              cls = partc;  // coefficient already equals the residue target
            }
          } else if (in.kind == SKind::t_diag) {
            DiagChain dc = diag_chain(b.at(m), diag_module(m));
            QuadTorsionData qtd = quad_torsion_data(b.at(m), diag_module(m));
            Homomorphism nu = (m % 2 == 0) ? nu_omega(b.at(m)) : nu_r(b.at(m));
            IntMat s1 = nu_chain_component(dc, qtd, nu, xtv);
            PseudoHomology ph = pseudo_homology(part, 0, dc.y);
            if (!(ph.group == s.group)) throw std::logic_error("summand/classes mismatch");
            ChainMap rep = ph.rep(partc);
            IntMat repm = s1 * rep.component(1);
            ExtGroup eg(part, xtv);
            cls = eg.from_class(ExtClass(part, xtv, repm));
          }
          // pure Hom parts and the exterior pairing summand carry no residue.
          if (!cls) continue;
          ExtGroup eg(part, xtv);
          std::vector<Int> clsr = eg.value().reduce(*cls);
          if (is_zero_vec(clsr)) continue;
          ExtClass ec = eg.to_class(clsr);
          Homomorphism cmap = connecting_map(ec, ztwo());
          TorGroup tn(part, ztwo());
          TensorGroup txt(xtv, ztwo());
          std::vector<int> scols = s2_list(part);
          int rows = (k % 2 == 1) ? t2_dim(b.at(m)) : s2_dim(b.at(m));
          IntMat blk(rows, int(scols.size()));
          TensorGroup tmx(b.at(m), ztwo());
          TorGroup smx(b.at(m), ztwo());
          for (size_t cj = 0; cj < scols.size(); ++cj) {
            int slot = sz2_slot(tn.pairs(), scols[cj] - part.free_rank());
            if (slot < 0) continue;
            std::vector<Int> raw(tn.pairs().basis().size(), Int(0));
            raw[size_t(slot)] = 1;
            std::vector<Int> v = cmap.apply_canonical(tn.pairs().canon_from_raw(raw));
            std::vector<Int> raw2 = txt.pairs().raw_from_canon(v);
            std::vector<Int> w(size_t(xtv.num_gens()), Int(0));
            for (int g = 0; g < xtv.num_gens(); ++g) {
              int sl = tz2_slot(txt.pairs(), g);
              if (sl >= 0) w[size_t(g)] = bit(raw2[size_t(sl)]);
            }
            std::vector<Int> bits = (k % 2 == 1) ? t2_bits_from_value(b.at(m), tmx, w)
                                                 : s2_bits_from_value(b.at(m), smx, w);
            for (int r = 0; r < rows; ++r) blk.at(r, int(cj)) = bits[size_t(r)];
          }
          if (!is_zero_mod2(blk)) {
            auto key = std::make_pair(n, k);
            auto it = out.beta.find(key);
            if (it == out.beta.end())
              out.beta.emplace(key, mod2(blk));
            else
              it->second = mod2(it->second + blk);
          }
        }
      }
    }
  }
  return out;
}

bool stable_equiv(const StableBype& s, const StableBype& t) {
  if (!(s.groups == t.groups))
    throw std::invalid_argument("stable equivalence requires equal graded groups");
  auto normal = [](const std::map<std::pair<int, int>, IntMat>& m) {
    std::map<std::pair<int, int>, IntMat> out;
    for (const auto& [k, v] : m)
      if (!is_zero_mod2(v)) out.emplace(k, mod2(v));
    return out;
  };
  auto sb = normal(s.b), tb = normal(t.b);
  if (sb.size() != tb.size()) return false;
  for (const auto& [k, v] : sb) {
    auto it = tb.find(k);
    if (it == tb.end() || !(it->second == v)) return false;
  }
  // unknowns: delta_n in F2^{t2(B_n) x s2(B_{n-1})}
  std::map<int, int> doff;
  int nvars = 0;
  for (const auto& [n, part] : s.groups.parts()) {
    (void)part;
    int r = t2_dim(s.groups.at(n)) * s2_dim(s.groups.at(n - 1));
    if (r > 0) {
      doff[n] = nvars;
      nvars += r;
    }
  }
  std::set<std::pair<int, int>> keys;
  for (const auto& [k, v] : s.beta) {
    (void)v;
    keys.insert(k);
  }
  for (const auto& [k, v] : t.beta) {
    (void)v;
    keys.insert(k);
  }
  for (const auto& [k, v] : sb) {
    (void)v;
    if (k.second - 1 >= 1) keys.insert({k.first - 1, k.second - 1});
  }
  IntMat a(0, nvars);
  IntMat rhs(0, 1);
  for (const auto& key : keys) {
    auto [n, k] = key;
    int rows_dim = (k % 2 == 1) ? t2_dim(s.groups.at(n - k)) : s2_dim(s.groups.at(n - k));
    int cols_dim = s2_dim(s.groups.at(n));
    if (rows_dim * cols_dim == 0) continue;
    IntMat diffm(rows_dim, cols_dim);
    auto its = s.beta.find(key);
    auto itt = t.beta.find(key);
    if (its != s.beta.end()) diffm = diffm + its->second;
    if (itt != t.beta.end()) diffm = diffm - itt->second;
    IntMat arow(rows_dim * cols_dim, nvars);
    auto itb = sb.find({n + 1, k + 1});
    if (itb != sb.end() && doff.count(n + 1)) {
      IntMat blk = kron(IntMat::identity(cols_dim), itb->second);
      emplace_block(arow, 0, doff.at(n + 1), blk);
    }
    a = IntMat::vstack(a, arow);
    rhs = IntMat::vstack(rhs, vec_col(diffm));
  }
  return f2_solvable(a, rhs);
}

ValidationReport validate_fmodule(const FModule& f) {
  ValidationReport rep;
  auto issue = [&](const std::string& where, const std::string& msg) {
    rep.ok = false;
    rep.issues.push_back({where, msg});
  };
  for (const auto& [n, part] : f.h.parts()) {
    (void)part;
    if (n < 1) issue("H", "degree " + std::to_string(n) + " below 1");
  }
  if (!rep.ok) return rep;
  for (const auto& [n, dim] : f.h2_dim) {
    std::string where = "h2_dim[" + std::to_string(n) + "]";
    int t2 = t2_dim(f.h.at(n)), s2 = s2_dim(f.h.at(n - 1));
    if (dim != t2 + s2) {
      issue(where, "dimension " + std::to_string(dim) + ", expected " + std::to_string(t2 + s2));
      continue;
    }
    if (dim == 0) continue;
    auto itd = f.delta.find(n);
    auto itm = f.mu.find(n);
    if (itd == f.delta.end() || itd->second.rows() != dim || itd->second.cols() != t2) {
      issue("delta[" + std::to_string(n) + "]", "missing or wrongly shaped");
      continue;
    }
    if (itm == f.mu.end() || itm->second.rows() != s2 || itm->second.cols() != dim) {
      issue("mu[" + std::to_string(n) + "]", "missing or wrongly shaped");
      continue;
    }
    if (!is_zero_mod2(itm->second * itd->second))
      issue("mu[" + std::to_string(n) + "]", "mu o delta is nonzero");
    if (f2_rank(itd->second) != t2)
      issue("delta[" + std::to_string(n) + "]", "not injective over F2");
    if (f2_rank(itm->second) != s2)
      issue("mu[" + std::to_string(n) + "]", "not surjective over F2");
  }
  for (const auto& [nk, m] : f.sq) {
    auto [n, k] = nk;
    std::string where = "sq[" + nk_key(nk) + "]";
    if (k < 2 || k % 2 != 0) {
      issue(where, "operators live in even degrees k >= 2");
      continue;
    }
    int rows = f.h2_dim.count(n - k) ? f.h2_dim.at(n - k) : 0;
    int cols = f.h2_dim.count(n) ? f.h2_dim.at(n) : 0;
    if (m.rows() != rows || m.cols() != cols)
      issue(where, "shape " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                       ", expected " + std::to_string(rows) + "x" + std::to_string(cols));
  }
  return rep;
}

FModule theta(const StableBype& s) {
  FModule f;
  f.h = s.groups;
  int lo = 0, hi = 0;
  for (const auto& [n, part] : s.groups.parts()) {
    (void)part;
    if (lo == 0) lo = n;
    hi = n;
  }
  for (int n = lo; n <= hi + 1; ++n) {
    int t2 = t2_dim(s.groups.at(n)), s2 = s2_dim(s.groups.at(n - 1));
    int dim = t2 + s2;
    if (dim == 0) continue;
    f.h2_dim[n] = dim;
    f.delta[n] = IntMat::vstack(IntMat::identity(t2), IntMat(s2, t2));
    f.mu[n] = IntMat::hstack(IntMat(s2, t2), IntMat::identity(s2));
  }
  std::set<std::pair<int, int>> cand;
  for (const auto& [nk, m] : s.b) {
    (void)m;
    auto [n, k] = nk;
    cand.insert(k % 2 == 0 ? std::make_pair(n, k) : std::make_pair(n, k - 1));
  }
  for (const auto& [nk, m] : s.beta) {
    (void)m;
    auto [n, k] = nk;
    cand.insert(k % 2 == 0 ? std::make_pair(n + 1, k) : std::make_pair(n + 1, k + 1));
  }
  auto blockof = [](const std::map<std::pair<int, int>, IntMat>& m, int n, int k, int rows,
                    int cols) {
    auto it = m.find({n, k});
    if (it != m.end()) return mod2(it->second);
    return IntMat(rows, cols);
  };
  for (const auto& [n, k] : cand) {
    if (k < 2) continue;
    if (!f.h2_dim.count(n) || !f.h2_dim.count(n - k)) continue;
    int ct = t2_dim(s.groups.at(n)), cs = s2_dim(s.groups.at(n - 1));
    int rt = t2_dim(s.groups.at(n - k)), rs = s2_dim(s.groups.at(n - k - 1));
    IntMat m(rt + rs, ct + cs);
    emplace_block(m, 0, 0, blockof(s.b, n, k, rt, ct));
    emplace_block(m, 0, ct, blockof(s.beta, n - 1, k - 1, rt, cs));
    emplace_block(m, rt, 0, blockof(s.b, n, k + 1, rs, ct));
    emplace_block(m, rt, ct, blockof(s.beta, n - 1, k, rs, cs));
    if (!is_zero_mod2(m)) f.sq[{n, k}] = mod2(m);
  }
  return f;
}

StableBype theta_inverse(const FModule& f) {
  ValidationReport rep = validate_fmodule(f);
  if (!rep.ok) throw std::invalid_argument("theta_inverse: invalid module data:\n" + rep.to_string());
  const char* resplit =
      "theta_inverse: the module data is not canonically split; change basis so that "
      "delta = [I;0] and mu = [0 I] and retry";
  for (const auto& [n, dim] : f.h2_dim) {
    int t2 = t2_dim(f.h.at(n)), s2 = s2_dim(f.h.at(n - 1));
    (void)dim;
    IntMat wantd = IntMat::vstack(IntMat::identity(t2), IntMat(s2, t2));
    IntMat wantm = IntMat::hstack(IntMat(s2, t2), IntMat::identity(s2));
    if (!(mod2(f.delta.at(n)) == wantd) || !(mod2(f.mu.at(n)) == wantm))
      throw std::invalid_argument(resplit);
  }
  StableBype s;
  s.groups = f.h;
  for (const auto& [nk, m] : f.sq) {
    auto [n, k] = nk;
    if (k % 2 != 0 || k < 2)
      throw std::invalid_argument("theta_inverse: operators must have even degree k >= 2");
    int ct = t2_dim(f.h.at(n)), rt = t2_dim(f.h.at(n - k));
    int cs = s2_dim(f.h.at(n - 1)), rs = s2_dim(f.h.at(n - k - 1));
    IntMat mm = mod2(m);
    IntMat b0 = mm.submatrix(0, rt, 0, ct);
    IntMat be0 = mm.submatrix(0, rt, ct, ct + cs);
    IntMat b1 = mm.submatrix(rt, rt + rs, 0, ct);
    IntMat be1 = mm.submatrix(rt, rt + rs, ct, ct + cs);
    if (!b0.is_zero()) s.b[{n, k}] = b0;
    if (!b1.is_zero()) s.b[{n, k + 1}] = b1;
    if (!be0.is_zero()) s.beta[{n - 1, k - 1}] = be0;
    if (!be1.is_zero()) s.beta[{n - 1, k}] = be1;
  }
  return s;
}

bool fmodule_check_morphism(const FModule& f, const FModule& fp, const GradedMaps& phi) {
  ValidationReport r1 = validate_fmodule(f), r2 = validate_fmodule(fp);
  if (!r1.ok || !r2.ok)
    throw std::invalid_argument("fmodule_check_morphism: invalid module data:\n" + r1.to_string() +
                                r2.to_string());
  std::set<int> degrees;
  for (const auto& [n, dim] : f.h2_dim) {
    (void)dim;
    degrees.insert(n);
  }
  for (const auto& [n, dim] : fp.h2_dim) {
    (void)dim;
    degrees.insert(n);
  }
  auto dim_of = [](const FModule& m, int n) {
    auto it = m.h2_dim.find(n);
    return it == m.h2_dim.end() ? 0 : it->second;
  };
  std::map<int, int> off;
  int nvars = 0;
  for (int n : degrees) {
    int r = dim_of(fp, n) * dim_of(f, n);
    off[n] = nvars;
    nvars += r;
  }
  auto phi_at = [&](int n) -> Homomorphism {
    auto it = phi.find(n);
    if (it != phi.end()) {
      if (!(it->second.dom().canon() == f.h.at(n)) || !(it->second.cod().canon() == fp.h.at(n)))
        throw std::invalid_argument("fmodule_check_morphism: phi[" + std::to_string(n) +
                                    "] endpoints mismatch");
      return it->second;
    }
    return zero_between(f.h.at(n), fp.h.at(n));
  };
  auto getmat = [](const std::map<int, IntMat>& m, int n, int rows, int cols) {
    auto it = m.find(n);
    if (it != m.end()) return mod2(it->second);
    return IntMat(rows, cols);
  };

  IntMat a(0, nvars);
  IntMat rhs(0, 1);
  auto add_eq = [&](const IntMat& lhs_blocks, const IntMat& rhs_col) {
    a = IntMat::vstack(a, lhs_blocks);
    rhs = IntMat::vstack(rhs, rhs_col);
  };
  for (int n : degrees) {
    int dn = dim_of(f, n), dpn = dim_of(fp, n);
    if (dn == 0 && dpn == 0) continue;
    int t2n = t2_dim(f.h.at(n)), s2n = s2_dim(f.h.at(n - 1));
    IntMat dlt = getmat(f.delta, n, dn, t2n);
    IntMat dltp = getmat(fp.delta, n, dpn, t2_dim(fp.h.at(n)));
    IntMat mun = getmat(f.mu, n, s2n, dn);
    IntMat munp = getmat(fp.mu, n, s2_dim(fp.h.at(n - 1)), dpn);
    // psi_n delta_n = delta'_n (phi_n (x) 1)
    if (dn > 0) {
      IntMat lhs(dpn * t2n, nvars);
      emplace_block(lhs, 0, off.at(n), kron(dlt.transpose(), IntMat::identity(dpn)));
      IntMat rc = vec_col(mod2(dltp * tensor2_matrix(phi_at(n))));
      add_eq(lhs, rc);
    }
    // mu'_n psi_n = (phi_{n-1} * 1) mu_n
    if (dn > 0) {
      int sp = s2_dim(fp.h.at(n - 1));
      IntMat lhs(sp * dn, nvars);
      emplace_block(lhs, 0, off.at(n), kron(IntMat::identity(dn), munp));
      IntMat rc = vec_col(mod2(tor2_matrix(phi_at(n - 1)) * mun));
      add_eq(lhs, rc);
    }
  }
  std::set<std::pair<int, int>> sqkeys;
  for (const auto& [nk, m] : f.sq) {
    (void)m;
    sqkeys.insert(nk);
  }
  for (const auto& [nk, m] : fp.sq) {
    (void)m;
    sqkeys.insert(nk);
  }
  for (const auto& [n, k] : sqkeys) {
    int dn = dim_of(f, n), dnk = dim_of(f, n - k);
    int dpn = dim_of(fp, n), dpnk = dim_of(fp, n - k);
    if ((dn == 0 || dpnk == 0) && (dpn == 0 || dpnk == 0)) {
      // fall through: equations still need both sides' shapes
    }
    IntMat sqn(dnk, dn), sqpn(dpnk, dpn);
    auto it = f.sq.find({n, k});
    if (it != f.sq.end()) sqn = mod2(it->second);
    auto itp = fp.sq.find({n, k});
    if (itp != fp.sq.end()) sqpn = mod2(itp->second);
    if (dpnk * dn == 0) continue;
    IntMat lhs(dpnk * dn, nvars);
    if (dnk > 0)
      emplace_block(lhs, 0, off.at(n - k), kron(sqn.transpose(), IntMat::identity(dpnk)));
    if (dpn > 0)
      emplace_block(lhs, 0, off.at(n), kron(IntMat::identity(dn), sqpn), Int(-1));
    add_eq(lhs, IntMat(dpnk * dn, 1));
  }
  return f2_solvable(a, rhs);
}

// --- JSON -----------------------------------------------------------------------------

std::string bype_to_json(const Bype& x) {
  json out;
  out["schema"] = "bype/1";
  out["B"] = graded_json(x.groups);
  json bj = json::object();
  for (const auto& [n, bn] : x.b) {
    SqView gv = make_view(zee(), x.groups, n - 1);
    json blocks = json::object();
    for (size_t k = 0; k < gv.val.summands.size(); ++k) {
      IntMat m = comp(gv.se.proj[k], bn).canonical_matrix();
      if (!m.is_zero()) blocks[summand_key(gv.val.summands[k])] = mat_json(m);
    }
    bj[std::to_string(n)] = std::move(blocks);
  }
  out["b"] = std::move(bj);
  json pj = json::object();
  for (const auto& [n, beta] : x.beta) {
    SqView av = make_view(x.groups.at(n), x.groups, n - 1);
    std::vector<Int> red = av.se.total.reduce(beta);
    json blocks = json::object();
    for (size_t k = 0; k < av.val.summands.size(); ++k) {
      std::vector<Int> part = av.se.proj[k].apply_canonical(red);
      if (!is_zero_vec(part)) blocks[summand_key(av.val.summands[k])] = vec_json(part);
    }
    pj[std::to_string(n)] = std::move(blocks);
  }
  out["beta"] = std::move(pj);
  return out.dump(2);
}

Bype bype_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("bype JSON: parse error: ") + e.what());
  }
  if (!j.is_object() || j.value("schema", "") != std::string("bype/1"))
    throw std::invalid_argument("bype JSON: expected schema \"bype/1\"");
  Bype x;
  x.groups = graded_parse(j.at("B"), "bype JSON: B");
  if (j.count("b"))
    for (auto it = j.at("b").begin(); it != j.at("b").end(); ++it) {
      int n = std::stoi(it.key());
      std::string where = "bype JSON: b[" + it.key() + "]";
      SqView gv = make_view(zee(), x.groups, n - 1);
      std::map<std::string, size_t> keys;
      for (size_t k = 0; k < gv.val.summands.size(); ++k)
        keys[summand_key(gv.val.summands[k])] = k;
      Homomorphism bn = zero_between(x.groups.at(n), gv.se.total);
      for (auto bt = it.value().begin(); bt != it.value().end(); ++bt) {
        auto kf = keys.find(bt.key());
        if (kf == keys.end())
          throw std::invalid_argument(where + ": unknown summand key \"" + bt.key() + "\"");
        const SqSummand& s = gv.val.summands[kf->second];
        IntMat m = mat_parse(bt.value(), s.group.num_gens(), x.groups.at(n).num_gens(),
                             where + "." + bt.key());
        bn = bn + comp(gv.se.incl[kf->second],
                       Homomorphism::between_canonical(x.groups.at(n), s.group, m));
      }
      x.b.emplace(n, std::move(bn));
    }
  if (j.count("beta"))
    for (auto it = j.at("beta").begin(); it != j.at("beta").end(); ++it) {
      int n = std::stoi(it.key());
      std::string where = "bype JSON: beta[" + it.key() + "]";
      SqView av = make_view(x.groups.at(n), x.groups, n - 1);
      std::map<std::string, size_t> keys;
      for (size_t k = 0; k < av.val.summands.size(); ++k)
        keys[summand_key(av.val.summands[k])] = k;
      std::vector<Int> acc(size_t(av.se.total.num_gens()), Int(0));
      for (auto bt = it.value().begin(); bt != it.value().end(); ++bt) {
        auto kf = keys.find(bt.key());
        if (kf == keys.end())
          throw std::invalid_argument(where + ": unknown summand key \"" + bt.key() + "\"");
        const SqSummand& s = av.val.summands[kf->second];
        std::vector<Int> part =
            vec_parse(bt.value(), s.group.num_gens(), where + "." + bt.key());
        acc = add_vec(acc, av.se.incl[kf->second].apply_canonical(part));
      }
      x.beta.emplace(n, av.se.total.reduce(acc));
    }
  ValidationReport rep = validate_bype(x);
  if (!rep.ok) throw std::invalid_argument("bype JSON: invalid data:\n" + rep.to_string());
  return x;
}

std::string stable_bype_to_json(const StableBype& s) {
  json out;
  out["schema"] = "stable-bype/1";
  out["B"] = graded_json(s.groups);
  json bj = json::object(), pj = json::object();
  for (const auto& [nk, m] : s.b)
    if (!is_zero_mod2(m)) bj[nk_key(nk)] = mat_json(mod2(m));
  for (const auto& [nk, m] : s.beta)
    if (!is_zero_mod2(m)) pj[nk_key(nk)] = mat_json(mod2(m));
  out["b"] = std::move(bj);
  out["beta"] = std::move(pj);
  return out.dump(2);
}

StableBype stable_bype_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("stable-bype JSON: parse error: ") + e.what());
  }
  if (!j.is_object() || j.value("schema", "") != std::string("stable-bype/1"))
    throw std::invalid_argument("stable-bype JSON: expected schema \"stable-bype/1\"");
  StableBype s;
  s.groups = graded_parse(j.at("B"), "stable-bype JSON: B");
  auto read_map = [&](const char* field, std::map<std::pair<int, int>, IntMat>& into,
                      bool is_beta) {
    if (!j.count(field)) return;
    for (auto it = j.at(field).begin(); it != j.at(field).end(); ++it) {
      std::string where = std::string("stable-bype JSON: ") + field + "[" + it.key() + "]";
      auto nk = nk_parse(it.key(), where);
      auto [n, k] = nk;
      int rows = is_beta ? ((k % 2 == 1) ? t2_dim(s.groups.at(n - k)) : s2_dim(s.groups.at(n - k)))
                         : ((k % 2 == 0) ? t2_dim(s.groups.at(n - k)) : s2_dim(s.groups.at(n - k)));
      int cols = is_beta ? s2_dim(s.groups.at(n)) : t2_dim(s.groups.at(n));
      into.emplace(nk, mat_parse(it.value(), rows, cols, where));
    }
  };
  read_map("b", s.b, false);
  read_map("beta", s.beta, true);
  ValidationReport rep = validate_stable_bype(s);
  if (!rep.ok) throw std::invalid_argument("stable-bype JSON: invalid data:\n" + rep.to_string());
  return s;
}

std::string fmodule_to_json(const FModule& f) {
  json out;
  out["schema"] = "fmodule/1";
  out["H"] = graded_json(f.h);
  json dims = json::object();
  for (const auto& [n, dim] : f.h2_dim) dims[std::to_string(n)] = dim;
  out["h2_dim"] = std::move(dims);
  json dj = json::object(), mj = json::object(), sj = json::object();
  for (const auto& [n, m] : f.delta) dj[std::to_string(n)] = mat_json(m);
  for (const auto& [n, m] : f.mu) mj[std::to_string(n)] = mat_json(m);
  for (const auto& [nk, m] : f.sq) sj[nk_key(nk)] = mat_json(m);
  out["delta"] = std::move(dj);
  out["mu"] = std::move(mj);
  out["sq"] = std::move(sj);
  return out.dump(2);
}

FModule fmodule_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw std::invalid_argument(std::string("fmodule JSON: parse error: ") + e.what());
  }
  if (!j.is_object() || j.value("schema", "") != std::string("fmodule/1"))
    throw std::invalid_argument("fmodule JSON: expected schema \"fmodule/1\"");
  FModule f;
  f.h = graded_parse(j.at("H"), "fmodule JSON: H");
  if (j.count("h2_dim"))
    for (auto it = j.at("h2_dim").begin(); it != j.at("h2_dim").end(); ++it)
      f.h2_dim[std::stoi(it.key())] = it.value().get<int>();
  for (const auto& [n, dim] : f.h2_dim) {
    std::string key = std::to_string(n);
    int t2 = t2_dim(f.h.at(n)), s2 = s2_dim(f.h.at(n - 1));
    if (j.count("delta") && j.at("delta").count(key))
      f.delta[n] = mat_parse(j.at("delta").at(key), dim, t2, "fmodule JSON: delta[" + key + "]");
    if (j.count("mu") && j.at("mu").count(key))
      f.mu[n] = mat_parse(j.at("mu").at(key), s2, dim, "fmodule JSON: mu[" + key + "]");
  }
  if (j.count("sq"))
    for (auto it = j.at("sq").begin(); it != j.at("sq").end(); ++it) {
      std::string where = "fmodule JSON: sq[" + it.key() + "]";
      auto nk = nk_parse(it.key(), where);
      auto [n, k] = nk;
      int rows = f.h2_dim.count(n - k) ? f.h2_dim.at(n - k) : 0;
      int cols = f.h2_dim.count(n) ? f.h2_dim.at(n) : 0;
      f.sq.emplace(nk, mat_parse(it.value(), rows, cols, where));
    }
  ValidationReport rep = validate_fmodule(f);
  if (!rep.ok) throw std::invalid_argument("fmodule JSON: invalid data:\n" + rep.to_string());
  return f;
}

bool bype_equal(const Bype& x, const Bype& y) {
  if (!(x.groups == y.groups)) return false;
  std::set<int> keys;
  for (const auto& [n, h] : x.b) {
    (void)h;
    keys.insert(n);
  }
  for (const auto& [n, h] : y.b) {
    (void)h;
    keys.insert(n);
  }
  for (int n : keys) {
    CanonicalGroup tot = beta_total(zee(), x.groups, n - 1);
    Homomorphism hx = x.b.count(n) ? x.b.at(n) : zero_between(x.groups.at(n), tot);
    Homomorphism hy = y.b.count(n) ? y.b.at(n) : zero_between(y.groups.at(n), tot);
    if (!hx.equal(hy)) return false;
  }
  keys.clear();
  for (const auto& [n, v] : x.beta) {
    (void)v;
    keys.insert(n);
  }
  for (const auto& [n, v] : y.beta) {
    (void)v;
    keys.insert(n);
  }
  for (int n : keys) {
    CanonicalGroup tot = beta_total(x.groups.at(n), x.groups, n - 1);
    std::vector<Int> zero(size_t(tot.num_gens()), Int(0));
    std::vector<Int> vx = x.beta.count(n) ? tot.reduce(x.beta.at(n)) : zero;
    std::vector<Int> vy = y.beta.count(n) ? tot.reduce(y.beta.at(n)) : zero;
    if (vx != vy) return false;
  }
  return true;
}

}  // namespace nilsq

#include "nilsq/doldkan.hpp"

#include <bit>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <utility>

#include "nilsq/snf.hpp"

namespace nilsq {

namespace {

// All k-subsets of {0..n-1} in lexicographic order.
std::vector<std::vector<int>> subsets_lex(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k < 0 || k > n) return out;
  std::vector<int> c(static_cast<size_t>(k));
  for (int i = 0; i < k; ++i) c[static_cast<size_t>(i)] = i;
  while (true) {
    out.push_back(c);
    int i = k - 1;
    while (i >= 0 && c[static_cast<size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++c[static_cast<size_t>(i)];
    for (int j = i + 1; j < k; ++j) c[static_cast<size_t>(j)] = c[static_cast<size_t>(j - 1)] + 1;
  }
  return out;
}

uint64_t mask_of(const std::vector<int>& jumps) {
  uint64_t m = 0;
  for (int j : jumps) m |= uint64_t(1) << j;
  return m;
}

// Basis of the denormalized group at one degree: for each surjection
// [q] ->> [k] (k ascending, jump sets lexicographic, surjections with
// rank(Y_k) = 0 omitted) a block of size rank(Y_k). A surjection is encoded
// by its jump-set mask; k is the popcount.
struct GammaBasis {
  std::vector<uint64_t> masks;
  std::vector<int> ks;
  std::vector<int> offset;
  int total = 0;
  std::map<uint64_t, int> by_mask;

  int elem_surj(int idx) const {
    int s = static_cast<int>(offset.size()) - 1;
    while (offset[static_cast<size_t>(s)] > idx) --s;
    return s;
  }
};

GammaBasis gamma_basis(const ChainComplex& y, int q) {
  GammaBasis g;
  int maxk = std::min(q, y.hi());
  for (int k = 0; k <= maxk; ++k) {
    if (y.rank(k) == 0) continue;
    for (const auto& jumps : subsets_lex(q, k)) {
      uint64_t m = mask_of(jumps);
      g.by_mask[m] = static_cast<int>(g.masks.size());
      g.masks.push_back(m);
      g.ks.push_back(k);
      g.offset.push_back(g.total);
      g.total += y.rank(k);
    }
  }
  return g;
}

inline int eta_at(uint64_t mask, int t) {
  return std::popcount(mask & ((uint64_t(1) << t) - 1));
}

// Result of factoring eta o delta^i: either zero, an identity component to a
// surjection of the same k, or a boundary component to a surjection of k-1.
struct FaceTarget {
  int kind;  // 0 zero, 1 identity, 2 boundary
  int surj;  // target surjection index (kind != 0)
};

FaceTarget face_target(const GammaBasis& tgt, uint64_t mask, int q, int i) {
  bool attained = (i > 0 && !((mask >> (i - 1)) & 1)) || (i < q && !((mask >> i) & 1));
  if (!attained && i != 0) return {0, -1};  // value eta(i) > 0 lost: mono misses an inner point
  // phi(t) = eta(delta^i(t)); jumps of phi give the target surjection.
  uint64_t jm = 0;
  int prev = eta_at(mask, i == 0 ? 1 : 0);
  for (int t = 1; t < q; ++t) {
    int u = (t < i) ? t : t + 1;
    int cur = eta_at(mask, u);
    if (cur > prev) jm |= uint64_t(1) << (t - 1);
    prev = cur;
  }
  auto it = tgt.by_mask.find(jm);
  if (it == tgt.by_mask.end()) return {0, -1};
  return {attained ? 1 : 2, it->second};
}

uint64_t degen_mask(uint64_t mask, int i) {
  uint64_t low_bits = (uint64_t(1) << i) - 1;
  return (mask & low_bits) | ((mask & ~low_bits) << 1);
}

// Sparse columns over the degree-(q-1) basis of the face map d_i restricted
// to one source basis element.
using SparseCol = std::vector<std::pair<int, Int>>;

SparseCol face_column(const ChainComplex& y, const GammaBasis& gq1, uint64_t mask, int k, int q,
                      int i, int x) {
  SparseCol col;
  FaceTarget ft = face_target(gq1, mask, q, i);
  if (ft.kind == 1) {
    col.emplace_back(gq1.offset[static_cast<size_t>(ft.surj)] + x, Int(1));
  } else if (ft.kind == 2) {
    IntMat d = y.boundary(k);
    int off = gq1.offset[static_cast<size_t>(ft.surj)];
    for (int y2 = 0; y2 < y.rank(k - 1); ++y2) {
      const Int& c = d.at(y2, x);
      if (c != 0) col.emplace_back(off + y2, c);
    }
  }
  return col;
}

}  // namespace

SimplicialAbelianGroup::SimplicialAbelianGroup(std::vector<int> ranks,
                                               std::vector<std::vector<IntMat>> face,
                                               std::vector<std::vector<IntMat>> degen)
    : ranks_(std::move(ranks)), face_(std::move(face)), degen_(std::move(degen)) {
  validate();
}

int SimplicialAbelianGroup::rank(int q) const {
  if (q < 0 || q > truncation()) return 0;
  return ranks_[static_cast<size_t>(q)];
}

const IntMat& SimplicialAbelianGroup::face(int q, int i) const {
  if (q < 1 || q > truncation() || i < 0 || i > q)
    throw std::out_of_range("simplicial face index out of range");
  return face_[static_cast<size_t>(q)][static_cast<size_t>(i)];
}

const IntMat& SimplicialAbelianGroup::degen(int q, int i) const {
  if (q < 0 || q >= truncation() || i < 0 || i > q)
    throw std::out_of_range("simplicial degeneracy index out of range");
  return degen_[static_cast<size_t>(q)][static_cast<size_t>(i)];
}

void SimplicialAbelianGroup::validate() const {
  int t = truncation();
  if (t < 0) throw std::invalid_argument("simplicial group needs at least degree 0");
  if (face_.size() != ranks_.size() || degen_.size() + 1 != ranks_.size())
    throw std::invalid_argument("simplicial group: wrong number of operator levels");
  if (!face_[0].empty()) throw std::invalid_argument("simplicial group: degree 0 has no faces");
  for (int q = 1; q <= t; ++q) {
    const auto& fq = face_[static_cast<size_t>(q)];
    if (static_cast<int>(fq.size()) != q + 1)
      throw std::invalid_argument("simplicial group: wrong face count");
    for (const IntMat& f : fq)
      if (f.rows() != rank(q - 1) || f.cols() != rank(q))
        throw std::invalid_argument("simplicial group: face matrix has wrong shape");
  }
  for (int q = 0; q < t; ++q) {
    const auto& sq = degen_[static_cast<size_t>(q)];
    if (static_cast<int>(sq.size()) != q + 1)
      throw std::invalid_argument("simplicial group: wrong degeneracy count");
    for (const IntMat& s : sq)
      if (s.rows() != rank(q + 1) || s.cols() != rank(q))
        throw std::invalid_argument("simplicial group: degeneracy matrix has wrong shape");
  }
  // d_i d_j = d_{j-1} d_i for i < j.
  for (int q = 2; q <= t; ++q)
    for (int j = 1; j <= q; ++j)
      for (int i = 0; i < j; ++i)
        if (face(q - 1, i) * face(q, j) != face(q - 1, j - 1) * face(q, i))
          throw std::invalid_argument("simplicial identity d_i d_j = d_{j-1} d_i violated");
  // s_i s_j = s_{j+1} s_i for i <= j.
  for (int q = 0; q + 2 <= t; ++q)
    for (int j = 0; j <= q; ++j)
      for (int i = 0; i <= j; ++i)
        if (degen(q + 1, i) * degen(q, j) != degen(q + 1, j + 1) * degen(q, i))
          throw std::invalid_argument("simplicial identity s_i s_j = s_{j+1} s_i violated");
  // Mixed identities d_i s_j.
  for (int q = 0; q + 1 <= t; ++q) {
    for (int j = 0; j <= q; ++j) {
      for (int i = 0; i <= q + 1; ++i) {
        IntMat lhs = face(q + 1, i) * degen(q, j);
        IntMat rhs;
        if (i == j || i == j + 1) rhs = IntMat::identity(rank(q));
        else if (i < j) rhs = degen(q - 1, j - 1) * face(q, i);
        else rhs = degen(q - 1, j) * face(q, i - 1);
        if (lhs != rhs)
          throw std::invalid_argument("simplicial identity for d_i s_j violated");
      }
    }
  }
}

SimplicialAbelianGroup denormalize(const ChainComplex& y, int truncation) {
  if (y.lo() < 0)
    throw std::invalid_argument("denormalize: complex must be supported in degrees >= 0");
  if (truncation < 0 || truncation > 62)
    throw std::invalid_argument("denormalize: truncation out of range");
  std::vector<GammaBasis> gb;
  gb.reserve(static_cast<size_t>(truncation) + 1);
  for (int q = 0; q <= truncation; ++q) gb.push_back(gamma_basis(y, q));

  std::vector<int> ranks(static_cast<size_t>(truncation) + 1);
  for (int q = 0; q <= truncation; ++q) ranks[static_cast<size_t>(q)] = gb[static_cast<size_t>(q)].total;

  std::vector<std::vector<IntMat>> face(static_cast<size_t>(truncation) + 1);
  for (int q = 1; q <= truncation; ++q) {
    const GammaBasis& gq = gb[static_cast<size_t>(q)];
    const GammaBasis& gq1 = gb[static_cast<size_t>(q - 1)];
    for (int i = 0; i <= q; ++i) {
      IntMat f(gq1.total, gq.total);
      for (size_t s = 0; s < gq.masks.size(); ++s) {
        int k = gq.ks[s];
        for (int x = 0; x < y.rank(k); ++x) {
          int colidx = gq.offset[s] + x;
          for (const auto& [row, c] : face_column(y, gq1, gq.masks[s], k, q, i, x))
            f.at(row, colidx) = c;
        }
      }
      face[static_cast<size_t>(q)].push_back(std::move(f));
    }
  }

  std::vector<std::vector<IntMat>> degen(static_cast<size_t>(truncation));
  for (int q = 0; q < truncation; ++q) {
    const GammaBasis& gq = gb[static_cast<size_t>(q)];
    const GammaBasis& gq1 = gb[static_cast<size_t>(q + 1)];
    for (int i = 0; i <= q; ++i) {
      IntMat sm(gq1.total, gq.total);
      for (size_t s = 0; s < gq.masks.size(); ++s) {
        int tgt = gq1.by_mask.at(degen_mask(gq.masks[s], i));
        for (int x = 0; x < y.rank(gq.ks[s]); ++x)
          sm.at(gq1.offset[static_cast<size_t>(tgt)] + x, gq.offset[s] + x) = 1;
      }
      degen[static_cast<size_t>(q)].push_back(std::move(sm));
    }
  }
  return SimplicialAbelianGroup(std::move(ranks), std::move(face), std::move(degen));
}

NormalizedComplex normalize(const SimplicialAbelianGroup& k) {
  int t = k.truncation();
  std::vector<IntMat> basis(static_cast<size_t>(t) + 1);
  std::vector<int> ranks(static_cast<size_t>(t) + 1);
  for (int q = 0; q <= t; ++q) {
    int r = k.rank(q);
    if (q == 0) {
      basis[static_cast<size_t>(q)] = IntMat::identity(r);
    } else if (r == 0) {
      basis[static_cast<size_t>(q)] = IntMat(0, 0);
    } else {
      IntMat stacked(0, r);
      for (int i = 1; i <= q; ++i) stacked = IntMat::vstack(stacked, k.face(q, i));
      basis[static_cast<size_t>(q)] = column_hnf(kernel_basis(stacked));
    }
    ranks[static_cast<size_t>(q)] = basis[static_cast<size_t>(q)].cols();
  }
  std::vector<IntMat> ds;
  for (int q = 1; q <= t; ++q) {
    IntMat img = (k.rank(q) == 0) ? IntMat(k.rank(q - 1), 0)
                                  : k.face(q, 0) * basis[static_cast<size_t>(q)];
    if (ranks[static_cast<size_t>(q - 1)] == 0) {
      if (!img.is_zero()) throw std::logic_error("normalize: boundary leaves the Moore complex");
      ds.push_back(IntMat(0, ranks[static_cast<size_t>(q)]));
    } else {
      auto x = solve_mat(basis[static_cast<size_t>(q - 1)], img);
      if (!x) throw std::logic_error("normalize: boundary leaves the Moore complex");
      ds.push_back(std::move(*x));
    }
  }
  return {ChainComplex(0, ranks, ds), t};
}

SimplicialAbelianGroup apply_quadratic_degreewise(const SimplicialAbelianGroup& k,
                                                  const QuadraticZModule& m) {
  if (!m.components_free())
    throw std::invalid_argument(
        "apply_quadratic_degreewise: quadratic module must have free components");
  int t = k.truncation();
  std::vector<int> ranks(static_cast<size_t>(t) + 1);
  for (int q = 0; q <= t; ++q) ranks[static_cast<size_t>(q)] = QuadBasis(k.rank(q), m).rank();
  std::vector<std::vector<IntMat>> face(static_cast<size_t>(t) + 1);
  for (int q = 1; q <= t; ++q)
    for (int i = 0; i <= q; ++i)
      face[static_cast<size_t>(q)].push_back(quad_free_induced(m, k.face(q, i)));
  std::vector<std::vector<IntMat>> degen(static_cast<size_t>(t));
  for (int q = 0; q < t; ++q)
    for (int i = 0; i <= q; ++i)
      degen[static_cast<size_t>(q)].push_back(quad_free_induced(m, k.degen(q, i)));
  return SimplicialAbelianGroup(std::move(ranks), std::move(face), std::move(degen));
}

ChainComplex m_sharp_complex(const ChainComplex& y, const QuadraticZModule& m, int top) {
  if (y.lo() < 0)
    throw std::invalid_argument("quadratic construction: complex must be supported in degrees >= 0");
  if (!m.components_free())
    throw std::invalid_argument("quadratic construction: quadratic module must have free components");
  if (top < 0 || top > 62) throw std::invalid_argument("quadratic construction: truncation out of range");

  const int me = m.e().num_gens();
  const int mee = m.ee().num_gens();
  IntMat ph = m.p() * m.h();
  IntMat hpm1 = m.h() * m.p();
  for (int b = 0; b < mee; ++b) hpm1.at(b, b) -= 1;

  std::vector<GammaBasis> gb;
  gb.reserve(static_cast<size_t>(top) + 1);
  for (int q = 0; q <= top; ++q) gb.push_back(gamma_basis(y, q));

  // Non-degenerate coordinates: e-part (x, a) over the identity surjection
  // block; ee-part over element pairs u < v whose jump sets cover {0..q-1}.
  struct Quot {
    int e_count = 0;
    int id_start = -1;  // first gamma element of the identity block, -1 if none
    std::vector<std::pair<int, int>> slots;
    std::map<std::pair<int, int>, int> slot_index;
    int rank = 0;
  };
  std::vector<Quot> quot(static_cast<size_t>(top) + 1);
  for (int q = 0; q <= top; ++q) {
    Quot& w = quot[static_cast<size_t>(q)];
    const GammaBasis& g = gb[static_cast<size_t>(q)];
    if (y.rank(q) > 0 && q <= y.hi()) {
      w.id_start = g.total - y.rank(q);
      w.e_count = y.rank(q) * me;
    }
    uint64_t full = (q == 0) ? 0 : ((uint64_t(1) << q) - 1);
    // element -> surjection mask
    std::vector<uint64_t> emask(static_cast<size_t>(g.total));
    for (size_t s = 0; s < g.masks.size(); ++s)
      for (int x = 0; x < y.rank(g.ks[s]); ++x)
        emask[static_cast<size_t>(g.offset[s] + x)] = g.masks[s];
    for (int u = 0; u < g.total; ++u)
      for (int v = u + 1; v < g.total; ++v)
        if ((emask[static_cast<size_t>(u)] | emask[static_cast<size_t>(v)]) == full) {
          w.slot_index[{u, v}] = static_cast<int>(w.slots.size());
          w.slots.emplace_back(u, v);
        }
    w.rank = w.e_count + static_cast<int>(w.slots.size()) * mee;
  }

  std::vector<int> ranks(static_cast<size_t>(top) + 1);
  for (int q = 0; q <= top; ++q) ranks[static_cast<size_t>(q)] = quot[static_cast<size_t>(q)].rank;

  std::vector<IntMat> ds;
  for (int q = 1; q <= top; ++q) {
    const GammaBasis& gq = gb[static_cast<size_t>(q)];
    const GammaBasis& gt = gb[static_cast<size_t>(q - 1)];
    const Quot& wq = quot[static_cast<size_t>(q)];
    const Quot& wt = quot[static_cast<size_t>(q - 1)];
    IntMat d(wt.rank, wq.rank);

    // Face columns at the denormalized level for every source element.
    std::vector<std::vector<SparseCol>> fcols(static_cast<size_t>(q) + 1);
    for (int i = 0; i <= q; ++i) {
      auto& cols = fcols[static_cast<size_t>(i)];
      cols.resize(static_cast<size_t>(gq.total));
      for (size_t s = 0; s < gq.masks.size(); ++s)
        for (int x = 0; x < y.rank(gq.ks[s]); ++x)
          cols[static_cast<size_t>(gq.offset[s] + x)] =
              face_column(y, gt, gq.masks[s], gq.ks[s], q, i, x);
    }

    auto tgt_e_pos = [&](int elem, int a) -> int {
      if (wt.id_start < 0 || elem < wt.id_start) return -1;
      return (elem - wt.id_start) * me + a;
    };
    auto tgt_slot_base = [&](int u, int v) -> int {
      auto it = wt.slot_index.find({u, v});
      if (it == wt.slot_index.end()) return -1;
      return wt.e_count + it->second * mee;
    };

    // e-part sources.
    for (int x = 0; x < (wq.e_count > 0 ? y.rank(q) : 0); ++x) {
      int u0 = wq.id_start + x;
      for (int a = 0; a < me; ++a) {
        int colidx = x * me + a;
        for (int i = 0; i <= q; ++i) {
          Int sgn = (i % 2 == 0) ? 1 : -1;
          const SparseCol& c = fcols[static_cast<size_t>(i)][static_cast<size_t>(u0)];
          for (const auto& [w, cw] : c) {
            int ep = tgt_e_pos(w, a);
            if (ep >= 0) d.at(ep, colidx) += sgn * cw;
            Int c2 = cw * (cw - 1) / 2;
            if (c2 != 0 && tgt_e_pos(w, 0) >= 0)
              for (int a2 = 0; a2 < me; ++a2)
                d.at(tgt_e_pos(w, a2), colidx) += sgn * c2 * ph.at(a2, a);
          }
          for (size_t ii = 0; ii < c.size(); ++ii)
            for (size_t jj = ii + 1; jj < c.size(); ++jj) {
              int base = tgt_slot_base(c[ii].first, c[jj].first);
              if (base < 0) continue;
              Int cc = c[ii].second * c[jj].second;
              for (int b = 0; b < mee; ++b)
                d.at(base + b, colidx) += sgn * cc * m.h().at(b, a);
            }
        }
      }
    }

    // ee-part sources.
    for (size_t sl = 0; sl < wq.slots.size(); ++sl) {
      auto [u, v] = wq.slots[sl];
      for (int b = 0; b < mee; ++b) {
        int colidx = wq.e_count + static_cast<int>(sl) * mee + b;
        for (int i = 0; i <= q; ++i) {
          Int sgn = (i % 2 == 0) ? 1 : -1;
          const SparseCol& c = fcols[static_cast<size_t>(i)][static_cast<size_t>(u)];
          const SparseCol& e = fcols[static_cast<size_t>(i)][static_cast<size_t>(v)];
          for (const auto& [w, cw] : c)
            for (const auto& [z, dz] : e) {
              Int cd = cw * dz;
              if (w < z) {
                int base = tgt_slot_base(w, z);
                if (base >= 0) d.at(base + b, colidx) += sgn * cd;
              } else if (w == z) {
                if (tgt_e_pos(w, 0) >= 0)
                  for (int a = 0; a < me; ++a)
                    d.at(tgt_e_pos(w, a), colidx) += sgn * cd * m.p().at(a, b);
              } else {
                int base = tgt_slot_base(z, w);
                if (base >= 0)
                  for (int b2 = 0; b2 < mee; ++b2)
                    d.at(base + b2, colidx) += sgn * cd * hpm1.at(b2, b);
              }
            }
        }
      }
    }
    ds.push_back(std::move(d));
  }
  return ChainComplex(0, ranks, ds);
}

CanonicalGroup m_sharp_oracle(const ChainComplex& y, const QuadraticZModule& m, int n) {
  if (n < 0) return CanonicalGroup::zero();
  return homology(m_sharp_complex(y, m, n + 1), n);
}

}  // namespace nilsq

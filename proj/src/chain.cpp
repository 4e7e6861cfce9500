#include "nilsq/chain.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "json.hpp"
#include "nilsq/snf.hpp"

namespace nilsq {

namespace {

IntMat kron(const IntMat& a, const IntMat& b) {
  IntMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) {
      if (a.at(i, j) == 0) continue;
      for (int k = 0; k < b.rows(); ++k)
        for (int l = 0; l < b.cols(); ++l)
          out.at(i * b.rows() + k, j * b.cols() + l) = a.at(i, j) * b.at(k, l);
    }
  return out;
}

IntMat drop_row(const IntMat& m, int r) {
  std::vector<int> keep;
  for (int i = 0; i < m.rows(); ++i)
    if (i != r) keep.push_back(i);
  return m.select_rows(keep);
}

IntMat drop_col(const IntMat& m, int c) {
  std::vector<int> keep;
  for (int j = 0; j < m.cols(); ++j)
    if (j != c) keep.push_back(j);
  return m.select_cols(keep);
}

std::vector<std::tuple<int, int, Int>> sparse_entries(const IntMat& m) {
  std::vector<std::tuple<int, int, Int>> e;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (m.at(i, j) != 0) e.emplace_back(i, j, m.at(i, j));
  return e;
}

int sparse_rank(const IntMat& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  return invariant_factors_sparse(m.rows(), m.cols(), sparse_entries(m)).rank;
}

}  // namespace

ChainComplex::ChainComplex(int lo, std::vector<int> ranks, std::vector<IntMat> boundaries)
    : lo_(lo), ranks_(std::move(ranks)), d_(std::move(boundaries)) {
  for (int r : ranks_)
    if (r < 0) throw std::invalid_argument("chain complex: negative rank");
  if (!ranks_.empty() && d_.size() + 1 != ranks_.size())
    throw std::invalid_argument("chain complex: need one boundary per adjacent degree pair");
  if (ranks_.empty() && !d_.empty())
    throw std::invalid_argument("chain complex: boundaries without ranks");
  for (size_t k = 0; k < d_.size(); ++k) {
    if (d_[k].rows() != ranks_[k] || d_[k].cols() != ranks_[k + 1])
      throw std::invalid_argument("chain complex: boundary shape mismatch");
    if (k > 0 && !(d_[k - 1] * d_[k]).is_zero())
      throw std::invalid_argument("chain complex: d d != 0");
  }
  // Trim zero ranks at the ends (boundaries touching them carry no data).
  while (!ranks_.empty() && ranks_.front() == 0) {
    ranks_.erase(ranks_.begin());
    if (!d_.empty()) d_.erase(d_.begin());
    ++lo_;
  }
  while (!ranks_.empty() && ranks_.back() == 0) {
    ranks_.pop_back();
    if (!d_.empty()) d_.pop_back();
  }
  if (ranks_.empty()) {
    lo_ = 0;
    d_.clear();
  }
}

ChainComplex ChainComplex::concentrated(int degree, int rank) {
  if (rank == 0) return ChainComplex();
  return ChainComplex(degree, {rank}, {});
}

int ChainComplex::rank(int q) const {
  if (is_zero() || q < lo_ || q > hi()) return 0;
  return ranks_[size_t(q - lo_)];
}

IntMat ChainComplex::boundary(int q) const {
  if (!is_zero() && q > lo_ && q <= hi()) return d_[size_t(q - lo_ - 1)];
  return IntMat(rank(q - 1), rank(q));
}

int ChainComplex::total_rank() const {
  int t = 0;
  for (int r : ranks_) t += r;
  return t;
}

std::string ChainComplex::to_string() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  os << "degrees " << lo_ << ".." << hi() << ", ranks";
  for (int r : ranks_) os << " " << r;
  return os.str();
}

ChainComplex direct_sum(const ChainComplex& a, const ChainComplex& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  int lo = std::min(a.lo(), b.lo()), hi = std::max(a.hi(), b.hi());
  std::vector<int> ranks;
  std::vector<IntMat> ds;
  for (int q = lo; q <= hi; ++q) ranks.push_back(a.rank(q) + b.rank(q));
  for (int q = lo + 1; q <= hi; ++q)
    ds.push_back(IntMat::block_diag(a.boundary(q), b.boundary(q)));
  return ChainComplex(lo, std::move(ranks), std::move(ds));
}

ChainComplex suspension(const ChainComplex& y, int k) {
  if (y.is_zero()) return y;
  std::vector<int> ranks;
  std::vector<IntMat> ds;
  for (int q = y.lo(); q <= y.hi(); ++q) ranks.push_back(y.rank(q));
  for (int q = y.lo() + 1; q <= y.hi(); ++q) {
    IntMat d = y.boundary(q);
    bool flip = (k & 1) != 0 && (q & 1) != 0;  // (-1)^{k |x|} with |x| = q
    ds.push_back(flip ? d.scaled(Int(-1)) : d);
  }
  return ChainComplex(y.lo() + k, std::move(ranks), std::move(ds));
}

ChainComplex tensor_complex(const ChainComplex& y, const ChainComplex& z) {
  if (y.is_zero() || z.is_zero()) return ChainComplex();
  int lo = y.lo() + z.lo(), hi = y.hi() + z.hi();
  // Layout of degree n: blocks (p, n-p) with ascending p, both ranks > 0.
  struct Piece {
    int p = 0, q = 0, offset = 0;
  };
  auto layout = [&](int n) {
    std::vector<Piece> ps;
    int off = 0;
    for (int p = y.lo(); p <= y.hi(); ++p) {
      int q = n - p;
      if (y.rank(p) == 0 || z.rank(q) == 0) continue;
      ps.push_back({p, q, off});
      off += y.rank(p) * z.rank(q);
    }
    return ps;
  };
  auto rank_of = [&](const std::vector<Piece>& ps) {
    int r = 0;
    for (const auto& pc : ps) r += y.rank(pc.p) * z.rank(pc.q);
    return r;
  };
  std::vector<int> ranks;
  std::vector<IntMat> ds;
  std::vector<Piece> prev = layout(lo);
  ranks.push_back(rank_of(prev));
  for (int n = lo + 1; n <= hi; ++n) {
    std::vector<Piece> cur = layout(n);
    IntMat d(rank_of(prev), rank_of(cur));
    auto find_prev = [&](int p, int q) -> const Piece* {
      for (const auto& pc : prev)
        if (pc.p == p && pc.q == q) return &pc;
      return nullptr;
    };
    auto paste = [&](const IntMat& blk, int roff, int coff) {
      for (int i = 0; i < blk.rows(); ++i)
        for (int j = 0; j < blk.cols(); ++j)
          if (blk.at(i, j) != 0) d.at(roff + i, coff + j) = blk.at(i, j);
    };
    for (const auto& pc : cur) {
      if (const Piece* t = find_prev(pc.p - 1, pc.q)) {
        paste(kron(y.boundary(pc.p), IntMat::identity(z.rank(pc.q))), t->offset, pc.offset);
      }
      if (const Piece* t = find_prev(pc.p, pc.q - 1)) {
        IntMat blk = kron(IntMat::identity(y.rank(pc.p)), z.boundary(pc.q));
        if ((pc.p & 1) != 0) blk = blk.scaled(Int(-1));
        paste(blk, t->offset, pc.offset);
      }
    }
    ranks.push_back(rank_of(cur));
    ds.push_back(std::move(d));
    prev = std::move(cur);
  }
  return ChainComplex(lo, std::move(ranks), std::move(ds));
}

CanonicalGroup homology(const ChainComplex& y, int n) {
  if (y.rank(n) == 0) return CanonicalGroup::zero();
  IntMat dn = y.boundary(n);
  IntMat dn1 = y.boundary(n + 1);
  InvariantFactors in1;
  if (dn1.rows() != 0 && dn1.cols() != 0)
    in1 = invariant_factors_sparse(dn1.rows(), dn1.cols(), sparse_entries(dn1));
  int cycles = y.rank(n) - sparse_rank(dn);
  int free_rank = cycles - in1.rank;
  return CanonicalGroup(free_rank, in1.factors);
}

std::vector<Int> HomologyData::coords_of_cycle(const std::vector<Int>& v) const {
  auto x = solve(cycles, v);
  if (!x) throw std::invalid_argument("coords_of_cycle: vector is not a cycle");
  return pres.coords(*x);
}

std::vector<Int> HomologyData::cycle_from_coords(const std::vector<Int>& c) const {
  return cycles.mul_vec(pres.lift(c));
}

HomologyData homology_data(const ChainComplex& y, int n) {
  HomologyData out;
  out.cycles = kernel_basis(y.boundary(n));
  auto rel = solve_mat(out.cycles, y.boundary(n + 1));
  if (!rel) throw std::logic_error("homology_data: boundaries are not cycles");
  out.pres = PresentedGroup(out.cycles.cols(), *rel);
  out.group = out.pres.canon();
  return out;
}

void GradedGroup::set(int degree, const CanonicalGroup& g) {
  if (g.is_zero())
    parts_.erase(degree);
  else
    parts_[degree] = g;
}

CanonicalGroup GradedGroup::at(int degree) const {
  auto it = parts_.find(degree);
  return it == parts_.end() ? CanonicalGroup::zero() : it->second;
}

std::string GradedGroup::to_string() const {
  if (parts_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [deg, g] : parts_) {
    if (!first) os << ", ";
    first = false;
    os << deg << ": " << g.to_string();
  }
  return os.str();
}

GradedGroup graded_homology(const ChainComplex& y) {
  GradedGroup out;
  for (int q = y.lo(); q <= y.hi(); ++q) out.set(q, homology(y, q));
  return out;
}

ChainComplex moore_complex(const CanonicalGroup& a, int n) {
  if (a.is_zero()) return ChainComplex();
  PresentedGroup p = PresentedGroup::from_canonical(a);
  int t = p.relations().cols();
  if (t == 0) return ChainComplex(n, {p.gens()}, {});
  return ChainComplex(n, {p.gens(), t}, {p.relations()});
}

ChainComplex canonical_complex(const GradedGroup& b) {
  ChainComplex out;
  for (const auto& [deg, g] : b.parts()) out = direct_sum(out, moore_complex(g, deg));
  return out;
}

ChainMap::ChainMap(ChainComplex src, ChainComplex tgt, std::map<int, IntMat> comps)
    : src_(std::move(src)), tgt_(std::move(tgt)) {
  for (auto& [q, m] : comps) {
    if (m.rows() != tgt_.rank(q) || m.cols() != src_.rank(q))
      throw std::invalid_argument("chain map: component shape mismatch");
    if (!m.is_zero()) comps_[q] = std::move(m);
  }
  int lo = std::min(src_.lo(), tgt_.lo()), hi = std::max(src_.hi(), tgt_.hi());
  for (int q = lo; q <= hi + 1; ++q) {
    if (tgt_.boundary(q) * component(q) != component(q - 1) * src_.boundary(q))
      throw std::invalid_argument("chain map: does not commute with boundaries");
  }
}

ChainMap ChainMap::zero(const ChainComplex& src, const ChainComplex& tgt) {
  return ChainMap(src, tgt, {});
}

ChainMap ChainMap::identity(const ChainComplex& c) {
  std::map<int, IntMat> comps;
  for (int q = c.lo(); q <= c.hi(); ++q)
    if (c.rank(q) > 0) comps[q] = IntMat::identity(c.rank(q));
  return ChainMap(c, c, std::move(comps));
}

IntMat ChainMap::component(int q) const {
  auto it = comps_.find(q);
  if (it != comps_.end()) return it->second;
  return IntMat(tgt_.rank(q), src_.rank(q));
}

ChainMap ChainMap::compose(const ChainMap& inner) const {
  std::map<int, IntMat> comps;
  int lo = std::min(inner.src_.lo(), src_.lo()), hi = std::max(inner.src_.hi(), src_.hi());
  for (int q = lo; q <= hi; ++q) {
    if (tgt_.rank(q) == 0 || inner.src_.rank(q) == 0) continue;
    comps[q] = component(q) * inner.component(q);
  }
  return ChainMap(inner.src_, tgt_, std::move(comps));
}

ChainMap ChainMap::operator+(const ChainMap& o) const {
  std::map<int, IntMat> comps = comps_;
  for (const auto& [q, m] : o.comps_) {
    auto it = comps.find(q);
    if (it == comps.end())
      comps[q] = m;
    else
      it->second = it->second + m;
  }
  return ChainMap(src_, tgt_, std::move(comps));
}

ChainMap ChainMap::scaled(const Int& c) const {
  std::map<int, IntMat> comps;
  for (const auto& [q, m] : comps_) comps[q] = m.scaled(c);
  return ChainMap(src_, tgt_, std::move(comps));
}

ChainMap ChainMap::negated() const { return scaled(Int(-1)); }

ChainMap ChainMap::operator-(const ChainMap& o) const { return *this + o.negated(); }

bool ChainMap::is_zero() const { return comps_.empty(); }

IntMat Reduction::iota_at(int q) const {
  auto it = iota.find(q);
  if (it != iota.end()) return it->second;
  return IntMat(original.rank(q), reduced.rank(q));
}

IntMat Reduction::proj_at(int q) const {
  auto it = proj.find(q);
  if (it != proj.end()) return it->second;
  return IntMat(reduced.rank(q), original.rank(q));
}

IntMat Reduction::h_at(int q) const {
  auto it = h.find(q);
  if (it != h.end()) return it->second;
  return IntMat(original.rank(q + 1), original.rank(q));
}

Reduction morse_reduce(const ChainComplex& y, bool with_transfers) {
  Reduction out;
  out.original = y;
  out.with_transfers = with_transfers;
  if (y.is_zero()) {
    out.reduced = y;
    return out;
  }
  int lo = y.lo(), hi = y.hi();
  std::map<int, int> ranks;
  std::map<int, IntMat> d;  // d[q] : degree q -> q-1
  for (int q = lo; q <= hi; ++q) ranks[q] = y.rank(q);
  for (int q = lo + 1; q <= hi; ++q) d[q] = y.boundary(q);
  std::map<int, IntMat> iota, proj, h;
  if (with_transfers) {
    for (int q = lo; q <= hi; ++q) {
      iota[q] = IntMat::identity(y.rank(q));
      proj[q] = IntMat::identity(y.rank(q));
      h[q] = IntMat(y.rank(q + 1), y.rank(q));
    }
  }
  while (true) {
    // Pick a unit pivot with minimal fill-in estimate.
    int bq = 0, bi = -1, bj = -1;
    long long best = -1;
    for (int q = lo + 1; q <= hi; ++q) {
      const IntMat& m = d[q];
      if (m.rows() == 0 || m.cols() == 0) continue;
      std::vector<int> rnnz(size_t(m.rows()), 0), cnnz(size_t(m.cols()), 0);
      for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j)
          if (m.at(i, j) != 0) {
            ++rnnz[size_t(i)];
            ++cnnz[size_t(j)];
          }
      for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
          const Int& v = m.at(i, j);
          if (v != 1 && v != -1) continue;
          long long fill = (long long)(rnnz[size_t(i)] - 1) * (cnnz[size_t(j)] - 1);
          if (best < 0 || fill < best) {
            best = fill;
            bq = q;
            bi = i;
            bj = j;
          }
        }
    }
    if (bi < 0) break;
    const int q = bq;
    IntMat& D = d[q];
    Int lam = D.at(bi, bj);  // +1 or -1, equal to its own inverse
    std::vector<Int> col = D.col(bj), row = D.row(bi);
    if (with_transfers) {
      // h gains iota_old(q) . (lam e_bj e_bi^T) . proj_old(q-1), a rank-one
      // update from the cancelled pair.
      std::vector<Int> u = iota[q].col(bj), v = proj[q - 1].row(bi);
      IntMat& hq = h[q - 1];
      for (int a = 0; a < hq.rows(); ++a)
        for (int b = 0; b < hq.cols(); ++b) hq.at(a, b) += lam * u[size_t(a)] * v[size_t(b)];
      // iota at q: remaining column b becomes col_b - lam * D(bi, b) * col_bj.
      IntMat& iq = iota[q];
      for (int b = 0; b < D.cols(); ++b) {
        if (b == bj || row[size_t(b)] == 0) continue;
        iq.addmul_col(b, bj, -lam * row[size_t(b)]);
      }
      iota[q] = drop_col(iota[q], bj);
      iota[q - 1] = drop_col(iota[q - 1], bi);
      // proj at q-1: remaining row a gains -lam * col_a * row_bi.
      IntMat& pq = proj[q - 1];
      for (int a = 0; a < D.rows(); ++a) {
        if (a == bi || col[size_t(a)] == 0) continue;
        pq.addmul_row(a, bi, -lam * col[size_t(a)]);
      }
      proj[q - 1] = drop_row(proj[q - 1], bi);
      proj[q] = drop_row(proj[q], bj);
    }
    // Schur complement on d_q; d_{q+1} loses row bj; d_{q-1} loses column bi.
    for (int a = 0; a < D.rows(); ++a) {
      if (a == bi || col[size_t(a)] == 0) continue;
      for (int b = 0; b < D.cols(); ++b) {
        if (b == bj || row[size_t(b)] == 0) continue;
        D.at(a, b) -= lam * col[size_t(a)] * row[size_t(b)];
      }
    }
    d[q] = drop_col(drop_row(D, bi), bj);
    if (d.count(q + 1)) d[q + 1] = drop_row(d[q + 1], bj);
    if (d.count(q - 1)) d[q - 1] = drop_col(d[q - 1], bi);
    ranks[q] -= 1;
    ranks[q - 1] -= 1;
  }
  std::vector<int> rvec;
  std::vector<IntMat> dvec;
  for (int q = lo; q <= hi; ++q) rvec.push_back(ranks[q]);
  for (int q = lo + 1; q <= hi; ++q) dvec.push_back(d[q]);
  out.reduced = ChainComplex(lo, std::move(rvec), std::move(dvec));
  if (with_transfers) {
    for (int q = lo; q <= hi; ++q) {
      if (out.reduced.rank(q) > 0 && y.rank(q) > 0) {
        out.iota[q] = iota[q];
        out.proj[q] = proj[q];
      }
      if (!h[q].is_zero()) out.h[q] = h[q];
    }
  }
  return out;
}

HomotopyClasses::HomotopyClasses(const ChainComplex& src, const ChainComplex& tgt)
    : rc_(morse_reduce(src, true)), ry_(morse_reduce(tgt, true)) {
  const ChainComplex& c = rc_.reduced;
  const ChainComplex& y = ry_.reduced;
  int off = 0;
  for (int q = c.lo(); q <= c.hi(); ++q) {
    int rows = y.rank(q), cols = c.rank(q);
    if (rows == 0 || cols == 0) continue;
    blocks_.push_back({q, rows, cols, off});
    off += rows * cols;
  }
  nvars_ = off;
  if (nvars_ == 0) {
    kernel_ = IntMat(0, 0);
    pres_ = PresentedGroup(0, IntMat(0, 0));
    return;
  }
  auto block_at = [&](int q) -> const Block* {
    for (const auto& b : blocks_)
      if (b.q == q) return &b;
    return nullptr;
  };
  // Chain-map conditions d^Y_q f_q - f_{q-1} d^C_q = 0.
  struct Cond {
    int q = 0, rows = 0, offset = 0;  // rows = y.rank(q-1) * c.rank(q)
  };
  std::vector<Cond> conds;
  int crows = 0;
  for (int q = c.lo(); q <= c.hi() + 1; ++q) {
    int r = y.rank(q - 1) * c.rank(q);
    if (r == 0) continue;
    if (!block_at(q) && !block_at(q - 1)) continue;
    conds.push_back({q, r, crows});
    crows += r;
  }
  IntMat cond(crows, nvars_);
  for (const auto& cd : conds) {
    int q = cd.q;
    int yr = ry_.reduced.rank(q - 1);
    IntMat dy = y.boundary(q), dc = c.boundary(q);
    auto row_of = [&](int a, int b) { return cd.offset + b * yr + a; };
    if (const Block* fq = block_at(q)) {
      for (int a = 0; a < yr; ++a)
        for (int cc = 0; cc < fq->rows; ++cc) {
          if (dy.at(a, cc) == 0) continue;
          for (int b = 0; b < fq->cols; ++b)
            cond.at(row_of(a, b), fq->offset + b * fq->rows + cc) += dy.at(a, cc);
        }
    }
    if (const Block* fp = block_at(q - 1)) {
      for (int k = 0; k < fp->cols; ++k)
        for (int b = 0; b < c.rank(q); ++b) {
          if (dc.at(k, b) == 0) continue;
          for (int a = 0; a < fp->rows; ++a)
            cond.at(row_of(a, b), fp->offset + k * fp->rows + a) -= dc.at(k, b);
        }
    }
  }
  kernel_ = crows == 0 ? IntMat::identity(nvars_) : kernel_basis(cond);
  // Null-homotopic maps f = d^Y s + s d^C span the relation lattice.
  std::vector<std::pair<int, std::pair<int, int>>> svars;  // (q, (a in Y_{q+1}, b in C_q))
  for (int q = c.lo(); q <= c.hi(); ++q)
    for (int b = 0; b < c.rank(q); ++b)
      for (int a = 0; a < y.rank(q + 1); ++a) svars.push_back({q, {a, b}});
  IntMat hmat(nvars_, int(svars.size()));
  for (int sc = 0; sc < int(svars.size()); ++sc) {
    auto [q, ab] = svars[size_t(sc)];
    auto [a, b] = ab;
    if (const Block* fq = block_at(q)) {
      IntMat dy = y.boundary(q + 1);
      for (int i = 0; i < y.rank(q); ++i)
        if (dy.at(i, a) != 0) hmat.at(fq->offset + b * fq->rows + i, sc) += dy.at(i, a);
    }
    if (const Block* fn = block_at(q + 1)) {
      IntMat dc = c.boundary(q + 1);
      for (int j = 0; j < c.rank(q + 1); ++j)
        if (dc.at(b, j) != 0) hmat.at(fn->offset + j * fn->rows + a, sc) += dc.at(b, j);
    }
  }
  auto rel = solve_mat(kernel_, hmat);
  if (!rel) throw std::logic_error("homotopy_classes: homotopies escape the chain-map lattice");
  pres_ = PresentedGroup(kernel_.cols(), *rel);
}

std::vector<Int> HomotopyClasses::vec_of(const ChainMap& f) const {
  std::vector<Int> v(size_t(nvars_), Int(0));
  for (const auto& b : blocks_) {
    IntMat m = f.component(b.q);
    for (int j = 0; j < b.cols; ++j)
      for (int i = 0; i < b.rows; ++i) v[size_t(b.offset + j * b.rows + i)] = m.at(i, j);
  }
  return v;
}

ChainMap HomotopyClasses::map_of(const std::vector<Int>& v) const {
  std::map<int, IntMat> comps;
  for (const auto& b : blocks_) {
    IntMat m(b.rows, b.cols);
    for (int j = 0; j < b.cols; ++j)
      for (int i = 0; i < b.rows; ++i) m.at(i, j) = v[size_t(b.offset + j * b.rows + i)];
    comps[b.q] = std::move(m);
  }
  return ChainMap(rc_.reduced, ry_.reduced, std::move(comps));
}

ChainMap HomotopyClasses::rep_reduced(const std::vector<Int>& canon_coords) const {
  if (nvars_ == 0) return ChainMap::zero(rc_.reduced, ry_.reduced);
  return map_of(kernel_.mul_vec(pres_.lift(canon_coords)));
}

std::vector<Int> HomotopyClasses::coords_reduced(const ChainMap& f) const {
  if (nvars_ == 0) return {};
  auto x = solve(kernel_, vec_of(f));
  if (!x) throw std::invalid_argument("homotopy class coords: not a chain map");
  return pres_.coords(*x);
}

ChainMap HomotopyClasses::rep(const std::vector<Int>& canon_coords) const {
  ChainMap r = rep_reduced(canon_coords);
  std::map<int, IntMat> comps;
  for (int q = rc_.original.lo(); q <= rc_.original.hi(); ++q) {
    if (ry_.original.rank(q) == 0 || rc_.original.rank(q) == 0) continue;
    comps[q] = ry_.iota_at(q) * r.component(q) * rc_.proj_at(q);
  }
  return ChainMap(rc_.original, ry_.original, std::move(comps));
}

std::vector<Int> HomotopyClasses::coords(const ChainMap& f) const {
  std::map<int, IntMat> comps;
  for (int q = rc_.reduced.lo(); q <= rc_.reduced.hi(); ++q) {
    if (ry_.reduced.rank(q) == 0 || rc_.reduced.rank(q) == 0) continue;
    comps[q] = ry_.proj_at(q) * f.component(q) * rc_.iota_at(q);
  }
  return coords_reduced(ChainMap(rc_.reduced, ry_.reduced, std::move(comps)));
}

HomotopyClasses homotopy_classes(const ChainComplex& src, const ChainComplex& tgt) {
  return HomotopyClasses(src, tgt);
}

ChainMap PseudoHomology::rep(const std::vector<Int>& canon_coords) const {
  ChainMap r = classes.rep(canon_coords);  // into target.reduced
  std::map<int, IntMat> comps;
  const ChainComplex& c = classes.src();
  for (int q = c.lo(); q <= c.hi(); ++q) {
    if (target.original.rank(q) == 0 || c.rank(q) == 0) continue;
    comps[q] = target.iota_at(q) * r.component(q);
  }
  return ChainMap(c, target.original, std::move(comps));
}

std::vector<Int> PseudoHomology::coords(const ChainMap& f) const {
  std::map<int, IntMat> comps;
  const ChainComplex& c = classes.src();
  for (int q = c.lo(); q <= c.hi(); ++q) {
    if (target.reduced.rank(q) == 0 || c.rank(q) == 0) continue;
    comps[q] = target.proj_at(q) * f.component(q);
  }
  return classes.coords(ChainMap(c, target.reduced, std::move(comps)));
}

PseudoHomology pseudo_homology(const CanonicalGroup& a, int n, const ChainComplex& y) {
  Reduction ry = morse_reduce(y, true);
  ChainComplex c = moore_complex(a, n);
  HomotopyClasses hc(c, ry.reduced);
  HomologyData hdn = homology_data(ry.reduced, n);
  HomologyData hdn1 = homology_data(ry.reduced, n + 1);

  // mu sends the class of f to the induced coefficient map A -> H_n.
  HomGroup homs(a, hdn.group);
  int ng = hc.group().num_gens();
  IntMat mucols(homs.value().num_gens(), ng);
  for (int k = 0; k < ng; ++k) {
    std::vector<Int> e = hc.group().zero_elem();
    e[size_t(k)] = 1;
    IntMat fn = hc.rep(e).component(n);
    IntMat fmat(hdn.group.num_gens(), a.num_gens());
    for (int j = 0; j < a.num_gens(); ++j)
      fmat.set_col(j, hdn.coords_of_cycle(fn.col(j)));
    auto cc = homs.from_hom(Homomorphism::between_canonical(a, hdn.group, fmat));
    mucols.set_col(k, cc);
  }
  Homomorphism mu =
      Homomorphism::between_canonical(hc.group(), homs.value(), std::move(mucols));

  // Delta sends an extension class to the chain map supported in degree n+1
  // whose columns are cycles representing the class columns.
  ExtGroup exts(a, hdn1.group);
  int eg = exts.value().num_gens();
  IntMat dcols(ng, eg);
  int t = PresentedGroup::from_canonical(a).relations().cols();
  for (int k = 0; k < eg; ++k) {
    std::vector<Int> e = exts.value().zero_elem();
    e[size_t(k)] = 1;
    IntMat r = exts.to_class(e).rep();
    IntMat comp(ry.reduced.rank(n + 1), t);
    for (int j = 0; j < t; ++j) comp.set_col(j, hdn1.cycle_from_coords(r.col(j)));
    ChainMap f(c, ry.reduced, {{n + 1, std::move(comp)}});
    dcols.set_col(k, hc.coords(f));
  }
  Homomorphism delta =
      Homomorphism::between_canonical(exts.value(), hc.group(), std::move(dcols));

  return PseudoHomology{hc.group(), std::move(hc),   std::move(ry), std::move(hdn),
                        std::move(hdn1), std::move(delta), std::move(mu)};
}

std::string ChainComplex::to_json_string() const {
  nlohmann::json j;
  j["support"] = {lo_, hi()};
  j["ranks"] = ranks_;
  nlohmann::json bs = nlohmann::json::array();
  for (const auto& m : d_) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (int jj = 0; jj < m.cols(); ++jj) row.push_back(nilsq::to_string(m.at(i, jj)));
      rows.push_back(std::move(row));
    }
    bs.push_back(std::move(rows));
  }
  j["boundaries"] = std::move(bs);
  return j.dump();
}

ChainComplex ChainComplex::from_json_string(const std::string& s) {
  nlohmann::json j = nlohmann::json::parse(s);
  std::vector<int> ranks = j.at("ranks").get<std::vector<int>>();
  if (ranks.empty()) return ChainComplex();
  int lo = j.at("support").at(0).get<int>();
  std::vector<IntMat> ds;
  size_t k = 0;
  for (const auto& rows : j.at("boundaries")) {
    IntMat m(ranks[k], ranks[k + 1]);
    int i = 0;
    for (const auto& row : rows) {
      int jj = 0;
      for (const auto& v : row) m.at(i, jj++) = Int(v.get<std::string>());
      ++i;
    }
    ds.push_back(std::move(m));
    ++k;
  }
  return ChainComplex(lo, std::move(ranks), std::move(ds));
}

}  // namespace nilsq

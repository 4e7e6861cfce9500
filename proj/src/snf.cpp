#include "nilsq/snf.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace nilsq {

namespace {

// Mirrored elementary operations: every operation applied to D is applied to
// U (resp. V), and its inverse to Uinv (resp. Vinv), preserving
//   U * A * V == D,  U * Uinv == I,  V * Vinv == I.
struct Transformer {
  IntMat& D;
  IntMat& U;
  IntMat& Uinv;
  IntMat& V;
  IntMat& Vinv;

  void row_swap(int i, int j) {
    if (i == j) return;
    D.swap_rows(i, j);
    U.swap_rows(i, j);
    Uinv.swap_cols(i, j);
  }
  void col_swap(int i, int j) {
    if (i == j) return;
    D.swap_cols(i, j);
    V.swap_cols(i, j);
    Vinv.swap_rows(i, j);
  }
  void row_negate(int i) {
    D.negate_row(i);
    U.negate_row(i);
    Uinv.negate_col(i);
  }
  // row i += q * row j
  void row_addmul(int i, int j, const Int& q) {
    if (q == 0) return;
    D.addmul_row(i, j, q);
    U.addmul_row(i, j, q);
    Uinv.addmul_col(j, i, -q);
  }
  // col i += q * col j
  void col_addmul(int i, int j, const Int& q) {
    if (q == 0) return;
    D.addmul_col(i, j, q);
    V.addmul_col(i, j, q);
    Vinv.addmul_row(j, i, -q);
  }
  // rows (i, j) <- [[p, q], [r, s]] * rows (i, j); determinant must be +1.
  void row_transform2(int i, int j, const Int& p, const Int& q, const Int& r, const Int& s) {
    if (p * s - q * r != 1) throw std::logic_error("row_transform2: determinant != 1");
    auto apply = [&](IntMat& m) {
      for (int k = 0; k < m.cols(); ++k) {
        Int a = m.at(i, k), b = m.at(j, k);
        m.at(i, k) = p * a + q * b;
        m.at(j, k) = r * a + s * b;
      }
    };
    apply(D);
    apply(U);
    // Uinv <- Uinv * inverse; inverse = [[s, -q], [-r, p]].
    for (int k = 0; k < Uinv.rows(); ++k) {
      Int a = Uinv.at(k, i), b = Uinv.at(k, j);
      Uinv.at(k, i) = s * a - r * b;
      Uinv.at(k, j) = -q * a + p * b;
    }
  }
};

// Truncated quotient: remainder has magnitude < |divisor|.
Int quot(const Int& a, const Int& b) { return a / b; }

}  // namespace

SmithResult smith(const IntMat& a) {
  const int nr = a.rows(), nc = a.cols();
  SmithResult res;
  res.D = a;
  res.U = IntMat::identity(nr);
  res.Uinv = IntMat::identity(nr);
  res.V = IntMat::identity(nc);
  res.Vinv = IntMat::identity(nc);
  IntMat& D = res.D;
  Transformer tr{res.D, res.U, res.Uinv, res.V, res.Vinv};

  const int mn = std::min(nr, nc);
  int t = 0;
  while (t < mn) {
    // Smallest-magnitude nonzero pivot in the residual block.
    int pi = -1, pj = -1;
    Int best = 0;
    for (int i = t; i < nr; ++i)
      for (int j = t; j < nc; ++j) {
        const Int& x = D.at(i, j);
        if (x == 0) continue;
        Int ax = abs_int(x);
        if (pi < 0 || ax < best) {
          pi = i;
          pj = j;
          best = ax;
          if (best == 1) goto found;
        }
      }
    if (pi < 0) break;  // residual block is zero
  found:
    tr.row_swap(t, pi);
    tr.col_swap(t, pj);
    if (D.at(t, t) < 0) tr.row_negate(t);

    bool dirty = false;
    for (int i = t + 1; i < nr; ++i) {
      if (D.at(i, t) == 0) continue;
      tr.row_addmul(i, t, -quot(D.at(i, t), D.at(t, t)));
      if (D.at(i, t) != 0) dirty = true;
    }
    if (dirty) continue;  // smaller entries appeared; re-select pivot
    for (int j = t + 1; j < nc; ++j) {
      if (D.at(t, j) == 0) continue;
      tr.col_addmul(j, t, -quot(D.at(t, j), D.at(t, t)));
      if (D.at(t, j) != 0) dirty = true;
    }
    if (dirty) continue;
    ++t;
  }

  int rank = t;

  // Enforce the divisibility chain d_i | d_j for i < j over the nonzero
  // prefix. Each violating pair diag(a, b) is replaced by diag(g, ab/g) via a
  // determinant-one two-row transform; a full sweep repeats until stable.
  bool changed = true;
  while (changed) {
    changed = false;
    for (int i = 0; i < rank; ++i)
      for (int j = i + 1; j < rank; ++j) {
        const Int a_ = D.at(i, i), b_ = D.at(j, j);
        if (b_ % a_ == 0) continue;
        changed = true;
        // col i += col j brings b into position (j, i).
        tr.col_addmul(i, j, 1);
        ExtGcd e = ext_gcd(a_, b_);
        // rows (i,j) <- [[s, t], [-b/g, a/g]] * rows (i,j): pivot becomes g.
        tr.row_transform2(i, j, e.s, e.t, -(b_ / e.g), a_ / e.g);
        // Clear the leftover entry (i, j) = t*b, a multiple of g.
        tr.col_addmul(j, i, -(D.at(i, j) / D.at(i, i)));
        if (D.at(j, j) < 0) tr.row_negate(j);
      }
  }

  res.rank = rank;
  res.diag.resize(size_t(mn));
  for (int i = 0; i < mn; ++i) res.diag[size_t(i)] = D.at(i, i);
  return res;
}

namespace {

// Divisibility fix on a plain multiset of diagonal entries: repeatedly
// replace (a, b) by (gcd, lcm-like product). Used by the transform-free path.
void chain_fix(std::vector<Int>& d) {
  bool changed = true;
  while (changed) {
    changed = false;
    for (size_t i = 0; i < d.size(); ++i)
      for (size_t j = i + 1; j < d.size(); ++j) {
        if (d[j] % d[i] == 0) continue;
        Int g = gcd_int(d[i], d[j]);
        d[j] = d[i] / g * d[j];
        d[i] = g;
        changed = true;
      }
  }
  std::sort(d.begin(), d.end());
}

}  // namespace

InvariantFactors invariant_factors_sparse(int nrows, int ncols,
                                          const std::vector<std::tuple<int, int, Int>>& entries) {
  // Row-major sparse storage plus a per-column index of occupied rows.
  std::vector<std::map<int, Int>> rows(static_cast<size_t>(nrows));
  std::vector<std::set<int>> cols(static_cast<size_t>(ncols));
  for (const auto& [i, j, v] : entries) {
    if (v == 0) continue;
    Int& slot = rows[size_t(i)][j];
    slot += v;
    if (slot == 0)
      rows[size_t(i)].erase(j);
    else
      cols[size_t(j)].insert(i);
  }
  for (int j = 0; j < ncols; ++j) {
    // Drop stale column-index entries created by cancellation during load.
    for (auto it = cols[size_t(j)].begin(); it != cols[size_t(j)].end();) {
      auto f = rows[size_t(*it)].find(j);
      if (f == rows[size_t(*it)].end())
        it = cols[size_t(j)].erase(it);
      else
        ++it;
    }
  }

  std::vector<bool> row_alive(size_t(nrows), true), col_alive(size_t(ncols), true);
  int alive_rows = nrows, alive_cols = ncols;
  std::vector<Int> diag;

  auto set_entry = [&](int i, int j, const Int& v) {
    if (v == 0) {
      rows[size_t(i)].erase(j);
      cols[size_t(j)].erase(i);
    } else {
      rows[size_t(i)][j] = v;
      cols[size_t(j)].insert(i);
    }
  };

  // row r -= q * row p
  auto row_op = [&](int r, int p, const Int& q) {
    if (q == 0) return;
    for (const auto& [c, v] : std::map<int, Int>(rows[size_t(p)])) {
      Int cur = 0;
      auto it = rows[size_t(r)].find(c);
      if (it != rows[size_t(r)].end()) cur = it->second;
      set_entry(r, c, cur - q * v);
    }
  };

  while (true) {
    size_t nnz = 0;
    for (int i = 0; i < nrows; ++i)
      if (row_alive[size_t(i)]) nnz += rows[size_t(i)].size();
    if (nnz == 0) break;

    // Dense fallback for the small or dense residual block.
    if (size_t(alive_rows) * size_t(alive_cols) <= 4096 ||
        nnz * 4 > size_t(alive_rows) * size_t(alive_cols)) {
      std::vector<int> rmap, cmap(size_t(ncols), -1);
      std::vector<int> ridx, cidx;
      for (int i = 0; i < nrows; ++i)
        if (row_alive[size_t(i)]) ridx.push_back(i);
      for (int j = 0; j < ncols; ++j)
        if (col_alive[size_t(j)]) {
          cmap[size_t(j)] = int(cidx.size());
          cidx.push_back(j);
        }
      IntMat dense(int(ridx.size()), int(cidx.size()));
      for (int ii = 0; ii < int(ridx.size()); ++ii)
        for (const auto& [c, v] : rows[size_t(ridx[size_t(ii)])])
          dense.at(ii, cmap[size_t(c)]) = v;
      SmithResult s = smith(dense);
      for (const Int& d : s.diag)
        if (d != 0) diag.push_back(d);
      break;
    }

    // Pivot selection: smallest magnitude first, then Markowitz-style minimal
    // fill (len(row)-1)*(len(col)-1); unit pivots shortcut the scan.
    int pr = -1, pc = -1;
    Int bestv = 0;
    long long bestfill = 0;
    for (int i = 0; i < nrows && bestv != 1; ++i) {
      if (!row_alive[size_t(i)]) continue;
      for (const auto& [c, v] : rows[size_t(i)]) {
        Int av = abs_int(v);
        long long fill =
            (static_cast<long long>(rows[size_t(i)].size()) - 1) *
            (static_cast<long long>(cols[size_t(c)].size()) - 1);
        if (pr < 0 || av < bestv || (av == bestv && fill < bestfill)) {
          pr = i;
          pc = c;
          bestv = av;
          bestfill = fill;
          if (bestv == 1 && fill == 0) break;
        }
      }
    }
    if (pr < 0) break;

    // Remainder-reduce until the pivot exactly divides its column, then its
    // row. A nonzero remainder yields a smaller pivot; restart on it.
    bool clean = false;
    while (!clean) {
      clean = true;
      Int piv = rows[size_t(pr)][pc];
      // Column pass.
      for (int r : std::vector<int>(cols[size_t(pc)].begin(), cols[size_t(pc)].end())) {
        if (r == pr) continue;
        Int v = rows[size_t(r)][pc];
        Int q = quot(v, piv);
        row_op(r, pr, q);
        auto it = rows[size_t(r)].find(pc);
        if (it != rows[size_t(r)].end() && it->second != 0) {
          pr = r;  // remainder is strictly smaller; adopt as pivot
          clean = false;
          break;
        }
      }
      if (!clean) continue;
      // Row pass: the pivot column is now a singleton, so clearing the pivot
      // row with column operations only touches the pivot row itself.
      for (const auto& [c, v] : std::map<int, Int>(rows[size_t(pr)])) {
        if (c == pc) continue;
        Int q = quot(v, piv);
        Int rem = v - q * piv;
        set_entry(pr, c, rem);
        if (rem != 0) {
          pc = c;
          clean = false;
          break;
        }
      }
    }

    diag.push_back(abs_int(rows[size_t(pr)][pc]));
    // Retire pivot row and column.
    for (const auto& [c, v] : rows[size_t(pr)]) cols[size_t(c)].erase(pr);
    rows[size_t(pr)].clear();
    for (int r : cols[size_t(pc)]) rows[size_t(r)].erase(pc);
    cols[size_t(pc)].clear();
    row_alive[size_t(pr)] = false;
    col_alive[size_t(pc)] = false;
    --alive_rows;
    --alive_cols;
  }

  chain_fix(diag);
  InvariantFactors out;
  out.rank = int(diag.size());
  for (const Int& d : diag)
    if (d > 1) out.factors.push_back(d);
  return out;
}

InvariantFactors invariant_factors(const IntMat& a) {
  std::vector<std::tuple<int, int, Int>> entries;
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j)
      if (a.at(i, j) != 0) entries.emplace_back(i, j, a.at(i, j));
  return invariant_factors_sparse(a.rows(), a.cols(), entries);
}

IntMat kernel_basis(const IntMat& a) {
  SmithResult s = smith(a);
  // A x = 0 iff the first `rank` coordinates of Vinv x vanish; a basis of the
  // kernel is the trailing columns of V. The basis is saturated because V is
  // unimodular.
  return s.V.submatrix(0, a.cols(), s.rank, a.cols());
}

std::optional<std::vector<Int>> solve(const IntMat& a, const std::vector<Int>& b) {
  if (int(b.size()) != a.rows()) throw std::invalid_argument("solve: size mismatch");
  SmithResult s = smith(a);
  std::vector<Int> u = s.U.mul_vec(b);
  std::vector<Int> y(size_t(a.cols()), Int(0));
  for (int i = 0; i < a.rows(); ++i) {
    if (i < s.rank) {
      if (u[size_t(i)] % s.diag[size_t(i)] != 0) return std::nullopt;
      y[size_t(i)] = u[size_t(i)] / s.diag[size_t(i)];
    } else if (u[size_t(i)] != 0) {
      return std::nullopt;
    }
  }
  return s.V.mul_vec(y);
}

std::optional<IntMat> solve_mat(const IntMat& a, const IntMat& b) {
  if (a.rows() != b.rows()) throw std::invalid_argument("solve_mat: row mismatch");
  SmithResult s = smith(a);
  IntMat x(a.cols(), b.cols());
  for (int col = 0; col < b.cols(); ++col) {
    std::vector<Int> u = s.U.mul_vec(b.col(col));
    std::vector<Int> y(size_t(a.cols()), Int(0));
    for (int i = 0; i < a.rows(); ++i) {
      if (i < s.rank) {
        if (u[size_t(i)] % s.diag[size_t(i)] != 0) return std::nullopt;
        y[size_t(i)] = u[size_t(i)] / s.diag[size_t(i)];
      } else if (u[size_t(i)] != 0) {
        return std::nullopt;
      }
    }
    x.set_col(col, s.V.mul_vec(y));
  }
  return x;
}

IntMat column_hnf(const IntMat& a) {
  IntMat m = a;
  const int nr = m.rows(), nc = m.cols();
  int pc = 0;
  for (int i = 0; i < nr && pc < nc; ++i) {
    // Gather the row-i entries among columns >= pc into column pc via
    // determinant-one column transforms.
    for (int j = pc + 1; j < nc; ++j) {
      if (m.at(i, j) == 0) continue;
      if (m.at(i, pc) == 0) {
        m.swap_cols(pc, j);
        m.negate_col(pc);  // keep determinant +1; sign fixed below anyway
        continue;
      }
      Int x = m.at(i, pc), y = m.at(i, j);
      ExtGcd e = ext_gcd(x, y);
      Int xp = x / e.g, yp = y / e.g;
      // cols (pc, j) <- (s*c_pc + t*c_j, -yp*c_pc + xp*c_j)
      for (int k = 0; k < nr; ++k) {
        Int u = m.at(k, pc), v = m.at(k, j);
        m.at(k, pc) = e.s * u + e.t * v;
        m.at(k, j) = -yp * u + xp * v;
      }
    }
    if (m.at(i, pc) == 0) continue;
    if (m.at(i, pc) < 0) m.negate_col(pc);
    // Reduce earlier columns' entries in this pivot row.
    for (int j = 0; j < pc; ++j) {
      Int q = m.at(i, j) / m.at(i, pc);
      if (m.at(i, j) - q * m.at(i, pc) < 0) q -= 1;  // floor
      m.addmul_col(j, pc, -q);
    }
    ++pc;
  }
  return m.submatrix(0, nr, 0, pc);
}

std::vector<Int> divisibility_chain(std::vector<Int> orders, int& free_rank_out) {
  free_rank_out = 0;
  std::vector<Int> finite;
  for (Int& d : orders) {
    if (d < 0) d = -d;
    if (d == 0)
      ++free_rank_out;
    else
      finite.push_back(d);
  }
  chain_fix(finite);
  std::vector<Int> out;
  for (const Int& d : finite)
    if (d > 1) out.push_back(d);
  return out;
}

Int det(const IntMat& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("det: not square");
  const int n = a.rows();
  if (n == 0) return 1;
  IntMat m = a;
  Int prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (m.at(k, k) == 0) {
      int swap = -1;
      for (int i = k + 1; i < n; ++i)
        if (m.at(i, k) != 0) {
          swap = i;
          break;
        }
      if (swap < 0) return 0;
      m.swap_rows(k, swap);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        m.at(i, j) = (m.at(i, j) * m.at(k, k) - m.at(i, k) * m.at(k, j)) / prev;
    prev = m.at(k, k);
  }
  return sign > 0 ? m.at(n - 1, n - 1) : Int(-m.at(n - 1, n - 1));
}

}  // namespace nilsq

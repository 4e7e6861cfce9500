#pragma once

#include "nilsq/int.hpp"

#include <initializer_list>
#include <stdexcept>
#include <vector>

namespace nilsq {

// Dense matrix over Z (row-major). Row and column counts are ints; entries
// are arbitrary precision. Used for all group presentations, homomorphisms
// and chain differentials.
class IntMat {
 public:
  IntMat() = default;
  IntMat(int rows, int cols) : rows_(rows), cols_(cols), a_(size_t(rows) * size_t(cols)) {
    if (rows < 0 || cols < 0) throw std::invalid_argument("IntMat: negative dimension");
  }

  static IntMat identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  static IntMat zero(int rows, int cols) { return IntMat(rows, cols); }

  static IntMat diag(const std::vector<Int>& d) {
    IntMat m(int(d.size()), int(d.size()));
    for (int i = 0; i < int(d.size()); ++i) m.at(i, i) = d[size_t(i)];
    return m;
  }

  // Convenience literal constructor for tests and small fixed maps.
  static IntMat from_rows(std::initializer_list<std::initializer_list<long long>> rows) {
    int r = int(rows.size());
    int c = r == 0 ? 0 : int(rows.begin()->size());
    IntMat m(r, c);
    int i = 0;
    for (const auto& row : rows) {
      if (int(row.size()) != c) throw std::invalid_argument("IntMat::from_rows: ragged rows");
      int j = 0;
      for (long long v : row) m.at(i, j++) = v;
      ++i;
    }
    return m;
  }

  static IntMat col_vector(const std::vector<Int>& v) {
    IntMat m(int(v.size()), 1);
    for (int i = 0; i < int(v.size()); ++i) m.at(i, 0) = v[size_t(i)];
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Int& at(int i, int j) {
    check(i, j);
    return a_[size_t(i) * size_t(cols_) + size_t(j)];
  }
  const Int& at(int i, int j) const {
    check(i, j);
    return a_[size_t(i) * size_t(cols_) + size_t(j)];
  }

  bool is_zero() const {
    for (const Int& x : a_)
      if (x != 0) return false;
    return true;
  }

  bool operator==(const IntMat& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && a_ == o.a_;
  }
  bool operator!=(const IntMat& o) const { return !(*this == o); }

  IntMat operator*(const IntMat& o) const {
    if (cols_ != o.rows_) throw std::invalid_argument("IntMat*: shape mismatch");
    IntMat r(rows_, o.cols_);
    for (int i = 0; i < rows_; ++i)
      for (int k = 0; k < cols_; ++k) {
        const Int& x = at(i, k);
        if (x == 0) continue;
        for (int j = 0; j < o.cols_; ++j) {
          const Int& y = o.at(k, j);
          if (y != 0) r.at(i, j) += x * y;
        }
      }
    return r;
  }

  IntMat operator+(const IntMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("IntMat+: shape mismatch");
    IntMat r = *this;
    for (size_t k = 0; k < a_.size(); ++k) r.a_[k] += o.a_[k];
    return r;
  }

  IntMat operator-(const IntMat& o) const {
    if (rows_ != o.rows_ || cols_ != o.cols_) throw std::invalid_argument("IntMat-: shape mismatch");
    IntMat r = *this;
    for (size_t k = 0; k < a_.size(); ++k) r.a_[k] -= o.a_[k];
    return r;
  }

  IntMat operator-() const {
    IntMat r = *this;
    for (Int& x : r.a_) x = -x;
    return r;
  }

  IntMat scaled(const Int& c) const {
    IntMat r = *this;
    for (Int& x : r.a_) x *= c;
    return r;
  }

  IntMat transpose() const {
    IntMat r(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) r.at(j, i) = at(i, j);
    return r;
  }

  std::vector<Int> col(int j) const {
    std::vector<Int> v(static_cast<size_t>(rows_));
    for (int i = 0; i < rows_; ++i) v[size_t(i)] = at(i, j);
    return v;
  }

  std::vector<Int> row(int i) const {
    std::vector<Int> v(static_cast<size_t>(cols_));
    for (int j = 0; j < cols_; ++j) v[size_t(j)] = at(i, j);
    return v;
  }

  void set_col(int j, const std::vector<Int>& v) {
    if (int(v.size()) != rows_) throw std::invalid_argument("set_col: size mismatch");
    for (int i = 0; i < rows_; ++i) at(i, j) = v[size_t(i)];
  }

  std::vector<Int> mul_vec(const std::vector<Int>& v) const {
    if (int(v.size()) != cols_) throw std::invalid_argument("mul_vec: size mismatch");
    std::vector<Int> r(static_cast<size_t>(rows_));
    for (int i = 0; i < rows_; ++i) {
      Int s = 0;
      for (int j = 0; j < cols_; ++j)
        if (at(i, j) != 0 && v[size_t(j)] != 0) s += at(i, j) * v[size_t(j)];
      r[size_t(i)] = s;
    }
    return r;
  }

  // Horizontal concatenation [A | B].
  static IntMat hstack(const IntMat& a, const IntMat& b) {
    if (a.rows_ != b.rows_) throw std::invalid_argument("hstack: row mismatch");
    IntMat r(a.rows_, a.cols_ + b.cols_);
    for (int i = 0; i < a.rows_; ++i) {
      for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
      for (int j = 0; j < b.cols_; ++j) r.at(i, a.cols_ + j) = b.at(i, j);
    }
    return r;
  }

  // Vertical concatenation [A; B].
  static IntMat vstack(const IntMat& a, const IntMat& b) {
    if (a.cols_ != b.cols_) throw std::invalid_argument("vstack: col mismatch");
    IntMat r(a.rows_ + b.rows_, a.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows_; ++i)
      for (int j = 0; j < a.cols_; ++j) r.at(a.rows_ + i, j) = b.at(i, j);
    return r;
  }

  // Block diagonal [A 0; 0 B].
  static IntMat block_diag(const IntMat& a, const IntMat& b) {
    IntMat r(a.rows_ + b.rows_, a.cols_ + b.cols_);
    for (int i = 0; i < a.rows_; ++i)
      for (int j = 0; j < a.cols_; ++j) r.at(i, j) = a.at(i, j);
    for (int i = 0; i < b.rows_; ++i)
      for (int j = 0; j < b.cols_; ++j) r.at(a.rows_ + i, a.cols_ + j) = b.at(i, j);
    return r;
  }

  // Rows [r0, r1) and columns [c0, c1).
  IntMat submatrix(int r0, int r1, int c0, int c1) const {
    if (r0 < 0 || r1 > rows_ || c0 < 0 || c1 > cols_ || r0 > r1 || c0 > c1)
      throw std::invalid_argument("submatrix: bad range");
    IntMat r(r1 - r0, c1 - c0);
    for (int i = r0; i < r1; ++i)
      for (int j = c0; j < c1; ++j) r.at(i - r0, j - c0) = at(i, j);
    return r;
  }

  IntMat select_rows(const std::vector<int>& idx) const {
    IntMat r(int(idx.size()), cols_);
    for (int i = 0; i < int(idx.size()); ++i)
      for (int j = 0; j < cols_; ++j) r.at(i, j) = at(idx[size_t(i)], j);
    return r;
  }

  IntMat select_cols(const std::vector<int>& idx) const {
    IntMat r(rows_, int(idx.size()));
    for (int j = 0; j < int(idx.size()); ++j)
      for (int i = 0; i < rows_; ++i) r.at(i, j) = at(i, idx[size_t(j)]);
    return r;
  }

  // Elementary operations (used by the normal-form algorithms).
  void swap_rows(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < cols_; ++k) std::swap(at(i, k), at(j, k));
  }
  void swap_cols(int i, int j) {
    if (i == j) return;
    for (int k = 0; k < rows_; ++k) std::swap(at(k, i), at(k, j));
  }
  void negate_row(int i) {
    for (int k = 0; k < cols_; ++k) at(i, k) = -at(i, k);
  }
  void negate_col(int j) {
    for (int k = 0; k < rows_; ++k) at(k, j) = -at(k, j);
  }
  // row i += c * row j
  void addmul_row(int i, int j, const Int& c) {
    if (c == 0) return;
    for (int k = 0; k < cols_; ++k)
      if (at(j, k) != 0) at(i, k) += c * at(j, k);
  }
  // col i += c * col j
  void addmul_col(int i, int j, const Int& c) {
    if (c == 0) return;
    for (int k = 0; k < rows_; ++k)
      if (at(k, j) != 0) at(k, i) += c * at(k, j);
  }

  // Entrywise reduction mod m (m > 0), used for working over Z/m.
  IntMat reduced_mod(const Int& m) const {
    IntMat r = *this;
    for (Int& x : r.a_) x = mod_floor(x, m);
    return r;
  }

  std::string to_string() const {
    std::string s = "[";
    for (int i = 0; i < rows_; ++i) {
      s += i ? "; " : "";
      for (int j = 0; j < cols_; ++j) s += (j ? " " : "") + at(i, j).str();
    }
    return s + "]";
  }

 private:
  void check(int i, int j) const {
    if (i < 0 || i >= rows_ || j < 0 || j >= cols_) throw std::out_of_range("IntMat: index");
  }

  int rows_ = 0, cols_ = 0;
  std::vector<Int> a_;
};

inline std::vector<Int> add_vec(const std::vector<Int>& a, const std::vector<Int>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("add_vec: size mismatch");
  std::vector<Int> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline std::vector<Int> sub_vec(const std::vector<Int>& a, const std::vector<Int>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("sub_vec: size mismatch");
  std::vector<Int> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
  return r;
}

inline std::vector<Int> scale_vec(const std::vector<Int>& a, const Int& c) {
  std::vector<Int> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
  return r;
}

inline bool is_zero_vec(const std::vector<Int>& a) {
  for (const Int& x : a)
    if (x != 0) return false;
  return true;
}

}  // namespace nilsq

// SPDX-License-Identifier: Apache-2.0
#include "nfc/matrix.hpp"

#include <algorithm>

namespace nfc {

Matrix Matrix::identity(Field f, size_t n) {
  Matrix m(std::move(f), n, n);
  for (size_t i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

Matrix Matrix::from_rows(Field f, const std::vector<Vec>& rows) {
  require(!rows.empty(), "from_rows: no rows");
  Matrix m(std::move(f), rows.size(), rows[0].size());
  for (size_t r = 0; r < rows.size(); ++r) {
    require(rows[r].size() == m.cols_, "from_rows: ragged rows");
    for (size_t c = 0; c < m.cols_; ++c) m.at(r, c) = rows[r][c];
  }
  return m;
}

Matrix Matrix::random(Field f, size_t rows, size_t cols, Rng& rng) {
  Matrix m(f, rows, cols);
  for (auto& v : m.a_) v = fval(rng.below(f->order()));
  return m;
}

Vec Matrix::row(size_t r) const {
  return Vec(a_.begin() + r * cols_, a_.begin() + (r + 1) * cols_);
}

Matrix Matrix::transpose() const {
  Matrix t(f_, cols_, rows_);
  for (size_t r = 0; r < rows_; ++r)
    for (size_t c = 0; c < cols_; ++c) t.at(c, r) = at(r, c);
  return t;
}

Matrix Matrix::operator*(const Matrix& other) const {
  require(f_->same_as(*other.f_), "field spec mismatch");
  require(cols_ == other.rows_, "dimension mismatch in multiply");
  Matrix out(f_, rows_, other.cols_);
  for (size_t r = 0; r < rows_; ++r)
    for (size_t i = 0; i < cols_; ++i) {
      fval v = at(r, i);
      if (v == 0) continue;
      for (size_t c = 0; c < other.cols_; ++c) {
        fval prod = f_->mul(v, other.at(i, c));
        out.at(r, c) = f_->add(out.at(r, c), prod);
      }
    }
  return out;
}

Matrix Matrix::operator+(const Matrix& other) const {
  require(rows_ == other.rows_ && cols_ == other.cols_, "shape mismatch");
  Matrix out(f_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = f_->add(a_[i], other.a_[i]);
  return out;
}

Matrix Matrix::operator-(const Matrix& other) const {
  require(rows_ == other.rows_ && cols_ == other.cols_, "shape mismatch");
  Matrix out(f_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = f_->sub(a_[i], other.a_[i]);
  return out;
}

Matrix Matrix::scaled(fval c) const {
  Matrix out(f_, rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) out.a_[i] = f_->mul(a_[i], c);
  return out;
}

bool Matrix::operator==(const Matrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && a_ == other.a_ &&
         f_->same_as(*other.f_);
}

RrefResult Matrix::rref() const {
  Matrix m = *this;
  std::vector<size_t> pivots;
  size_t r = 0;
  for (size_t c = 0; c < cols_ && r < rows_; ++c) {
    size_t pivot = r;
    while (pivot < rows_ && m.at(pivot, c) == 0) ++pivot;
    if (pivot == rows_) continue;
    if (pivot != r)
      for (size_t j = 0; j < cols_; ++j) std::swap(m.at(pivot, j), m.at(r, j));
    fval inv = f_->inv(m.at(r, c));
    for (size_t j = 0; j < cols_; ++j) m.at(r, j) = f_->mul(m.at(r, j), inv);
    for (size_t i = 0; i < rows_; ++i) {
      if (i == r || m.at(i, c) == 0) continue;
      fval factor = m.at(i, c);
      for (size_t j = 0; j < cols_; ++j) {
        fval sub = f_->mul(factor, m.at(r, j));
        m.at(i, j) = f_->sub(m.at(i, j), sub);
      }
    }
    pivots.push_back(c);
    ++r;
  }
  return {std::move(m), std::move(pivots)};
}

size_t Matrix::rank() const { return rref().pivot_cols.size(); }

Matrix Matrix::inverse() const {
  require(rows_ == cols_, "inverse of non-square matrix");
  Matrix aug = hstack(*this, identity(f_, rows_));
  auto rr = aug.rref();
  // invertible iff the left block reduced to the identity
  require(rr.pivot_cols.size() >= rows_ &&
              (rows_ == 0 || rr.pivot_cols[rows_ - 1] == rows_ - 1),
          "matrix is singular");
  Matrix out(f_, rows_, cols_);
  for (size_t r = 0; r < rows_; ++r)
    for (size_t c = 0; c < cols_; ++c) out.at(r, c) = rr.mat.at(r, cols_ + c);
  return out;
}

Matrix Matrix::left_nullspace() const {
  /* Reduce the transpose: v*M = 0 <=> M^T v^T = 0, i.e. the (right) kernel
   * of M^T, read off from its RREF by back-filling free columns. */
  Matrix t = transpose();
  auto rr = t.rref();
  const size_t n = rows_;  // unknowns
  std::vector<char> is_pivot(n, 0);
  for (size_t c : rr.pivot_cols) is_pivot[c] = 1;
  std::vector<Vec> basis;
  for (size_t freec = 0; freec < n; ++freec) {
    if (is_pivot[freec]) continue;
    Vec v(n, 0);
    v[freec] = 1;
    for (size_t pr = 0; pr < rr.pivot_cols.size(); ++pr) {
      size_t pc = rr.pivot_cols[pr];
      v[pc] = f_->neg(rr.mat.at(pr, freec));
    }
    basis.push_back(std::move(v));
  }
  if (basis.empty()) return Matrix(f_, 0, n);
  return from_rows(f_, basis);
}

Matrix Matrix::vstack(const Matrix& top, const Matrix& bottom) {
  if (top.rows_ == 0) return bottom;
  if (bottom.rows_ == 0) return top;
  require(top.cols_ == bottom.cols_, "vstack: column mismatch");
  Matrix out(top.f_, top.rows_ + bottom.rows_, top.cols_);
  std::copy(top.a_.begin(), top.a_.end(), out.a_.begin());
  std::copy(bottom.a_.begin(), bottom.a_.end(),
            out.a_.begin() + top.a_.size());
  return out;
}

Matrix Matrix::hstack(const Matrix& left, const Matrix& right) {
  require(left.rows_ == right.rows_, "hstack: row mismatch");
  Matrix out(left.f_, left.rows_, left.cols_ + right.cols_);
  for (size_t r = 0; r < left.rows_; ++r) {
    for (size_t c = 0; c < left.cols_; ++c) out.at(r, c) = left.at(r, c);
    for (size_t c = 0; c < right.cols_; ++c)
      out.at(r, left.cols_ + c) = right.at(r, c);
  }
  return out;
}

Matrix Matrix::rows_at(const std::vector<size_t>& idx) const {
  Matrix out(f_, idx.size(), cols_);
  for (size_t r = 0; r < idx.size(); ++r) {
    require(idx[r] < rows_, "row index out of range");
    for (size_t c = 0; c < cols_; ++c) out.at(r, c) = at(idx[r], c);
  }
  return out;
}

Matrix Matrix::cols_at(const std::vector<size_t>& idx) const {
  Matrix out(f_, rows_, idx.size());
  for (size_t c = 0; c < idx.size(); ++c) {
    require(idx[c] < cols_, "column index out of range");
    for (size_t r = 0; r < rows_; ++r) out.at(r, c) = at(r, idx[c]);
  }
  return out;
}

Matrix Matrix::kron_identity(const Matrix& t, size_t k) {
  Matrix out(t.f_, t.rows_ * k, t.cols_ * k);
  for (size_t r = 0; r < t.rows_; ++r)
    for (size_t c = 0; c < t.cols_; ++c) {
      fval v = t.at(r, c);
      if (v == 0) continue;
      for (size_t i = 0; i < k; ++i) out.at(r * k + i, c * k + i) = v;
    }
  return out;
}

bool Matrix::is_zero() const {
  return std::all_of(a_.begin(), a_.end(), [](fval v) { return v == 0; });
}

Vec vec_mat(const Vec& x, const Matrix& m) {
  require(x.size() == m.rows(), "vec_mat: dimension mismatch");
  const Field& f = m.field();
  Vec y(m.cols(), 0);
  for (size_t r = 0; r < m.rows(); ++r) {
    if (x[r] == 0) continue;
    for (size_t c = 0; c < m.cols(); ++c)
      y[c] = f->add(y[c], f->mul(x[r], m.at(r, c)));
  }
  return y;
}

Vec mat_vec(const Matrix& m, const Vec& x) {
  require(x.size() == m.cols(), "mat_vec: dimension mismatch");
  const Field& f = m.field();
  Vec y(m.rows(), 0);
  for (size_t r = 0; r < m.rows(); ++r)
    for (size_t c = 0; c < m.cols(); ++c)
      y[r] = f->add(y[r], f->mul(m.at(r, c), x[c]));
  return y;
}

Vec vec_add(const Field& f, const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "vec_add: size mismatch");
  Vec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = f->add(a[i], b[i]);
  return c;
}

Vec vec_sub(const Field& f, const Vec& a, const Vec& b) {
  require(a.size() == b.size(), "vec_sub: size mismatch");
  Vec c(a.size());
  for (size_t i = 0; i < a.size(); ++i) c[i] = f->sub(a[i], b[i]);
  return c;
}

Vec vec_scale(const Field& f, fval c, const Vec& a) {
  Vec out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = f->mul(c, a[i]);
  return out;
}

bool vec_is_zero(const Vec& v) {
  return std::all_of(v.begin(), v.end(), [](fval x) { return x == 0; });
}

size_t hamming_weight(const Vec& v) {
  size_t w = 0;
  for (fval x : v)
    if (x != 0) ++w;
  return w;
}

std::optional<LeftSolve> solve_left(const Matrix& a, const Vec& y) {
  require(y.size() == a.cols(), "solve_left: rhs dimension mismatch");
  /* u * A = y  <=>  A^T u^T = y^T.  Row-reduce [A^T | y^T]; inconsistency
   * shows up as a pivot in the last column. */
  const Field& f = a.field();
  Matrix at = a.transpose();
  Matrix rhs(f, y.size(), 1);
  for (size_t i = 0; i < y.size(); ++i) rhs.at(i, 0) = y[i];
  Matrix aug = Matrix::hstack(at, rhs);
  auto rr = aug.rref();
  const size_t n = a.rows();  // unknowns
  for (size_t pc : rr.pivot_cols)
    if (pc == n) return std::nullopt;
  Vec particular(n, 0);
  for (size_t pr = 0; pr < rr.pivot_cols.size(); ++pr)
    particular[rr.pivot_cols[pr]] = rr.mat.at(pr, n);
  return LeftSolve{std::move(particular), a.left_nullspace()};
}

bool in_row_space(const Matrix& m, const Vec& v) {
  if (vec_is_zero(v)) return true;
  if (m.rows() == 0) return false;
  Matrix stacked = Matrix::vstack(m, Matrix::from_rows(m.field(), {v}));
  return stacked.rank() == m.rank();
}

}  // namespace nfc

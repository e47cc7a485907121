// SPDX-License-Identifier: Apache-2.0
#ifndef NFC_MATRIX_HPP
#define NFC_MATRIX_HPP

#include <cstddef>
#include <optional>
#include <vector>

#include "nfc/field.hpp"
#include "nfc/rng.hpp"

namespace nfc {

using Vec = std::vector<fval>;

class Matrix;

struct RrefResult;

/* Dense row-major matrix over one FieldSpec.  All algebra is exact Gaussian
 * elimination with first-nonzero pivoting; there is nothing numeric to
 * stabilize.  Row vectors act from the left throughout (y = x * M), matching
 * how encoding matrices are used. */
class Matrix {
 public:
  Matrix() = default;
  Matrix(Field f, size_t rows, size_t cols)
      : f_(std::move(f)), rows_(rows), cols_(cols), a_(rows * cols, 0) {}
  static Matrix identity(Field f, size_t n);
  static Matrix from_rows(Field f, const std::vector<Vec>& rows);
  static Matrix random(Field f, size_t rows, size_t cols, Rng& rng);

  size_t rows() const { return rows_; }
  size_t cols() const { return cols_; }
  const Field& field() const { return f_; }

  fval at(size_t r, size_t c) const { return a_[r * cols_ + c]; }
  fval& at(size_t r, size_t c) { return a_[r * cols_ + c]; }

  Vec row(size_t r) const;
  Matrix transpose() const;
  Matrix operator*(const Matrix& other) const;
  Matrix operator+(const Matrix& other) const;
  Matrix operator-(const Matrix& other) const;
  Matrix scaled(fval c) const;
  bool operator==(const Matrix& other) const;

  size_t rank() const;
  Matrix inverse() const;  // throws DomainError when singular / non-square

  RrefResult rref() const;

  // Rows form a basis of { v : v * M = 0 }.  Row count = rows() - rank().
  Matrix left_nullspace() const;

  // Stacking and selection.
  static Matrix vstack(const Matrix& top, const Matrix& bottom);
  static Matrix hstack(const Matrix& left, const Matrix& right);
  Matrix rows_at(const std::vector<size_t>& idx) const;
  Matrix cols_at(const std::vector<size_t>& idx) const;

  // T (x) I_k, materialized.
  static Matrix kron_identity(const Matrix& t, size_t k);

  bool is_zero() const;

 private:
  Field f_;
  size_t rows_ = 0, cols_ = 0;
  std::vector<fval> a_;
};

struct RrefResult {
  Matrix mat;
  std::vector<size_t> pivot_cols;
};

// y = x * M  (x has M.rows() entries)
Vec vec_mat(const Vec& x, const Matrix& m);
// y = M * x  (x has M.cols() entries)
Vec mat_vec(const Matrix& m, const Vec& x);
Vec vec_add(const Field& f, const Vec& a, const Vec& b);
Vec vec_sub(const Field& f, const Vec& a, const Vec& b);
Vec vec_scale(const Field& f, fval c, const Vec& a);
bool vec_is_zero(const Vec& v);
size_t hamming_weight(const Vec& v);

/* Solutions of u * A = y: one particular solution plus a basis of the
 * homogeneous space (the left null space of A).  Empty optional when the
 * system is inconsistent. */
struct LeftSolve {
  Vec particular;
  Matrix homogeneous;  // rows span { u : u * A = 0 }
};
std::optional<LeftSolve> solve_left(const Matrix& a, const Vec& y);

// Does v lie in the row space of M?
bool in_row_space(const Matrix& m, const Vec& v);

}  // namespace nfc

#endif

#pragma once

#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>
#include <vector>

#include "obsgame/rational.hpp"

namespace obsgame {

// Dense row-major matrix of exact rationals.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols);
  Matrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries);
  Matrix(std::initializer_list<std::initializer_list<Rational>> rows);

  static Matrix zeros(std::size_t rows, std::size_t cols) { return Matrix(rows, cols); }
  static Matrix identity(std::size_t n);
  static Matrix column(const std::vector<Rational>& v);
  static Matrix row_vector(const std::vector<Rational>& v);
  // Standard basis column e_i of length n (0-based i).
  static Matrix unit(std::size_t n, std::size_t i);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }
  bool is_square() const { return rows_ == cols_; }
  bool is_zero() const;

  Rational& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const Rational& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }
  const Rational& at(std::size_t i, std::size_t j) const;
  const std::vector<Rational>& entries() const { return data_; }

  Matrix row(std::size_t i) const;
  Matrix col(std::size_t j) const;
  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const;
  Matrix select_rows(const std::vector<std::size_t>& idx) const;
  Matrix select_cols(const std::vector<std::size_t>& idx) const;
  void set_block(std::size_t r0, std::size_t c0, const Matrix& b);
  Matrix transpose() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(const Rational& s);
  Matrix operator-() const;

  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(Matrix a, const Rational& s) { return a *= s; }
  friend Matrix operator*(const Rational& s, Matrix a) { return a *= s; }
  friend Matrix operator*(const Matrix& a, const Matrix& b);

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }
  friend bool operator!=(const Matrix& a, const Matrix& b) { return !(a == b); }
  // Shape first, then entries row-major. Only used for deterministic ordering.
  friend bool operator<(const Matrix& a, const Matrix& b);

  // [[a,b],[c,d]] with entries as "p/q".
  std::string to_string() const;
  friend std::ostream& operator<<(std::ostream& os, const Matrix& m) {
    return os << m.to_string();
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Rational> data_;
};

Matrix hstack(const Matrix& a, const Matrix& b);
Matrix vstack(const Matrix& a, const Matrix& b);
Matrix hstack(const std::vector<Matrix>& parts, std::size_t rows);
Matrix vstack(const std::vector<Matrix>& parts, std::size_t cols);
// Block diagonal: a top-left, b bottom-right.
Matrix direct_sum(const Matrix& a, const Matrix& b);
Matrix power(const Matrix& m, std::size_t k);

// Row rank via fraction-free elimination on integerized rows.
std::size_t rank(const Matrix& m);

struct RrefResult {
  Matrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};
// Reduced row echelon form; pivots taken leftmost column, topmost row.
RrefResult rref(const Matrix& m);

Matrix inverse(const Matrix& m);  // throws SingularMatrix / ShapeMismatch
Matrix pinv(const Matrix& m);

// Monic characteristic polynomial, highest degree first: {1, c1, ..., cn}.
std::vector<Rational> char_poly(const Matrix& m);
Matrix poly_eval(const std::vector<Rational>& coeffs, const Matrix& m);

// Column-stacked basis of full column rank. Zero columns encode {0}.
class Subspace {
 public:
  Subspace() = default;
  // Throws ShapeMismatch unless basis has full column rank.
  explicit Subspace(Matrix basis);
  static Subspace zero(std::size_t n) { return Subspace(n); }
  static Subspace full(std::size_t n) { return Subspace(Matrix::identity(n)); }
  // Echelon basis of the column span of m; dependent columns are dropped.
  static Subspace span(const Matrix& m);

  std::size_t ambient_dim() const { return n_; }
  std::size_t dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

  bool contains(const Matrix& v) const;  // every column of v lies in the span
  bool contains(const Subspace& s) const { return contains(s.basis()); }
  friend bool operator==(const Subspace& a, const Subspace& b) {
    return a.n_ == b.n_ && a.dim() == b.dim() && a.contains(b);
  }

 private:
  explicit Subspace(std::size_t n) : n_(n), basis_(n, 0) {}
  std::size_t n_ = 0;
  Matrix basis_;
};

// Basis from free variables of the RREF, in ascending free-column order.
Subspace kernel_basis(const Matrix& m);
// Rows spanning {z : z m = 0}.
Matrix left_annihilator(const Matrix& m);
// Subspace sum and the image of a matrix.
Subspace image(const Matrix& m);
Subspace sum(const Subspace& a, const Subspace& b);
Subspace intersect(const Subspace& a, const Subspace& b);

}  // namespace obsgame

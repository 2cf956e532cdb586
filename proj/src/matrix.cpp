#include "obsgame/matrix.hpp"

#include <algorithm>
#include <sstream>
#include <utility>

#include "obsgame/errors.hpp"

namespace obsgame {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw ShapeMismatch(what);
}

}  // namespace

Matrix::Matrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), data_(rows * cols) {}

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<Rational> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  require(data_.size() == rows * cols, "entry count does not match shape");
}

Matrix::Matrix(std::initializer_list<std::initializer_list<Rational>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    require(r.size() == cols_, "ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1;
  return m;
}

Matrix Matrix::column(const std::vector<Rational>& v) { return Matrix(v.size(), 1, v); }
Matrix Matrix::row_vector(const std::vector<Rational>& v) { return Matrix(1, v.size(), v); }

Matrix Matrix::unit(std::size_t n, std::size_t i) {
  Matrix m(n, 1);
  m(i, 0) = 1;
  return m;
}

bool Matrix::is_zero() const {
  return std::all_of(data_.begin(), data_.end(), [](const Rational& r) { return r.is_zero(); });
}

const Rational& Matrix::at(std::size_t i, std::size_t j) const {
  require(i < rows_ && j < cols_, "index out of range");
  return (*this)(i, j);
}

Matrix Matrix::row(std::size_t i) const { return block(i, 0, 1, cols_); }
Matrix Matrix::col(std::size_t j) const { return block(0, j, rows_, 1); }

Matrix Matrix::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  require(r0 + nr <= rows_ && c0 + nc <= cols_, "block out of range");
  Matrix b(nr, nc);
  for (std::size_t i = 0; i < nr; ++i)
    for (std::size_t j = 0; j < nc; ++j) b(i, j) = (*this)(r0 + i, c0 + j);
  return b;
}

Matrix Matrix::select_rows(const std::vector<std::size_t>& idx) const {
  Matrix b(idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    require(idx[i] < rows_, "row index out of range");
    for (std::size_t j = 0; j < cols_; ++j) b(i, j) = (*this)(idx[i], j);
  }
  return b;
}

Matrix Matrix::select_cols(const std::vector<std::size_t>& idx) const {
  Matrix b(rows_, idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j) {
    require(idx[j] < cols_, "column index out of range");
    for (std::size_t i = 0; i < rows_; ++i) b(i, j) = (*this)(i, idx[j]);
  }
  return b;
}

void Matrix::set_block(std::size_t r0, std::size_t c0, const Matrix& b) {
  require(r0 + b.rows_ <= rows_ && c0 + b.cols_ <= cols_, "block out of range");
  for (std::size_t i = 0; i < b.rows_; ++i)
    for (std::size_t j = 0; j < b.cols_; ++j) (*this)(r0 + i, c0 + j) = b(i, j);
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "addition of mismatched shapes");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  require(rows_ == o.rows_ && cols_ == o.cols_, "subtraction of mismatched shapes");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(const Rational& s) {
  for (auto& x : data_) x *= s;
  return *this;
}

Matrix Matrix::operator-() const {
  Matrix r = *this;
  for (auto& x : r.data_) x = -x;
  return r;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  require(a.cols_ == b.rows_, "product of mismatched shapes");
  Matrix c(a.rows_, b.cols_);
  mpq_class acc;
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t j = 0; j < b.cols_; ++j) {
      acc = 0;
      for (std::size_t k = 0; k < a.cols_; ++k) {
        const auto& x = a(i, k).raw();
        if (sgn(x) == 0) continue;
        acc += x * b(k, j).raw();
      }
      c(i, j) = Rational(acc);
    }
  }
  return c;
}

bool operator<(const Matrix& a, const Matrix& b) {
  if (a.rows_ != b.rows_) return a.rows_ < b.rows_;
  if (a.cols_ != b.cols_) return a.cols_ < b.cols_;
  return std::lexicographical_compare(a.data_.begin(), a.data_.end(), b.data_.begin(),
                                      b.data_.end());
}

std::string Matrix::to_string() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < rows_; ++i) {
    if (i) os << ',';
    os << '[';
    for (std::size_t j = 0; j < cols_; ++j) {
      if (j) os << ',';
      os << (*this)(i, j).to_string();
    }
    os << ']';
  }
  os << ']';
  return os.str();
}

Matrix hstack(const Matrix& a, const Matrix& b) {
  require(a.rows() == b.rows(), "hstack of mismatched row counts");
  Matrix c(a.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(0, a.cols(), b);
  return c;
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  require(a.cols() == b.cols(), "vstack of mismatched column counts");
  Matrix c(a.rows() + b.rows(), a.cols());
  c.set_block(0, 0, a);
  c.set_block(a.rows(), 0, b);
  return c;
}

Matrix hstack(const std::vector<Matrix>& parts, std::size_t rows) {
  Matrix out(rows, 0);
  for (const auto& p : parts) out = hstack(out, p);
  return out;
}

Matrix vstack(const std::vector<Matrix>& parts, std::size_t cols) {
  Matrix out(0, cols);
  for (const auto& p : parts) out = vstack(out, p);
  return out;
}

Matrix direct_sum(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows() + b.rows(), a.cols() + b.cols());
  c.set_block(0, 0, a);
  c.set_block(a.rows(), a.cols(), b);
  return c;
}

Matrix power(const Matrix& m, std::size_t k) {
  require(m.is_square(), "power of non-square matrix");
  Matrix r = Matrix::identity(m.rows());
  for (std::size_t i = 0; i < k; ++i) r = r * m;
  return r;
}

std::size_t rank(const Matrix& m) {
  const std::size_t R = m.rows(), C = m.cols();
  if (R == 0 || C == 0) return 0;
  // scale each row to integers
  std::vector<std::vector<mpz_class>> a(R, std::vector<mpz_class>(C));
  for (std::size_t i = 0; i < R; ++i) {
    mpz_class l = 1;
    for (std::size_t j = 0; j < C; ++j) {
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m(i, j).raw().get_den_mpz_t());
    }
    for (std::size_t j = 0; j < C; ++j) {
      const auto& q = m(i, j).raw();
      a[i][j] = q.get_num() * (l / q.get_den());
    }
  }
  // Bareiss
  mpz_class prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t p = r;
    while (p < R && a[p][c] == 0) ++p;
    if (p == R) continue;
    std::swap(a[p], a[r]);
    for (std::size_t i = r + 1; i < R; ++i) {
      for (std::size_t j = c + 1; j < C; ++j) {
        a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]);
        mpz_divexact(a[i][j].get_mpz_t(), a[i][j].get_mpz_t(), prev.get_mpz_t());
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
  }
  return r;
}

RrefResult rref(const Matrix& m) {
  RrefResult out{m, {}};
  Matrix& a = out.reduced;
  const std::size_t R = a.rows(), C = a.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t p = r;
    while (p < R && a(p, c).is_zero()) ++p;
    if (p == R) continue;
    if (p != r)
      for (std::size_t j = 0; j < C; ++j) std::swap(a(p, j), a(r, j));
    const Rational inv = Rational(1) / a(r, c);
    for (std::size_t j = c; j < C; ++j) a(r, j) *= inv;
    for (std::size_t i = 0; i < R; ++i) {
      if (i == r || a(i, c).is_zero()) continue;
      const Rational f = a(i, c);
      for (std::size_t j = c; j < C; ++j) a(i, j) -= f * a(r, j);
    }
    out.pivots.push_back(c);
    ++r;
  }
  return out;
}

Matrix inverse(const Matrix& m) {
  require(m.is_square(), "inverse of non-square matrix");
  const std::size_t n = m.rows();
  auto res = rref(hstack(m, Matrix::identity(n)));
  if (res.pivots.size() < n || (n > 0 && res.pivots[n - 1] != n - 1)) {
    throw SingularMatrix("matrix is singular");
  }
  return res.reduced.block(0, n, n, n);
}

Matrix pinv(const Matrix& m) {
  auto res = rref(m);
  const std::size_t r = res.pivots.size();
  if (r == 0) return Matrix(m.cols(), m.rows());
  // full-rank factorization m = Cf * Rf
  Matrix Rf = res.reduced.block(0, 0, r, m.cols());
  Matrix Cf = m.select_cols(res.pivots);
  Matrix Rt = Rf.transpose();
  Matrix Ct = Cf.transpose();
  return Rt * inverse(Rf * Rt) * inverse(Ct * Cf) * Ct;
}

std::vector<Rational> char_poly(const Matrix& m) {
  require(m.is_square(), "characteristic polynomial of non-square matrix");
  const std::size_t n = m.rows();
  std::vector<Rational> c(n + 1);
  c[0] = 1;
  // Faddeev-LeVerrier
  Matrix Mk(n, n);
  for (std::size_t k = 1; k <= n; ++k) {
    Mk = m * Mk;
    for (std::size_t i = 0; i < n; ++i) Mk(i, i) += c[k - 1];
    Matrix AM = m * Mk;
    Rational tr;
    for (std::size_t i = 0; i < n; ++i) tr += AM(i, i);
    c[k] = -tr / Rational(static_cast<std::int64_t>(k));
  }
  return c;
}

Matrix poly_eval(const std::vector<Rational>& coeffs, const Matrix& m) {
  require(m.is_square(), "polynomial of non-square matrix");
  Matrix acc(m.rows(), m.cols());
  const Matrix I = Matrix::identity(m.rows());
  for (const auto& c : coeffs) acc = acc * m + I * c;
  return acc;
}

Subspace::Subspace(Matrix basis) : n_(basis.rows()), basis_(std::move(basis)) {
  if (rank(basis_) != basis_.cols()) throw ShapeMismatch("subspace basis is rank deficient");
}

Subspace Subspace::span(const Matrix& m) {
  auto res = rref(m.transpose());
  Subspace s(m.rows());
  s.basis_ = res.reduced.block(0, 0, res.pivots.size(), m.rows()).transpose();
  return s;
}

bool Subspace::contains(const Matrix& v) const {
  require(v.rows() == n_, "vector dimension does not match subspace");
  if (v.cols() == 0 || v.is_zero()) return true;
  if (dim() == 0) return false;
  return rank(hstack(basis_, v)) == dim();
}

Subspace kernel_basis(const Matrix& m) {
  const std::size_t n = m.cols();
  auto res = rref(m);
  std::vector<bool> is_pivot(n, false);
  for (auto p : res.pivots) is_pivot[p] = true;
  std::vector<std::size_t> free;
  for (std::size_t j = 0; j < n; ++j)
    if (!is_pivot[j]) free.push_back(j);
  Matrix basis(n, free.size());
  for (std::size_t k = 0; k < free.size(); ++k) {
    basis(free[k], k) = 1;
    for (std::size_t i = 0; i < res.pivots.size(); ++i) {
      basis(res.pivots[i], k) = -res.reduced(i, free[k]);
    }
  }
  if (free.empty()) return Subspace::zero(n);
  return Subspace(std::move(basis));
}

Matrix left_annihilator(const Matrix& m) {
  return kernel_basis(m.transpose()).basis().transpose();
}

Subspace image(const Matrix& m) { return Subspace::span(m); }

Subspace sum(const Subspace& a, const Subspace& b) {
  require(a.ambient_dim() == b.ambient_dim(), "sum of subspaces in different spaces");
  return Subspace::span(hstack(a.basis(), b.basis()));
}

Subspace intersect(const Subspace& a, const Subspace& b) {
  require(a.ambient_dim() == b.ambient_dim(), "intersection of subspaces in different spaces");
  if (a.dim() == 0 || b.dim() == 0) return Subspace::zero(a.ambient_dim());
  auto k = kernel_basis(hstack(a.basis(), -b.basis()));
  if (k.dim() == 0) return Subspace::zero(a.ambient_dim());
  return Subspace::span(a.basis() * k.basis().block(0, 0, a.dim(), k.dim()));
}

}  // namespace obsgame

#pragma once

// Reference implementations used only by tests. They are deliberately naive
// and share no elimination code with the library.

#include <gmpxx.h>

#include <cstddef>
#include <random>
#include <vector>

#include "obsgame/matrix.hpp"

namespace oracle {

using obsgame::Matrix;
using obsgame::Rational;
using Grid = std::vector<std::vector<mpq_class>>;

inline Grid to_grid(const Matrix& M) {
  Grid g(M.rows(), std::vector<mpq_class>(M.cols()));
  for (std::size_t i = 0; i < M.rows(); ++i)
    for (std::size_t j = 0; j < M.cols(); ++j) g[i][j] = M(i, j).raw();
  return g;
}

// Plain row reduction with partial pivoting on the largest absolute value.
inline std::size_t rank(const Matrix& M) {
  Grid a = to_grid(M);
  const std::size_t R = M.rows(), C = M.cols();
  std::size_t r = 0;
  for (std::size_t c = 0; c < C && r < R; ++c) {
    std::size_t best = R;
    for (std::size_t i = r; i < R; ++i)
      if (sgn(a[i][c]) != 0 && (best == R || abs(a[i][c]) > abs(a[best][c]))) best = i;
    if (best == R) continue;
    std::swap(a[best], a[r]);
    for (std::size_t i = r + 1; i < R; ++i) {
      if (sgn(a[i][c]) == 0) continue;
      mpq_class f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < C; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

// Determinant by cofactor-free elimination.
inline mpq_class det(const Matrix& M) {
  Grid a = to_grid(M);
  const std::size_t n = M.rows();
  mpq_class d = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && sgn(a[p][c]) == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(a[p], a[c]);
      d = -d;
    }
    d *= a[c][c];
    for (std::size_t i = c + 1; i < n; ++i) {
      mpq_class f = a[i][c] / a[c][c];
      for (std::size_t j = c; j < n; ++j) a[i][j] -= f * a[c][j];
    }
  }
  return d;
}

inline Matrix naive_mul(const Matrix& A, const Matrix& B) {
  Matrix C(A.rows(), B.cols());
  for (std::size_t i = 0; i < A.rows(); ++i)
    for (std::size_t j = 0; j < B.cols(); ++j) {
      mpq_class s = 0;
      for (std::size_t k = 0; k < A.cols(); ++k) s += A(i, k).raw() * B(k, j).raw();
      C(i, j) = Rational(s);
    }
  return C;
}

// rank [B, M B, ..., M^{n-1} B]
inline std::size_t krylov_rank(const Matrix& M, const Matrix& B) {
  const std::size_t n = M.rows();
  Matrix K(n, n * B.cols());
  Matrix cur = B;
  for (std::size_t p = 0; p < n; ++p) {
    K.set_block(0, p * B.cols(), cur);
    cur = naive_mul(M, cur);
  }
  return oracle::rank(K);
}

// n - rank [C; C M; ...]
inline std::size_t unobservable_dim(const Matrix& C, const Matrix& M) {
  return M.rows() - krylov_rank(M.transpose(), C.transpose());
}

inline Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng, int lo = -3,
                            int hi = 3, int max_den = 4, double density = 0.7) {
  std::uniform_int_distribution<int> num(lo, hi), den(1, max_den);
  std::bernoulli_distribution keep(density);
  Matrix M(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j)
      if (keep(rng)) M(i, j) = Rational(num(rng), den(rng));
  return M;
}

inline Matrix random_invertible(std::size_t n, std::mt19937_64& rng) {
  while (true) {
    Matrix T = random_matrix(n, n, rng, -2, 2, 2, 0.6);
    if (sgn(det(T)) != 0) return T;
  }
}

// Random Jordan matrix with at most `distinct` eigenvalues from a small pool.
inline Matrix random_jordan(std::size_t n, std::size_t distinct, std::mt19937_64& rng) {
  static const Rational pool[] = {Rational(1, 2), Rational(-1), Rational(2), Rational(3, 10),
                                  Rational(0), Rational(-5, 3)};
  std::uniform_int_distribution<std::size_t> pick(0, distinct - 1);
  std::bernoulli_distribution chain(0.5);
  Matrix J(n, n);
  for (std::size_t i = 0; i < n; ++i) J(i, i) = pool[pick(rng)];
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (J(i, i) == J(i + 1, i + 1) && chain(rng)) J(i, i + 1) = 1;
  return J;
}

}  // namespace oracle

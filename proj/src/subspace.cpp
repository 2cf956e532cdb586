#include "obsgame/subspace.hpp"

#include "obsgame/errors.hpp"

namespace obsgame {

namespace {

void check_system(const Matrix& A, const Matrix& B) {
  if (!A.is_square()) throw ShapeMismatch("A must be square");
  if (B.rows() != A.rows()) throw ShapeMismatch("B must have as many rows as A");
}

}  // namespace

Matrix closed_loop(const Matrix& A, const Matrix& B, const Matrix& F) {
  check_system(A, B);
  if (F.rows() != B.cols() || F.cols() != A.cols()) throw ShapeMismatch("F must be k x n");
  return A + B * F;
}

VStarResult vstar(const Matrix& A, const Matrix& B, const Matrix& C) {
  check_system(A, B);
  if (C.cols() != A.cols()) throw ShapeMismatch("C must have n columns");
  VStarResult out;
  Subspace V = kernel_basis(C);
  out.iterate_dims.push_back(V.dim());
  while (true) {
    Matrix Z = left_annihilator(hstack(V.basis(), B));
    Matrix stacked = Z.rows() ? vstack(C, Z * A) : C;
    Subspace next = kernel_basis(stacked);
    ++out.iterations;
    out.iterate_dims.push_back(next.dim());
    const bool fixed = next.dim() == V.dim();
    V = std::move(next);
    if (fixed) break;
  }
  out.vstar = std::move(V);
  return out;
}

bool is_ab_invariant(const Matrix& A, const Matrix& B, const Subspace& V) {
  check_system(A, B);
  if (V.dim() == 0) return true;
  return sum(V, image(B)).contains(A * V.basis());
}

Matrix friend_matrix(const Matrix& A, const Matrix& B, const Subspace& V) {
  check_system(A, B);
  if (V.ambient_dim() != A.rows()) throw ShapeMismatch("subspace lives in the wrong space");
  const std::size_t n = A.rows(), k = B.cols(), r = V.dim();
  if (r == 0) return Matrix(k, n);
  if (!is_ab_invariant(A, B, V)) throw NotInvariant("A V is not contained in V + Im B");
  Matrix XU = pinv(hstack(V.basis(), B)) * A * V.basis();
  Matrix U = XU.block(r, 0, k, r);
  return -(U * pinv(V.basis()));
}

bool is_friend(const Matrix& A, const Matrix& B, const Matrix& F, const Subspace& V) {
  if (V.dim() == 0) return true;
  return V.contains(closed_loop(A, B, F) * V.basis());
}

Matrix observability_matrix(const Matrix& C, const Matrix& M) {
  if (!M.is_square() || C.cols() != M.rows()) throw ShapeMismatch("C must be m x n, M n x n");
  std::vector<Matrix> parts;
  Matrix cur = C;
  for (std::size_t i = 0; i < M.rows(); ++i) {
    parts.push_back(cur);
    cur = cur * M;
  }
  return vstack(parts, M.cols());
}

Matrix controllability_matrix(const Matrix& M, const Matrix& B) {
  if (!M.is_square() || B.rows() != M.rows()) throw ShapeMismatch("M must be n x n, B n x k");
  std::vector<Matrix> parts;
  Matrix cur = B;
  for (std::size_t i = 0; i < M.rows(); ++i) {
    parts.push_back(cur);
    cur = M * cur;
  }
  return hstack(parts, M.rows());
}

std::size_t unobservable_dim(const Matrix& C, const Matrix& M) {
  return M.rows() - rank(observability_matrix(C, M));
}

Subspace unobservable_subspace(const Matrix& C, const Matrix& M) {
  return kernel_basis(observability_matrix(C, M));
}

std::size_t controllable_rank(const Matrix& M, const Matrix& B) {
  return rank(controllability_matrix(M, B));
}

}  // namespace obsgame

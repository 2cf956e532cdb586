#pragma once

#include <cstddef>
#include <vector>

#include "obsgame/matrix.hpp"

namespace obsgame {

struct VStarResult {
  Subspace vstar;
  std::size_t iterations = 0;            // update steps, including the confirming one
  std::vector<std::size_t> iterate_dims;  // dim V_0, dim V_1, ...
};

// Largest (A,B)-invariant subspace inside Ker C.
VStarResult vstar(const Matrix& A, const Matrix& B, const Matrix& C);

// F with (A + B F) V ⊆ V, from the two pseudoinverse solves. The zero
// subspace gets F = 0. Throws NotInvariant when A V ⊄ V + Im B.
Matrix friend_matrix(const Matrix& A, const Matrix& B, const Subspace& V);

bool is_friend(const Matrix& A, const Matrix& B, const Matrix& F, const Subspace& V);
bool is_ab_invariant(const Matrix& A, const Matrix& B, const Subspace& V);

// [C; C M; ...; C M^{n-1}]
Matrix observability_matrix(const Matrix& C, const Matrix& M);
// [B, M B, ..., M^{n-1} B]
Matrix controllability_matrix(const Matrix& M, const Matrix& B);

// dim Ker of the observability matrix of (C, M).
std::size_t unobservable_dim(const Matrix& C, const Matrix& M);
Subspace unobservable_subspace(const Matrix& C, const Matrix& M);
std::size_t controllable_rank(const Matrix& M, const Matrix& B);

// A + B F
Matrix closed_loop(const Matrix& A, const Matrix& B, const Matrix& F);

}  // namespace obsgame

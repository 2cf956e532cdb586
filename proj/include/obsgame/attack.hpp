#pragma once

#include <cstddef>
#include <vector>

#include "obsgame/jordan.hpp"
#include "obsgame/matrix.hpp"

namespace obsgame {

struct BlockSelection {
  // Per eigenvalue: chosen local block indices, ascending.
  std::vector<std::vector<std::size_t>> chosen;
  std::size_t achieved_dim = 0;
};

// Per eigenvalue, among the maximal independent subsets of block last rows,
// the one with the largest total block size (ties: lexicographically
// smallest index set). Exhaustive up to 12 blocks, matroid greedy beyond.
BlockSelection select_blocks(const JordanDecomposition& jd, const Matrix& Bhat);

// dim Im [B, J B, ..., J^{n-1} B], computed from the block structure by
// reducing generator leads per eigenvalue.
std::size_t controllable_dim(const JordanDecomposition& jd, const Matrix& Bhat);

bool is_max_controllable(const JordanDecomposition& jd, const Matrix& Bhat, std::size_t m);

// Sum over eigenvalues of the min(m, alpha_i) largest block sizes.
std::size_t max_controllable_dim(const JordanDecomposition& jd, std::size_t m);

Matrix build_optimal_Bhat(const JordanDecomposition& jd, std::size_t m);

// C = (T Bhat)^T for the dual Jordan decomposition of (A+BF)^T.
Matrix sensor_from_Bhat(const JordanDecomposition& jd, const Matrix& Bhat);

Matrix minimize_unobservable(const Matrix& A, const Matrix& B, const Matrix& F, std::size_t m);

std::size_t min_unobservable_dim(const Matrix& M, std::size_t m);

// Every optimal B̂ that places unit last rows on a tie-equivalent block
// selection; the canonical one comes first. At most `cap` entries.
std::vector<Matrix> optimal_Bhat_family(const JordanDecomposition& jd, std::size_t m,
                                        std::size_t cap = 256);

// The sensor matrices built from optimal_Bhat_family for A + B F.
std::vector<Matrix> attacker_candidates(const Matrix& A, const Matrix& B, const Matrix& F,
                                        std::size_t m, std::size_t cap = 256);

}  // namespace obsgame

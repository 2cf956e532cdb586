#pragma once

#include <cstddef>
#include <vector>

#include "obsgame/matrix.hpp"

namespace obsgame {

struct NormalFormModel {
  std::vector<std::size_t> r;  // relative degree per output
  std::size_t s = 0;           // sum of r
  Matrix T_nf;                 // rows c_i A0^{j-1}, then p_i
  Matrix A_hat;                // T_nf A0 T_nf^{-1}, xi coordinates first
  Matrix N, E, R, S, L;
  Matrix B2prime;              // z rows of T_nf B2
  Matrix B2_transformed;       // T_nf B2, all rows
  bool hypothesis_holds = true;  // Im B2 ⊆ V*(A0, B1, C0)

  std::size_t n0() const { return T_nf.rows(); }
  std::size_t m() const { return L.rows(); }
  // row of A_hat carrying the last xi coordinate of chain i
  std::size_t chain_end(std::size_t i) const;
};

// Throws NoRelativeDegree when m != k, a row never reaches the input within
// n0 powers, or the decoupling matrix is singular.
std::vector<std::size_t> relative_degree(const Matrix& A0, const Matrix& B1, const Matrix& C0);

// Decoupling matrix with rows c_i A0^{r_i - 1} B1.
Matrix decoupling_matrix(const Matrix& A0, const Matrix& B1, const Matrix& C0,
                         const std::vector<std::size_t>& r);

NormalFormModel to_normal_form(const Matrix& A0, const Matrix& B1, const Matrix& B2,
                               const Matrix& C0);

// U1 = L^{-1} (Chat - R)
Matrix u1_from_chat(const NormalFormModel& model, const Matrix& Chat);

}  // namespace obsgame

#include "obsgame/normal_form.hpp"

#include "obsgame/errors.hpp"
#include "obsgame/subspace.hpp"

namespace obsgame {

std::size_t NormalFormModel::chain_end(std::size_t i) const {
  std::size_t off = 0;
  for (std::size_t k = 0; k <= i; ++k) off += r[k];
  return off - 1;
}

Matrix decoupling_matrix(const Matrix& A0, const Matrix& B1, const Matrix& C0,
                         const std::vector<std::size_t>& r) {
  Matrix L(C0.rows(), B1.cols());
  for (std::size_t i = 0; i < C0.rows(); ++i) {
    L.set_block(i, 0, C0.row(i) * power(A0, r[i] - 1) * B1);
  }
  return L;
}

std::vector<std::size_t> relative_degree(const Matrix& A0, const Matrix& B1, const Matrix& C0) {
  if (!A0.is_square() || B1.rows() != A0.rows() || C0.cols() != A0.cols()) {
    throw ShapeMismatch("normal form needs A0 n x n, B1 n x m, C0 m x n");
  }
  if (C0.rows() != B1.cols()) {
    throw NoRelativeDegree("relative degree needs as many outputs as inputs");
  }
  const std::size_t n = A0.rows();
  std::vector<std::size_t> r;
  for (std::size_t i = 0; i < C0.rows(); ++i) {
    Matrix row = C0.row(i);
    std::size_t found = 0;
    for (std::size_t j = 1; j <= n; ++j) {
      if (!(row * B1).is_zero()) {
        found = j;
        break;
      }
      row = row * A0;
    }
    if (found == 0) {
      throw NoRelativeDegree("output " + std::to_string(i + 1) + " never reaches the input");
    }
    r.push_back(found);
  }
  if (rank(decoupling_matrix(A0, B1, C0, r)) != C0.rows()) {
    throw NoRelativeDegree("decoupling matrix is singular");
  }
  return r;
}

NormalFormModel to_normal_form(const Matrix& A0, const Matrix& B1, const Matrix& B2,
                               const Matrix& C0) {
  NormalFormModel nf;
  nf.r = relative_degree(A0, B1, C0);
  if (B2.rows() != A0.rows()) throw ShapeMismatch("B2 must have n rows");
  const std::size_t n = A0.rows(), m = C0.rows();
  for (auto ri : nf.r) nf.s += ri;

  std::vector<Matrix> rows;
  for (std::size_t i = 0; i < m; ++i) {
    Matrix row = C0.row(i);
    for (std::size_t j = 0; j < nf.r[i]; ++j) {
      rows.push_back(row);
      row = row * A0;
    }
  }
  Matrix T = vstack(rows, n);
  // complete with rows p satisfying p B1 = 0, in echelon order
  const Matrix P = left_annihilator(B1);
  for (std::size_t i = 0; i < P.rows() && T.rows() < n; ++i) {
    Matrix trial = vstack(T, P.row(i));
    if (rank(trial) == trial.rows()) T = std::move(trial);
  }
  if (T.rows() != n || rank(T) != n) throw NoRelativeDegree("coordinate change is singular");

  const std::size_t s = nf.s, nz = n - s;
  nf.T_nf = T;
  nf.A_hat = T * A0 * inverse(T);
  nf.N = nf.A_hat.block(s, s, nz, nz);
  nf.E = nf.A_hat.block(s, 0, nz, s);
  nf.R = Matrix(m, nz);
  nf.S = Matrix(m, s);
  for (std::size_t i = 0; i < m; ++i) {
    const std::size_t row = nf.chain_end(i);
    nf.R.set_block(i, 0, nf.A_hat.block(row, s, 1, nz));
    nf.S.set_block(i, 0, nf.A_hat.block(row, 0, 1, s));
  }
  nf.L = decoupling_matrix(A0, B1, C0, nf.r);
  nf.B2_transformed = T * B2;
  nf.B2prime = nf.B2_transformed.block(s, 0, nz, B2.cols());
  nf.hypothesis_holds = vstar(A0, B1, C0).vstar.contains(B2);
  return nf;
}

Matrix u1_from_chat(const NormalFormModel& model, const Matrix& Chat) {
  if (Chat.rows() != model.R.rows() || Chat.cols() != model.R.cols()) {
    throw ShapeMismatch("Chat must be m x (n0 - s)");
  }
  return inverse(model.L) * (Chat - model.R);
}

}  // namespace obsgame

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "obsgame/matrix.hpp"
#include "obsgame/rational.hpp"

namespace obsgame {

struct EigenStructure {
  Rational eigenvalue;
  std::size_t algebraic_mult = 0;
  std::size_t geometric_mult = 0;
  std::vector<std::size_t> block_sizes;       // descending
  std::vector<std::size_t> descending_order;  // j-th largest -> local block index
};

struct JordanBlock {
  std::size_t eigen_index = 0;  // into spectrum
  std::size_t local_index = 0;  // position among the blocks of that eigenvalue, J order
  std::size_t offset = 0;       // first row/column in J
  std::size_t size = 0;

  std::size_t last_row() const { return offset + size - 1; }
};

struct JordanDecomposition {
  Matrix J;
  Matrix T;  // T^{-1} M T = J
  std::vector<EigenStructure> spectrum;
  std::vector<JordanBlock> blocks;  // in J order

  std::size_t n() const { return J.rows(); }
  // Blocks of eigenvalue i, in J order.
  std::vector<JordanBlock> blocks_of(std::size_t i) const;

  // Wraps a matrix already in upper Jordan form (T = I). Eigenvalues are
  // listed by first appearance; block order is preserved.
  static JordanDecomposition from_jordan_form(const Matrix& J);
};

// Distinct eigenvalues with algebraic multiplicity, ordered by descending
// multiplicity then ascending value. Throws NonRationalSpectrum.
std::vector<std::pair<Rational, std::size_t>> eigenvalues(const Matrix& m);

JordanDecomposition jordan_decompose(const Matrix& m);

// Block sizes of eigenvalue lambda from the rank sequence of (m - lambda I)^j,
// descending.
std::vector<std::size_t> block_sizes_from_ranks(const Matrix& m, const Rational& lambda);

std::size_t geometric_multiplicity(const Matrix& m, const Rational& lambda);
std::size_t max_geometric_multiplicity(const Matrix& m);

// Single Jordan block of the given size.
Matrix jordan_block(const Rational& lambda, std::size_t size);

}  // namespace obsgame

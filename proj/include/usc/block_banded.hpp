#pragma once

#include "usc/fockspace.hpp"

#include <vector>

namespace usc {

/// Square block matrix with `bandwidth` nonzero block diagonals on either side
/// of the main one. Only in-band blocks are stored.
class BlockBandedMatrix {
 public:
  BlockBandedMatrix(int blocks, int block_size, int bandwidth);

  int blocks() const noexcept { return blocks_; }
  int block_size() const noexcept { return block_size_; }
  int bandwidth() const noexcept { return bandwidth_; }
  bool in_band(int i, int j) const noexcept;

  Operator& at(int i, int j);
  const Operator& at(int i, int j) const;

  /// Densified copy, for tests.
  Operator dense() const;

 private:
  int blocks_;
  int block_size_;
  int bandwidth_;
  std::vector<Operator> data_;
};

/// Block Gaussian elimination without inter-block pivoting (block Thomas for
/// bandwidth 1). Pivoting happens inside each diagonal block. Throws
/// DegenerateKernel if a pivot block is numerically singular.
Eigen::VectorXcd solve_block_banded(BlockBandedMatrix a, Eigen::VectorXcd rhs);

}  // namespace usc

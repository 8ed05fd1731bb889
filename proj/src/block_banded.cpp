#include "usc/block_banded.hpp"

#include "usc/error.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <string>

namespace usc {

BlockBandedMatrix::BlockBandedMatrix(int blocks, int block_size, int bandwidth)
    : blocks_(blocks), block_size_(block_size), bandwidth_(bandwidth) {
  if (blocks < 1 || block_size < 1 || bandwidth < 0) {
    throw Error(ErrorCode::Shape, "invalid block-banded layout");
  }
  data_.assign(static_cast<std::size_t>(blocks) * (2 * bandwidth + 1),
               Operator::Zero(block_size, block_size));
}

bool BlockBandedMatrix::in_band(int i, int j) const noexcept {
  return i >= 0 && j >= 0 && i < blocks_ && j < blocks_ && std::abs(i - j) <= bandwidth_;
}

Operator& BlockBandedMatrix::at(int i, int j) {
  if (!in_band(i, j)) throw Error(ErrorCode::Index, "block outside band");
  return data_[static_cast<std::size_t>(i) * (2 * bandwidth_ + 1) + (j - i + bandwidth_)];
}

const Operator& BlockBandedMatrix::at(int i, int j) const {
  return const_cast<BlockBandedMatrix*>(this)->at(i, j);
}

Operator BlockBandedMatrix::dense() const {
  const int n = block_size_;
  Operator out = Operator::Zero(blocks_ * n, blocks_ * n);
  for (int i = 0; i < blocks_; ++i)
    for (int j = std::max(0, i - bandwidth_); j <= std::min(blocks_ - 1, i + bandwidth_); ++j)
      out.block(i * n, j * n, n, n) = at(i, j);
  return out;
}

Eigen::VectorXcd solve_block_banded(BlockBandedMatrix a, Eigen::VectorXcd rhs) {
  const int nb = a.blocks();
  const int n = a.block_size();
  const int k = a.bandwidth();
  if (rhs.size() != static_cast<Eigen::Index>(nb) * n) {
    throw Error(ErrorCode::Shape, "right-hand side does not match block layout");
  }

  // Forward sweep: normalise block row i by its pivot block, then eliminate
  // block column i from the rows below. Upper blocks are overwritten by
  // A_ii^-1 A_ic and rhs_i by A_ii^-1 rhs_i.
  for (int i = 0; i < nb; ++i) {
    Eigen::PartialPivLU<Operator> lu(a.at(i, i));
    const double rcond = lu.rcond();
    if (!(rcond > 1e-15)) {
      throw Error(ErrorCode::DegenerateKernel,
                  "pivot block " + std::to_string(i) + " is singular (rcond " +
                      std::to_string(rcond) + ")");
    }
    const int last = std::min(nb - 1, i + k);
    for (int c = i + 1; c <= last; ++c) a.at(i, c) = lu.solve(a.at(i, c));
    rhs.segment(i * n, n) = lu.solve(rhs.segment(i * n, n));
    for (int r = i + 1; r <= last; ++r) {
      const Operator factor = a.at(r, i);
      if (factor.isZero(0.0)) continue;
      for (int c = i + 1; c <= last; ++c) a.at(r, c).noalias() -= factor * a.at(i, c);
      rhs.segment(r * n, n).noalias() -= factor * rhs.segment(i * n, n);
    }
  }
  for (int i = nb - 1; i >= 0; --i) {
    const int last = std::min(nb - 1, i + k);
    for (int c = i + 1; c <= last; ++c)
      rhs.segment(i * n, n).noalias() -= a.at(i, c) * rhs.segment(c * n, n);
  }
  return rhs;
}

}  // namespace usc

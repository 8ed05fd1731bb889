#pragma once

#include "usc/fockspace.hpp"

#include <random>

namespace testing {

// Kronecker product written out index by index, independent of the library.
inline usc::Operator kron_by_hand(const usc::Operator& a, const usc::Operator& b) {
  usc::Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      for (Eigen::Index k = 0; k < b.rows(); ++k)
        for (Eigen::Index l = 0; l < b.cols(); ++l)
          out(i * b.rows() + k, j * b.cols() + l) = a(i, j) * b(k, l);
  return out;
}

inline usc::Operator random_matrix(int d, std::mt19937& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  usc::Operator m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = {n(rng), n(rng)};
  return m;
}

inline usc::Operator random_hermitian(int d, std::mt19937& rng) {
  const usc::Operator m = random_matrix(d, rng);
  return 0.5 * (m + m.adjoint());
}

inline usc::Operator random_density(int d, std::mt19937& rng) {
  const usc::Operator m = random_matrix(d, rng);
  usc::Operator rho = m * m.adjoint();
  return rho / rho.trace();
}

}  // namespace testing

#pragma once

#include <Eigen/Dense>

#include <complex>

namespace usc {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

/// Photon-number cutoffs of the two resonator modes. The composite space is
/// ordered qubit (x) mode1 (x) mode2 everywhere in the project.
class Truncation {
 public:
  Truncation(int n1, int n2);

  int n1() const noexcept { return n1_; }
  int n2() const noexcept { return n2_; }
  int dim() const noexcept { return 2 * n1_ * n2_; }

  bool operator==(const Truncation&) const = default;

 private:
  int n1_;
  int n2_;
};

enum class PauliAxis { X, Y, Z, Plus, Minus };
enum class Slot { Qubit, Mode1, Mode2 };

/// Truncated bosonic lowering operator, <m|a|m+1> = sqrt(m+1).
Operator annihilation_matrix(int cutoff);

/// sigma_z = diag(+1, -1); sigma_+ = |0><1|.
Operator pauli_matrix(PauliAxis axis);

/// Kronecker embedding of a single-slot operator into the composite space.
Operator embed(const Operator& op, Slot slot, const Truncation& trunc);

Operator identity(int dim);

bool is_hermitian(const Operator& m, double rel_tol = 1e-12);

}  // namespace usc

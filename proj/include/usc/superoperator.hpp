#pragma once

#include "usc/fockspace.hpp"

namespace usc {

/// Linear map on column-stacked density matrices: vec(rho)_{i + d*j} = rho(i, j).
/// With this convention vec(A rho B) = (B^T (x) A) vec(rho).
class Superoperator {
 public:
  Superoperator() = default;
  explicit Superoperator(int hilbert_dim);
  Superoperator(int hilbert_dim, Operator map);

  static Superoperator zero(int hilbert_dim) { return Superoperator(hilbert_dim); }

  int hilbert_dim() const noexcept { return d_; }
  int dim() const noexcept { return d_ * d_; }
  const Operator& matrix() const noexcept { return map_; }
  Operator& matrix() noexcept { return map_; }

  Operator apply(const Operator& rho) const;

  /// map += coeff * (rho -> A rho B)
  void add_sandwich(Complex coeff, const Operator& a, const Operator& b);
  /// map += coeff * (rho -> A rho)
  void add_left(Complex coeff, const Operator& a);
  /// map += coeff * (rho -> rho B)
  void add_right(Complex coeff, const Operator& b);
  /// map += coeff * (rho -> [A, rho])
  void add_commutator(Complex coeff, const Operator& a);
  /// map += coeff * D[O], D[O] rho = O rho O^+ - (O^+ O rho + rho O^+ O) / 2
  void add_lindblad(double coeff, const Operator& o);

  Superoperator& operator+=(const Superoperator& other);
  Superoperator& operator*=(Complex s);

 private:
  int d_ = 0;
  Operator map_;
};

Eigen::VectorXcd vectorize(const Operator& rho);
Operator unvectorize(const Eigen::VectorXcd& v, int hilbert_dim);

/// Row vector t with t . vec(rho) = Tr(rho).
Eigen::RowVectorXcd trace_functional(int hilbert_dim);

}  // namespace usc

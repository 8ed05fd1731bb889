#include "usc/superoperator.hpp"

#include "usc/error.hpp"

#include <string>

namespace usc {

Superoperator::Superoperator(int hilbert_dim)
    : d_(hilbert_dim), map_(Operator::Zero(hilbert_dim * hilbert_dim, hilbert_dim * hilbert_dim)) {}

Superoperator::Superoperator(int hilbert_dim, Operator map) : d_(hilbert_dim), map_(std::move(map)) {
  if (map_.rows() != dim() || map_.cols() != dim()) {
    throw Error(ErrorCode::Shape, "superoperator map must be " + std::to_string(dim()) + " square");
  }
}

Operator Superoperator::apply(const Operator& rho) const {
  return unvectorize(map_ * vectorize(rho), d_);
}

void Superoperator::add_sandwich(Complex coeff, const Operator& a, const Operator& b) {
  // Block (r, c) of B^T (x) A is B(c, r) * A.
  for (int c = 0; c < d_; ++c) {
    for (int r = 0; r < d_; ++r) {
      const Complex w = coeff * b(c, r);
      if (w == Complex{}) continue;
      map_.block(r * d_, c * d_, d_, d_) += w * a;
    }
  }
}

void Superoperator::add_left(Complex coeff, const Operator& a) {
  for (int r = 0; r < d_; ++r) map_.block(r * d_, r * d_, d_, d_) += coeff * a;
}

void Superoperator::add_right(Complex coeff, const Operator& b) {
  // (B^T (x) I): block (r, c) = B(c, r) * I.
  for (int c = 0; c < d_; ++c)
    for (int r = 0; r < d_; ++r) {
      const Complex w = coeff * b(c, r);
      if (w == Complex{}) continue;
      for (int i = 0; i < d_; ++i) map_(r * d_ + i, c * d_ + i) += w;
    }
}

void Superoperator::add_commutator(Complex coeff, const Operator& a) {
  add_left(coeff, a);
  add_right(-coeff, a);
}

void Superoperator::add_lindblad(double coeff, const Operator& o) {
  const Operator od = o.adjoint();
  const Operator odo = od * o;
  add_sandwich(coeff, o, od);
  add_left(-0.5 * coeff, odo);
  add_right(-0.5 * coeff, odo);
}

Superoperator& Superoperator::operator+=(const Superoperator& other) {
  if (other.d_ != d_) throw Error(ErrorCode::Shape, "superoperator dimension mismatch");
  map_ += other.map_;
  return *this;
}

Superoperator& Superoperator::operator*=(Complex s) {
  map_ *= s;
  return *this;
}

Eigen::VectorXcd vectorize(const Operator& rho) {
  return Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
}

Operator unvectorize(const Eigen::VectorXcd& v, int d) {
  if (v.size() != static_cast<Eigen::Index>(d) * d) {
    throw Error(ErrorCode::Shape, "vector length does not match Hilbert dimension");
  }
  return Eigen::Map<const Operator>(v.data(), d, d);
}

Eigen::RowVectorXcd trace_functional(int d) {
  Eigen::RowVectorXcd t = Eigen::RowVectorXcd::Zero(d * d);
  for (int i = 0; i < d; ++i) t(i * d + i) = 1.0;
  return t;
}

}  // namespace usc

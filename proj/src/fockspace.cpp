#include "usc/fockspace.hpp"

#include "usc/error.hpp"

#include <cmath>
#include <string>

namespace usc {

Truncation::Truncation(int n1, int n2) : n1_(n1), n2_(n2) {
  if (n1 < 2 || n2 < 2) {
    throw Error(ErrorCode::InvalidTruncation,
                "photon cutoffs must be >= 2, got (" + std::to_string(n1) + ", " +
                    std::to_string(n2) + ")");
  }
}

Operator annihilation_matrix(int cutoff) {
  if (cutoff < 2) {
    throw Error(ErrorCode::InvalidTruncation, "cutoff must be >= 2, got " + std::to_string(cutoff));
  }
  Operator a = Operator::Zero(cutoff, cutoff);
  for (int m = 0; m + 1 < cutoff; ++m) a(m, m + 1) = std::sqrt(static_cast<double>(m + 1));
  return a;
}

Operator pauli_matrix(PauliAxis axis) {
  const Complex i{0.0, 1.0};
  Operator s = Operator::Zero(2, 2);
  switch (axis) {
    case PauliAxis::X:
      s(0, 1) = 1.0;
      s(1, 0) = 1.0;
      break;
    case PauliAxis::Y:
      s(0, 1) = -i;
      s(1, 0) = i;
      break;
    case PauliAxis::Z:
      s(0, 0) = 1.0;
      s(1, 1) = -1.0;
      break;
    case PauliAxis::Plus:
      s(0, 1) = 1.0;
      break;
    case PauliAxis::Minus:
      s(1, 0) = 1.0;
      break;
  }
  return s;
}

namespace {

Operator kron(const Operator& a, const Operator& b) {
  Operator out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index r = 0; r < a.rows(); ++r)
    for (Eigen::Index c = 0; c < a.cols(); ++c)
      out.block(r * b.rows(), c * b.cols(), b.rows(), b.cols()) = a(r, c) * b;
  return out;
}

}  // namespace

Operator identity(int dim) { return Operator::Identity(dim, dim); }

Operator embed(const Operator& op, Slot slot, const Truncation& trunc) {
  const int expected = slot == Slot::Qubit ? 2 : slot == Slot::Mode1 ? trunc.n1() : trunc.n2();
  if (op.rows() != expected || op.cols() != expected) {
    throw Error(ErrorCode::Shape, "operator is " + std::to_string(op.rows()) + "x" +
                                      std::to_string(op.cols()) + ", slot expects " +
                                      std::to_string(expected));
  }
  const Operator q = slot == Slot::Qubit ? op : identity(2);
  const Operator m1 = slot == Slot::Mode1 ? op : identity(trunc.n1());
  const Operator m2 = slot == Slot::Mode2 ? op : identity(trunc.n2());
  return kron(kron(q, m1), m2);
}

bool is_hermitian(const Operator& m, double rel_tol) {
  if (m.rows() != m.cols()) return false;
  const double scale = std::max(1.0, m.norm());
  return (m - m.adjoint()).norm() <= rel_tol * scale;
}

}  // namespace usc

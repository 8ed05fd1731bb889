#include "usc/dissipators.hpp"

#include "usc/error.hpp"
#include "usc/units.hpp"

#include <cmath>
#include <string>

namespace usc {

void BathSpec::validate() const {
  if (kappa_in_ghz < 0 || kappa_out_ghz < 0 || kappa_int_ghz < 0) {
    throw Error(ErrorCode::Validation, "bath rates must be >= 0");
  }
  if (temperature_k < 0) throw Error(ErrorCode::Validation, "bath temperature must be >= 0");
}

Operator coupling_operator(CouplingKind kind, double omega1, double omega2, const Truncation& trunc) {
  const Complex i{0.0, 1.0};
  const Operator a1 = embed(annihilation_matrix(trunc.n1()), Slot::Mode1, trunc);
  const Operator a2 = embed(annihilation_matrix(trunc.n2()), Slot::Mode2, trunc);
  const double ratio = std::sqrt(omega2 / omega1);
  switch (kind) {
    case CouplingKind::R1Waveguide:
    case CouplingKind::XGeneric:
      return i * (a1 - a1.adjoint()) + i * ratio * (a2 - a2.adjoint());
    case CouplingKind::R2Internal:
      return ratio * (a1 + a1.adjoint()) + (a2 + a2.adjoint());
    case CouplingKind::Qubit:
      return embed(pauli_matrix(PauliAxis::Z), Slot::Qubit, trunc);
  }
  return {};
}

Operator script_x_operator(const Truncation& trunc) {
  const Operator a1 = embed(annihilation_matrix(trunc.n1()), Slot::Mode1, trunc);
  const Operator a2 = embed(annihilation_matrix(trunc.n2()), Slot::Mode2, trunc);
  return a1 + a1.adjoint() + a2 + a2.adjoint();
}

Operator DressedOperator::positive_part() const {
  return full_.triangularView<Eigen::StrictlyUpper>();
}

Operator DressedOperator::diagonal_part() const {
  return full_.diagonal().asDiagonal();
}

DressedOperator dress(const Operator& op, const Eigensystem& eig) {
  if (op.rows() != eig.vectors.rows() || op.cols() != eig.vectors.rows()) {
    throw Error(ErrorCode::Shape, "operator dimension " + std::to_string(op.rows()) +
                                      " does not match eigensystem " +
                                      std::to_string(eig.vectors.rows()));
  }
  return DressedOperator(eig.vectors.adjoint() * op * eig.vectors);
}

double thermal_occupation(double omega_ghz, double temperature_k) {
  if (!(omega_ghz > 0)) throw Error(ErrorCode::Domain, "thermal occupation needs omega > 0");
  if (temperature_k <= 0) return 0.0;
  const double x = units::kPlanck * omega_ghz * units::kHzPerGHz / (units::kBoltzmann * temperature_k);
  return 1.0 / std::expm1(x);
}

double rate_scaling(CouplingKind kind, double omega, const BathSpec& baths, const QubitSpec& qubit,
                    double omega1) {
  if (!(omega > 0)) throw Error(ErrorCode::Domain, "rate scaling needs omega > 0");
  double bare = 0.0;
  switch (kind) {
    case CouplingKind::R1Waveguide: bare = baths.kappa_in_ghz + baths.kappa_out_ghz; break;
    case CouplingKind::R2Internal: bare = baths.kappa_int_ghz; break;
    case CouplingKind::Qubit: bare = qubit.loss_rate_ghz; break;
    case CouplingKind::XGeneric:
      throw Error(ErrorCode::Precondition, "the generic field operator has no reservoir");
  }
  return bare * omega / omega1;
}

DressedChannels dress_channels(const Eigensystem& eig, ModeFrequencies w, const Truncation& trunc,
                               const Operator& qubit_noise) {
  return {eig.transitions_ghz,
          dress(coupling_operator(CouplingKind::R1Waveguide, w.omega1_ghz, w.omega2_ghz, trunc), eig),
          dress(coupling_operator(CouplingKind::R2Internal, w.omega1_ghz, w.omega2_ghz, trunc), eig),
          dress(qubit_noise, eig)};
}

namespace {

// One reservoir of the non-secular sum. With X+ = sum_{l<m} X_lm |l><m| and the
// rate-weighted partners Y = sum kappa~ n_th X_lm, Z = sum kappa~ (n_th+1) X_lm,
// the double sum over (j,k), (l,m) factorises into four operator products.
void add_reservoir(Superoperator& l0, const DressedOperator& x, const RealVector& w,
                   CouplingKind kind, const BathSpec& baths, const QubitSpec& qubit, double omega1,
                   const LiouvillianOptions& opt, int& skipped) {
  const int d = x.dim();
  const Operator xp = x.positive_part();
  Operator y = Operator::Zero(d, d);
  Operator z = Operator::Zero(d, d);
  for (int l = 0; l < d; ++l) {
    for (int m = l + 1; m < d; ++m) {
      if (xp(l, m) == Complex{}) continue;
      const double wml = w(m) - w(l);
      if (wml < opt.min_transition_ghz) {
        ++skipped;
        continue;
      }
      const double rate = units::to_angular(rate_scaling(kind, wml, baths, qubit, omega1));
      if (rate == 0.0) continue;
      const double nth = thermal_occupation(wml, baths.temperature_k);
      if (opt.secular_only) {
        Operator o = Operator::Zero(d, d);
        o(l, m) = xp(l, m);
        l0.add_lindblad(rate * (nth + 1), o);
        if (nth > 0) l0.add_lindblad(rate * nth, o.adjoint());
        continue;
      }
      y(l, m) = rate * nth * xp(l, m);
      z(l, m) = rate * (nth + 1) * xp(l, m);
    }
  }
  if (opt.secular_only) return;
  const Operator xm = xp.adjoint();
  const Operator yd = y.adjoint();
  const Operator zd = z.adjoint();
  l0.add_sandwich(0.5, yd, xp);
  l0.add_left(-0.5, xp * yd);
  l0.add_sandwich(0.5, z, xm);
  l0.add_left(-0.5, xm * z);
  l0.add_sandwich(0.5, xm, y);
  l0.add_right(-0.5, y * xm);
  l0.add_sandwich(0.5, xp, zd);
  l0.add_right(-0.5, zd * xp);
}

}  // namespace

StaticLiouvillian build_static_liouvillian(const DressedChannels& ch, const BathSpec& baths,
                                           const QubitSpec& qubit, ModeFrequencies omegas,
                                           const LiouvillianOptions& options) {
  const int d = ch.dim();
  if (ch.r1.dim() != d || ch.r2.dim() != d || ch.q.dim() != d) {
    throw Error(ErrorCode::Shape, "dressed channels do not share one basis");
  }
  StaticLiouvillian out{Superoperator(d), 0};
  const Operator h = ch.transitions_ghz.cast<Complex>().asDiagonal();
  out.map.add_commutator(Complex{0.0, -units::to_angular(1.0)}, h);

  const double w1 = omegas.omega1_ghz;
  add_reservoir(out.map, ch.r1, ch.transitions_ghz, CouplingKind::R1Waveguide, baths, qubit, w1,
                options, out.skipped_transitions);
  add_reservoir(out.map, ch.r2, ch.transitions_ghz, CouplingKind::R2Internal, baths, qubit, w1,
                options, out.skipped_transitions);
  add_reservoir(out.map, ch.q, ch.transitions_ghz, CouplingKind::Qubit, baths, qubit, w1, options,
                out.skipped_transitions);

  if (qubit.dephasing_rate_ghz > 0) {
    out.map.add_lindblad(units::to_angular(qubit.dephasing_rate_ghz), ch.q.diagonal_part());
  }
  return out;
}

double transition_linewidth(int p, int q, const DressedChannels& ch, const BathSpec& baths,
                            double omega1) {
  if (p <= q || q < 0 || p >= ch.dim()) {
    throw Error(ErrorCode::Index, "transition (" + std::to_string(p) + ", " + std::to_string(q) +
                                      ") needs p > q within retained levels");
  }
  const double wpq = ch.transitions_ghz(p) - ch.transitions_ghz(q);
  if (!(wpq > 0)) return 0.0;
  const QubitSpec unused{};
  return rate_scaling(CouplingKind::R1Waveguide, wpq, baths, unused, omega1) *
             std::norm(ch.r1.element(p, q)) +
         rate_scaling(CouplingKind::R2Internal, wpq, baths, unused, omega1) *
             std::norm(ch.r2.element(p, q));
}

}  // namespace usc

#include "usc/model.hpp"

#include "usc/error.hpp"
#include "usc/units.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace usc {

namespace {

void require(bool ok, ErrorCode code, const std::string& what) {
  if (!ok) throw Error(code, what);
}

}  // namespace

void QubitSpec::validate() const {
  require(tunnel_splitting_ghz > 0, ErrorCode::Validation, "qubit tunnel splitting must be > 0");
  require(persistent_current_na > 0, ErrorCode::Validation, "persistent current must be > 0");
  require(loss_rate_ghz >= 0, ErrorCode::Validation, "qubit loss rate must be >= 0");
  require(dephasing_rate_ghz >= 0, ErrorCode::Validation, "qubit dephasing rate must be >= 0");
}

void ModeSpec::validate() const {
  require(base_frequency_ghz > 0, ErrorCode::Validation, "mode base frequency must be > 0");
  require(v_shape_beta_per_phi0 >= 0, ErrorCode::Validation, "mode beta must be >= 0");
  require(coupling_ghz >= 0, ErrorCode::Validation, "mode coupling must be >= 0");
}

std::string_view to_string(HamiltonianVariant v) noexcept {
  switch (v) {
    case HamiltonianVariant::RabiFluxBasis: return "rabi_flux";
    case HamiltonianVariant::RabiEnergyBasis: return "rabi_energy";
    case HamiltonianVariant::NoParityBreaking: return "no_parity";
    case HamiltonianVariant::JaynesCummings: return "jc";
  }
  return "?";
}

HamiltonianVariant parse_variant(std::string_view name) {
  for (auto v : {HamiltonianVariant::RabiFluxBasis, HamiltonianVariant::RabiEnergyBasis,
                 HamiltonianVariant::NoParityBreaking, HamiltonianVariant::JaynesCummings}) {
    if (to_string(v) == name) return v;
  }
  throw Error(ErrorCode::Validation, "unknown Hamiltonian variant '" + std::string(name) + "'");
}

DerivedQubit derive_qubit(const QubitSpec& spec, FluxPoint flux) {
  // eps/h = 2 I_p dPhi / h, with dPhi in Wb.
  const double flux_wb = flux.offset_mphi0 * 1e-3 * units::kFluxQuantum;
  const double eps_hz = 2.0 * spec.persistent_current_na * 1e-9 * flux_wb / units::kPlanck;
  const double eps = eps_hz / units::kHzPerGHz;
  const double delta = spec.tunnel_splitting_ghz;
  return {eps, std::hypot(delta, eps), std::atan2(delta, eps)};
}

double mode_frequency(const ModeSpec& mode, const DerivedQubit& dq, FluxPoint flux) {
  const double radicand =
      1.0 - mode.v_shape_beta_per_phi0 * std::abs(std::cos(dq.theta_rad)) *
                std::abs(flux.offset_mphi0 * 1e-3);
  if (!(radicand > 0)) {
    throw Error(ErrorCode::OutOfModelRange,
                "V-shape radicand " + std::to_string(radicand) + " at flux " +
                    std::to_string(flux.offset_mphi0) + " mPhi0");
  }
  return mode.base_frequency_ghz / std::sqrt(radicand);
}

ModeFrequencies mode_frequencies(const DeviceParams& params, FluxPoint flux) {
  const auto dq = derive_qubit(params.qubit, flux);
  return {mode_frequency(params.mode1, dq, flux), mode_frequency(params.mode2, dq, flux)};
}

Operator qubit_noise_operator(HamiltonianVariant variant, const DerivedQubit& dq,
                              const Truncation& trunc) {
  const Operator sz = pauli_matrix(PauliAxis::Z);
  if (variant == HamiltonianVariant::RabiFluxBasis) return embed(sz, Slot::Qubit, trunc);
  const Operator rotated =
      -std::sin(dq.theta_rad) * pauli_matrix(PauliAxis::X) + std::cos(dq.theta_rad) * sz;
  return embed(rotated, Slot::Qubit, trunc);
}

Operator build_hamiltonian(HamiltonianVariant variant, const QubitSpec& qubit, const ModeSpec& mode1,
                           const ModeSpec& mode2, FluxPoint flux, const Truncation& trunc) {
  const auto dq = derive_qubit(qubit, flux);
  const double w1 = mode_frequency(mode1, dq, flux);
  const double w2 = mode_frequency(mode2, dq, flux);

  const Operator a1 = embed(annihilation_matrix(trunc.n1()), Slot::Mode1, trunc);
  const Operator a2 = embed(annihilation_matrix(trunc.n2()), Slot::Mode2, trunc);
  const Operator sx = embed(pauli_matrix(PauliAxis::X), Slot::Qubit, trunc);
  const Operator sz = embed(pauli_matrix(PauliAxis::Z), Slot::Qubit, trunc);
  const Operator x1 = a1 + a1.adjoint();
  const Operator x2 = a2 + a2.adjoint();
  const double g1 = mode1.coupling_ghz;
  const double g2 = mode2.coupling_ghz;
  const double s = std::sin(dq.theta_rad);
  const double c = std::cos(dq.theta_rad);

  Operator h = w1 * a1.adjoint() * a1 + w2 * a2.adjoint() * a2;
  switch (variant) {
    case HamiltonianVariant::RabiFluxBasis:
      h += -0.5 * (qubit.tunnel_splitting_ghz * sx + dq.epsilon_ghz * sz);
      h += (g1 * x1 + g2 * x2) * sz;
      break;
    case HamiltonianVariant::RabiEnergyBasis:
      h += 0.5 * dq.omega_q_ghz * sz;
      h += (g1 * x1 + g2 * x2) * (-s * sx + c * sz);
      break;
    case HamiltonianVariant::NoParityBreaking:
      h += 0.5 * dq.omega_q_ghz * sz;
      h += -s * (g1 * x1 + g2 * x2) * sx;
      break;
    case HamiltonianVariant::JaynesCummings: {
      const Operator sp = embed(pauli_matrix(PauliAxis::Plus), Slot::Qubit, trunc);
      const Operator sm = embed(pauli_matrix(PauliAxis::Minus), Slot::Qubit, trunc);
      h += 0.5 * dq.omega_q_ghz * sz;
      h += -s * (g1 * (a1.adjoint() * sm + a1 * sp) + g2 * (a2.adjoint() * sm + a2 * sp));
      break;
    }
  }
  // Products of embedded operators on different slots commute exactly, but
  // the sums above are only Hermitian up to rounding.
  return 0.5 * (h + h.adjoint());
}

Eigensystem solve_eigensystem(const Operator& h) {
  if (!is_hermitian(h, 1e-12)) {
    throw Error(ErrorCode::Precondition, "eigensystem input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Operator> solver(h);
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::Precondition, "Hermitian eigensolver did not converge");
  }
  Eigensystem out;
  out.energies_ghz = solver.eigenvalues();
  out.vectors = solver.eigenvectors();
  for (Eigen::Index j = 0; j < out.vectors.cols(); ++j) {
    auto v = out.vectors.col(j);
    const double max_abs = v.cwiseAbs().maxCoeff();
    Eigen::Index pivot = 0;
    while (std::abs(v(pivot)) < max_abs * (1.0 - 1e-10)) ++pivot;
    v *= std::conj(v(pivot)) / std::abs(v(pivot));
    v(pivot) = std::abs(v(pivot));
  }
  out.transitions_ghz = out.energies_ghz.array() - out.energies_ghz(0);
  return out;
}

Eigensystem Eigensystem::restricted(double max_transition_ghz) const {
  int keep = 1;
  while (keep < size() && transitions_ghz(keep) <= max_transition_ghz) ++keep;
  return {energies_ghz.head(keep), vectors.leftCols(keep), transitions_ghz.head(keep)};
}

double analytic_geff(double g1, double g2, double omega1, double omega_q, double theta) {
  const double w1sq = omega1 * omega1;
  const double wqsq = omega_q * omega_q;
  const double terms[] = {4 * w1sq * w1sq, 5 * w1sq * wqsq, wqsq * wqsq};
  const double den = terms[0] - terms[1] + terms[2];
  const double scale = std::max({terms[0], terms[1], terms[2]});
  if (std::abs(den) <= 1e-12 * scale) {
    throw Error(ErrorCode::Pole, "effective-coupling denominator vanishes");
  }
  return 3.0 * std::sqrt(2.0) * g1 * g1 * g2 * wqsq * std::sin(2 * theta) * std::cos(theta) / den;
}

double level_gap(HamiltonianVariant variant, const DeviceParams& params, FluxPoint flux) {
  const Operator h = build_hamiltonian(variant, params, flux);
  Eigen::SelfAdjointEigenSolver<Operator> solver(h, Eigen::EigenvaluesOnly);
  const auto& e = solver.eigenvalues();
  return e(3) - e(2);
}

AvoidedCrossing find_avoided_crossing(HamiltonianVariant variant, const DeviceParams& params,
                                      std::span<const double> grid) {
  if (grid.size() < 3) throw Error(ErrorCode::Precondition, "need at least 3 flux points");
  std::vector<double> gaps(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) gaps[i] = level_gap(variant, params, {grid[i]});
  const auto it = std::min_element(gaps.begin(), gaps.end());
  const auto idx = static_cast<std::size_t>(it - gaps.begin());
  if (idx == 0 || idx + 1 == grid.size()) {
    throw Error(ErrorCode::NotBracketed, "gap minimum lies on the flux-range boundary");
  }

  // Vertex of the parabola through the minimum sample and its neighbours.
  const double x0 = grid[idx - 1], x1 = grid[idx], x2 = grid[idx + 1];
  const double y0 = gaps[idx - 1], y1 = gaps[idx], y2 = gaps[idx + 1];
  const double num = (x1 - x0) * (x1 - x0) * (y1 - y2) - (x1 - x2) * (x1 - x2) * (y1 - y0);
  const double den = (x1 - x0) * (y1 - y2) - (x1 - x2) * (y1 - y0);
  AvoidedCrossing out{x1, y1, idx};
  if (den != 0.0) {
    const double xv = std::clamp(x1 - 0.5 * num / den, std::min(x0, x2), std::max(x0, x2));
    const double yv = level_gap(variant, params, {xv});
    if (yv < y1) out = {xv, yv, idx};
  }
  return out;
}

std::vector<double> linspace(double start, double stop, int steps) {
  if (steps < 1) throw Error(ErrorCode::Validation, "sweep needs at least one step");
  std::vector<double> v(static_cast<std::size_t>(steps));
  if (steps == 1) {
    v[0] = start;
    return v;
  }
  const double h = (stop - start) / (steps - 1);
  for (int i = 0; i < steps; ++i) v[static_cast<std::size_t>(i)] = start + h * i;
  v.back() = stop;
  return v;
}

}  // namespace usc

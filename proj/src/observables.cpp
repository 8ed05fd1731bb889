#include "usc/observables.hpp"

#include "usc/error.hpp"
#include "usc/parallel.hpp"
#include "usc/units.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace usc {

double OperatingPoint::linewidth(int p, int q) const {
  return transition_linewidth(p, q, channels, baths, omegas.omega1_ghz);
}

OperatingPoint prepare_operating_point(const DeviceParams& device, const BathSpec& baths,
                                       FluxPoint flux, const PointOptions& options) {
  OperatingPoint op;
  op.flux = flux;
  op.qubit = derive_qubit(device.qubit, flux);
  op.omegas = mode_frequencies(device, flux);
  op.baths = baths;
  op.fock_dim = device.truncation.dim();
  const Eigensystem full = solve_eigensystem(build_hamiltonian(options.variant, device, flux));
  op.eig = options.level_window > 0 ? full.restricted(options.level_window * op.omegas.omega2_ghz)
                                    : full;
  op.channels = dress_channels(op.eig, op.omegas, device.truncation,
                               qubit_noise_operator(options.variant, op.qubit, device.truncation));
  op.l0 = build_static_liouvillian(op.channels, baths, device.qubit, op.omegas, options.liouvillian);
  return op;
}

FloquetSolution solve_driven(const OperatingPoint& op, const std::vector<DriveTone>& tones,
                             double omega_base_ghz, int m_max, const FloquetOptions& options) {
  const auto drives = build_harmonic_drives(tones, op.x_full(), op.baths.kappa_in_ghz,
                                            op.omegas.omega1_ghz, omega_base_ghz);
  return solve_stroboscopic_steady_state(op.l0.map, drives, omega_base_ghz, m_max, options);
}

Complex emission_amplitude(const FloquetSolution& sol, const Operator& x_plus, int harmonic) {
  if (harmonic > sol.m_max()) {
    throw Error(ErrorCode::InsufficientCutoff, "solution does not contain harmonic " +
                                                   std::to_string(harmonic));
  }
  return (x_plus * sol.component(-harmonic)).trace();
}

Complex transmission_s21(const FloquetSolution& sol, const Operator& x_plus, double kappa_out_ghz,
                         double omega_in_ghz, double omega1_ghz, double photon_rate) {
  if (!(photon_rate > 0)) throw Error(ErrorCode::UndefinedRatio, "S21 needs a nonzero input");
  const double prefactor = std::sqrt(omega_in_ghz / omega1_ghz) *
                           std::sqrt(units::to_angular_per_second(kappa_out_ghz) / photon_rate);
  return prefactor * emission_amplitude(sol, x_plus, 1);
}

double shg_amplitude(const FloquetSolution& sol, const Operator& x_plus) {
  if (sol.m_max() < 2) throw Error(ErrorCode::InsufficientCutoff, "SHG needs m_max >= 2");
  return std::abs(emission_amplitude(sol, x_plus, 2));
}

double mean_photons(double power_w, double linewidth_ghz, double kappa_in_ghz,
                    double mode_frequency_ghz) {
  if (!(linewidth_ghz > 0)) throw Error(ErrorCode::Domain, "photon number needs a linewidth > 0");
  const double rate = photon_rate_from_power(power_w, mode_frequency_ghz);
  const double gamma = units::to_angular_per_second(linewidth_ghz);
  return 4.0 * rate * units::to_angular_per_second(kappa_in_ghz) / (gamma * gamma);
}

double power_for_photons(double nbar, double linewidth_ghz, double kappa_in_ghz,
                         double mode_frequency_ghz) {
  if (!(linewidth_ghz > 0)) throw Error(ErrorCode::Domain, "photon number needs a linewidth > 0");
  if (!(kappa_in_ghz > 0)) throw Error(ErrorCode::Domain, "photon number needs kappa_in > 0");
  if (nbar < 0) throw Error(ErrorCode::Domain, "photon number must be >= 0");
  const double gamma = units::to_angular_per_second(linewidth_ghz);
  const double rate = nbar * gamma * gamma / (4.0 * units::to_angular_per_second(kappa_in_ghz));
  return power_from_photon_rate(rate, mode_frequency_ghz);
}

double mode_linewidth(const OperatingPoint& op, int mode) {
  if (mode == 1) return op.linewidth(1, 0);
  if (mode == 2) return op.linewidth(3, 0);
  throw Error(ErrorCode::Index, "mode must be 1 or 2");
}

double power_for_mode_photons(const OperatingPoint& op, int mode, double nbar) {
  const double freq = mode == 1 ? op.omegas.omega1_ghz : op.omegas.omega2_ghz;
  return power_for_photons(nbar, mode_linewidth(op, mode), op.baths.kappa_in_ghz, freq);
}

PhotonBudget photon_budget(const OperatingPoint& op, double power_w) {
  return {mean_photons(power_w, mode_linewidth(op, 1), op.baths.kappa_in_ghz, op.omegas.omega1_ghz),
          mean_photons(power_w, mode_linewidth(op, 2), op.baths.kappa_in_ghz, op.omegas.omega2_ghz),
          power_w};
}

std::vector<GainPoint> interference_gain(const OperatingPoint& op, const DriveTone& signal,
                                         const DriveTone& control, std::span<const double> phases,
                                         int monitored_harmonic, double omega_base_ghz, int m_max,
                                         int threads) {
  if (signal.harmonic != monitored_harmonic) {
    throw Error(ErrorCode::Precondition, "monitored harmonic must be the signal harmonic");
  }
  if (signal.harmonic == control.harmonic || std::min(signal.harmonic, control.harmonic) != 1 ||
      std::max(signal.harmonic, control.harmonic) != 2) {
    throw Error(ErrorCode::Precondition, "interference needs tones at harmonics 1 and 2");
  }
  const Operator xp = op.x_plus();
  const double baseline =
      std::abs(emission_amplitude(solve_driven(op, {signal}, omega_base_ghz, m_max), xp,
                                  monitored_harmonic));
  if (!(baseline > 0)) throw Error(ErrorCode::UndefinedRatio, "signal-only amplitude vanishes");
  return parallel_map(phases.size(), threads, [&](std::size_t i) {
    DriveTone c = control;
    c.phase_rad = phases[i];
    const auto sol = solve_driven(op, {signal, c}, omega_base_ghz, m_max);
    return GainPoint{phases[i], std::abs(emission_amplitude(sol, xp, monitored_harmonic)) / baseline};
  });
}

double visibility(std::span<const GainPoint> curve) {
  if (curve.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(
      curve.begin(), curve.end(), [](const GainPoint& a, const GainPoint& b) { return a.gain < b.gain; });
  const double sum = hi->gain + lo->gain;
  return sum > 0 ? (hi->gain - lo->gain) / sum : 0.0;
}

std::vector<MatrixElementRow> matrix_element_scan(const DeviceParams& device,
                                                  std::span<const double> grid,
                                                  ElementOperator which,
                                                  std::span<const std::pair<int, int>> pairs,
                                                  HamiltonianVariant variant, int threads) {
  const int dim = device.truncation.dim();
  for (const auto& [j, k] : pairs) {
    if (j < 0 || k < 0 || j >= dim || k >= dim) {
      throw Error(ErrorCode::Index, "matrix-element pair outside the retained levels");
    }
  }
  const auto per_flux = parallel_map(grid.size(), threads, [&](std::size_t i) {
    const FluxPoint flux{grid[i]};
    const auto w = mode_frequencies(device, flux);
    const Eigensystem eig = solve_eigensystem(build_hamiltonian(variant, device, flux));
    const Operator op = which == ElementOperator::X
                            ? coupling_operator(CouplingKind::XGeneric, w.omega1_ghz,
                                                w.omega2_ghz, device.truncation)
                            : script_x_operator(device.truncation);
    const DressedOperator dressed = dress(op, eig);
    std::vector<MatrixElementRow> rows;
    for (const auto& [j, k] : pairs) rows.push_back({grid[i], j, k, std::norm(dressed.element(j, k))});
    return rows;
  });
  std::vector<MatrixElementRow> out;
  for (const auto& rows : per_flux) out.insert(out.end(), rows.begin(), rows.end());
  return out;
}

std::vector<LevelRow> level_scan(const DeviceParams& device, std::span<const double> grid,
                                 HamiltonianVariant variant, int max_level, int threads) {
  if (grid.empty()) throw Error(ErrorCode::Precondition, "level scan needs a flux grid");
  if (max_level < 1 || max_level >= device.truncation.dim()) {
    throw Error(ErrorCode::Index, "max_level outside the truncated space");
  }
  const auto per_flux = parallel_map(grid.size(), threads, [&](std::size_t i) {
    const Operator h = build_hamiltonian(variant, device, {grid[i]});
    Eigen::SelfAdjointEigenSolver<Operator> solver(h, Eigen::EigenvaluesOnly);
    const auto& e = solver.eigenvalues();
    std::vector<LevelRow> rows;
    for (int j = 1; j <= max_level; ++j) rows.push_back({grid[i], variant, j, e(j) - e(0)});
    return rows;
  });
  std::vector<LevelRow> out;
  for (const auto& rows : per_flux) out.insert(out.end(), rows.begin(), rows.end());
  return out;
}

}  // namespace usc

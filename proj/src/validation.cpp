#include "usc/validation.hpp"

#include "usc/config.hpp"
#include "usc/error.hpp"
#include "usc/floquet.hpp"
#include "usc/observables.hpp"
#include "usc/parallel.hpp"
#include "usc/units.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

namespace usc {

std::string CheckResult::expected_text() const {
  const std::string v = cli::format_double(expected);
  switch (comparison) {
    case Comparison::Below: return "<" + v;
    case Comparison::Above: return ">" + v;
    case Comparison::Within: break;
  }
  return v;
}

CheckResult check_within(int criterion, std::string name, double expected, double actual,
                         double tolerance) {
  return {criterion, std::move(name), Comparison::Within, expected, actual, tolerance,
          std::abs(actual - expected) <= tolerance};
}

CheckResult check_below(int criterion, std::string name, double bound, double actual) {
  return {criterion, std::move(name), Comparison::Below, bound, actual, 0.0, actual < bound};
}

CheckResult check_above(int criterion, std::string name, double bound, double actual) {
  return {criterion, std::move(name), Comparison::Above, bound, actual, 0.0, actual > bound};
}

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<double> scan_grid() { return linspace(-100.0, 0.0, 201); }

double relative_frobenius(const Operator& a, const Operator& reference) {
  const double ref = reference.norm();
  return ref > 0 ? (a - reference).norm() / ref : (a - reference).norm();
}

DriveTone tone_for_photons(const OperatingPoint& op, int mode, double nbar, int harmonic,
                           double omega_base_ghz, double phase = 0.0) {
  return DriveTone::from_power(harmonic, power_for_mode_photons(op, mode, nbar), omega_base_ghz,
                               phase);
}

double shg_at(const OperatingPoint& op, double omega_ghz, double nbar, int m_max) {
  const auto sol = solve_driven(op, {tone_for_photons(op, 1, nbar, 1, omega_ghz)}, omega_ghz, m_max);
  return shg_amplitude(sol, op.x_plus());
}

DeviceParams decoupled(DeviceParams d) {
  d.mode1.coupling_ghz = 0.0;
  d.mode2.coupling_ghz = 0.0;
  return d;
}

// Vertex of the parabola through three equally spaced samples, as an offset
// in units of the spacing.
double parabolic_offset(double ym, double y0, double yp) {
  const double den = ym - 2.0 * y0 + yp;
  if (den == 0.0) return 0.0;
  return std::clamp(0.5 * (ym - yp) / den, -1.0, 1.0);
}

std::vector<CheckResult> criterion1(const ValidationOptions& o) {
  const auto grid = scan_grid();
  const auto crossing = find_avoided_crossing(HamiltonianVariant::RabiFluxBasis, o.device, grid);
  const FluxPoint flux{crossing.flux_at_min_mphi0};
  const auto dq = derive_qubit(o.device.qubit, flux);
  const auto w = mode_frequencies(o.device, flux);
  const double g = analytic_geff(o.device.mode1.coupling_ghz, o.device.mode2.coupling_ghz,
                                 w.omega1_ghz, dq.omega_q_ghz, dq.theta_rad);
  return {check_within(1, "analytic_geff_mhz", 47.0, 1e3 * std::abs(g), 5.0)};
}

std::vector<CheckResult> criterion2(const ValidationOptions& o) {
  const auto crossing =
      find_avoided_crossing(HamiltonianVariant::RabiFluxBasis, o.device, scan_grid());
  return {check_within(2, "half_gap_mhz", 59.0, 1e3 * crossing.half_gap_ghz(), 0.2 * 59.0),
          check_within(2, "gap_flux_mphi0", -47.0, crossing.flux_at_min_mphi0, 3.0)};
}

std::vector<CheckResult> criterion3(const ValidationOptions& o) {
  std::vector<CheckResult> out;
  const auto grid = scan_grid();
  for (auto v : {HamiltonianVariant::JaynesCummings, HamiltonianVariant::NoParityBreaking}) {
    double gap = kNaN;
    try {
      gap = 1e3 * find_avoided_crossing(v, o.device, grid).min_gap_ghz;
    } catch (const Error&) {
    }
    out.push_back(check_below(3, std::string(to_string(v)) + "_min_gap_mhz", 5.0, gap));
  }
  return out;
}

std::vector<CheckResult> criterion4(const ValidationOptions& o) {
  const std::vector<double> grid{-47.0};
  const std::vector<std::pair<int, int>> pairs{{1, 0}, {3, 1}, {3, 0}};
  const auto rows = matrix_element_scan(o.device, grid, ElementOperator::X, pairs);
  const double expected[] = {1.2, 1.4, 0.8};
  std::vector<CheckResult> out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.push_back(check_within(4,
                               "abs_sq_x" + std::to_string(rows[i].j) + std::to_string(rows[i].k),
                               expected[i], rows[i].abs_sq, 0.15));
  }
  return out;
}

double empty_cavity_s21(const DeviceParams& device, const BathSpec& baths) {
  const auto op = prepare_operating_point(decoupled(device), baths, FluxPoint{-47.0});
  const double w = op.eig.transitions_ghz(1);
  const auto tone = tone_for_photons(op, 1, 0.01, 1, w);
  const auto sol = solve_driven(op, {tone}, w, 2);
  return std::abs(transmission_s21(sol, op.x_plus(), baths.kappa_out_ghz, w,
                                   op.omegas.omega1_ghz, tone.photon_rate));
}

std::vector<CheckResult> criterion5(const ValidationOptions& o) {
  const double total = o.baths.kappa_in_ghz + o.baths.kappa_out_ghz;
  BathSpec symmetric = o.baths;
  symmetric.kappa_in_ghz = symmetric.kappa_out_ghz = 0.5 * total;
  symmetric.kappa_int_ghz = 0.0;
  BathSpec asymmetric = o.baths;
  asymmetric.kappa_in_ghz = 0.25 * total;
  asymmetric.kappa_out_ghz = 0.75 * total;
  asymmetric.kappa_int_ghz = 0.0;
  const double closed = 2.0 * std::sqrt(asymmetric.kappa_in_ghz * asymmetric.kappa_out_ghz) / total;
  return {check_within(5, "symmetric_abs_s21", 1.0, empty_cavity_s21(o.device, symmetric), 0.005),
          check_within(5, "asymmetric_abs_s21", closed, empty_cavity_s21(o.device, asymmetric),
                       0.005)};
}

std::vector<CheckResult> criterion6(const ValidationOptions& o) {
  DeviceParams reduced = o.device;
  reduced.truncation = Truncation(3, 2);
  PointOptions popt;
  popt.level_window = 0.0;
  const auto op = prepare_operating_point(reduced, o.baths, FluxPoint{-45.0}, popt);
  const double w = 4.9;
  const auto drives = build_harmonic_drives({tone_for_photons(op, 1, 0.25, 1, w)}, op.x_full(),
                                            o.baths.kappa_in_ghz, op.omegas.omega1_ghz, w);
  const auto floquet = solve_stroboscopic_steady_state(op.l0.map, drives, w, 6);
  OracleOptions oopt;
  oopt.m_max = 2;
  const auto oracle = time_domain_oracle(op.l0.map, drives, w, oopt);
  double worst = 0.0;
  for (int n = -2; n <= 2; ++n) {
    worst = std::max(worst, relative_frobenius(oracle.component(n), floquet.component(n)));
  }
  return {check_below(6, "max_relative_frobenius", 1e-6, worst)};
}

struct ShgMap {
  std::vector<double> flux;
  std::vector<double> peak;  // max over the frequency grid
};

std::vector<CheckResult> criterion7(const ValidationOptions& o) {
  std::vector<CheckResult> out;

  // (a) double resonance versus the SHG flux maximum.
  auto detuning = [&](double f) {
    const auto eig = solve_eigensystem(
        build_hamiltonian(HamiltonianVariant::RabiFluxBasis, o.device, FluxPoint{f}));
    return eig.transitions_ghz(3) - 2.0 * eig.transitions_ghz(1);
  };
  const auto fine = linspace(-60.0, -35.0, 101);
  const auto det = parallel_map(fine.size(), o.threads, [&](std::size_t i) { return detuning(fine[i]); });
  std::size_t best = 0;
  for (std::size_t i = 1; i < det.size(); ++i) {
    if (std::abs(det[i]) < std::abs(det[best])) best = i;
  }
  double resonance = fine[best];
  for (std::size_t i : {best > 0 ? best - 1 : best, best}) {
    if (i + 1 < det.size() && det[i] * det[i + 1] < 0) {
      double a = fine[i], b = fine[i + 1], fa = det[i];
      for (int it = 0; it < 60; ++it) {
        const double m = 0.5 * (a + b);
        const double fm = detuning(m);
        if ((fm < 0) == (fa < 0)) {
          a = m;
          fa = fm;
        } else {
          b = m;
        }
      }
      resonance = 0.5 * (a + b);
    }
  }

  ShgMap map;
  map.flux = linspace(-56.0, -40.0, 33);
  const auto freqs = linspace(4.84, 5.02, 46);
  map.peak = parallel_map(map.flux.size(), o.threads, [&](std::size_t i) {
    const auto op = prepare_operating_point(o.device, o.baths, FluxPoint{map.flux[i]});
    double peak = 0.0;
    for (double f : freqs) peak = std::max(peak, shg_at(op, f, 0.25, 3));
    return peak;
  });
  const auto top = static_cast<std::size_t>(
      std::max_element(map.peak.begin(), map.peak.end()) - map.peak.begin());
  double shg_flux = map.flux[top];
  if (top > 0 && top + 1 < map.flux.size()) {
    shg_flux += (map.flux[1] - map.flux[0]) *
                parabolic_offset(map.peak[top - 1], map.peak[top], map.peak[top + 1]);
  }
  out.push_back(check_below(7, "shg_peak_to_double_resonance_mphi0", 2.0,
                            std::abs(shg_flux - resonance)));

  // (b) power dependence at -45 mPhi0, 4.9 GHz.
  const auto op = prepare_operating_point(o.device, o.baths, FluxPoint{-45.0});
  const double w = 4.9;
  const double weak = std::log(shg_at(op, w, 1e-2, 3) / shg_at(op, w, 1e-3, 3)) / std::log(10.0);
  out.push_back(check_within(7, "weak_drive_loglog_slope", 1.0, weak, 0.1));
  const std::vector<double> strong{1.0, 2.0, 4.0, 8.0};
  const auto strong_shg = parallel_map(strong.size(), o.threads,
                                       [&](std::size_t i) { return shg_at(op, w, strong[i], 5); });
  double local = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < strong.size(); ++i) {
    local = std::min(local, std::log(strong_shg[i + 1] / strong_shg[i]) /
                                std::log(strong[i + 1] / strong[i]));
  }
  out.push_back(check_below(7, "strong_drive_local_slope", 0.8, local));

  // (c) coupled versus decoupled at n = 0.25.
  const auto lin = prepare_operating_point(decoupled(o.device), o.baths, FluxPoint{-45.0});
  const double coupled = shg_at(op, w, 0.25, 3);
  const double bare = shg_at(lin, lin.eig.transitions_ghz(1), 0.25, 3);
  const double ratio = bare > 0 ? coupled / bare : std::numeric_limits<double>::infinity();
  out.push_back(check_above(7, "shg_over_decoupled_ratio", 1e3, std::min(ratio, 1e300)));
  return out;
}

std::vector<CheckResult> criterion8(const ValidationOptions& o) {
  const auto op = prepare_operating_point(o.device, o.baths, FluxPoint{-46.0});
  const double w = 4.905;
  const int m_max = 3;
  const auto signal = tone_for_photons(op, 1, 0.25, 1, w);
  const auto phases = linspace(0.0, kTwoPi, 41);

  DriveTone off{2, 0.0, 0.0};
  const auto flat = interference_gain(op, signal, off, std::span(phases).subspan(0, 5), 1, w,
                                      m_max, o.threads);
  double flat_dev = 0.0;
  for (const auto& p : flat) flat_dev = std::max(flat_dev, std::abs(p.gain - 1.0));

  double period_err = 0.0;
  auto visibility_at = [&](double log_n2) {
    const auto control = tone_for_photons(op, 2, std::exp(log_n2), 2, w);
    const auto curve = interference_gain(op, signal, control, phases, 1, w, m_max, o.threads);
    period_err = std::max(period_err,
                          std::abs(curve.back().gain - curve.front().gain) / curve.front().gain);
    return visibility(curve);
  };
  // Coarse logarithmic scan of the control strength, then golden-section
  // refinement around the best grid point.
  const auto grid = linspace(std::log(0.13), std::log(16.0), 12);
  std::vector<double> vis;
  for (double x : grid) vis.push_back(visibility_at(x));
  const auto top = static_cast<std::size_t>(std::max_element(vis.begin(), vis.end()) - vis.begin());
  double best_vis = vis[top];
  double a = grid[top > 0 ? top - 1 : top];
  double b = grid[std::min(top + 1, grid.size() - 1)];
  const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - ratio * (b - a), x2 = a + ratio * (b - a);
  double f1 = visibility_at(x1), f2 = visibility_at(x2);
  for (int it = 0; it < 8; ++it) {
    if (f1 > f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - ratio * (b - a);
      f1 = visibility_at(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + ratio * (b - a);
      f2 = visibility_at(x2);
    }
  }
  best_vis = std::max({best_vis, f1, f2});
  return {check_below(8, "period_error", 0.01, period_err),
          check_within(8, "zero_control_gain", 1.0, 1.0 + flat_dev, 1e-6),
          check_above(8, "visibility", 0.9, best_vis)};
}

std::vector<CheckResult> criterion9(const ValidationOptions& o) {
  std::vector<CheckResult> out;
  {
    const auto op = prepare_operating_point(o.device, o.baths, FluxPoint{-47.0});
    const Eigen::RowVectorXcd t = trace_functional(op.dim());
    out.push_back(check_below(9, "l0_trace_preservation", 1e-10,
                              (t * op.l0.map.matrix()).cwiseAbs().maxCoeff()));
  }
  {
    const auto op = prepare_operating_point(o.device, o.baths, FluxPoint{-46.0});
    const double w = 4.905;
    const auto sol = solve_driven(op, {tone_for_photons(op, 1, 0.25, 1, w)}, w, 3);
    double worst = 0.0;
    for (int n = 0; n <= sol.m_max(); ++n) {
      worst = std::max(worst, (sol.component(-n) - sol.component(n).adjoint()).norm());
    }
    out.push_back(check_below(9, "hermiticity_pairing", 1e-9, worst));
  }
  {
    const auto pos = linspace(5.0, 100.0, 20);
    std::vector<double> neg(pos.size());
    std::transform(pos.begin(), pos.end(), neg.begin(), [](double f) { return -f; });
    double level_dev = 0.0;
    for (auto v : {HamiltonianVariant::RabiFluxBasis, HamiltonianVariant::RabiEnergyBasis,
                   HamiltonianVariant::NoParityBreaking, HamiltonianVariant::JaynesCummings}) {
      const auto a = level_scan(o.device, pos, v, 6, o.threads);
      const auto b = level_scan(o.device, neg, v, 6, o.threads);
      for (std::size_t i = 0; i < a.size(); ++i) {
        level_dev = std::max(level_dev, std::abs(a[i].omega_tilde_ghz - b[i].omega_tilde_ghz) /
                                            std::abs(a[i].omega_tilde_ghz));
      }
    }
    out.push_back(check_below(9, "level_flux_parity", 1e-8, level_dev));
    const std::vector<std::pair<int, int>> pairs{{1, 0}, {2, 0}, {3, 0}, {2, 1}, {3, 1}, {3, 2}};
    double elem_dev = 0.0;
    for (auto which : {ElementOperator::X, ElementOperator::ScriptX}) {
      const auto a = matrix_element_scan(o.device, pos, which, pairs,
                                         HamiltonianVariant::RabiFluxBasis, o.threads);
      const auto b = matrix_element_scan(o.device, neg, which, pairs,
                                         HamiltonianVariant::RabiFluxBasis, o.threads);
      for (std::size_t i = 0; i < a.size(); ++i) {
        elem_dev = std::max(elem_dev, std::abs(a[i].abs_sq - b[i].abs_sq));
      }
    }
    out.push_back(check_below(9, "matrix_element_flux_parity", 1e-8, elem_dev));
  }
  {
    DeviceParams bigger = o.device;
    bigger.truncation = Truncation(o.device.truncation.n1() + 1, o.device.truncation.n2() + 1);
    const FluxPoint flux{-47.0};
    const auto a = solve_eigensystem(build_hamiltonian(HamiltonianVariant::RabiFluxBasis, o.device, flux));
    const auto b = solve_eigensystem(build_hamiltonian(HamiltonianVariant::RabiFluxBasis, bigger, flux));
    double shift = 0.0;
    for (int j = 1; j <= 3; ++j) {
      shift = std::max(shift, std::abs(a.transitions_ghz(j) - b.transitions_ghz(j)));
    }
    out.push_back(check_below(9, "truncation_convergence_mhz", 1.0, 1e3 * shift));
  }
  return out;
}

constexpr double kRuntimeLimit[kCriterionCount] = {1, 60, 120, 5, 10, 120, 1800, 600, 300};

}  // namespace

std::vector<CheckResult> run_criterion(int criterion, const ValidationOptions& options) {
  using Fn = std::vector<CheckResult> (*)(const ValidationOptions&);
  constexpr Fn table[kCriterionCount] = {criterion1, criterion2, criterion3, criterion4, criterion5,
                                         criterion6, criterion7, criterion8, criterion9};
  if (criterion < 1 || criterion > kCriterionCount) {
    throw Error(ErrorCode::Index, "no acceptance criterion " + std::to_string(criterion));
  }
  const auto start = Clock::now();
  auto out = table[criterion - 1](options);
  out.push_back(check_below(criterion, "runtime_s", kRuntimeLimit[criterion - 1],
                            seconds_since(start)));
  return out;
}

std::vector<CheckResult> run_validation(const ValidationOptions& options) {
  std::vector<CheckResult> out;
  for (int c = 1; c <= kCriterionCount; ++c) {
    auto part = run_criterion(c, options);
    out.insert(out.end(), part.begin(), part.end());
  }
  return out;
}

}  // namespace usc

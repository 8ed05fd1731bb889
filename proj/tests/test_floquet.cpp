#include "doctest.h"
#include "helpers.hpp"

#include "usc/block_banded.hpp"
#include "usc/error.hpp"
#include "usc/floquet.hpp"
#include "usc/observables.hpp"
#include "usc/units.hpp"

#include <Eigen/Dense>

#include <cmath>

using namespace usc;

namespace {

double rel(const Operator& a, const Operator& ref) { return (a - ref).norm() / ref.norm(); }

DeviceParams decoupled_device() {
  DeviceParams d;
  d.mode1.coupling_ghz = 0.0;
  d.mode2.coupling_ghz = 0.0;
  d.truncation = Truncation(4, 3);
  return d;
}

DeviceParams tiny_device() {
  DeviceParams d;
  d.truncation = Truncation(3, 2);
  return d;
}

OperatingPoint tiny_point(double flux = -46.0) {
  PointOptions popt;
  popt.level_window = 0.0;
  return prepare_operating_point(tiny_device(), BathSpec{}, {flux}, popt);
}

// Closed-form first harmonic of <a1>, <a2> for the decoupled two-mode
// resonator driven by 2 A sin(w t) X under the dressed master equation at
// T = 0. The common waveguide bath couples the two amplitudes:
//   d<a>/dt = M <a> + f(t).
Complex linear_response(const OperatingPoint& op, double amp, double w_drive_ghz) {
  const double w1 = op.omegas.omega1_ghz;
  const double w2 = op.omegas.omega2_ghz;
  const double r = w2 / w1;
  const double sr = std::sqrt(r);
  const auto& b = op.baths;
  const double k1 = units::to_angular(b.kappa_in_ghz + b.kappa_out_ghz);
  const double k2 = k1 * r;
  const double q1 = units::to_angular(b.kappa_int_ghz);
  const double q2 = q1 * r;
  const Complex i{0, 1};
  Eigen::Matrix2cd m;
  m << -i * units::to_angular(w1) - 0.5 * (k1 + r * q1), -0.5 * sr * (k2 + q2),
      -0.5 * sr * (k1 + q1), -i * units::to_angular(w2) - 0.5 * (r * k2 + q2);
  const Eigen::Vector2cd f(-i * amp, -i * amp * sr);
  const Eigen::Matrix2cd lhs = -i * units::to_angular(w_drive_ghz) * Eigen::Matrix2cd::Identity() - m;
  const Eigen::Vector2cd a = lhs.fullPivLu().solve(f);
  // X+ = i a1 + i sqrt(r) a2
  return i * a(0) + i * sr * a(1);
}

}  // namespace

TEST_CASE("photon rate conversion") {
  CHECK(photon_rate_from_power(0.0, 5.0) == 0.0);
  const double p = units::kPlanck * 5e9 * 1e6;
  CHECK(photon_rate_from_power(p, 5.0) == doctest::Approx(1e6).epsilon(1e-14));
  for (double pw : {1e-18, 3.3e-15, 2e-12}) {
    CHECK(power_from_photon_rate(photon_rate_from_power(pw, 4.9), 4.9) == doctest::Approx(pw).epsilon(1e-12));
  }
  CHECK_THROWS_AS(photon_rate_from_power(1e-15, 0.0), Error);
}

TEST_CASE("drive superoperator") {
  const auto op = tiny_point();
  const Operator& x = op.x_full();
  DriveTone silent{1, 0.0, 0.3};
  CHECK(drive_superoperator(silent, x, 1e-3, 5.0, 4.9, 1).matrix().norm() == 0.0);

  DriveTone tone{1, 1e7, 0.7};
  const auto plus = drive_superoperator(tone, x, 1e-3, 5.0, 4.9, 1);
  const auto minus = drive_superoperator(tone, x, 1e-3, 5.0, 4.9, -1);
  std::mt19937 rng(3);
  const Operator rho = testing::random_matrix(op.dim(), rng);
  CHECK((plus.apply(rho).adjoint() - minus.apply(rho.adjoint())).norm() < 1e-13 * plus.apply(rho).norm());

  DriveTone doubled{1, 2e7, 0.7};
  CHECK(drive_superoperator(doubled, x, 1e-3, 5.0, 4.9, 1).matrix().norm() ==
        doctest::Approx(std::sqrt(2.0) * plus.matrix().norm()).epsilon(1e-12));
  CHECK_THROWS_AS(drive_superoperator(tone, x, 1e-3, 5.0, 4.9, 0), Error);
}

TEST_CASE("block-banded solver against a dense solve") {
  std::mt19937 rng(11);
  for (int band : {1, 2}) {
    const int blocks = 7;
    const int n = 5;
    BlockBandedMatrix a(blocks, n, band);
    for (int i = 0; i < blocks; ++i) {
      for (int j = std::max(0, i - band); j <= std::min(blocks - 1, i + band); ++j) {
        a.at(i, j) = testing::random_matrix(n, rng);
        if (i == j) a.at(i, j) += 8.0 * Operator::Identity(n, n);
      }
    }
    const Eigen::VectorXcd rhs = testing::random_matrix(blocks * n, rng).col(0);
    const Eigen::VectorXcd dense = a.dense().fullPivLu().solve(rhs);
    const Eigen::VectorXcd banded = solve_block_banded(a, rhs);
    CHECK((dense - banded).norm() < 1e-12 * dense.norm());
  }
  BlockBandedMatrix singular(3, 2, 1);
  CHECK_THROWS_AS(solve_block_banded(singular, Eigen::VectorXcd::Zero(6)), Error);
  CHECK_THROWS_AS(singular.at(0, 2), Error);
}

TEST_CASE("undriven solve is the stationary state") {
  const auto op = tiny_point();
  const auto sol = solve_stroboscopic_steady_state(op.l0.map, {}, 4.9, 2);
  CHECK(rel(sol.component(0), stationary_state(op.l0.map)) < 1e-12);
  for (int n : {-2, -1, 1, 2}) CHECK(sol.component(n).norm() < 1e-14);
  CHECK(sol.component(5).norm() == 0.0);
}

TEST_CASE("Floquet solution invariants under drive") {
  const auto op = prepare_operating_point(DeviceParams{}, BathSpec{}, {-46.0});
  const double w = 4.905;
  const DriveTone signal = DriveTone::from_power(1, power_for_mode_photons(op, 1, 0.25), w);
  const DriveTone control = DriveTone::from_power(2, power_for_mode_photons(op, 2, 0.5), w, 1.1);
  const auto sol = solve_driven(op, {signal, control}, w, 3);
  CHECK(sol.component(0).trace().real() == doctest::Approx(1.0).epsilon(1e-13));
  for (int n = 1; n <= 3; ++n) {
    CHECK((sol.component(-n) - sol.component(n).adjoint()).norm() < 1e-9);
    CHECK(std::abs(sol.component(n).trace()) < 1e-9);
  }
  const Operator& r0 = sol.component(0);
  CHECK((r0 - r0.adjoint()).norm() < 1e-9);
  CHECK(Eigen::SelfAdjointEigenSolver<Operator>(r0).eigenvalues().minCoeff() > -1e-8);

  CHECK_THROWS_AS(solve_driven(op, {signal, control}, w, 2), Error);
  CHECK_THROWS_AS(solve_driven(op, {signal}, w, 1), Error);
}

TEST_CASE("driven decoupled resonator matches the closed-form response") {
  BathSpec cold;
  cold.temperature_k = 0.0;
  const auto op = prepare_operating_point(decoupled_device(), cold, {0.0});
  const Operator xp = op.x_plus();
  for (double detuning : {-0.02, -0.004, 0.0, 0.003, 0.05}) {
    const double w = op.omegas.omega1_ghz + detuning;
    const DriveTone tone{1, 1e6, 0.0};
    const auto sol = solve_driven(op, {tone}, w, 2);
    const double amp = drive_amplitude(tone, cold.kappa_in_ghz, op.omegas.omega1_ghz, w);
    const Complex expected = linear_response(op, amp, w);
    const Complex got = emission_amplitude(sol, xp, 1);
    CHECK(std::abs(got - expected) < 1e-7 * std::abs(expected));
  }
  // Single-mode textbook value on resonance: 2 A / Gamma.
  const double w = op.omegas.omega1_ghz;
  const DriveTone tone{1, 1e6, 0.0};
  const double amp = drive_amplitude(tone, cold.kappa_in_ghz, w, w);
  const double gamma = units::to_angular(op.linewidth(1, 0));
  const Complex got = emission_amplitude(solve_driven(op, {tone}, w, 2), xp, 1);
  CHECK(std::abs(got) == doctest::Approx(2 * amp / gamma).epsilon(5e-3));
  CHECK(std::abs(std::arg(got)) < 5e-3);
}

TEST_CASE("weak-drive linearity of the first harmonic") {
  const auto op = prepare_operating_point(DeviceParams{}, BathSpec{}, {-46.0});
  const double w = op.eig.transitions_ghz(1);
  const double p = power_for_mode_photons(op, 1, 1e-5);
  const auto a = emission_amplitude(solve_driven(op, {DriveTone::from_power(1, p, w)}, w, 2), op.x_plus(), 1);
  const auto b = emission_amplitude(solve_driven(op, {DriveTone::from_power(1, 100 * p, w)}, w, 2), op.x_plus(), 1);
  const double slope = std::log10(std::norm(b) / std::norm(a)) / 2.0;
  CHECK(slope == doctest::Approx(1.0).epsilon(1e-2));
}

TEST_CASE("cutoff check attaches a warning when the Fourier series is too short") {
  const auto op = tiny_point();
  const double w = 4.9;
  const DriveTone strong = DriveTone::from_power(1, power_for_mode_photons(op, 1, 30.0), w);
  FloquetOptions opt;
  opt.check_cutoff = true;
  opt.cutoff_tolerance = 1e-6;
  const auto sol = solve_driven(op, {strong}, w, 2, opt);
  CHECK_FALSE(sol.warnings.empty());
  const DriveTone weak = DriveTone::from_power(1, power_for_mode_photons(op, 1, 0.25), w);
  opt.cutoff_tolerance = 1e-3;
  CHECK(solve_driven(op, {weak}, w, 3, opt).warnings.empty());
}

TEST_CASE("time-domain oracle") {
  const auto op = tiny_point(-45.0);
  const double w = 4.9;

  SUBCASE("no drive") {
    const auto res = time_domain_oracle(op.l0.map, {}, w);
    for (int n : {-2, -1, 1, 2}) CHECK(res.component(n).norm() < 1e-10);
    CHECK(rel(res.component(0), stationary_state(op.l0.map)) < 1e-9);
  }

  SUBCASE("two tones agree with the Floquet solve") {
    const DriveTone signal = DriveTone::from_power(1, power_for_mode_photons(op, 1, 0.25), w);
    const DriveTone control = DriveTone::from_power(2, power_for_mode_photons(op, 2, 0.5), w, 0.4);
    const auto drives = build_harmonic_drives({signal, control}, op.x_full(), op.baths.kappa_in_ghz,
                                              op.omegas.omega1_ghz, w);
    const auto fl = solve_stroboscopic_steady_state(op.l0.map, drives, w, 8);
    const auto res = time_domain_oracle(op.l0.map, drives, w);
    for (int n = -2; n <= 2; ++n) CHECK(rel(res.component(n), fl.component(n)) < 1e-6);
  }

  SUBCASE("step halving") {
    const DriveTone signal = DriveTone::from_power(1, power_for_mode_photons(op, 1, 0.25), w);
    const auto drives = build_harmonic_drives({signal}, op.x_full(), op.baths.kappa_in_ghz,
                                              op.omegas.omega1_ghz, w);
    OracleOptions fine;
    fine.substeps *= 2;
    const auto a = time_domain_oracle(op.l0.map, drives, w);
    const auto b = time_domain_oracle(op.l0.map, drives, w, fine);
    for (int n = -2; n <= 2; ++n) CHECK((a.component(n) - b.component(n)).norm() < 1e-8);
  }

  SUBCASE("driven decoupled resonator") {
    BathSpec cold;
    cold.temperature_k = 0.0;
    PointOptions popt;
    popt.level_window = 0.0;
    DeviceParams d = decoupled_device();
    d.truncation = Truncation(3, 2);
    const auto lin = prepare_operating_point(d, cold, {0.0}, popt);
    const double wd = lin.omegas.omega1_ghz;
    const DriveTone tone{1, 1e5, 0.0};
    const auto drives = build_harmonic_drives({tone}, lin.x_full(), cold.kappa_in_ghz,
                                              lin.omegas.omega1_ghz, wd);
    OracleOptions opt;
    opt.substeps = 32;
    const auto res = time_domain_oracle(lin.l0.map, drives, wd, opt);
    const double amp = drive_amplitude(tone, cold.kappa_in_ghz, lin.omegas.omega1_ghz, wd);
    const Complex expected = linear_response(lin, amp, wd);
    const Complex got = (lin.x_plus() * res.component(-1)).trace();
    CHECK(std::abs(got - expected) < 1e-6 * std::abs(expected));
  }
}

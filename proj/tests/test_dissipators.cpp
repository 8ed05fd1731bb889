#include "doctest.h"
#include "helpers.hpp"

#include "usc/dissipators.hpp"
#include "usc/error.hpp"
#include "usc/floquet.hpp"
#include "usc/observables.hpp"
#include "usc/units.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace usc;

namespace {

DeviceParams decoupled_device() {
  DeviceParams d;
  d.mode1.coupling_ghz = 0.0;
  d.mode2.coupling_ghz = 0.0;
  d.truncation = Truncation(5, 3);
  return d;
}

double max_trace_leak(const Superoperator& l) {
  return (trace_functional(l.hilbert_dim()) * l.matrix()).cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("coupling operators") {
  const Truncation t(4, 3);
  const Operator a1 = embed(annihilation_matrix(4), Slot::Mode1, t);
  const Operator a2 = embed(annihilation_matrix(3), Slot::Mode2, t);
  const Complex i{0, 1};
  const Operator r1 = coupling_operator(CouplingKind::R1Waveguide, 5.0, 5.0, t);
  CHECK((r1 - (i * (a1 - a1.adjoint()) + i * (a2 - a2.adjoint()))).norm() < 1e-15);
  for (auto kind : {CouplingKind::R1Waveguide, CouplingKind::R2Internal, CouplingKind::Qubit,
                    CouplingKind::XGeneric}) {
    CHECK(is_hermitian(coupling_operator(kind, 5.0, 9.7, t)));
  }
  // |<0,0,g| X |1,0,g>|^2 in the bare basis: qubit index 0, mode-1 index 1.
  const Operator x = coupling_operator(CouplingKind::XGeneric, 5.0, 9.7, t);
  CHECK(std::norm(x(0, 3)) == doctest::Approx(1.0));
  const Operator sx = script_x_operator(t);
  CHECK((sx - (a1 + a1.adjoint() + a2 + a2.adjoint())).norm() < 1e-15);
}

TEST_CASE("dressing") {
  const DeviceParams p = decoupled_device();
  const Eigensystem eig = solve_eigensystem(build_hamiltonian(HamiltonianVariant::RabiFluxBasis, p, {0.0}));
  const DressedOperator id = dress(Operator::Identity(p.truncation.dim(), p.truncation.dim()), eig);
  CHECK(id.positive_part().norm() < 1e-12);
  CHECK((id.diagonal_part() - Operator::Identity(id.dim(), id.dim())).norm() < 1e-12);

  const auto w = mode_frequencies(p, {0.0});
  const DressedOperator x =
      dress(coupling_operator(CouplingKind::XGeneric, w.omega1_ghz, w.omega2_ghz, p.truncation), eig);
  CHECK(std::norm(x.element(0, 1)) == doctest::Approx(1.0).epsilon(1e-12));
  // Bare-limit sum rule: |X_{n-1,n}|^2 = n along the mode-1 ladder (levels 1, ~3, ...).
  const Operator recon = x.positive_part() + x.negative_part() + x.diagonal_part();
  CHECK((recon - x.full()).norm() < 1e-12);
  const Operator xp = x.positive_part();
  for (int j = 0; j < xp.rows(); ++j)
    for (int k = 0; k <= j; ++k) CHECK(xp(j, k) == Complex{});
  CHECK_THROWS_AS(dress(Operator::Identity(3, 3), eig), Error);
}

TEST_CASE("thermal occupation") {
  CHECK(thermal_occupation(5.0, 0.0) == 0.0);
  const double t = units::kPlanck * 5e9 / (units::kBoltzmann * std::log(2.0));
  CHECK(thermal_occupation(5.0, t) == doctest::Approx(1.0).epsilon(1e-12));
  const double x = 6.62607015e-34 * 5e9 / (1.380649e-23 * 0.02);
  CHECK(thermal_occupation(5.0, 0.02) == doctest::Approx(1.0 / (std::exp(x) - 1.0)).epsilon(1e-9));
  CHECK(thermal_occupation(5.0, 0.02) == doctest::Approx(6.1e-6).epsilon(0.02));
  CHECK_THROWS_AS(thermal_occupation(0.0, 0.02), Error);
  CHECK_THROWS_AS(thermal_occupation(-1.0, 0.02), Error);
}

TEST_CASE("rate scaling") {
  const BathSpec b;
  const QubitSpec q;
  CHECK(rate_scaling(CouplingKind::R1Waveguide, 5.0, b, q, 5.0) == doctest::Approx(b.kappa_in_ghz + b.kappa_out_ghz));
  CHECK(rate_scaling(CouplingKind::R2Internal, 5.0, b, q, 5.0) == doctest::Approx(b.kappa_int_ghz));
  CHECK(rate_scaling(CouplingKind::Qubit, 5.0, b, q, 5.0) == doctest::Approx(q.loss_rate_ghz));
  CHECK(rate_scaling(CouplingKind::R1Waveguide, 10.0, b, q, 5.0) ==
        doctest::Approx(2 * (b.kappa_in_ghz + b.kappa_out_ghz)));
  CHECK(b.kappa_in_ghz + b.kappa_out_ghz == doctest::Approx(2.6e-3));
  CHECK(b.kappa_out_ghz == doctest::Approx(3 * b.kappa_in_ghz));
  CHECK_THROWS_AS(rate_scaling(CouplingKind::XGeneric, 5.0, b, q, 5.0), Error);
}

TEST_CASE("linewidths") {
  const DeviceParams p = decoupled_device();
  const BathSpec b;
  const auto op = prepare_operating_point(p, b, {0.0});
  const double w1 = op.omegas.omega1_ghz;
  const double w2 = op.omegas.omega2_ghz;
  CHECK(op.linewidth(1, 0) ==
        doctest::Approx(b.kappa_in_ghz + b.kappa_out_ghz + b.kappa_int_ghz * w2 / w1).epsilon(1e-12));
  CHECK_THROWS_AS(op.linewidth(0, 1), Error);
  CHECK_THROWS_AS(op.linewidth(2, 2), Error);

  const auto quiet = prepare_operating_point(p, BathSpec{0, 0, 0, 0.02}, {0.0});
  CHECK(quiet.linewidth(1, 0) == 0.0);

  const auto full = prepare_operating_point(DeviceParams{}, b, {-47.0});
  CHECK(full.linewidth(1, 0) > 0.0);
  CHECK(std::isfinite(full.linewidth(3, 0)));
}

TEST_CASE("static Liouvillian invariants on the fitted device") {
  const auto op = prepare_operating_point(DeviceParams{}, BathSpec{}, {-47.0});
  const Superoperator& l = op.l0.map;
  CHECK(max_trace_leak(l) < 1e-10);

  std::mt19937 rng(2024);
  for (int trial = 0; trial < 10; ++trial) {
    const Operator rho = testing::random_hermitian(op.dim(), rng);
    const Operator out = l.apply(rho);
    CHECK((out - out.adjoint()).norm() < 1e-10);
  }

  const Operator ss = stationary_state(l);
  CHECK(ss.trace().real() == doctest::Approx(1.0));
  CHECK((ss - ss.adjoint()).norm() < 1e-10);
  CHECK(Eigen::SelfAdjointEigenSolver<Operator>(ss).eigenvalues().minCoeff() > -1e-8);
  CHECK(l.apply(ss).norm() < 1e-9);
}

TEST_CASE("unique kernel at zero temperature") {
  BathSpec cold;
  cold.temperature_k = 0.0;
  const auto op = prepare_operating_point(DeviceParams{}, cold, {-47.0});
  const Eigen::VectorXcd ev = Eigen::ComplexEigenSolver<Operator>(op.l0.map.matrix(), false).eigenvalues();
  int near_zero = 0;
  for (Eigen::Index i = 0; i < ev.size(); ++i) near_zero += std::abs(ev(i)) < 1e-8;
  CHECK(near_zero == 1);
}

TEST_CASE("decoupled cavity relaxes to the vacuum") {
  BathSpec cold;
  cold.temperature_k = 0.0;
  cold.kappa_int_ghz = 0.0;
  const auto op = prepare_operating_point(decoupled_device(), cold, {0.0});
  const Operator ss = stationary_state(op.l0.map);
  CHECK(std::abs(ss(0, 0) - 1.0) < 1e-10);
}

static double one_photon_population(const Superoperator& l0, int dim, double t_end) {
  Operator rho = Operator::Zero(dim, dim);
  rho(1, 1) = 1.0;
  const int steps = 4000;
  const Operator& l = l0.matrix();
  Eigen::VectorXcd v = vectorize(rho);
  const double h = t_end / steps;
  for (int s = 0; s < steps; ++s) {
    const Eigen::VectorXcd k1 = l * v;
    const Eigen::VectorXcd k2 = l * (v + 0.5 * h * k1);
    const Eigen::VectorXcd k3 = l * (v + 0.5 * h * k2);
    const Eigen::VectorXcd k4 = l * (v + h * k3);
    v += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return unvectorize(v, dim)(1, 1).real();
}

TEST_CASE("single bare mode population decay") {
  BathSpec cold;
  cold.temperature_k = 0.0;
  auto device = decoupled_device();
  device.qubit.loss_rate_ghz = 0.0;
  device.qubit.dephasing_rate_ghz = 0.0;
  PointOptions secular;
  secular.liouvillian.secular_only = true;
  const double t_end = 20.0;  // ns
  const auto sec = prepare_operating_point(device, cold, {0.0}, secular);
  const double gamma = units::to_angular(cold.kappa_in_ghz + cold.kappa_out_ghz +
                                         cold.kappa_int_ghz * sec.omegas.omega2_ghz / sec.omegas.omega1_ghz);
  const double analytic = std::exp(-gamma * t_end);
  CHECK(one_photon_population(sec.l0.map, sec.dim(), t_end) == doctest::Approx(analytic).epsilon(1e-9));

  // Cross terms between the two ladders only perturb the decay slightly.
  const auto full = prepare_operating_point(device, cold, {0.0});
  CHECK(one_photon_population(full.l0.map, full.dim(), t_end) == doctest::Approx(analytic).epsilon(1e-3));
}

TEST_CASE("degenerate transitions are skipped and counted") {
  DeviceParams d = decoupled_device();
  d.mode2.base_frequency_ghz = 10.0;  // |2,0> and |0,1> degenerate at the symmetry point
  d.mode2.v_shape_beta_per_phi0 = d.mode1.v_shape_beta_per_phi0;
  const auto op = prepare_operating_point(d, BathSpec{}, {0.0});
  CHECK(op.l0.skipped_transitions > 0);
  CHECK(max_trace_leak(op.l0.map) < 1e-10);
}

TEST_CASE("secular switch") {
  PointOptions popt;
  popt.liouvillian.secular_only = true;
  const auto sec = prepare_operating_point(DeviceParams{}, BathSpec{}, {-47.0}, popt);
  const auto full = prepare_operating_point(DeviceParams{}, BathSpec{}, {-47.0});
  CHECK(max_trace_leak(sec.l0.map) < 1e-10);
  CHECK((sec.l0.map.matrix() - full.l0.map.matrix()).norm() > 0.0);
}

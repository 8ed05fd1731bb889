#include "usc/floquet.hpp"

#include "usc/block_banded.hpp"
#include "usc/error.hpp"
#include "usc/units.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace usc {

double photon_rate_from_power(double power_w, double frequency_ghz) {
  if (!(frequency_ghz > 0)) throw Error(ErrorCode::Domain, "tone frequency must be > 0");
  if (power_w < 0) throw Error(ErrorCode::Domain, "input power must be >= 0");
  return power_w / (units::kPlanck * frequency_ghz * units::kHzPerGHz);
}

double power_from_photon_rate(double photon_rate, double frequency_ghz) {
  if (!(frequency_ghz > 0)) throw Error(ErrorCode::Domain, "tone frequency must be > 0");
  return photon_rate * units::kPlanck * frequency_ghz * units::kHzPerGHz;
}

DriveTone DriveTone::from_power(int harmonic, double power_w, double base_ghz, double phase) {
  return {harmonic, photon_rate_from_power(power_w, harmonic * base_ghz), phase};
}

double drive_amplitude(const DriveTone& tone, double kappa_in_ghz, double omega1_ghz,
                       double omega_base_ghz) {
  if (tone.harmonic < 1) throw Error(ErrorCode::Precondition, "tone harmonic must be >= 1");
  if (tone.photon_rate < 0) throw Error(ErrorCode::Domain, "photon rate must be >= 0");
  const double alpha = std::sqrt(units::per_second_to_per_ns(tone.photon_rate));
  return alpha * std::sqrt(units::to_angular(kappa_in_ghz)) *
         std::sqrt(tone.harmonic * omega_base_ghz / omega1_ghz);
}

Superoperator drive_superoperator(const DriveTone& tone, const Operator& x_op, double kappa_in_ghz,
                                  double omega1_ghz, double omega_base_ghz, int sign) {
  if (sign != 1 && sign != -1) throw Error(ErrorCode::Precondition, "sign must be +1 or -1");
  Superoperator out(static_cast<int>(x_op.rows()));
  const double amp = drive_amplitude(tone, kappa_in_ghz, omega1_ghz, omega_base_ghz);
  if (amp == 0.0) return out;
  const Complex coeff = -static_cast<double>(sign) * amp * std::polar(1.0, sign * tone.phase_rad);
  out.add_commutator(coeff, x_op);
  return out;
}

std::vector<HarmonicDrive> build_harmonic_drives(const std::vector<DriveTone>& tones,
                                                 const Operator& x_op, double kappa_in_ghz,
                                                 double omega1_ghz, double omega_base_ghz) {
  std::map<int, HarmonicDrive> by_harmonic;
  const int d = static_cast<int>(x_op.rows());
  for (const auto& tone : tones) {
    auto [it, fresh] = by_harmonic.try_emplace(tone.harmonic,
                                               HarmonicDrive{tone.harmonic, Superoperator(d),
                                                             Superoperator(d)});
    it->second.plus += drive_superoperator(tone, x_op, kappa_in_ghz, omega1_ghz, omega_base_ghz, 1);
    it->second.minus +=
        drive_superoperator(tone, x_op, kappa_in_ghz, omega1_ghz, omega_base_ghz, -1);
  }
  std::vector<HarmonicDrive> out;
  for (auto& [k, drive] : by_harmonic) out.push_back(std::move(drive));
  return out;
}

FloquetSolution::FloquetSolution(double omega_base_ghz, int m_max, std::vector<Operator> components)
    : omega_base_ghz_(omega_base_ghz), m_max_(m_max), components_(std::move(components)) {
  if (components_.size() != static_cast<std::size_t>(2 * m_max + 1)) {
    throw Error(ErrorCode::Shape, "Floquet solution needs 2 m_max + 1 components");
  }
}

Operator FloquetSolution::component(int n) const {
  if (std::abs(n) > m_max_) return Operator::Zero(hilbert_dim(), hilbert_dim());
  return components_[static_cast<std::size_t>(n + m_max_)];
}

namespace {

int max_harmonic(const std::vector<HarmonicDrive>& drives) {
  int k = 0;
  for (const auto& d : drives) k = std::max(k, d.harmonic);
  return k;
}

void check_dims(const Superoperator& l0, const std::vector<HarmonicDrive>& drives) {
  for (const auto& d : drives) {
    if (d.plus.dim() != l0.dim() || d.minus.dim() != l0.dim()) {
      throw Error(ErrorCode::Shape, "drive superoperator dimension differs from L0");
    }
    if (d.harmonic < 1) throw Error(ErrorCode::Precondition, "drive harmonic must be >= 1");
  }
}

std::vector<Operator> solve_components(const Superoperator& l0,
                                       const std::vector<HarmonicDrive>& drives,
                                       double omega_base_ghz, int m_max) {
  const int d = l0.hilbert_dim();
  const int n2 = l0.dim();
  const int blocks = 2 * m_max + 1;
  const int band = std::max(1, max_harmonic(drives));
  const double w = units::to_angular(omega_base_ghz);

  BlockBandedMatrix a(blocks, n2, std::min(band, blocks - 1));
  for (int i = 0; i < blocks; ++i) {
    const int n = i - m_max;
    Operator& diag = a.at(i, i);
    diag = l0.matrix();
    diag.diagonal().array() -= Complex{0.0, n * w};
    for (const auto& drv : drives) {
      if (i - drv.harmonic >= 0) a.at(i, i - drv.harmonic) += drv.plus.matrix();
      if (i + drv.harmonic < blocks) a.at(i, i + drv.harmonic) += drv.minus.matrix();
    }
  }
  // The (0,0) population equation of the n = 0 block is redundant: the sum of
  // all population rows vanishes identically. Replace it by Tr rho_0 = 1.
  const int centre = m_max;
  for (int j = std::max(0, centre - a.bandwidth()); j <= std::min(blocks - 1, centre + a.bandwidth());
       ++j) {
    a.at(centre, j).row(0).setZero();
  }
  a.at(centre, centre).row(0) = trace_functional(d);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(blocks) * n2);
  rhs(static_cast<Eigen::Index>(centre) * n2) = 1.0;

  const Eigen::VectorXcd x = solve_block_banded(std::move(a), std::move(rhs));
  std::vector<Operator> comps;
  comps.reserve(static_cast<std::size_t>(blocks));
  for (int i = 0; i < blocks; ++i) comps.push_back(unvectorize(x.segment(i * n2, n2), d));
  return comps;
}

}  // namespace

FloquetSolution solve_stroboscopic_steady_state(const Superoperator& l0,
                                                const std::vector<HarmonicDrive>& drives,
                                                double omega_base_ghz, int m_max,
                                                const FloquetOptions& options) {
  check_dims(l0, drives);
  if (!(omega_base_ghz > 0)) throw Error(ErrorCode::Domain, "base frequency must be > 0");
  const int kmax = max_harmonic(drives);
  if (m_max < kmax + 1) {
    throw Error(ErrorCode::InsufficientCutoff, "m_max must exceed the highest drive harmonic");
  }
  FloquetSolution sol(omega_base_ghz, m_max, solve_components(l0, drives, omega_base_ghz, m_max));

  if (options.check_cutoff) {
    const auto wider = solve_components(l0, drives, omega_base_ghz, m_max + 1);
    const int probe = std::min(2, m_max);
    for (int n = -probe; n <= probe; ++n) {
      const Operator& coarse = sol.component(n);
      const Operator& fine = wider[static_cast<std::size_t>(n + m_max + 1)];
      const double change = (coarse - fine).norm();
      const double scale = fine.norm();
      if (change > options.cutoff_tolerance * scale + 1e-14) {
        std::ostringstream msg;
        msg << "Fourier cutoff " << m_max << " not converged: rho_" << n << " changed by "
            << change / std::max(scale, 1e-300) << " (relative)";
        sol.warnings.push_back(msg.str());
      }
    }
  }
  return sol;
}

Operator stationary_state(const Superoperator& l0) {
  Operator a = l0.matrix();
  a.row(0) = trace_functional(l0.hilbert_dim());
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(l0.dim());
  rhs(0) = 1.0;
  Eigen::PartialPivLU<Operator> lu(a);
  if (!(lu.rcond() > 1e-15)) {
    throw Error(ErrorCode::DegenerateKernel, "L0 has no unique stationary state");
  }
  return unvectorize(lu.solve(rhs), l0.hilbert_dim());
}

namespace {

class TimeDependentGenerator {
 public:
  TimeDependentGenerator(const Superoperator& l0, const std::vector<HarmonicDrive>& drives,
                         double omega_angular)
      : l0_(l0), drives_(drives), w_(omega_angular) {}

  Operator at(double t) const {
    Operator l = l0_.matrix();
    for (const auto& d : drives_) {
      const Complex phase = std::polar(1.0, d.harmonic * w_ * t);
      l.noalias() += phase * d.plus.matrix();
      l.noalias() += std::conj(phase) * d.minus.matrix();
    }
    return l;
  }

 private:
  const Superoperator& l0_;
  const std::vector<HarmonicDrive>& drives_;
  double w_;
};

template <typename State>
void rk4_step(const TimeDependentGenerator& gen, double t, double h, State& y) {
  const Operator l_start = gen.at(t);
  const Operator l_mid = gen.at(t + 0.5 * h);
  const Operator l_end = gen.at(t + h);
  const State k1 = l_start * y;
  const State k2 = l_mid * (y + 0.5 * h * k1);
  const State k3 = l_mid * (y + 0.5 * h * k2);
  const State k4 = l_end * (y + h * k3);
  y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

}  // namespace

OracleResult time_domain_oracle(const Superoperator& l0, const std::vector<HarmonicDrive>& drives,
                                double omega_base_ghz, const OracleOptions& opt) {
  check_dims(l0, drives);
  if (!(omega_base_ghz > 0)) throw Error(ErrorCode::Domain, "base frequency must be > 0");
  if (opt.samples_per_period < 4 * opt.m_max || opt.samples_per_period < 1 || opt.substeps < 1) {
    throw Error(ErrorCode::Precondition, "samples_per_period must be >= 4 m_max");
  }
  const double period = 1.0 / omega_base_ghz;  // ns
  const int steps = opt.samples_per_period * opt.substeps;
  const double h = period / steps;
  const TimeDependentGenerator gen(l0, drives, units::to_angular(omega_base_ghz));

  // One-period propagator, integrated column by column with the same RK4 the
  // sampling pass uses.
  Operator propagator = Operator::Identity(l0.dim(), l0.dim());
  for (int s = 0; s < steps; ++s) rk4_step(gen, s * h, h, propagator);

  // The periodic state is the unit-trace fixed point of the one-period map.
  const int d = l0.hilbert_dim();
  Operator fixed = propagator - Operator::Identity(l0.dim(), l0.dim());
  fixed.row(0) = trace_functional(d);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(l0.dim());
  rhs(0) = 1.0;
  Eigen::PartialPivLU<Operator> lu(fixed);
  if (!(lu.rcond() > 1e-15)) {
    throw Error(ErrorCode::NonStationary, "one-period map has no unique fixed point");
  }
  Eigen::VectorXcd rho = lu.solve(rhs);
  OracleResult out;
  out.residual = (propagator * rho - rho).norm();
  if (!(out.residual < opt.settle_tolerance)) {
    throw Error(ErrorCode::NonStationary, "periodic state residual " + std::to_string(out.residual));
  }

  const int ncomp = 2 * opt.m_max + 1;
  std::vector<Eigen::VectorXcd> acc(static_cast<std::size_t>(ncomp),
                                    Eigen::VectorXcd::Zero(l0.dim()));
  const double w = units::to_angular(omega_base_ghz);
  for (int sample = 0; sample < opt.samples_per_period; ++sample) {
    const double t = sample * opt.substeps * h;
    for (int n = -opt.m_max; n <= opt.m_max; ++n) {
      acc[static_cast<std::size_t>(n + opt.m_max)] += std::polar(1.0, -n * w * t) * rho;
    }
    for (int sub = 0; sub < opt.substeps; ++sub) rk4_step(gen, t + sub * h, h, rho);
  }
  for (auto& v : acc) {
    v /= static_cast<double>(opt.samples_per_period);
    out.components.push_back(unvectorize(v, d));
  }
  return out;
}

}  // namespace usc

#pragma once

#include "usc/superoperator.hpp"

#include <string>
#include <vector>

namespace usc {

/// Coherent tone at harmonic * base frequency entering through the input port.
struct DriveTone {
  int harmonic = 1;
  double photon_rate = 0.0;  // |alpha_in|^2, photons/s
  double phase_rad = 0.0;

  static DriveTone from_power(int harmonic, double power_w, double base_frequency_ghz,
                              double phase_rad = 0.0);
};

/// |alpha_in|^2 = P / (h nu).
double photon_rate_from_power(double power_w, double frequency_ghz);
double power_from_photon_rate(double photon_rate, double frequency_ghz);

/// Drive amplitude |alpha_in| sqrt(kappa_in) sqrt(omega_tone/omega1) in rad/ns.
double drive_amplitude(const DriveTone& tone, double kappa_in_ghz, double omega1_ghz,
                       double omega_base_ghz);

/// L_{+k} (sign = +1) or L_{-k} (sign = -1) of the tone Hamiltonian
/// 2 A sin(k w t + phi) X, with A = drive_amplitude():
///   L_{+-k} rho = -+A e^{+-i phi} [X, rho].
/// The pair preserves Hermiticity: (L_{+k} rho)^+ = L_{-k}(rho^+).
Superoperator drive_superoperator(const DriveTone& tone, const Operator& x_op, double kappa_in_ghz,
                                  double omega1_ghz, double omega_base_ghz, int sign);

struct HarmonicDrive {
  int harmonic;
  Superoperator plus;   // multiplies e^{+i k w t}
  Superoperator minus;  // multiplies e^{-i k w t}
};

/// Sums tones sharing a harmonic; one entry per distinct harmonic, ascending.
std::vector<HarmonicDrive> build_harmonic_drives(const std::vector<DriveTone>& tones,
                                                 const Operator& x_op, double kappa_in_ghz,
                                                 double omega1_ghz, double omega_base_ghz);

/// Fourier components of the periodic steady state rho(t) = sum_n rho_n e^{i n w t}.
class FloquetSolution {
 public:
  FloquetSolution(double omega_base_ghz, int m_max, std::vector<Operator> components);

  double omega_base_ghz() const noexcept { return omega_base_ghz_; }
  int m_max() const noexcept { return m_max_; }
  int hilbert_dim() const noexcept { return static_cast<int>(components_.front().rows()); }

  /// rho_n; zero outside [-m_max, m_max].
  Operator component(int n) const;

  std::vector<std::string> warnings;

 private:
  double omega_base_ghz_;
  int m_max_;
  std::vector<Operator> components_;
};

struct FloquetOptions {
  /// Re-solve at m_max + 1 and warn if the low harmonics move by more than
  /// cutoff_tolerance (relative).
  bool check_cutoff = false;
  double cutoff_tolerance = 1e-3;
};

FloquetSolution solve_stroboscopic_steady_state(const Superoperator& l0,
                                                const std::vector<HarmonicDrive>& drives,
                                                double omega_base_ghz, int m_max,
                                                const FloquetOptions& options = {});

/// Kernel of L0 normalised to unit trace.
Operator stationary_state(const Superoperator& l0);

struct OracleOptions {
  int m_max = 2;
  int samples_per_period = 64;
  int substeps = 16;
  /// Bound on |P rho - rho| for the one-period map P.
  double settle_tolerance = 1e-10;
};

struct OracleResult {
  std::vector<Operator> components;  // index n + m_max
  double residual = 0.0;

  const Operator& component(int n) const {
    return components[static_cast<std::size_t>(n + static_cast<int>(components.size() / 2))];
  }
};

/// Integrates d rho/dt = L(t) rho over one period with classical RK4 to get the
/// one-period map, takes its unit-trace fixed point as the periodic state, then
/// propagates that state through one more period and projects the
/// Fourier components by trapezoidal quadrature over one period.
OracleResult time_domain_oracle(const Superoperator& l0, const std::vector<HarmonicDrive>& drives,
                                double omega_base_ghz, const OracleOptions& options = {});

}  // namespace usc

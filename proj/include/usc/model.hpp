#pragma once

#include "usc/fockspace.hpp"

#include <span>
#include <string_view>
#include <vector>

namespace usc {

struct QubitSpec {
  double tunnel_splitting_ghz = 12.3;
  double persistent_current_na = 60.0;
  double loss_rate_ghz = 0.2;
  double dephasing_rate_ghz = 0.2;

  void validate() const;
  bool operator==(const QubitSpec&) const = default;
};

struct ModeSpec {
  double base_frequency_ghz = 5.0;
  double v_shape_beta_per_phi0 = 0.0;
  double coupling_ghz = 0.0;

  void validate() const;
  bool operator==(const ModeSpec&) const = default;
};

/// External flux offset from the qubit symmetry point, in milli flux quanta.
struct FluxPoint {
  double offset_mphi0 = 0.0;
};

struct DerivedQubit {
  double epsilon_ghz;
  double omega_q_ghz;
  double theta_rad;
};

struct ModeFrequencies {
  double omega1_ghz;
  double omega2_ghz;
};

/// Full closed-system description of the device: qubit, both modes, cutoffs.
struct DeviceParams {
  QubitSpec qubit;
  ModeSpec mode1{5.0, 0.775, 2.815};
  ModeSpec mode2{9.7, 0.919, 2.180};
  Truncation truncation{8, 5};

  bool operator==(const DeviceParams&) const = default;
};

enum class HamiltonianVariant { RabiFluxBasis, RabiEnergyBasis, NoParityBreaking, JaynesCummings };

std::string_view to_string(HamiltonianVariant v) noexcept;
HamiltonianVariant parse_variant(std::string_view name);

struct Eigensystem {
  RealVector energies_ghz;     // ascending
  Operator vectors;            // columns are eigenvectors
  RealVector transitions_ghz;  // E_j - E_0

  int size() const noexcept { return static_cast<int>(energies_ghz.size()); }

  /// Keeps the levels with transition frequency <= max_transition_ghz. The
  /// ground state is always retained.
  Eigensystem restricted(double max_transition_ghz) const;
};

DerivedQubit derive_qubit(const QubitSpec& spec, FluxPoint flux);

double mode_frequency(const ModeSpec& mode, const DerivedQubit& dq, FluxPoint flux);

ModeFrequencies mode_frequencies(const DeviceParams& params, FluxPoint flux);

Operator build_hamiltonian(HamiltonianVariant variant, const QubitSpec& qubit, const ModeSpec& mode1,
                           const ModeSpec& mode2, FluxPoint flux, const Truncation& trunc);

inline Operator build_hamiltonian(HamiltonianVariant variant, const DeviceParams& p,
                                  FluxPoint flux) {
  return build_hamiltonian(variant, p.qubit, p.mode1, p.mode2, flux, p.truncation);
}

/// The flux-basis sigma_z written in the qubit basis used by `variant`. This is
/// the operator the qubit bath couples to.
Operator qubit_noise_operator(HamiltonianVariant variant, const DerivedQubit& dq,
                              const Truncation& trunc);

Eigensystem solve_eigensystem(const Operator& h);

double analytic_geff(double g1_ghz, double g2_ghz, double omega1_ghz, double omega_q_ghz,
                     double theta_rad);

struct AvoidedCrossing {
  double flux_at_min_mphi0;
  double min_gap_ghz;
  std::size_t grid_index;

  double half_gap_ghz() const noexcept { return 0.5 * min_gap_ghz; }
};

/// Gap omega~_3 - omega~_2 on one flux point.
double level_gap(HamiltonianVariant variant, const DeviceParams& params, FluxPoint flux);

AvoidedCrossing find_avoided_crossing(HamiltonianVariant variant, const DeviceParams& params,
                                      std::span<const double> flux_grid_mphi0);

std::vector<double> linspace(double start, double stop, int steps);

}  // namespace usc

#pragma once

#include "usc/dissipators.hpp"
#include "usc/floquet.hpp"
#include "usc/model.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace usc {

struct PointOptions {
  HamiltonianVariant variant = HamiltonianVariant::RabiFluxBasis;
  /// Dressed levels with omega~_j above level_window * omega2 are dropped from
  /// the open-system problem. Non-positive keeps every level.
  double level_window = 3.0;
  LiouvillianOptions liouvillian;
};

/// Everything the driven-dissipative solvers need at one flux bias.
struct OperatingPoint {
  FluxPoint flux;
  DerivedQubit qubit;
  ModeFrequencies omegas;
  BathSpec baths;
  int fock_dim = 0;
  Eigensystem eig;  // restricted to the level window
  DressedChannels channels;
  StaticLiouvillian l0;

  int dim() const noexcept { return channels.dim(); }
  Operator x_plus() const { return channels.r1.positive_part(); }
  const Operator& x_full() const { return channels.r1.full(); }
  double linewidth(int p, int q) const;
};

OperatingPoint prepare_operating_point(const DeviceParams& device, const BathSpec& baths,
                                       FluxPoint flux, const PointOptions& options = {});

FloquetSolution solve_driven(const OperatingPoint& op, const std::vector<DriveTone>& tones,
                             double omega_base_ghz, int m_max, const FloquetOptions& options = {});

/// Tr[X+ rho_{-n}]: coherent emission amplitude at n * omega_base.
Complex emission_amplitude(const FloquetSolution& sol, const Operator& x_plus, int harmonic);

Complex transmission_s21(const FloquetSolution& sol, const Operator& x_plus, double kappa_out_ghz,
                         double omega_in_ghz, double omega1_ghz, double photon_rate);

/// |Tr[X+ rho_{-2}]| in arbitrary units.
double shg_amplitude(const FloquetSolution& sol, const Operator& x_plus);

/// n = 4 P kappa_in / (h nu Gamma^2), rates converted to rad/s.
double mean_photons(double power_w, double linewidth_ghz, double kappa_in_ghz,
                    double mode_frequency_ghz);
double power_for_photons(double nbar, double linewidth_ghz, double kappa_in_ghz,
                         double mode_frequency_ghz);

struct PhotonBudget {
  double mean_photons_mode1;
  double mean_photons_mode2;
  double input_power_w;
};

/// Mode 1 uses Gamma_{1,0} and omega1, mode 2 uses Gamma_{3,0} and omega2.
double mode_linewidth(const OperatingPoint& op, int mode);
double power_for_mode_photons(const OperatingPoint& op, int mode, double nbar);
PhotonBudget photon_budget(const OperatingPoint& op, double power_w);

struct GainPoint {
  double phase_rad;
  double gain;
};

/// Control-on / control-off amplitude ratio at the monitored harmonic; the
/// control tone carries the swept phase.
std::vector<GainPoint> interference_gain(const OperatingPoint& op, const DriveTone& signal,
                                         const DriveTone& control, std::span<const double> phases,
                                         int monitored_harmonic, double omega_base_ghz, int m_max,
                                         int threads = 1);

double visibility(std::span<const GainPoint> curve);

enum class ElementOperator { X, ScriptX };

struct MatrixElementRow {
  double flux_mphi0;
  int j;
  int k;
  double abs_sq;
};

std::vector<MatrixElementRow> matrix_element_scan(const DeviceParams& device,
                                                  std::span<const double> flux_grid,
                                                  ElementOperator which,
                                                  std::span<const std::pair<int, int>> pairs,
                                                  HamiltonianVariant variant =
                                                      HamiltonianVariant::RabiFluxBasis,
                                                  int threads = 1);

struct LevelRow {
  double flux_mphi0;
  HamiltonianVariant variant;
  int j;
  double omega_tilde_ghz;
};

std::vector<LevelRow> level_scan(const DeviceParams& device, std::span<const double> flux_grid,
                                 HamiltonianVariant variant, int max_level, int threads = 1);

}  // namespace usc

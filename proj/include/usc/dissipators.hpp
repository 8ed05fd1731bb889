#pragma once

#include "usc/fockspace.hpp"
#include "usc/model.hpp"
#include "usc/superoperator.hpp"

namespace usc {

struct BathSpec {
  double kappa_in_ghz = 0.65e-3;
  double kappa_out_ghz = 1.95e-3;
  double kappa_int_ghz = 10.4e-3;
  double temperature_k = 0.02;

  void validate() const;
  bool operator==(const BathSpec&) const = default;
};

enum class CouplingKind { R1Waveguide, R2Internal, Qubit, XGeneric };

/// System operators the baths couple to, in the bare (Fock) basis. The qubit
/// channel is the flux-basis sigma_z; for energy-basis Hamiltonians use
/// qubit_noise_operator() instead.
Operator coupling_operator(CouplingKind kind, double omega1_ghz, double omega2_ghz,
                           const Truncation& trunc);

/// a1 + a1^+ + a2 + a2^+
Operator script_x_operator(const Truncation& trunc);

/// An operator written in an energy eigenbasis (ascending order).
class DressedOperator {
 public:
  DressedOperator() = default;
  explicit DressedOperator(Operator full) : full_(std::move(full)) {}

  const Operator& full() const noexcept { return full_; }
  int dim() const noexcept { return static_cast<int>(full_.rows()); }
  Complex element(int j, int k) const { return full_(j, k); }

  /// Energy-lowering part: sum over j > k of X_kj |k><j|.
  Operator positive_part() const;
  Operator negative_part() const { return positive_part().adjoint(); }
  Operator diagonal_part() const;

 private:
  Operator full_;
};

DressedOperator dress(const Operator& op, const Eigensystem& eig);

double thermal_occupation(double omega_ghz, double temperature_k);

/// kappa~(omega) = bare * omega / omega1, in GHz.
double rate_scaling(CouplingKind kind, double omega_ghz, const BathSpec& baths,
                    const QubitSpec& qubit, double omega1_ghz);

/// Dressed dissipation operators of one operating point.
struct DressedChannels {
  RealVector transitions_ghz;
  DressedOperator r1;
  DressedOperator r2;
  DressedOperator q;

  int dim() const noexcept { return static_cast<int>(transitions_ghz.size()); }
};

DressedChannels dress_channels(const Eigensystem& eig, ModeFrequencies omegas,
                               const Truncation& trunc, const Operator& qubit_noise);

struct LiouvillianOptions {
  bool secular_only = false;
  double min_transition_ghz = 1e-6;  // 1 kHz
};

struct StaticLiouvillian {
  Superoperator map;
  int skipped_transitions = 0;
};

/// Undriven generalized-master-equation generator, in rad/ns, in the
/// eigenbasis of `channels`.
StaticLiouvillian build_static_liouvillian(const DressedChannels& channels, const BathSpec& baths,
                                           const QubitSpec& qubit, ModeFrequencies omegas,
                                           const LiouvillianOptions& options = {});

/// Gamma_{p,q} in GHz from the waveguide and internal channels.
double transition_linewidth(int p, int q, const DressedChannels& channels, const BathSpec& baths,
                            double omega1_ghz);

}  // namespace usc

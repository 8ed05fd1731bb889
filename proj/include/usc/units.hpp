#pragma once

#include <numbers>

// Frequencies and rates are carried as cyclic frequencies in GHz (value of
// omega/2pi). Superoperators and time integration use angular units in
// rad/ns; every conversion between the two goes through to_angular().
namespace usc::units {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr double kFluxQuantum = 2.067834e-15;  // Wb
inline constexpr double kPlanck = 6.62607e-34;        // J s
inline constexpr double kBoltzmann = 1.380649e-23;    // J/K
inline constexpr double kHzPerGHz = 1e9;

/// Cyclic GHz -> angular rad/ns.
constexpr double to_angular(double ghz) { return kTwoPi * ghz; }

/// Cyclic GHz -> angular rad/s.
constexpr double to_angular_per_second(double ghz) { return kTwoPi * ghz * kHzPerGHz; }

/// Photon flux in photons/s -> photons/ns.
constexpr double per_second_to_per_ns(double rate) { return rate * 1e-9; }

}  // namespace usc::units

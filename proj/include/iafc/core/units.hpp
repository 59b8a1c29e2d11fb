// units.hpp
// ---------
// Physical constants and unit helpers.  Internally every frequency-like
// quantity is an angular frequency in rad/s, every time is in seconds and
// every length in metres.  The helpers below convert from the cyclic units
// (MHz, GHz) in which experiments are usually quoted.
#pragma once

#include <numbers>

namespace iafc {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

namespace constants {
inline constexpr double boltzmann = 1.380649e-23;          // J/K
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg
inline constexpr double bohr_magneton_hz_per_tesla = 13.996245e9; // μ_B / h
inline constexpr double speed_of_light = 299792458.0;      // m/s
} // namespace constants

/// cyclic MHz -> rad/s
constexpr double mhz(double f) { return two_pi * f * 1e6; }
/// cyclic GHz -> rad/s
constexpr double ghz(double f) { return two_pi * f * 1e9; }
/// rad/s -> cyclic MHz
constexpr double to_mhz(double omega) { return omega / (two_pi * 1e6); }
/// rad/s -> cyclic GHz
constexpr double to_ghz(double omega) { return omega / (two_pi * 1e9); }
/// nanoseconds -> seconds
constexpr double ns(double t) { return t * 1e-9; }

} // namespace iafc

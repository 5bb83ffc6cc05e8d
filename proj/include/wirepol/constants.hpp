#pragma once

#include <numbers>

// CODATA 2018 (exact SI definitions where applicable).
namespace wirepol::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double speed_of_light = 299792458.0;            // m/s
inline constexpr double planck = 6.62607015e-34;                 // J s
inline constexpr double boltzmann = 1.380649e-23;                // J/K
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double euler_gamma = 0.57721566490153286061;

inline constexpr double micron = 1e-6;  // m
inline constexpr double millimetre = 1e-3;

} // namespace wirepol::constants

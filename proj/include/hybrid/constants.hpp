#ifndef HYBRID_CONSTANTS_HPP
#define HYBRID_CONSTANTS_HPP

#include <numbers>

// Physical constants, CODATA 2018 adjustment. Single source of truth for
// every numeric result of the library; golden test values regenerate from
// this table. Version tag is exported so output metadata can record it.
namespace hybrid::constants {

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * pi;

// exact SI defining constants (2019 redefinition)
inline constexpr double planck_h = 6.62607015e-34;          // J s
inline constexpr double hbar = 1.054571817e-34;             // J s, h/2pi to CODATA precision
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double boltzmann = 1.380649e-23;           // J/K
inline constexpr double speed_of_light = 299792458.0;       // m/s

// measured (CODATA 2018)
inline constexpr double bohr_magneton = 9.2740100783e-24;     // J/T
inline constexpr double nuclear_magneton = 5.0507837461e-27;  // J/T
inline constexpr double proton_moment = 1.41060679736e-26;    // J/T
inline constexpr double electron_mass = 9.1093837015e-31;     // kg
inline constexpr double atomic_mass_unit = 1.66053906660e-27; // kg
inline constexpr double electron_g = 2.00231930436256;

// isotope masses (AME2020 values, in kg)
inline constexpr double mass_be9 = 9.012183065 * atomic_mass_unit;
inline constexpr double mass_rb87 = 86.909180531 * atomic_mass_unit;
inline constexpr double mass_cs133 = 132.905451961 * atomic_mass_unit;
inline constexpr double mass_h1 = 1.00782503224 * atomic_mass_unit;

inline constexpr const char* version = "codata2018";

}  // namespace hybrid::constants

#endif

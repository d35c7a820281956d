#pragma once

// CODATA 2018 values, SI units throughout.

namespace chiralpinem::constants {

inline constexpr double speed_of_light = 299792458.0;          // m/s
inline constexpr double hbar = 1.054571817e-34;                // J s
inline constexpr double elementary_charge = 1.602176634e-19;   // C
inline constexpr double electron_mass = 9.1093837015e-31;      // kg
inline constexpr double electron_rest_energy_ev = 510998.95;   // eV
inline constexpr double proton_mass = 1.67262192369e-27;       // kg

// mu_N = e*hbar / (2 m_p)
inline constexpr double nuclear_magneton =
    elementary_charge * hbar / (2.0 * proton_mass);  // J/T

inline constexpr double pi = 3.14159265358979323846;

inline constexpr double ev_to_joule = elementary_charge;

}  // namespace chiralpinem::constants

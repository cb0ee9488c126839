#pragma once

// Physical constants (CODATA 2018 exact values where defined).

namespace bfosim::constants {

inline constexpr double elementary_charge_C        = 1.602176634e-19;  // [C]
inline constexpr double k_boltzmann_J_per_K        = 1.380649e-23;     // [J/K]
inline constexpr double k_boltzmann_eV_per_K       = 8.617333262e-5;   // [eV/K]
inline constexpr double vacuum_permittivity_F_per_m = 8.8541878128e-12; // [F/m]

}  // namespace bfosim::constants

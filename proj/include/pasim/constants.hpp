#pragma once

#include <cmath>

// Physical constants (CODATA 2018) and the unit conversions used throughout.
// Internal radial computations run in Hartree atomic units; the dynamics
// engine works in (ns, GHz); all public interfaces use the units stated in
// the headers (bohr, ns, MHz/GHz, W/cm^2, amu, debye, uK).
namespace pasim::constants {

inline constexpr double pi = 3.14159265358979323846;
inline constexpr double two_pi = 2.0 * pi;

inline constexpr double planck_J_s = 6.62607015e-34;
inline constexpr double hbar_J_s = planck_J_s / two_pi;
inline constexpr double speed_of_light_m_s = 299792458.0;
inline constexpr double epsilon0_F_m = 8.8541878128e-12;
inline constexpr double boltzmann_J_K = 1.380649e-23;
inline constexpr double electron_mass_kg = 9.1093837015e-31;
inline constexpr double amu_kg = 1.66053906660e-27;
inline constexpr double debye_C_m = 3.33564095e-30;
inline constexpr double bohr_m = 5.29177210903e-11;
inline constexpr double hartree_J = 4.3597447222071e-18;

inline constexpr double amu_to_me = amu_kg / electron_mass_kg;

// hartree <-> frequency
inline constexpr double hartree_to_Hz = hartree_J / planck_J_s;
inline constexpr double hartree_to_GHz = hartree_to_Hz * 1e-9;
inline constexpr double hartree_to_MHz = hartree_to_Hz * 1e-6;
inline constexpr double GHz_to_hartree = 1.0 / hartree_to_GHz;
inline constexpr double MHz_to_hartree = 1.0 / hartree_to_MHz;

// Boltzmann constant as an ordinary frequency per temperature
inline constexpr double kB_MHz_per_uK = boltzmann_J_K / planck_J_s * 1e-12;

// hbar^2/(2m R^2) in MHz for m in amu and R in bohr:
//   rotational_MHz(m, R) = rot_prefactor_MHz_amu_bohr2 / (m * R^2)
inline constexpr double rot_prefactor_MHz_amu_bohr2 =
    hbar_J_s * hbar_J_s / (2.0 * amu_kg * bohr_m * bohr_m) / planck_J_s * 1e-6;

// Peak field of a plane wave of intensity I [W/cm^2], in V/m.
inline double field_V_m(double intensity_W_cm2) {
  const double I_W_m2 = intensity_W_cm2 * 1e4;
  return std::sqrt(2.0 * I_W_m2 / (epsilon0_F_m * speed_of_light_m_s));
}

// Rabi frequency nu_R = mu E0 / h as an ordinary frequency in MHz.
inline double rabi_MHz(double intensity_W_cm2, double mu_debye) {
  return mu_debye * debye_C_m * field_V_m(intensity_W_cm2) / planck_J_s * 1e-6;
}

}  // namespace pasim::constants

#pragma once

#include <stdexcept>

// Angular-momentum algebra on the |J M Omega> basis of a Hund's case (c)
// rotor: Wigner 3-j symbols, rotational dipole factors for linearly
// Z-polarized light, and cos^2(theta) matrix elements.
//
// Phase convention: matrix elements of a spherical tensor T^k_q between
// symmetric-top states use
//   <J' M' O'| T^k_q(lab p) |J M O> =
//     sqrt((2J+1)(2J'+1)) (-1)^(M'-O') ( J' k J; -M' p M ) ( J' k J; -O' q O )
// so both projection labels enter with a minus sign in the 3-j symbols.
// Squared amplitudes are convention independent.
namespace pasim::angmom {

// One rotational basis state. Integer angular momenta only.
struct AngularState {
  int J;
  int M;
  int Omega;

  AngularState(int J_, int M_, int Omega_) : J(J_), M(M_), Omega(Omega_) {
    if (J < 0 || std::abs(M) > J || std::abs(Omega) > J)
      throw std::invalid_argument("AngularState: need J >= 0, |M| <= J, |Omega| <= J");
  }
};

// Wigner 3-j symbol (j1 j2 j3; m1 m2 m3) for integer arguments, evaluated
// with the Racah sum formula in exact rational arithmetic (with a memo
// table), valid for j <= 40. Throws std::invalid_argument on negative j or
// |m| > j, std::domain_error beyond j = 40.
double wigner3j(int j1, int j2, int j3, int m1, int m2, int m3);

// Rotational factor of the electric-dipole matrix element
// <upper| d_(lab 0) |lower> for linear Z polarization; q is the body-frame
// spherical component. The radial (Franck-Condon x mu0) factor multiplies
// this separately. Zero unless M' = M, Omega' = Omega + q, |J - J'| <= 1.
double dipole_rotational_factor(const AngularState& upper, const AngularState& lower, int q);

// <bra| cos^2(theta) |ket> with theta the polar angle between the molecular
// axis and the lab Z axis. Uses cos^2 = 1/3 + (2/3) D^2_00. Zero unless
// M' = M, Omega' = Omega and |J - J'| in {0, 2}.
double cos2theta_element(const AngularState& bra, const AngularState& ket);

}  // namespace pasim::angmom

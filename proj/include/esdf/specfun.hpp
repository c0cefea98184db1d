// specfun.hpp: special functions behind the finite-cutoff spectral densities
//
// All frequencies are angular; m = omega / omega_c is the cutoff ratio.

#pragma once

#include <complex>

namespace esdf {

using Complex = std::complex<double>;

namespace specfun {

// Sign s in Im(pi W) = s * pi * sinh(m). It selects the branch of Ci(-i m):
// s = +1 continues Ci(-i m) to Chi(m) + i pi/2, which keeps
// Theta(omega) = Im W + exp(-m) = cosh(m) strictly positive; s = -1 would
// make Theta negative beyond m = ln(3)/2.
inline constexpr double kImWBranchSign = +1.0;

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Hyperbolic sine integral Shi(m) = int_0^m sinh(t)/t dt, m >= 0.
double shi(double m);

// Hyperbolic cosine integral Chi(m) = gamma + ln m + int_0^m (cosh t - 1)/t dt, m > 0.
// This is the real part of Ci(-i m).
double chi(double m);

// Cosine integral Ci(m) = gamma + ln m + int_0^m (cos t - 1)/t dt, m > 0.
double chi_term(double m);

// Exponential integrals for x > 0: Ei(x) (principal value) and E1(x).
double expint_ei(double x);
double expint_e1(double x);

// W(omega) = (1/pi) [ -Shi(m) cosh(m) + Ci(-i m) sinh(m) + (i pi / 2) sinh(m) ].
// Re W = -(1/pi) int_0^inf sin(m x)/(1 + x^2) dx; Im W = s sinh(m).
Complex w_function(double omega, double omega_c);

// Theta(omega) = Im W(omega) + exp(-omega/omega_c).
double theta(double omega, double omega_c);

// R(omega) = -(pi i/omega) exp(-omega/omega_c) - (pi/omega) W(omega).
Complex r_function(double omega, double omega_c);

} // namespace specfun
} // namespace esdf

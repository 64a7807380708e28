#pragma once

#include <complex>

namespace fracdisp::specfun {

using Complex = std::complex<double>;

/// Gamma(z) for complex z by Lanczos approximation, reflection for Re z < 1/2.
/// Relative accuracy ~1e-13 for |z| <= 50. Throws PoleError at non-positive
/// integers.
Complex complex_gamma(Complex z);

/// log Gamma(z) on the principal branch for Re z > 0 (no reflection).
Complex complex_log_gamma_half_plane(Complex z);

struct Hyp2f1Result {
  Complex value;
  int terms;        // number of series terms consumed
  double err;       // truncation estimate (absolute)
};

/// Gauss 2F1(a,b;c;z) for real z < 1 by power series; for z <= -1/2 the
/// Pfaff map z -> z/(z-1) is applied first so real negative arguments of any
/// size converge. Throws PoleError if c is a non-positive integer,
/// ConvergenceError if the series does not reach tolerance within max_terms,
/// DomainError for z >= 1.
Hyp2f1Result gauss_2f1(Complex a, Complex b, Complex c, double z,
                       double tol = 1e-15, int max_terms = 200000);

/// Modified spherical-type Bessel function
///   j_nu(z) = Gamma(nu+1) (z/2)^{-nu} J_nu(z),  j_nu(0) = 1.
/// Power series (long double accumulation) for |z| <= crossover, two-sided
/// asymptotic expansion beyond. Even in z.
double bessel_j_modified(double nu, double z);

/// Series/asymptotic crossover point used by bessel_j_modified.
inline constexpr double kBesselCrossover = 20.0;

}  // namespace fracdisp::specfun

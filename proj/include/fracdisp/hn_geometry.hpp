#pragma once

#include <complex>

#include "fracdisp/oscquad.hpp"

namespace fracdisp::hn {

using Complex = std::complex<double>;

struct HyperbolicSpace {
  int n;       // dimension >= 2
  double rho;  // (n-1)/2

  static HyperbolicSpace make(int n);
};

enum class PhiMethod { HCIntegral, LargeScaleSeries, SmallScaleSeries };

struct SphericalValue {
  double lambda;
  double r;
  Complex value;
  PhiMethod method;
  double err_estimate;
};

struct PhiConfig {
  double r0 = 0.5;          // large-scale series from here on
  double r1 = 1.5;          // small-scale series valid up to here
  double lambda_min = 0.05; // below this |lambda| the HC integral is used
};

/// Harish-Chandra c-function, c(lambda) = Gamma(2rho)/Gamma(rho) *
/// Gamma(i lambda)/Gamma(i lambda + rho). PoleError at lambda in {0, i, 2i, ...}.
Complex c_function(const HyperbolicSpace& space, Complex lambda);

/// Plancherel density |c(lambda)|^{-2} for real lambda, by the closed product
/// reduction of the Gamma ratios (2rho is always an integer). Even, vanishes
/// quadratically at 0.
double plancherel_density(const HyperbolicSpace& space, double lambda);

/// Spherical function phi_lambda(r) by the Harish-Chandra theta-integral,
/// adaptive quadrature. Absolute tolerance `tol`; QuadratureError if
/// unreachable.
SphericalValue phi_hc(const HyperbolicSpace& space, Complex lambda, double r,
                      double tol = 1e-12);

/// phi_lambda(r) = c(lambda) Phi_lambda(r) + c(-lambda) Phi_{-lambda}(r) with
/// Phi the (2 sinh r)^{i lambda - rho} 2F1 series. Real lambda != 0, r > 0.
SphericalValue phi_large(const HyperbolicSpace& space, double lambda, double r);

/// Phi_lambda(r) = e^{(i lambda - rho) r} sum_l G_l(lambda) e^{-2 l r} with
/// G_0 = 1, G_l = (l+rho-1)(l+rho-1-i lambda) / (l (l-i lambda)) G_{l-1}
/// (coefficients from the radial ODE; see
/// tools/derive_small_scale_coeffs.py). Stable for arbitrarily large
/// |lambda|, unlike the raw 2F1 series whose terms overflow.
Complex phi_large_tail(const HyperbolicSpace& space, double lambda, double r,
                       double* err = nullptr);

/// Stanton-Tomas small-scale expansion truncated at M <= 3 terms; remainder
/// estimate of order r^{2M} (1+|lambda r|)^{-(n-1)/2-M}.
SphericalValue phi_small(const HyperbolicSpace& space, double lambda, double r,
                         int M, const PhiConfig& cfg = {});

/// Dispatch: HC integral for small r or small |lambda|, large-scale series
/// otherwise.
SphericalValue phi(const HyperbolicSpace& space, double lambda, double r,
                   const PhiConfig& cfg = {});

/// Kunze-Stein weight phi_0(r) (sinh r)^{n-1}.
double kunze_stein_weight(const HyperbolicSpace& space, double r);

/// Taylor coefficients of the Stanton-Tomas b~_1, b~_2, b~_3 (even
/// polynomials in r; b~_3 enters only the remainder estimate).
double small_scale_b1(int n, double r);
double small_scale_b2(int n, double r);
double small_scale_b3_at0(int n);

}  // namespace fracdisp::hn

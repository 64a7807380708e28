#include "fracdisp/hn_geometry.hpp"

#include <cmath>

#include "fracdisp/errors.hpp"
#include "fracdisp/specfun.hpp"

namespace fracdisp::hn {

namespace {
constexpr double kPi = 3.14159265358979323846;
using specfun::complex_gamma;
using specfun::gauss_2f1;
}  // namespace

HyperbolicSpace HyperbolicSpace::make(int n) {
  if (n < 2) throw DomainError("HyperbolicSpace: dimension must be >= 2");
  return HyperbolicSpace{n, 0.5 * (n - 1)};
}

Complex c_function(const HyperbolicSpace& space, Complex lambda) {
  const double rho = space.rho;
  Complex il = Complex(0, 1) * lambda;
  // Gamma(i lambda) poles: i lambda in {0, -1, -2, ...}
  if (il.imag() == 0.0 && il.real() <= 0.0 &&
      il.real() == std::floor(il.real()))
    throw PoleError("c_function: pole of Gamma(i lambda)");
  Complex k = complex_gamma(Complex(2.0 * rho)) / complex_gamma(Complex(rho));
  return k * complex_gamma(il) / complex_gamma(il + rho);
}

double plancherel_density(const HyperbolicSpace& space, double lambda) {
  if (lambda == 0.0) return 0.0;
  const int n = space.n;
  const double rho = space.rho;
  const double k =
      std::tgamma(2.0 * rho) / std::tgamma(rho);  // Gamma(2rho)/Gamma(rho)
  double ratio2;  // |Gamma(i lambda + rho)|^2 / |Gamma(i lambda)|^2
  const double l2 = lambda * lambda;
  if (n % 2 == 1) {
    // integer rho: product over (lambda^2 + k^2), k = 0..rho-1
    int m = (n - 1) / 2;
    ratio2 = l2;
    for (int j = 1; j < m; ++j) ratio2 *= l2 + double(j) * double(j);
  } else {
    // half-integer rho = m + 1/2: lambda tanh(pi lambda) * product
    int m = (n - 2) / 2;
    ratio2 = lambda * std::tanh(kPi * lambda);
    for (int j = 0; j < m; ++j) {
      double hk = double(j) + 0.5;
      ratio2 *= l2 + hk * hk;
    }
  }
  return ratio2 / (k * k);
}

SphericalValue phi_hc(const HyperbolicSpace& space, Complex lambda, double r,
                      double tol) {
  if (r < 0.0) throw DomainError("phi_hc: r must be >= 0");
  if (r == 0.0)
    return {lambda.real(), r, Complex(1.0, 0.0), PhiMethod::HCIntegral, 0.0};
  const int n = space.n;
  const double rho = space.rho;
  const double pref =
      std::tgamma(0.5 * n) / (std::sqrt(kPi) * std::tgamma(0.5 * (n - 1)));
  const double sh = std::sinh(r);
  const double emr = std::exp(-r);
  Complex expo = -(rho + Complex(0, 1) * lambda);
  // cosh r + sinh r cos(theta) = e^{-r} + 2 sinh r cos^2(theta/2): no
  // cancellation near theta = pi where the integrand concentrates
  auto f = [&](double theta) -> Complex {
    double c = std::cos(0.5 * theta);
    double base = emr + 2.0 * sh * c * c;
    Complex v = std::pow(Complex(base), expo);
    if (n > 2) v *= std::pow(std::sin(theta), n - 2);
    return v;
  };
  const double inner_tol = tol / std::max(pref, 1.0);

  // For large r the integrand concentrates in a width-~e^{-r} layer at
  // theta = pi, below the placement resolution of theta nodes. Integrate
  // that layer in the variable delta = pi - theta, where cos(theta/2) =
  // sin(delta/2) is evaluated without cancellation.
  if (r <= 5.0) {
    auto pr = oscquad::adaptive_gk(f, 0.0, kPi, inner_tol);
    if (!pr.converged)
      throw QuadratureError("phi_hc: quadrature tolerance unreachable");
    return {lambda.real(), r, pref * pr.value, PhiMethod::HCIntegral,
            pref * pr.err};
  }
  const double s0 = kPi / 3.0;
  auto f_delta = [&](double delta) -> Complex {
    double s = std::sin(0.5 * delta);
    double base = emr + 2.0 * sh * s * s;
    Complex v = std::pow(Complex(base), expo);
    if (n > 2) v *= std::pow(std::sin(delta), n - 2);
    return v;
  };
  std::vector<double> cuts;
  double dstar = std::sqrt(emr / sh);
  for (double c : {1.0, 16.0, 256.0, 4096.0}) {
    double x = c * dstar;
    if (x < 0.5 * s0) cuts.push_back(x);
  }
  auto pr1 = oscquad::adaptive_gk(f, 0.0, kPi - s0, 0.5 * inner_tol);
  auto pr2 = oscquad::adaptive_gk(f_delta, 0.0, s0, 0.5 * inner_tol, cuts);
  if (!pr1.converged || !pr2.converged)
    throw QuadratureError("phi_hc: quadrature tolerance unreachable");
  return {lambda.real(), r, pref * (pr1.value + pr2.value),
          PhiMethod::HCIntegral, pref * (pr1.err + pr2.err)};
}

SphericalValue phi_large(const HyperbolicSpace& space, double lambda,
                         double r) {
  if (r <= 0.0) throw DomainError("phi_large: r must be > 0");
  if (lambda == 0.0) throw DomainError("phi_large: lambda must be nonzero");
  const double rho = space.rho;
  const double sh = std::sinh(r);
  const double z = -1.0 / (sh * sh);
  Complex il(0.0, lambda);
  Complex a = 0.5 * rho - 0.5 * il;
  Complex b = -0.5 * (rho - 1.0) - 0.5 * il;
  Complex c = 1.0 - il;
  auto f = gauss_2f1(a, b, c, z);
  Complex big_phi = std::pow(Complex(2.0 * sh), il - rho) * f.value;
  Complex cf = c_function(space, Complex(lambda, 0.0));
  // phi = c(l) Phi_l + c(-l) Phi_{-l}; the two terms are conjugate for real l.
  Complex term = cf * big_phi;
  Complex value(2.0 * term.real(), 0.0);
  double err = 2.0 * std::abs(cf) *
               (f.err * std::pow(2.0 * sh, -rho) + 1e-15 * std::abs(big_phi));
  return {lambda, r, value, PhiMethod::LargeScaleSeries, err};
}

Complex phi_large_tail(const HyperbolicSpace& space, double lambda, double r,
                       double* err) {
  if (r <= 0.0) throw DomainError("phi_large_tail: r must be > 0");
  const double rho = space.rho;
  const Complex il(0.0, lambda);
  const double w = std::exp(-2.0 * r);
  Complex coef(1.0, 0.0);
  Complex sum(1.0, 0.0);
  double wl = 1.0;
  double tail = 0.0;
  for (int l = 1; l < 400; ++l) {
    Complex num = (double(l) + rho - 1.0) * (double(l) + rho - 1.0 - il);
    Complex den = double(l) * (double(l) - il);
    coef *= num / den;
    wl *= w;
    Complex term = coef * wl;
    sum += term;
    double at = std::abs(term);
    if (at < 1e-17 * std::abs(sum) && l > 3) {
      tail = at * w / std::max(1e-3, 1.0 - w);
      break;
    }
    tail = at;
  }
  if (err) *err = tail;
  return std::exp((il - rho) * r) * sum;
}

namespace {

// Offline-derived Taylor coefficients of the Stanton-Tomas b~_m (see
// tools/derive_small_scale_coeffs.py). All carry the factor (n-3)(n-1), so
// they vanish identically on H^3.
double b1_coef(int n, int j) {
  const double f = double(n - 3) * double(n - 1);
  const double dn = n;
  switch (j) {
    case 0: return -f / (24.0 * dn);
    case 1: return f * (5.0 * dn - 1.0) / (1440.0 * dn);
    case 2: return -f * (35.0 * dn * dn + 14.0 * dn + 15.0) / (241920.0 * dn);
    case 3:
      return f * (5.0 * dn + 3.0) * (35.0 * dn * dn + 42.0 * dn + 67.0) /
             (43545600.0 * dn);
    default: return 0.0;
  }
}

double b2_coef(int n, int j) {
  const double f = double(n - 3) * double(n - 1) * double(n + 1);
  const double dn = n;
  const double den = dn * (dn + 2.0);
  switch (j) {
    case 0: return f * (5.0 * dn - 17.0) / (5760.0 * den);
    case 1: return -f * (35.0 * dn * dn - 98.0 * dn - 97.0) / (483840.0 * den);
    case 2:
      return f * (175.0 * dn * dn * dn - 245.0 * dn * dn - 1107.0 * dn -
                  1511.0) /
             (58060800.0 * den);
    default: return 0.0;
  }
}

}  // namespace

double small_scale_b1(int n, double r) {
  double r2 = r * r;
  return b1_coef(n, 0) + r2 * (b1_coef(n, 1) + r2 * (b1_coef(n, 2) + r2 * b1_coef(n, 3)));
}

double small_scale_b2(int n, double r) {
  double r2 = r * r;
  return b2_coef(n, 0) + r2 * (b2_coef(n, 1) + r2 * b2_coef(n, 2));
}

double small_scale_b3_at0(int n) {
  const double dn = n;
  const double f = double(n - 3) * double(n - 1) * double(n + 1) * double(n + 3);
  return -f * (35.0 * dn * dn - 252.0 * dn + 457.0) /
         (2903040.0 * dn * (dn + 2.0) * (dn + 4.0));
}

SphericalValue phi_small(const HyperbolicSpace& space, double lambda, double r,
                         int M, const PhiConfig& cfg) {
  if (r < 0.0 || r > cfg.r1)
    throw DomainError("phi_small: r outside [0, r1]");
  if (M < 1 || M > 3) throw DomainError("phi_small: M must be in {1,2,3}");
  const int n = space.n;
  const double rho = space.rho;
  const double nu0 = 0.5 * n - 1.0;
  const double z = lambda * r;

  double b0 = r == 0.0 ? 1.0 : std::pow(r / std::sinh(r), rho);
  double value = b0 * specfun::bessel_j_modified(nu0, z);
  if (M >= 2)
    value += r * r * small_scale_b1(n, r) *
             specfun::bessel_j_modified(nu0 + 1.0, z);
  if (M >= 3)
    value += r * r * r * r * small_scale_b2(n, r) *
             specfun::bessel_j_modified(nu0 + 2.0, z);

  // Remainder of the stated order; the prefactor uses the next coefficient
  // b~_M(0) so the estimate vanishes on H^3 where the series terminates. For
  // |lambda r| below the asymptotic regime the Bessel factor is capped by 1.
  double lead;
  switch (M) {
    case 1: lead = std::fabs(b1_coef(n, 0)); break;
    case 2: lead = std::fabs(b2_coef(n, 0)); break;
    default: lead = std::fabs(small_scale_b3_at0(n)); break;
  }
  const double nuM = M + 0.5 * n - 1.0;
  double c_env = std::tgamma(nuM + 1.0) * std::pow(2.0, nuM) *
                 std::sqrt(2.0 / kPi);
  double decay = std::min(
      1.0, c_env * std::pow(1.0 + std::fabs(z), -0.5 * (n - 1) - M));
  double err = 8.0 * lead * std::pow(r, 2 * M) * decay + 5e-16;
  return {lambda, r, Complex(value, 0.0), PhiMethod::SmallScaleSeries, err};
}

SphericalValue phi(const HyperbolicSpace& space, double lambda, double r,
                   const PhiConfig& cfg) {
  if (r < 0.0) throw DomainError("phi: r must be >= 0");
  if (r < cfg.r0 || std::fabs(lambda) < cfg.lambda_min)
    return phi_hc(space, Complex(lambda, 0.0), r, 1e-13);
  return phi_large(space, lambda, r);
}

double kunze_stein_weight(const HyperbolicSpace& space, double r) {
  if (r < 0.0) throw DomainError("kunze_stein_weight: r must be >= 0");
  if (r == 0.0) return 0.0;
  double phi0 = phi_hc(space, Complex(0.0, 0.0), r).value.real();
  return phi0 * std::pow(std::sinh(r), space.n - 1);
}

}  // namespace fracdisp::hn

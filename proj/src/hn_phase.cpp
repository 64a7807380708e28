#include "fracdisp/hn_phase.hpp"

#include <cmath>

#include "fracdisp/errors.hpp"

namespace fracdisp::hn_phase {

PhaseParams PhaseParams::make(double alpha, double rho, double R) {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw DomainError("PhaseParams: alpha must be in (0, 2]");
  if (!(rho > 0.0)) throw DomainError("PhaseParams: rho must be > 0");
  if (R < 0.0) throw DomainError("PhaseParams: R must be >= 0");
  return PhaseParams{alpha, rho, R};
}

double psi(const PhaseParams& p, double l) {
  return std::pow(l * l + p.rho * p.rho, 0.5 * p.alpha) - p.R * l;
}

double theta(const PhaseParams& p, double l) {
  return p.alpha * l * std::pow(l * l + p.rho * p.rho, 0.5 * p.alpha - 1.0);
}

double dpsi(const PhaseParams& p, double l) { return theta(p, l) - p.R; }

double d2psi(const PhaseParams& p, double l) {
  double s = l * l + p.rho * p.rho;
  return p.alpha * std::pow(s, 0.5 * p.alpha - 2.0) *
         ((p.alpha - 1.0) * l * l + p.rho * p.rho);
}

double d3psi(const PhaseParams& p, double l) {
  double s = l * l + p.rho * p.rho;
  return p.alpha * (2.0 - p.alpha) * l *
         ((1.0 - p.alpha) * l * l - 3.0 * p.rho * p.rho) *
         std::pow(s, 0.5 * p.alpha - 3.0);
}

namespace {

// Bisection + Newton polish for theta(l) = R on [lo, hi] where theta is
// monotone (increasing or decreasing).
double solve_theta(const PhaseParams& p, double R, double lo, double hi,
                   bool increasing) {
  double flo = theta(p, lo) - R;
  double fhi = theta(p, hi) - R;
  if (increasing ? flo > 0.0 : flo < 0.0) return lo;
  if (increasing ? fhi < 0.0 : fhi > 0.0)
    throw ConvergenceError("stationary_points: root bracket invalid");
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double fm = theta(p, mid) - R;
    bool left = increasing ? (fm > 0.0) : (fm < 0.0);
    if (left)
      hi = mid;
    else
      lo = mid;
    if (hi - lo < 1e-16 * (1.0 + std::fabs(lo))) break;
  }
  double x = 0.5 * (lo + hi);
  for (int it = 0; it < 60; ++it) {
    double f = theta(p, x) - R;
    if (std::fabs(f) <= 1e-14 * std::max(1.0, std::fabs(R))) break;
    double d = d2psi(p, x);  // theta' = psi''
    if (d == 0.0) break;
    double step = f / d;
    double xn = x - step;
    if (xn < lo || xn > hi) break;  // keep the bisection bracket
    x = xn;
    if (std::fabs(step) < 1e-17 * (1.0 + std::fabs(x))) break;
  }
  return x;
}

}  // namespace

PhaseReport stationary_points(const PhaseParams& p) {
  if (p.alpha == 1.0)
    throw UnsupportedAlpha("stationary_points: alpha = 1 (half-wave) excluded");
  PhaseReport rep;
  const double R = p.R;

  if (p.alpha > 1.0) {
    if (R == 0.0) {
      rep.regime = PhaseRegime::OriginOnly;
      rep.lambda1 = 0.0;
      rep.residuals.push_back(0.0);
      return rep;
    }
    // theta strictly increasing onto [0, inf); theta(l) <= alpha l^{alpha-1}
    // gives the lower bound lambda1 >= (R/alpha)^{1/(alpha-1)}.
    double lo = std::pow(R / p.alpha, 1.0 / (p.alpha - 1.0));
    double hi = std::max(1.0, 2.0 * lo);
    for (int it = 0; it < 200 && theta(p, hi) < R; ++it) hi *= 2.0;
    double l1 = solve_theta(p, R, lo, hi, true);
    rep.regime = PhaseRegime::SingleRootAlphaLarge;
    rep.lambda1 = l1;
    rep.residuals.push_back(std::fabs(theta(p, l1) - R));
    return rep;
  }

  // alpha < 1
  const double l0 = p.rho / std::sqrt(1.0 - p.alpha);
  const double th0 = theta(p, l0);
  rep.lambda0 = l0;
  rep.theta0 = th0;
  if (R == 0.0) {
    rep.regime = PhaseRegime::OriginOnly;
    rep.lambda1 = 0.0;
    rep.residuals.push_back(0.0);
    return rep;
  }
  const double tol_deg = 1e-9 * std::max(1.0, th0);
  if (std::fabs(R - th0) <= tol_deg) {
    rep.regime = PhaseRegime::DegenerateRoot;
    rep.lambda1 = l0;
    rep.lambda2 = l0;
    rep.residuals.push_back(std::fabs(theta(p, l0) - R));
    return rep;
  }
  if (R > th0) {
    rep.regime = PhaseRegime::NoRoot;
    return rep;
  }
  // two roots; the remark theta(l) <= alpha (l^2+rho^2)^{-(1-alpha)/2} gives
  // lambda2 <= (R/alpha)^{-1/(1-alpha)}, doubled for a safe bracket.
  double l1 = solve_theta(p, R, 0.0, l0, true);
  double upper = 2.0 * std::pow(R / p.alpha, -1.0 / (1.0 - p.alpha));
  for (int it = 0; it < 200 && theta(p, upper) > R; ++it) upper *= 2.0;
  double l2 = solve_theta(p, R, l0, upper, false);
  rep.regime = PhaseRegime::TwoRoots;
  rep.lambda1 = l1;
  rep.lambda2 = l2;
  rep.residuals.push_back(std::fabs(theta(p, l1) - R));
  rep.residuals.push_back(std::fabs(theta(p, l2) - R));
  return rep;
}

namespace {

struct Band {
  double lo = 0.0, hi = 0.0;
  bool any = false;
  void add(double x) {
    if (!any) {
      lo = hi = x;
      any = true;
    } else {
      lo = std::min(lo, x);
      hi = std::max(hi, x);
    }
  }
};

Band comparability_band(const PhaseParams& p, double beta,
                        const ComparabilityGrid& g, int points,
                        const PhaseReport& rep) {
  Band band;
  for (int i = 0; i < points; ++i) {
    double x = g.log_spaced
                   ? g.lo * std::pow(g.hi / g.lo, double(i) / (points - 1))
                   : g.lo + (g.hi - g.lo) * double(i) / (points - 1);
    // exclude the windows around the stationary points
    bool excluded = false;
    for (auto root : {rep.lambda1, rep.lambda2}) {
      if (!root || *root <= 0.0) continue;
      if (x > beta * *root && x < *root / beta) excluded = true;
    }
    if (excluded) continue;

    double comparator;
    if (p.alpha > 1.0) {
      double l1 = rep.lambda1.value_or(0.0);
      comparator = (x + l1) / std::pow(x + l1 + 1.0, 2.0 - p.alpha);
    } else if (rep.regime == PhaseRegime::TwoRoots) {
      double l0 = *rep.lambda0;
      if (x < l0) continue;  // estimate stated on [lambda0, inf)
      comparator =
          std::pow(std::min(x, *rep.lambda2), -(1.0 - p.alpha));
    } else {
      comparator = x / std::pow(x + 1.0, 2.0 - p.alpha);  // R = 0 case
    }
    if (comparator <= 0.0) continue;
    double v = std::fabs(dpsi(p, x)) / comparator;
    if (v > 0.0) band.add(v);
  }
  return band;
}

}  // namespace

ComparabilityReport verify_phase_comparability(const PhaseParams& p,
                                               double beta,
                                               const ComparabilityGrid& grid,
                                               double band_cap) {
  if (!(beta > 0.0 && beta < 1.0))
    throw DomainError("verify_phase_comparability: beta must be in (0,1)");
  PhaseReport rep = stationary_points(p);
  Band base = comparability_band(p, beta, grid, grid.points, rep);
  Band fine = comparability_band(p, beta, grid, 2 * grid.points, rep);
  ComparabilityReport out{};
  if (!base.any || !fine.any)
    throw DomainError("verify_phase_comparability: empty grid after exclusion");
  out.ratio_min = base.lo;
  out.ratio_max = base.hi;
  out.band = base.hi / base.lo;
  out.band_refined = fine.hi / fine.lo;
  out.n_points = grid.points;
  out.stable = std::fabs(out.band_refined - out.band) < 0.10 * out.band;
  out.pass = out.band <= band_cap && out.stable;
  return out;
}

}  // namespace fracdisp::hn_phase

#include "fracdisp/estimates.hpp"

#include <cmath>

#include "fracdisp/errors.hpp"

namespace fracdisp::estimates {

ExponentM exponent_m(int n, double alpha, double sigma) {
  if (n < 2) throw DomainError("exponent_m: n >= 2 required");
  if (!(alpha > 1.0 && alpha < 2.0))
    throw DomainError("exponent_m: alpha must be in (1, 2)");
  if (!(sigma >= 0.0 && sigma <= 0.5 * n))
    throw DomainError("exponent_m: sigma must be in [0, n/2]");
  double m1 = 2.0 * (n - sigma) / alpha;
  double m2 = (n - 2.0 * sigma) / (alpha - 1.0);
  ExponentM out;
  out.m = std::max(m1, m2);
  if (m1 == m2)
    out.branch = MBranch::Tie;
  else
    out.branch = m1 > m2 ? MBranch::LargeSigma : MBranch::SmallSigma;
  return out;
}

bool admissible_alpha_large(int n, double alpha, const AdmissiblePoint& pt) {
  if (!(alpha > 1.0 && alpha < 2.0))
    throw DomainError("admissible_alpha_large: alpha must be in (1, 2)");
  const double ip = pt.inv_p, iq = pt.inv_q, s = pt.aux;
  if (ip == 0.0 && iq == 0.5 && s == 0.0) return true;  // extra corner point
  if (!(ip > 0.0 && ip <= 0.5)) return false;
  if (!(iq >= 0.0 && iq < 0.5)) return false;
  if (!(s >= 0.0 && s <= 0.5 * n)) return false;
  if (alpha * ip + n * iq < 0.5 * (n - s)) return false;
  if (2.0 * (alpha - 1.0) * ip + n * iq < 0.5 * (n - 2.0 * s)) return false;
  return true;
}

double sigma_of(int n, double beta, double inv_q) {
  return (0.5 - inv_q) * (1.0 - 0.5 * beta) * n;
}

double hat_alpha(int n, double alpha) {
  return 6.0 * alpha / ((2.0 - alpha) * n + 3.0 * alpha);
}

double inv_Q1(double alpha, double beta) {
  return 0.5 - (1.0 / 3.0) * (2.0 - alpha) / (2.0 - beta);
}

double inv_Q2(double alpha, double beta) {
  return 0.5 - 0.5 * (2.0 - alpha) / (2.0 - beta);
}

bool admissible_alpha_small(int n, double alpha, const AdmissiblePoint& pt) {
  if (n < 3)
    throw DomainError(
        "admissible_alpha_small: n >= 3 (the n = 2 region is the separate "
        "remark predicate)");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw DomainError("admissible_alpha_small: alpha must be in (0, 1)");
  const double ip = pt.inv_p, iq = pt.inv_q, beta = pt.aux;
  if (!(ip >= 0.0 && ip <= 0.5)) return false;
  if (!(iq >= 0.0 && iq <= 0.5)) return false;
  if (!(beta >= 0.0 && beta <= alpha)) return false;
  if (ip == 0.5 && iq == 0.0 && beta == 2.0 * alpha / n) return false;
  double lower = (0.5 - iq) * (beta / alpha) * (0.5 * n);
  double upper = (0.5 - iq) * ((2.0 - beta) / (2.0 - alpha)) * 1.5;
  return lower <= ip && ip <= upper;
}

bool admissible_alpha_small_n2(double, const AdmissiblePoint&) {
  throw Unimplemented(
      "admissible_alpha_small_n2: the n = 2 region is documented but not "
      "implemented (edge-inclusion convention unresolved)");
}

bool admissible_tree(const AdmissiblePoint& pt) {
  const double ip = pt.inv_p, iq = pt.inv_q;
  if (ip == 0.0 && iq == 0.5) return true;
  return ip >= 0.0 && ip <= 0.5 && iq >= 0.0 && iq < 0.5;
}

DecayFit fit_decay(const std::vector<std::pair<double, double>>& samples,
                   std::pair<double, double> window) {
  std::vector<std::pair<double, double>> pts;
  for (const auto& [t, m] : samples) {
    if (t < window.first || t > window.second) continue;
    if (!(m > 0.0))
      throw NonPositiveMagnitude("fit_decay: magnitudes must be positive");
    if (!(t > 0.0)) throw DomainError("fit_decay: t must be positive");
    pts.emplace_back(std::log(t), std::log(m));
  }
  if (pts.size() < 4)
    throw InsufficientData("fit_decay: need >= 4 samples inside the window");

  double sx = 0, sy = 0;
  for (auto& [x, y] : pts) {
    sx += x;
    sy += y;
  }
  const double mx = sx / pts.size(), my = sy / pts.size();
  double sxx = 0, sxy = 0, syy = 0;
  for (auto& [x, y] : pts) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw InsufficientData("fit_decay: degenerate t window");
  DecayFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ssres = syy - sxy * sxy / sxx;
  fit.r2 = syy > 0.0 ? 1.0 - ssres / syy : 1.0;
  fit.window = window;
  fit.n_points = int(pts.size());
  double tmin = std::exp(pts.front().first), tmax = tmin;
  for (auto& [x, y] : pts) {
    tmin = std::min(tmin, std::exp(x));
    tmax = std::max(tmax, std::exp(x));
  }
  fit.conclusive = fit.r2 >= 0.95 && tmax >= 10.0 * tmin;
  return fit;
}

}  // namespace fracdisp::estimates

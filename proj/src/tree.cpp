#include "fracdisp/tree.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

#include "fracdisp/errors.hpp"
#include "fracdisp/estimates.hpp"
#include "fracdisp/oscquad.hpp"

namespace fracdisp::tree {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

Tree Tree::make(int Q) {
  if (Q < 2) throw DomainError("Tree: Q must be >= 2");
  double sq = std::sqrt(double(Q));
  return Tree{Q, 2.0 * kPi / std::log(double(Q)), 2.0 / (sq + 1.0 / sq)};
}

double tree_gamma(const Tree& t, double lambda) {
  return t.gamma0 * std::cos(lambda * std::log(double(t.Q)));
}

Complex tree_c(const Tree& t, double lambda) {
  const double lnQ = std::log(double(t.Q));
  const double sq = std::sqrt(double(t.Q));
  // poles where Q^{i lambda} = Q^{-i lambda}, i.e. lambda in (pi/lnQ) Z
  double k = lambda * lnQ / kPi;
  if (std::fabs(k - std::round(k)) < 1e-13)
    throw PoleError("tree_c: pole at lambda in (pi/ln Q) Z");
  Complex qil = std::exp(Complex(0.0, lambda * lnQ));  // Q^{i lambda}
  Complex num = sq * qil - (1.0 / sq) / qil;
  Complex den = (sq + 1.0 / sq) * (qil - 1.0 / qil);
  return num / den;
}

TreePhiValue tree_phi(const Tree& t, double lambda, int r) {
  if (r < 0) throw DomainError("tree_phi: r must be >= 0");
  const double lnQ = std::log(double(t.Q));
  auto eval = [&](double l) -> Complex {
    Complex cl = tree_c(t, l);
    Complex cm = tree_c(t, -l);
    Complex e = std::exp(Complex(-0.5, l) * (lnQ * double(r)));
    Complex em = std::exp(Complex(-0.5, -l) * (lnQ * double(r)));
    return cl * e + cm * em;
  };
  double k = lambda * lnQ / kPi;
  if (std::fabs(k - std::round(k)) < 1e-13) {
    const double h = 1e-6;
    Complex v = 0.5 * (eval(lambda + h) + eval(lambda - h));
    return {v, true};
  }
  return {eval(lambda), false};
}

namespace {

double tree_psi(const Tree& t, double alpha, double l) {
  return std::pow(1.0 - t.gamma0 * std::cos(l), 0.5 * alpha);
}

double tree_dpsi(const Tree& t, double alpha, double l) {
  return 0.5 * alpha * t.gamma0 *
         std::pow(1.0 - t.gamma0 * std::cos(l), 0.5 * alpha - 1.0) *
         std::sin(l);
}

// theta(lambda) = -(alpha/2) gamma0 cos^2 l + cos l - (1 - alpha/2) gamma0,
// the sign carrier of psi''.
double tree_theta(const Tree& t, double alpha, double l) {
  double c = std::cos(l);
  return -0.5 * alpha * t.gamma0 * c * c + c - (1.0 - 0.5 * alpha) * t.gamma0;
}

// monotone bisection for f on [lo, hi]
template <class F>
double bisect(F&& f, double lo, double hi, bool increasing) {
  for (int it = 0; it < 120; ++it) {
    double mid = 0.5 * (lo + hi);
    double v = f(mid);
    bool left = increasing ? (v > 0.0) : (v < 0.0);
    if (left)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TreePhaseReport tree_phase_report(const Tree& t, double alpha, double time,
                                  double r) {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw DomainError("tree_phase_report: alpha must be in (0, 2]");
  if (!(time > 0.0)) throw DomainError("tree_phase_report: t must be > 0");
  if (r < 0.0) throw DomainError("tree_phase_report: r must be >= 0");

  // theta(0) = 1 - gamma0 > 0, theta(pi/2) = -(1-alpha/2) gamma0 <= 0;
  // unique zero lambda0 in (0, pi/2].
  double l0 = bisect([&](double l) { return tree_theta(t, alpha, l); }, 0.0,
                     0.5 * kPi, false);
  double M = tree_dpsi(t, alpha, l0);
  TreePhaseReport rep;
  rep.M = M;
  rep.lambda0 = l0;
  const double mu = r / time;
  const double tol = 1e-9;
  if (mu > M + tol) {
    rep.stationary = TreeStationaryCase::NoStationary;
    return rep;
  }
  if (std::fabs(mu - M) <= tol) {
    rep.stationary = TreeStationaryCase::OneStationary;
    rep.lambda1 = l0;
    return rep;
  }
  rep.stationary = TreeStationaryCase::TwoStationary;
  // psi' increases from 0 to M on [0, lambda0], decreases back to 0 on
  // [lambda0, pi].
  rep.lambda1 = mu == 0.0
                    ? 0.0
                    : bisect([&](double l) { return tree_dpsi(t, alpha, l) - mu; },
                             0.0, l0, true);
  rep.lambda2 = mu == 0.0
                    ? kPi
                    : bisect([&](double l) { return tree_dpsi(t, alpha, l) - mu; },
                             l0, kPi, false);
  return rep;
}

Complex TreeKernel::raw_integral(double alpha, double time, int r, double tol,
                                 double* err) const {
  const Tree& t = tree_;
  const double sq = std::sqrt(double(t.Q));
  oscquad::OscProblem pb;
  pb.domain = oscquad::Domain::Circle;
  pb.period = 2.0 * kPi;
  pb.amplitude = [t, sq, r](double l) -> Complex {
    Complex den = sq * std::exp(Complex(0.0, l)) -
                  (1.0 / sq) * std::exp(Complex(0.0, -l));
    Complex plane = std::exp(Complex(0.0, -double(r) * l));
    return std::sin(l) / den * plane;
  };
  pb.phase = [t, alpha, time](double l) {
    return time * tree_psi(t, alpha, l);
  };
  auto res = oscquad::integrate_circle(pb, tol);
  if (!res.converged)
    throw NonConvergence("tree_kernel: circle quadrature did not converge");
  *err = res.err_estimate;
  return res.value;
}

TreeKernel::TreeKernel(const Tree& t) : tree_(t) {
  double err = 0.0;
  Complex i0 = raw_integral(2.0, 0.0, 0, 1e-14, &err);
  if (std::abs(i0) < 1e-12)
    throw CalibrationError("TreeKernel: degenerate identity integral");
  norm_ = 1.0 / i0;
  // identity-propagator self-test pins the normalization
  for (int r = 1; r <= 8; ++r) {
    Complex kr = norm_ * std::pow(1.0 / std::sqrt(double(t.Q)), r) *
                 raw_integral(2.0, 0.0, r, 1e-14, &err);
    if (std::abs(kr) > 1e-12)
      throw CalibrationError("TreeKernel: identity self-test failed at r = " +
                             std::to_string(r));
  }
}

TreeKernelSample TreeKernel::sample(double alpha, double time, int r,
                                    double tol) const {
  if (r < 0) throw DomainError("tree_kernel: r must be >= 0");
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw DomainError("tree_kernel: alpha must be in (0, 2]");
  double err = 0.0;
  Complex v = raw_integral(alpha, time, r, tol, &err);
  double f = std::pow(1.0 / std::sqrt(double(tree_.Q)), r);
  return {time, r, norm_ * f * v, std::abs(norm_) * f * err};
}

TreeKernelSample tree_kernel(const Tree& t, double alpha, double time, int r,
                             double tol) {
  static std::mutex mu;
  static std::map<int, TreeKernel> cache;
  const TreeKernel* engine;
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(t.Q);
    if (it == cache.end()) it = cache.emplace(t.Q, TreeKernel(t)).first;
    engine = &it->second;
  }
  return engine->sample(alpha, time, r, tol);
}

std::uint64_t sphere_size(const Tree& t, int r) {
  if (r < 0) throw DomainError("sphere_size: r must be >= 0");
  if (r == 0) return 1;
  std::uint64_t v = std::uint64_t(t.Q) + 1;
  for (int i = 1; i < r; ++i) {
    if (v > UINT64_MAX / std::uint64_t(t.Q))
      throw DomainError("sphere_size: 64-bit overflow; use sphere_size_d");
    v *= std::uint64_t(t.Q);
  }
  return v;
}

double sphere_size_d(const Tree& t, int r) {
  if (r < 0) throw DomainError("sphere_size_d: r must be >= 0");
  if (r == 0) return 1.0;
  return double(t.Q + 1) * std::pow(double(t.Q), r - 1);
}

double tree_lq_norm(const Tree& t, const std::vector<Complex>& kernel_values,
                    double q, double tol, double* err_out) {
  if (q <= 2.0)
    throw TailError("tree_lq_norm: tail diverges for q <= 2 (geometric ratio "
                    ">= 1)");
  if (kernel_values.empty())
    throw DomainError("tree_lq_norm: empty kernel values");
  const int r_max = int(kernel_values.size()) - 1;
  double sum = 0.0;
  double c1 = 0.0;
  for (int r = 0; r <= r_max; ++r) {
    double m = std::abs(kernel_values[r]);
    sum += sphere_size_d(t, r) * std::pow(m, q);
    c1 = std::max(c1, m * std::pow(double(t.Q), 0.5 * r));
  }
  // tail bound from |k(r)| <= C1 Q^{-r/2}:
  //    sum_{r > r_max} (Q+1)/Q * Q^r * C1^q Q^{-rq/2}
  double ratio = std::pow(double(t.Q), 1.0 - 0.5 * q);
  double first = double(t.Q + 1) / double(t.Q) *
                 std::pow(double(t.Q), r_max + 1) *
                 std::pow(c1 * std::pow(double(t.Q), -0.5 * (r_max + 1)), q);
  double tail = first / (1.0 - ratio);
  double norm = std::pow(sum, 1.0 / q);
  double norm_hi = std::pow(sum + tail, 1.0 / q);
  if (norm_hi - norm > tol)
    throw TailError("tree_lq_norm: truncated tail bound exceeds tolerance");
  if (err_out) *err_out = norm_hi - norm;
  return norm;
}

TreeVerificationReport verify_tree_estimates(const Tree& t, double alpha,
                                             const std::vector<double>& t_grid,
                                             double tol, double slope_cap) {
  if (t_grid.size() < 4)
    throw DomainError("verify_tree_estimates: need >= 4 grid times");
  double tmin = t_grid.front(), tmax = t_grid.front();
  for (double x : t_grid) {
    if (x < 1.0)
      throw DomainError("verify_tree_estimates: t grid must satisfy t >= 1");
    tmin = std::min(tmin, x);
    tmax = std::max(tmax, x);
  }
  if (tmax < 10.0 * tmin)
    throw DomainError("verify_tree_estimates: t grid must span >= 1 decade");

  TreeKernel engine(t);
  auto rep0 = tree_phase_report(t, alpha, 1.0, 0.0);
  const double c = 0.5 * rep0.M;

  TreeVerificationReport out;
  out.c_used = c;
  out.slope_cap = slope_cap;
  out.uniform_ratio = 0.0;

  std::vector<std::pair<double, double>> front_samples;
  std::map<int, std::vector<std::pair<double, double>>> lq_samples;
  const std::vector<int> qs{3, 4, 6};

  for (double tv : t_grid) {
    int r_front = std::max(2, int(std::floor(c * tv)));
    // kernel values out to a tail radius where Q^{-r/2} is negligible
    int r_tail = r_front + int(std::ceil(2.0 * std::log(1.0 / 1e-14) /
                                         std::log(double(t.Q)))) + 8;
    std::vector<Complex> kv(r_tail + 1);
    double sup = 0.0;
    for (int r = 0; r <= r_tail; ++r) {
      auto s = engine.sample(alpha, tv, r, tol);
      kv[r] = s.value;
      double ratio = std::abs(s.value) * std::pow(double(t.Q), 0.5 * r);
      out.uniform_ratio = std::max(out.uniform_ratio, ratio);
      if (r <= r_front) sup = std::max(sup, ratio / (1.0 + r));
    }
    front_samples.emplace_back(tv, sup);
    for (int q : qs)
      lq_samples[q].emplace_back(tv, tree_lq_norm(t, kv, q, 1e-8));
  }

  auto window = std::make_pair(tmin, tmax);
  auto ff = estimates::fit_decay(front_samples, window);
  out.wavefront_fit = {ff.slope, ff.r2};
  bool pass = ff.slope <= slope_cap;
  for (int q : qs) {
    auto f = estimates::fit_decay(lq_samples[q], window);
    out.lq_fits[q] = {f.slope, f.r2};
    pass = pass && f.slope <= slope_cap;
  }
  out.pass = pass;
  return out;
}

}  // namespace fracdisp::tree

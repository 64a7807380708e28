#include "fracdisp/hn_kernel.hpp"

#include <cmath>
#include <mutex>
#include <unordered_map>

#include "fracdisp/errors.hpp"
#include "fracdisp/hn_phase.hpp"
#include "fracdisp/specfun.hpp"

namespace fracdisp::hn_kernel {

namespace {
constexpr double kPi = 3.14159265358979323846;

bool near(double x, double y) {
  return std::fabs(x - y) <= 1e-12 * std::max({1.0, std::fabs(x), std::fabs(y)});
}
}  // namespace

KernelQuery KernelQuery::make(const HyperbolicSpace& space, double alpha,
                              double sigma, double t, double r) {
  if (!(alpha > 0.0 && alpha < 2.0) || alpha == 1.0)
    throw DomainError("KernelQuery: alpha must be in (0,2) minus {1}");
  if (sigma < 0.0) throw DomainError("KernelQuery: sigma must be >= 0");
  if (t == 0.0) throw DomainError("KernelQuery: t must be nonzero");
  if (r < 0.0) throw DomainError("KernelQuery: r must be >= 0");
  return KernelQuery{space, alpha, sigma, t, r};
}

std::string regime_name(RegimeTag tag) {
  switch (tag) {
    case RegimeTag::S111: return "1.1.1";
    case RegimeTag::S112: return "1.1.2";
    case RegimeTag::S211: return "2.1.1";
    case RegimeTag::S212: return "2.1.2";
    case RegimeTag::S121: return "1.2.1";
    case RegimeTag::S122: return "1.2.2";
    case RegimeTag::S123: return "1.2.3";
    case RegimeTag::S221: return "2.2.1";
    case RegimeTag::S222: return "2.2.2";
    default: return "2.2.3";
  }
}

// ---------------------------------------------------------------------------
// amplitude machinery
// ---------------------------------------------------------------------------
namespace {

// 1/conj(c(lambda)) = (Gamma(rho)/Gamma(2rho)) (-i lambda)
//                     Gamma(rho - i lambda) / Gamma(1 - i lambda),
// written against Gamma(1 - i lambda) so lambda -> 0 stays regular.
struct AmplitudeContext {
  HyperbolicSpace space;
  double sigma;
  double r;
  hn::PhiConfig phi_cfg;
  double kinv;  // Gamma(rho)/Gamma(2rho)
  mutable std::unordered_map<double, double> memo;  // per-(r) node cache

  explicit AmplitudeContext(const HyperbolicSpace& s, double sig, double rr)
      : space(s), sigma(sig), r(rr) {
    kinv = std::tgamma(s.rho) / std::tgamma(2.0 * s.rho);
  }

  double symbol(double al) const {  // (l^2+rho^2)^{-sigma/2}
    return std::pow(al * al + space.rho * space.rho, -0.5 * sigma);
  }

  double eval(double lambda) const {
    double al = std::fabs(lambda);
    auto it = memo.find(al);
    if (it != memo.end()) return it->second;
    double v;
    if (al == 0.0) {
      v = 0.0;  // Plancherel double zero
    } else if (r < phi_cfg.r0) {
      double phi = r == 0.0
                       ? 1.0
                       : hn::phi_small(space, al, r, 3, phi_cfg).value.real();
      v = symbol(al) * phi * hn::plancherel_density(space, al);
    } else {
      // symbol * 2 Re[ Phi_lambda(r) / conj(c(lambda)) ]; the e^{-2lr}
      // expansion of Phi and log-gamma for 1/conj(c) stay stable at the
      // large |lambda| the oscillatory tails reach
      const double rho = space.rho;
      Complex il(0.0, al);
      Complex big_phi = hn::phi_large_tail(space, al, r);
      Complex invc =
          kinv * Complex(0.0, -al) *
          std::exp(specfun::complex_log_gamma_half_plane(rho - il) -
                   specfun::complex_log_gamma_half_plane(1.0 - il));
      v = symbol(al) * 2.0 * (big_phi * invc).real();
    }
    memo.emplace(al, v);
    return v;
  }
};

double phase_cutoff_scale(double alpha, double t) {
  // Lambda below which the phase does not complete a full turn per octave;
  // the Gaussian regularizer schedule must start above it.
  return std::pow(2.0 * kPi / (t * (std::pow(2.0, alpha) - 1.0)), 1.0 / alpha);
}

}  // namespace

// ---------------------------------------------------------------------------
// calibration
// ---------------------------------------------------------------------------

double heat_kernel(const HyperbolicSpace& space, double t, double r) {
  if (!(t > 0.0)) throw DomainError("heat_kernel: t must be > 0");
  double cn = calibrate_constant(space);
  double lmax = std::sqrt(42.0 / t) + 2.0;
  AmplitudeContext ctx(space, 0.0, r);
  auto f = [&](double l) -> Complex {
    return std::exp(-t * (l * l + space.rho * space.rho)) * ctx.eval(l);
  };
  auto pr = oscquad::adaptive_gk(f, -lmax, lmax, 1e-12);
  return cn * pr.value.real();
}

namespace {

double heat_mass(const HyperbolicSpace& space, double t) {
  const int n = space.n;
  const double rho = space.rho;
  double lmax = std::sqrt(42.0 / t) + 2.0;
  auto g = [&](double r) -> Complex {
    AmplitudeContext ctx(space, 0.0, r);
    auto f = [&](double l) -> Complex {
      return std::exp(-t * (l * l + rho * rho)) * ctx.eval(l);
    };
    // the sinh^{n-1} weight amplifies the inner absolute error by e^{(n-1)r};
    // scale the inner tolerance with the Gaussian decay of the heat kernel
    double inner_tol = std::max(1e-13 * std::exp(-0.25 * r * r / t),
                                1e-17 * (1.0 + r) * std::exp(-rho * r));
    auto inner = oscquad::adaptive_gk(f, -lmax, lmax, inner_tol);
    return inner.value.real() * std::pow(std::sinh(r), n - 1);
  };
  // Truncate before the zone where the cancellation noise of the inner
  // integral, amplified by sinh^{n-1} r, exceeds the true Gaussian tail;
  // beyond 2 sqrt(30 t) the weighted integrand cannot be resolved in double
  // precision, and the true mass there is negligible.
  double rmax = std::min(2.0 * rho * t + 2.0 * std::sqrt(26.0 * t),
                         2.0 * std::sqrt(30.0 * t));
  auto outer = oscquad::adaptive_gk(g, 0.0, rmax, 3e-9);
  double omega = 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
  return omega * outer.value.real();
}

}  // namespace

double calibrate_constant(const HyperbolicSpace& space) {
  static std::mutex mu;
  static std::map<int, double> cache;
  {
    std::lock_guard<std::mutex> lk(mu);
    auto it = cache.find(space.n);
    if (it != cache.end()) return it->second;
  }
  double c = 0.0;
  bool first = true;
  for (double t : {0.5, 1.0, 2.0}) {
    double cn = 1.0 / heat_mass(space, t);
    if (first) {
      c = cn;
      first = false;
    } else if (std::fabs(cn - c) > 1e-6 * std::fabs(c)) {
      throw CalibrationError(
          "calibrate_constant: heat masses disagree across t");
    }
  }
  std::lock_guard<std::mutex> lk(mu);
  cache.emplace(space.n, c);
  return c;
}

// ---------------------------------------------------------------------------
// kernel evaluation
// ---------------------------------------------------------------------------

KernelSample kernel_sigma(const KernelQuery& q, double tol) {
  const double cn = calibrate_constant(q.space);
  const double tabs = std::fabs(q.t);
  const double R = q.r / tabs;
  const double rho = q.space.rho;

  AmplitudeContext ctx(q.space, q.sigma, q.r);

  oscquad::OscProblem pb;
  pb.domain = oscquad::Domain::FullLine;
  pb.growth_order = q.space.n - 1 - q.sigma;
  pb.amplitude = [&ctx](double l) { return Complex(ctx.eval(l), 0.0); };
  pb.phase = [&q, tabs, rho](double l) {
    return tabs * std::pow(l * l + rho * rho, 0.5 * q.alpha);
  };
  // plane-wave heuristic: the amplitude oscillates like e^{+-i lambda r}, so
  // the stationary hints come from the combined phase at R = r/|t|
  auto ph = hn_phase::stationary_points(
      hn_phase::PhaseParams::make(q.alpha, rho, R));
  for (auto root : {ph.lambda1, ph.lambda2}) {
    if (root && *root > 0.0) {
      pb.stationary_hints.push_back(-*root);
      pb.stationary_hints.push_back(*root);
    }
  }
  std::sort(pb.stationary_hints.begin(), pb.stationary_hints.end());

  oscquad::EngineConfig cfg;
  if (q.r > 0.0) cfg.max_panel_width = 8.0 / q.r;
  double maxhint = pb.stationary_hints.empty() ? 0.0
                                               : std::fabs(pb.stationary_hints.back());
  cfg.reg_cutoff0 = std::max({4.0, 2.0 * maxhint + 1.0,
                              phase_cutoff_scale(q.alpha, tabs)});

  auto res = oscquad::integrate(pb, tol / cn, cfg);
  if (!res.converged && pb.growth_order >= -1.0) {
    // push the regularizer schedule further out once
    cfg.reg_cutoff0 *= 4.0;
    auto retry = oscquad::integrate(pb, tol / cn, cfg);
    if (retry.err_estimate < res.err_estimate) res = std::move(retry);
  }

  Complex value = cn * res.value;
  if (q.t < 0.0) value = std::conj(value);
  double err = cn * res.err_estimate;

  // fold in the small-scale phi truncation error when it is not identically
  // zero (it vanishes on H^3)
  if (q.r > 0.0 && q.r < ctx.phi_cfg.r0 && q.space.n != 3) {
    double lead = std::fabs(hn::small_scale_b3_at0(q.space.n));
    double nu = 0.5 * (q.space.n - 1) + 3.0;
    auto fe = [&](double l) -> Complex {
      return ctx.symbol(l) * hn::plancherel_density(q.space, l) *
             std::pow(1.0 + l * q.r, -nu);
    };
    double lcap = 8.0 * cfg.reg_cutoff0;
    auto pe = oscquad::adaptive_gk(fe, 0.0, lcap, 1e-6);
    err += cn * 16.0 * lead * std::pow(q.r, 6) * std::fabs(pe.value.real());
  }

  KernelSample out;
  out.query = q;
  out.value = value;
  out.err_estimate = err;
  out.converged = res.converged;
  out.regularization_trace = std::move(res.regularization_trace);
  out.in_theorem_range = q.alpha > 1.0 ? (q.sigma <= 0.5 * q.space.n)
                                       : (q.sigma >= 0.5 * q.space.n &&
                                          q.sigma <= double(q.space.n));
  out.boundary = false;
  out.bound = 0.0;
  out.ratio = 0.0;
  out.regime = RegimeTag::S111;
  if (out.in_theorem_range) {
    RegimeBound rb = theorem_bound(q);
    out.regime = rb.tag;
    out.boundary = rb.boundary;
    out.bound = rb.bound;
    out.ratio = rb.bound > 0.0 ? std::abs(value) / rb.bound : 0.0;
  }
  return out;
}

// ---------------------------------------------------------------------------
// theorem bounds
// ---------------------------------------------------------------------------

RegimeBound theorem_bound(const KernelQuery& q) {
  const int n = q.space.n;
  const double rho = q.space.rho;
  const double t = std::fabs(q.t);
  const double r = q.r;
  const double a = q.alpha;
  const double s = q.sigma;

  if (a > 1.0) {
    if (!(s >= 0.0 && s <= 0.5 * n))
      throw OutOfTheoremRange("theorem_bound: need 0 <= sigma <= n/2 for "
                              "1 < alpha < 2");
    const double w = (n - 2.0 * s) / (2.0 * (a - 1.0));
    if (t >= std::max(1.0, r)) {
      bool bd = near(t, std::max(1.0, r));
      return {RegimeTag::S111,
              std::pow(t, -1.5) * (1.0 + r) * std::exp(-rho * r), bd};
    }
    if (r >= std::max(1.0, t)) {
      bool bd = near(r, std::max(1.0, t));
      return {RegimeTag::S112,
              std::pow(t, -w) * std::pow(r, w - 0.5) * std::exp(-rho * r), bd};
    }
    // r < 1 and t < 1
    double ra = std::pow(r, a);
    if (ra <= t) {
      return {RegimeTag::S211, std::pow(t, -(n - s) / a), near(ra, t)};
    }
    return {RegimeTag::S212, std::pow(t, -w) * std::pow(r, w - 0.5 * n),
            false};
  }

  // 0 < alpha < 1
  if (!(s >= 0.5 * n && s <= double(n)))
    throw OutOfTheoremRange("theorem_bound: need n/2 <= sigma <= n for "
                            "0 < alpha < 1");
  const double w = (2.0 * s - n) / (2.0 * (1.0 - a));
  const int N = std::max(2, int(std::floor(0.5 * (n + 1) - s)) + 1);
  // theta0 from the phase module
  const double l0 = rho / std::sqrt(1.0 - a);
  const double th0 =
      hn_phase::theta(hn_phase::PhaseParams::make(a, rho, 0.0), l0);

  if (r >= 1.0) {
    const double mu = r / t;
    if (mu >= 2.0 * th0)
      return {RegimeTag::S121, std::pow(r, -double(N)) * std::exp(-rho * r),
              near(mu, 2.0 * th0)};
    if (mu > 0.5 * th0)
      return {RegimeTag::S122, std::pow(r, -1.0 / 3.0) * std::exp(-rho * r),
              near(r, 1.0)};
    return {RegimeTag::S123,
            std::pow(mu, std::min(1.5, w)) * std::pow(r, -0.5) *
                std::exp(-rho * r),
            near(mu, 0.5 * th0) || near(r, 1.0)};
  }
  if (t >= 1.0) {
    double second = r == 0.0 ? (w > 0.5 * n ? 0.0
                                : w == 0.5 * n ? std::pow(t, -w)
                                               : std::numeric_limits<double>::infinity())
                             : std::pow(t, -w) * std::pow(r, w - 0.5 * n);
    return {RegimeTag::S221, std::pow(t, -1.5) + second, near(t, 1.0)};
  }
  double ra = std::pow(r, a);
  if (ra <= t) {
    double second = r == 0.0 ? (w > 0.5 * n ? 0.0
                                : w == 0.5 * n ? std::pow(t, -w)
                                               : std::numeric_limits<double>::infinity())
                             : std::pow(t, -w) * std::pow(r, w - 0.5 * n);
    return {RegimeTag::S222, std::pow(t, -(n - s) / a) + second, near(ra, t)};
  }
  return {RegimeTag::S223, std::pow(t, -(n - s) / a), false};
}

// ---------------------------------------------------------------------------
// grid verification
// ---------------------------------------------------------------------------

namespace {

void scan_grid(const HyperbolicSpace& space, double alpha, double sigma,
               const KernelGrid& g, int nt, int nr, double tol, bool refined,
               KernelVerificationReport* rep) {
  for (int i = 0; i < nt; ++i) {
    double t = nt == 1 ? g.t_min
                       : g.t_min * std::pow(g.t_max / g.t_min,
                                            double(i) / double(nt - 1));
    for (int j = 0; j < nr; ++j) {
      double r = nr == 1 ? g.r_min
                         : g.r_min + (g.r_max - g.r_min) * double(j) /
                                         double(nr - 1);
      auto q = KernelQuery::make(space, alpha, sigma, t, r);
      auto ks = kernel_sigma(q, tol);
      if (!ks.converged) ++rep->n_failures;
      auto& st = rep->regimes[ks.regime];
      if (refined) {
        st.refined_max_ratio = std::max(st.refined_max_ratio, ks.ratio);
        ++st.refined_count;
      } else {
        st.max_ratio = std::max(st.max_ratio, ks.ratio);
        ++st.count;
      }
    }
  }
}

}  // namespace

KernelVerificationReport verify_kernel_estimate(const HyperbolicSpace& space,
                                                double alpha, double sigma,
                                                const KernelGrid& grid,
                                                double tol) {
  KernelVerificationReport rep;
  scan_grid(space, alpha, sigma, grid, grid.nt, grid.nr, tol, false, &rep);
  bool degenerate = grid.nt * grid.nr <= 1;
  if (!degenerate) {
    scan_grid(space, alpha, sigma, grid, 2 * grid.nt, 2 * grid.nr, tol, true,
              &rep);
    rep.stability_checked = true;
  }
  bool pass = rep.n_failures == 0;
  for (auto& [tag, st] : rep.regimes) {
    if (!std::isfinite(st.max_ratio) || !std::isfinite(st.refined_max_ratio))
      pass = false;
    if (rep.stability_checked && st.count > 0 && st.refined_count > 0 &&
        st.max_ratio > 0.0) {
      st.growth = (st.refined_max_ratio - st.max_ratio) / st.max_ratio;
      st.growth_checked = true;
      if (st.growth > rep.growth_cap) pass = false;
    }
  }
  rep.pass = pass;
  return rep;
}

// ---------------------------------------------------------------------------
// Kunze-Stein norm
// ---------------------------------------------------------------------------

double kunze_stein_norm(const HyperbolicSpace& space,
                        const std::function<Complex(double)>& kernel_fn,
                        double q, double r_max, double tol,
                        std::function<double(double)> envelope,
                        double* err_out) {
  if (!(q > 2.0)) throw DomainError("kunze_stein_norm: q must be > 2");
  const double rho = space.rho;
  auto f = [&](double r) -> Complex {
    if (r == 0.0) return 0.0;
    return std::pow(std::abs(kernel_fn(r)), 0.5 * q) *
           hn::kunze_stein_weight(space, r);
  };
  auto pr = oscquad::adaptive_gk(f, 0.0, r_max, tol * 1e-3);
  double body = pr.value.real();

  if (!envelope) {
    double a_fit = std::abs(kernel_fn(r_max)) * std::exp(rho * r_max) /
                   (1.0 + r_max);
    envelope = [a_fit, rho](double r) {
      return a_fit * (1.0 + r) * std::exp(-rho * r);
    };
  }
  // weight profile matched at r_max: w(r) ~ w(rmax) ((1+r)/(1+rmax)) e^{rho (r-rmax)}
  double w_end = hn::kunze_stein_weight(space, r_max);
  auto tail_f = [&](double r) -> Complex {
    double w = w_end * ((1.0 + r) / (1.0 + r_max)) *
               std::exp(rho * (r - r_max));
    return std::pow(envelope(r), 0.5 * q) * w;
  };
  double decay = rho * (0.5 * q - 1.0);
  double span = 60.0 / std::max(decay, 0.05);
  auto tr = oscquad::adaptive_gk(tail_f, r_max, r_max + span, tol * 1e-3);
  double tail = std::max(0.0, tr.value.real());

  double norm = std::pow(body, 2.0 / q);
  double norm_hi = std::pow(body + tail, 2.0 / q);
  if (norm_hi - norm > tol)
    throw TailError("kunze_stein_norm: tail bound exceeds tolerance; "
                    "increase r_max");
  if (err_out) *err_out = (norm_hi - norm) + pr.err;
  return norm;
}

// ---------------------------------------------------------------------------
// IBP diagnostic
// ---------------------------------------------------------------------------

IbpReport ibp_diagnostic(const KernelQuery& q) {
  const double rho = q.space.rho;
  const double a = q.alpha;
  const double t = q.t;
  auto e = [&](double l) -> Complex {
    double ph = t * std::pow(l * l + rho * rho, 0.5 * a);
    return Complex(std::cos(ph), std::sin(ph));
  };
  IbpReport rep{0.0, 0};
  const double h = 1e-5;
  for (int i = -20; i <= 20; ++i) {
    double l = 0.2 * i;
    if (std::fabs(l) < 0.1) {
      ++rep.skipped;
      continue;
    }
    Complex lhs = e(l);
    Complex deriv = (e(l + h) - e(l - h)) / (2.0 * h);
    Complex rhs = Complex(0.0, -1.0) / (a * t * l) *
                  std::pow(l * l + rho * rho, 1.0 - 0.5 * a) * deriv;
    rep.max_discrepancy = std::max(rep.max_discrepancy, std::abs(lhs - rhs));
  }
  return rep;
}

}  // namespace fracdisp::hn_kernel

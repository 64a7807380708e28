#include "fracdisp/oscquad.hpp"

#include <algorithm>
#include <cmath>
#include <queue>

#include "fracdisp/errors.hpp"

namespace fracdisp::oscquad {

namespace {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
constexpr double kXgk[15] = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};
constexpr double kWgk[15] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714,
    0.204432940075298892414161999234649, 0.190350578064785409913256402421014,
    0.169004726639267902826583426598550, 0.140653259715525918745189590510238,
    0.104790010322250183839876322541518, 0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};
constexpr double kWg[7] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327,
    0.381830050505118944950369775488975, 0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct Panel {
  double a, b;
  Complex value;
  double err;        // Kronrod-Gauss discrepancy
  double err_eff;    // err, inflated to the amplitude bound when untrustworthy
  double amp_bound;  // max sampled |amplitude| * width
  int depth;
};

struct PanelOrder {
  bool operator()(const Panel& x, const Panel& y) const {
    if (x.err_eff != y.err_eff) return x.err_eff < y.err_eff;
    if (x.a != y.a) return x.a > y.a;
    return x.b > y.b;
  }
};

struct Integrand {
  const std::function<Complex(double)>* amp;
  const std::function<double(double)>* phase;  // may be null

  Complex operator()(double x, double* phase_out, double* amp_abs) const {
    Complex av = (*amp)(x);
    *amp_abs = std::abs(av);
    if (phase) {
      double p = (*phase)(x);
      *phase_out = p;
      return av * Complex(std::cos(p), std::sin(p));
    }
    *phase_out = 0.0;
    return av;
  }
};

Panel make_panel(const Integrand& f, double a, double b, int depth,
                 const EngineConfig& cfg, long long* evals) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  Complex ik(0, 0), ig(0, 0);
  double pmin = 0, pmax = 0, amax = 0;
  for (int i = 0; i < 15; ++i) {
    double ph, aa;
    Complex v = f(c + h * kXgk[i], &ph, &aa);
    ik += kWgk[i] * v;
    if (i % 2 == 1) ig += kWg[i / 2] * v;
    if (i == 0 || ph < pmin) pmin = ph;
    if (i == 0 || ph > pmax) pmax = ph;
    amax = std::max(amax, aa);
  }
  *evals += 15;
  Panel p;
  p.a = a;
  p.b = b;
  p.value = ik * h;
  p.err = std::abs(ik - ig) * h;
  p.amp_bound = amax * (b - a);
  p.depth = depth;
  bool trustworthy = true;
  if (f.phase && (pmax - pmin) > cfg.max_panel_phase) trustworthy = false;
  if (cfg.max_panel_width > 0 && (b - a) > cfg.max_panel_width)
    trustworthy = false;
  p.err_eff = trustworthy ? p.err : std::max(p.err, p.amp_bound);
  return p;
}

PanelResult adaptive_core(const Integrand& f, double a, double b, double tol,
                          const std::vector<double>& breakpoints,
                          const EngineConfig& cfg) {
  PanelResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }

  std::vector<double> cuts{a, b};
  for (double x : breakpoints)
    if (x > a && x < b) cuts.push_back(x);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  std::priority_queue<Panel, std::vector<Panel>, PanelOrder> heap;
  std::vector<Panel> done;  // panels at depth cap or at the roundoff floor
  double total_err = 0.0;
  double total_abs = 0.0;  // ~ integral of |f|, sets the roundoff floor
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    Panel p = make_panel(f, cuts[i], cuts[i + 1], 0, cfg, &out.n_evals);
    total_err += p.err_eff;
    total_abs += p.amp_bound;
    heap.push(p);
  }

  constexpr double kEps = 2.2e-16;
  std::size_t n_panels = cuts.size() - 1;
  while (!heap.empty() && n_panels < cfg.max_panels &&
         total_err > std::max(tol, 64.0 * kEps * total_abs)) {
    Panel worst = heap.top();
    heap.pop();
    bool at_floor = worst.err_eff <= 8.0 * kEps * worst.amp_bound;
    if (worst.depth >= cfg.max_depth || at_floor ||
        worst.b - worst.a < 1e-15 * (std::fabs(worst.a) + std::fabs(worst.b))) {
      done.push_back(worst);
      continue;
    }
    total_err -= worst.err_eff;
    total_abs -= worst.amp_bound;
    double mid = 0.5 * (worst.a + worst.b);
    Panel l = make_panel(f, worst.a, mid, worst.depth + 1, cfg, &out.n_evals);
    Panel r = make_panel(f, mid, worst.b, worst.depth + 1, cfg, &out.n_evals);
    total_err += l.err_eff + r.err_eff;
    total_abs += l.amp_bound + r.amp_bound;
    heap.push(l);
    heap.push(r);
    ++n_panels;
  }

  while (!heap.empty()) {
    done.push_back(heap.top());
    heap.pop();
  }
  // fixed summation order: left to right
  std::sort(done.begin(), done.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  Complex sum(0, 0);
  double errsum = 0.0;
  for (const Panel& p : done) {
    sum += p.value;
    errsum += p.err_eff;
  }
  out.value = sum;
  out.err = errsum;
  out.converged = errsum <= std::max(tol, 128.0 * kEps * total_abs);
  return out;
}

double max_abs_hint(const std::vector<double>& hints) {
  double m = 0.0;
  for (double h : hints) m = std::max(m, std::fabs(h));
  return m;
}

// IBP-aware tail estimate for the truncated full-line integral beyond |x|=L.
double tail_estimate(const OscProblem& pb, double L) {
  double total = 0.0;
  for (double sgn : {-1.0, 1.0}) {
    double x = sgn * L;
    double amax = std::max(std::abs(pb.amplitude(x)),
                           std::abs(pb.amplitude(1.05 * x)));
    double nonosc = std::numeric_limits<double>::infinity();
    if (pb.growth_order < -1.0)
      nonosc = amax * L / std::max(0.5, -(pb.growth_order + 1.0));
    double h = 1e-3 * L;
    double dpsi = std::fabs(pb.phase(x + h) - pb.phase(x - h)) / (2.0 * h);
    double osc = dpsi > 1e-12 ? 4.0 * amax / dpsi
                              : std::numeric_limits<double>::infinity();
    total += std::min(nonosc, osc);
  }
  return total;
}

QuadResult direct_line(const OscProblem& pb, double tol,
                       const EngineConfig& cfg) {
  QuadResult out;
  double L = std::max(1.0, 2.0 * max_abs_hint(pb.stationary_hints) + 1.0);
  double tail = tail_estimate(pb, L);
  for (int it = 0; it < 48 && tail > tol / 8.0; ++it) {
    L *= 2.0;
    tail = tail_estimate(pb, L);
  }
  Integrand f{&pb.amplitude, &pb.phase};
  std::vector<double> cuts = pb.stationary_hints;
  cuts.push_back(0.0);
  PanelResult pr = adaptive_core(f, -L, L, std::max(tol - tail, tol / 4.0),
                                 cuts, cfg);
  out.value = pr.value;
  out.err_estimate = pr.err + tail;
  out.n_evals = pr.n_evals;
  out.converged = pr.converged && out.err_estimate <= tol;
  return out;
}

QuadResult regularized_line(const OscProblem& pb, double tol,
                            const EngineConfig& cfg) {
  QuadResult out;
  double L0 = cfg.reg_cutoff0 > 0.0
                  ? cfg.reg_cutoff0
                  : std::max(4.0, 2.0 * max_abs_hint(pb.stationary_hints) + 1.0);
  std::vector<Complex> vals;
  double quad_err = 0.0;
  for (int j = 0; j < 4; ++j) {
    double lambda = L0 * std::pow(2.0, j);
    std::function<Complex(double)> amp = [&pb, lambda](double x) {
      double u = x / lambda;
      return pb.amplitude(x) * std::exp(-u * u);
    };
    Integrand f{&amp, &pb.phase};
    std::vector<double> cuts = pb.stationary_hints;
    cuts.push_back(0.0);
    cuts.push_back(-lambda);
    cuts.push_back(lambda);
    PanelResult pr =
        adaptive_core(f, -6.0 * lambda, 6.0 * lambda, tol / 8.0, cuts, cfg);
    quad_err += pr.err;
    out.n_evals += pr.n_evals;
    vals.push_back(pr.value);
    out.regularization_trace.emplace_back(lambda, pr.value);
  }

  Complex d1 = vals[1] - vals[0];
  Complex d2 = vals[2] - vals[1];
  Complex d3 = vals[3] - vals[2];
  bool monotone = std::abs(d3) <= std::abs(d2) && std::abs(d2) <= std::abs(d1);

  double a2 = std::abs(d2), a3 = std::abs(d3);
  if (a3 < 1e-300) {
    out.value = vals[3];
    out.err_estimate = quad_err + a3;
    out.converged = monotone && out.err_estimate <= tol;
    return out;
  }
  double kappa;
  if (a2 > 0.0 && a3 < a2) {
    kappa = std::log2(a2 / a3);
    kappa = std::min(4.0, std::max(0.5, kappa));
  } else {
    kappa = 2.0;  // Richardson fallback
  }
  double rho = std::pow(2.0, -kappa);
  Complex vinf = vals[3] + d3 * (rho / (1.0 - rho));
  Complex vinf_prev = vals[2] + d2 * (rho / (1.0 - rho));
  out.value = vinf;
  out.err_estimate = quad_err + std::abs(vinf - vinf_prev);
  out.converged = monotone && out.err_estimate <= tol;
  return out;
}

}  // namespace

PanelResult adaptive_gk(const std::function<Complex(double)>& f, double a,
                        double b, double tol,
                        const std::vector<double>& breakpoints,
                        const EngineConfig& cfg) {
  Integrand g{&f, nullptr};
  return adaptive_core(g, a, b, tol, breakpoints, cfg);
}

QuadResult integrate(const OscProblem& pb, double tol,
                     const EngineConfig& cfg) {
  if (pb.domain == Domain::Circle)
    throw DomainError("integrate: use integrate_circle for Circle domain");
  if (pb.domain == Domain::Interval) {
    Integrand f{&pb.amplitude, &pb.phase};
    PanelResult pr = adaptive_core(f, pb.a, pb.b, tol, pb.stationary_hints, cfg);
    QuadResult out;
    out.value = pr.value;
    out.err_estimate = pr.err;
    out.converged = pr.converged;
    out.n_evals = pr.n_evals;
    return out;
  }
  if (!std::isfinite(pb.growth_order))
    throw DomainError("integrate: growth_order must be finite for FullLine");
  if (pb.growth_order < -1.0) return direct_line(pb, tol, cfg);
  return regularized_line(pb, tol, cfg);
}

QuadResult integrate_regularized(const OscProblem& pb, double tol,
                                 const EngineConfig& cfg) {
  if (pb.domain != Domain::FullLine)
    throw DomainError("integrate_regularized: FullLine domain only");
  return regularized_line(pb, tol, cfg);
}

QuadResult integrate_circle(const OscProblem& pb, double tol,
                            const EngineConfig& cfg) {
  if (pb.domain != Domain::Circle)
    throw DomainError("integrate_circle: problem domain must be Circle");
  const double period = pb.period;
  auto f = [&pb](double x) {
    double p = pb.phase(x);
    return pb.amplitude(x) * Complex(std::cos(p), std::sin(p));
  };

  QuadResult out;
  long long n = 32;
  Complex sum(0, 0);
  for (long long j = 0; j < n; ++j) sum += f(period * double(j) / double(n));
  out.n_evals += n;
  Complex prev_val = sum * (period / double(n));
  double prev_diff = std::numeric_limits<double>::infinity();
  while (n < cfg.max_circle_nodes) {
    n *= 2;
    Complex odd(0, 0);
    for (long long j = 1; j < n; j += 2)
      odd += f(period * double(j) / double(n));
    out.n_evals += n / 2;
    sum += odd;
    Complex val = sum * (period / double(n));
    double diff = std::abs(val - prev_val);
    if (diff < tol && prev_diff < std::sqrt(tol) + 10 * tol) {
      out.value = val;
      out.err_estimate = diff;
      out.converged = true;
      return out;
    }
    prev_val = val;
    prev_diff = diff;
  }
  out.value = prev_val;
  out.err_estimate = prev_diff;
  out.converged = false;
  return out;
}

}  // namespace fracdisp::oscquad

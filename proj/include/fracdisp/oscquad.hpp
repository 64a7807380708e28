#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

namespace fracdisp::oscquad {

using Complex = std::complex<double>;

enum class Domain { FullLine, Interval, Circle };

/// One oscillatory integral: integral of amplitude(x) * exp(i*phase(x)) dx.
/// The phase already includes all scale factors (t, R, ...).
struct OscProblem {
  std::function<Complex(double)> amplitude;
  std::function<double(double)> phase;
  std::vector<double> stationary_hints;  // sorted positions of phase critical points
  Domain domain = Domain::FullLine;
  double a = 0.0, b = 0.0;               // for Interval
  double period = 6.283185307179586477;  // for Circle
  double growth_order = 0.0;             // |amplitude| = O(|x|^growth_order) at infinity
};

struct QuadResult {
  Complex value{0.0, 0.0};
  double err_estimate = 0.0;
  std::vector<std::pair<double, Complex>> regularization_trace;  // (cutoff, value)
  bool converged = false;
  long long n_evals = 0;
};

struct EngineConfig {
  int max_depth = 30;              // panel bisection depth cap
  double max_panel_phase = 3.14159265358979323846;  // refine while local phase span exceeds this
  double max_panel_width = 0.0;    // 0 = no cap; resolves amplitude-side oscillation
  double reg_cutoff0 = 0.0;        // Lambda_0 for the Gaussian regularizer; 0 = auto
  std::size_t max_panels = 4000000;
  long long max_circle_nodes = 1 << 21;
};

/// Line/interval integrator. Absolutely convergent problems
/// (growth_order < -1) go through truncated adaptive Gauss-Kronrod panels;
/// growth_order >= -1 problems are evaluated with a Gaussian regularizer
/// exp(-(x/Lambda)^2) on the schedule {L0, 2L0, 4L0, 8L0} and extrapolated by
/// fitting value(L) = v + c L^{-kappa}.
QuadResult integrate(const OscProblem& problem, double tol,
                     const EngineConfig& cfg = {});

/// Force the regularized path regardless of growth_order (diagnostics).
QuadResult integrate_regularized(const OscProblem& problem, double tol,
                                 const EngineConfig& cfg = {});

/// Trapezoid rule with node doubling on one period (spectral accuracy for
/// smooth periodic integrands).
QuadResult integrate_circle(const OscProblem& problem, double tol,
                            const EngineConfig& cfg = {});

/// Plain adaptive Gauss-Kronrod on [a, b] for a complex integrand; the
/// workhorse behind integrate() also used directly for non-oscillatory
/// auxiliary integrals. Deterministic summation order.
struct PanelResult {
  Complex value{0.0, 0.0};
  double err = 0.0;
  bool converged = false;
  long long n_evals = 0;
};
PanelResult adaptive_gk(const std::function<Complex(double)>& f, double a,
                        double b, double tol,
                        const std::vector<double>& breakpoints = {},
                        const EngineConfig& cfg = {});

}  // namespace fracdisp::oscquad

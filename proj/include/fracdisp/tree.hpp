#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace fracdisp::tree {

using Complex = std::complex<double>;

struct Tree {
  int Q;          // branching number >= 2, degree Q+1
  double tau;     // spectral period 2 pi / ln Q
  double gamma0;  // 2 / (Q^{1/2} + Q^{-1/2})

  static Tree make(int Q);
};

/// gamma(lambda) = (Q^{i lambda} + Q^{-i lambda})/(Q^{1/2}+Q^{-1/2})
///               = gamma0 cos(lambda ln Q); tau-periodic.
double tree_gamma(const Tree& t, double lambda);

/// c(lambda) = (Q^{1/2+i lambda} - Q^{-1/2-i lambda}) /
///             ((Q^{1/2}+Q^{-1/2})(Q^{i lambda} - Q^{-i lambda})).
/// PoleError at lambda in (pi/ln Q) Z.
Complex tree_c(const Tree& t, double lambda);

struct TreePhiValue {
  Complex value;
  bool pole_extended;  // value filled by symmetric 1e-6 offset averaging
};

/// phi_lambda(r) = c(lambda) Q^{(-1/2+i lambda) r} + c(-lambda) Q^{(-1/2-i lambda) r}.
TreePhiValue tree_phi(const Tree& t, double lambda, int r);

enum class TreeStationaryCase { NoStationary, OneStationary, TwoStationary };

struct TreePhaseReport {
  double M;        // max of psi' on [0, pi], attained at lambda0
  double lambda0;  // unique zero of theta in (0, pi/2]
  TreeStationaryCase stationary;
  std::optional<double> lambda1;  // in [0, lambda0)
  std::optional<double> lambda2;  // in (lambda0, pi]
};

/// Stationary analysis of psi_{t,r}(lambda) = t psi(lambda) - r lambda with
/// psi = (1 - gamma0 cos lambda)^{alpha/2} on the circle.
TreePhaseReport tree_phase_report(const Tree& t, double alpha, double time,
                                  double r);

struct TreeKernelSample {
  double t;
  int r;
  Complex value;
  double err;
};

/// Propagator kernel evaluator. The normalization constant of the circle
/// integral is pinned by the identity propagator k_0 = delta_{r,0}, enforced
/// as a construction-time self-test.
class TreeKernel {
public:
  explicit TreeKernel(const Tree& t);

  TreeKernelSample sample(double alpha, double time, int r,
                          double tol = 1e-10) const;
  const Tree& tree() const { return tree_; }
  Complex normalization() const { return norm_; }

private:
  Complex raw_integral(double alpha, double time, int r, double tol,
                       double* err) const;
  Tree tree_;
  Complex norm_;
};

/// Convenience wrapper with a per-Q engine cache (thread-safe).
TreeKernelSample tree_kernel(const Tree& t, double alpha, double time, int r,
                             double tol = 1e-10);

/// Sphere cardinality: 1 at r = 0, (Q+1) Q^{r-1} otherwise. DomainError on
/// 64-bit overflow.
std::uint64_t sphere_size(const Tree& t, int r);

/// Same in floating point (for norm accumulation at large r).
double sphere_size_d(const Tree& t, int r);

/// ( sum_r sphere_size(r) |k(r)|^q )^{1/q} for q > 2, with the geometric tail
/// bound from |k| <= C1 Q^{-r/2}. TailError at q <= 2 or when the tail bound
/// exceeds tol.
double tree_lq_norm(const Tree& t, const std::vector<Complex>& kernel_values,
                    double q, double tol = 1e-10, double* err_out = nullptr);

struct TreeVerificationReport {
  struct Fit {
    double slope;
    double r2;
  };
  Fit wavefront_fit;               // sup_{r <= (M/2) t} |k|Q^{r/2}/(1+r) vs t
  std::map<int, Fit> lq_fits;      // q -> fit of the lq norm vs t
  double uniform_ratio;            // max |k_t(r)| Q^{r/2} over the sweep
  double c_used;                   // the M/2 constant
  bool pass;                       // all slopes <= slope_cap
  double slope_cap;
};

/// Kernel-estimate verification over a t grid (>= 1 decade, t >= 1):
/// wavefront-weighted sup decay, lq norm decay for q in {3,4,6}, and the
/// uniform Q^{-r/2} ratio.
TreeVerificationReport verify_tree_estimates(const Tree& t, double alpha,
                                             const std::vector<double>& t_grid,
                                             double tol = 1e-9,
                                             double slope_cap = -1.35);

}  // namespace fracdisp::tree

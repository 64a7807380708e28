#pragma once

#include <optional>
#include <vector>

namespace fracdisp::hn_phase {

/// psi_R(lambda) = (lambda^2 + rho^2)^{alpha/2} - R lambda with R = r/t >= 0.
struct PhaseParams {
  double alpha;  // in (0, 2], alpha = 1 rejected by the root solver
  double rho;    // > 0
  double R;      // >= 0

  static PhaseParams make(double alpha, double rho, double R);
};

double psi(const PhaseParams& p, double lambda);
double dpsi(const PhaseParams& p, double lambda);
double d2psi(const PhaseParams& p, double lambda);   // R-independent
double d3psi(const PhaseParams& p, double lambda);   // R-independent
double theta(const PhaseParams& p, double lambda);   // dpsi + R, odd

enum class PhaseRegime {
  SingleRootAlphaLarge,
  NoRoot,
  DegenerateRoot,
  TwoRoots,
  OriginOnly,
};

struct PhaseReport {
  PhaseRegime regime;
  std::optional<double> lambda0;  // rho/sqrt(1-alpha), alpha < 1 only
  std::optional<double> lambda1;
  std::optional<double> lambda2;
  std::optional<double> theta0;   // theta(lambda0), alpha < 1 only
  std::vector<double> residuals;  // |theta(lambda_i) - R| per reported root
};

/// Stationary points of psi_R. alpha > 1: single root of theta = R.
/// alpha < 1: classification against theta0 with degenerate tolerance
/// 1e-9 * max(1, theta0). Throws UnsupportedAlpha at alpha = 1.
PhaseReport stationary_points(const PhaseParams& p);

struct ComparabilityGrid {
  double lo = 1e-3;
  double hi = 1e2;
  int points = 2000;
  bool log_spaced = true;
};

struct ComparabilityReport {
  double ratio_min;
  double ratio_max;
  double band;          // ratio_max / ratio_min
  double band_refined;  // same on the 2x grid
  bool pass;
  bool stable;
  int n_points;
};

/// Empirical |psi'| / comparator band over a grid that excludes the windows
/// (beta*lambda_i, lambda_i/beta) around the stationary points. PASS iff the
/// band is below `band_cap` and changes by < 10% under grid doubling.
ComparabilityReport verify_phase_comparability(const PhaseParams& p,
                                               double beta,
                                               const ComparabilityGrid& grid,
                                               double band_cap = 1e3);

}  // namespace fracdisp::hn_phase

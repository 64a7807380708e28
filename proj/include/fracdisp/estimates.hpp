#pragma once

#include <utility>
#include <vector>

namespace fracdisp::estimates {

/// A point (1/p, 1/q, aux) with aux = sigma for alpha > 1, beta for
/// alpha < 1, unused for trees.
struct AdmissiblePoint {
  double inv_p;
  double inv_q;
  double aux = 0.0;
};

enum class MBranch { SmallSigma, LargeSigma, Tie };

struct ExponentM {
  double m;
  MBranch branch;  // LargeSigma: 2(n-sigma)/alpha active; SmallSigma: (n-2sigma)/(alpha-1)
};

/// m = max{ 2(n-sigma)/alpha, (n-2 sigma)/(alpha-1) }, 1 < alpha < 2,
/// 0 <= sigma <= n/2; branches tie at sigma = (1 - alpha/2) n.
ExponentM exponent_m(int n, double alpha, double sigma);

/// Region for 1 < alpha < 2 (closed/half-open edges exactly as stated):
///   (0,1/2] x [0,1/2) x [0,n/2] with
///   alpha/p + n/q >= (n-sigma)/2 and 2(alpha-1)/p + n/q >= (n-2sigma)/2,
///   union the extra corner {(0, 1/2, 0)}.
bool admissible_alpha_large(int n, double alpha, const AdmissiblePoint& pt);

/// Region for 0 < alpha < 1, n >= 3 (aux = beta in [0, alpha]):
///   [0,1/2] x [0,1/2] x [0,alpha] with
///   (1/2-1/q)(beta/alpha)(n/2) <= 1/p <= (1/2-1/q)((2-beta)/(2-alpha))(3/2),
///   minus the single point (1/2, 0, 2 alpha / n).
bool admissible_alpha_small(int n, double alpha, const AdmissiblePoint& pt);

double sigma_of(int n, double beta, double inv_q);  // (1/2-1/q)(1-beta/2) n
double hat_alpha(int n, double alpha);              // 6 alpha/((2-alpha) n + 3 alpha)
double inv_Q1(double alpha, double beta);           // 1/2 - (1/3)(2-alpha)/(2-beta)
double inv_Q2(double alpha, double beta);           // 1/2 - (1/2)(2-alpha)/(2-beta)

/// The n = 2, 0 < alpha < 1 remark-level region is not implemented; throws
/// Unimplemented.
bool admissible_alpha_small_n2(double alpha, const AdmissiblePoint& pt);

/// Tree square [0,1/2] x [0,1/2) union {(0,1/2)}.
bool admissible_tree(const AdmissiblePoint& pt);

struct DecayFit {
  double slope;
  double intercept;  // of log|m| vs log t (natural logs)
  double r2;
  std::pair<double, double> window;
  int n_points;
  bool conclusive;  // r2 >= 0.95 and window spans >= 1 decade
};

/// Least-squares fit of log magnitude against log t over samples inside the
/// window. Throws InsufficientData (< 4 points) or NonPositiveMagnitude.
DecayFit fit_decay(const std::vector<std::pair<double, double>>& samples,
                   std::pair<double, double> window);

}  // namespace fracdisp::estimates

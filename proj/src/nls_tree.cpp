#include "fracdisp/nls_tree.hpp"

#include <cmath>

#include "fracdisp/errors.hpp"

namespace fracdisp::nls {

RadialGrid RadialGrid::make(const tree::Tree& t, int r_max) {
  if (r_max < 4) throw DomainError("RadialGrid: r_max must be >= 4");
  RadialGrid g{t, r_max, {}};
  g.weights.resize(r_max + 1);
  for (int r = 0; r <= r_max; ++r) {
    double w = tree::sphere_size_d(t, r);
    if (!std::isfinite(w))
      throw DomainError("RadialGrid: sphere weights overflow double range");
    g.weights[r] = w;
  }
  return g;
}

void NlsConfig::validate() const {
  if (!(alpha > 0.0 && alpha <= 2.0))
    throw DomainError("NlsConfig: alpha must be in (0, 2]");
  if (!(eta > 1.0)) throw DomainError("NlsConfig: eta must be > 1");
  if (!(dt > 0.0)) throw DomainError("NlsConfig: dt must be > 0");
  if (!(T > 0.0)) throw DomainError("NlsConfig: T must be > 0");
}

Matrix radial_laplacian(const RadialGrid& grid) {
  const int n = grid.r_max + 1;
  const double Q = grid.t.Q;
  Matrix L = Matrix::Zero(n, n);
  // raw radial action: (Lf)(0) = f(1) - f(0);
  // (Lf)(r) = [Q f(r+1) + f(r-1)]/(Q+1) - f(r), Dirichlet cut at r_max
  L(0, 0) = -1.0;
  L(0, 1) = 1.0;
  for (int r = 1; r < n; ++r) {
    L(r, r) = -1.0;
    if (r + 1 < n) L(r, r + 1) = Q / (Q + 1.0);
    L(r, r - 1) = 1.0 / (Q + 1.0);
  }
  Matrix S = L;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      S(i, j) = std::sqrt(grid.weights[i]) * L(i, j) / std::sqrt(grid.weights[j]);
  double asym = (S - S.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-14)
    throw EigenError("radial_laplacian: symmetrization residual " +
                     std::to_string(asym));
  S = 0.5 * (S + S.transpose());
  return S;
}

namespace {

struct Eigs {
  Matrix V;
  Eigen::VectorXd mu;  // eigenvalues of -S, clamped >= 0
};

Eigs eig_minus_s(const RadialGrid& grid) {
  Matrix S = radial_laplacian(grid);
  Eigen::SelfAdjointEigenSolver<Matrix> es(-S);
  if (es.info() != Eigen::Success)
    throw EigenError("linear_propagator: eigendecomposition failed");
  Eigen::VectorXd mu = es.eigenvalues();
  for (int i = 0; i < mu.size(); ++i) {
    if (mu(i) < -1e-12)
      throw EigenError("linear_propagator: -S has a significantly negative "
                       "eigenvalue");
    mu(i) = std::max(mu(i), 0.0);
  }
  return {es.eigenvectors(), mu};
}

CMatrix spectral_propagator(const Eigs& e, double alpha, double time) {
  const int n = int(e.mu.size());
  CVector d(n);
  for (int i = 0; i < n; ++i) {
    double ph = time * std::pow(e.mu(i), 0.5 * alpha);
    d(i) = Complex(std::cos(ph), std::sin(ph));
  }
  return e.V.cast<Complex>() * d.asDiagonal() *
         e.V.transpose().cast<Complex>();
}

}  // namespace

CMatrix linear_propagator(const RadialGrid& grid, double alpha, double time) {
  if (grid.r_max > 4096)
    throw EigenError("linear_propagator: dense solve limited to r_max <= 4096");
  return spectral_propagator(eig_minus_s(grid), alpha, time);
}

double mass(const RadialGrid& grid, const RadialState& s) {
  double m = 0.0;
  for (int r = 0; r <= grid.r_max; ++r)
    m += grid.weights[r] * std::norm(s.values(r));
  return m;
}

double lq_norm(const RadialGrid& grid, const RadialState& s, double q) {
  double m = 0.0;
  for (int r = 0; r <= grid.r_max; ++r)
    m += grid.weights[r] * std::pow(std::abs(s.values(r)), q);
  return std::pow(m, 1.0 / q);
}

void nonlinear_halfstep(RadialState& s, const NlsConfig& cfg, double tau) {
  const int n = int(s.values.size());
  if (cfg.gauge_invariant) {
    for (int i = 0; i < n; ++i) {
      double a = std::abs(s.values(i));
      double ph = -tau * cfg.coupling * std::pow(a, cfg.eta - 1.0);
      s.values(i) *= Complex(std::cos(ph), std::sin(ph));
    }
  } else {
    // F(u) = coupling |u|^eta, a real source; no conservation claims
    for (int i = 0; i < n; ++i) {
      double a = std::abs(s.values(i));
      s.values(i) += Complex(0.0, -tau * cfg.coupling) * std::pow(a, cfg.eta);
    }
  }
}

Stepper::Stepper(const RadialGrid& grid, const NlsConfig& cfg)
    : grid_(grid), cfg_(cfg) {
  cfg.validate();
  Eigs e = eig_minus_s(grid);
  CMatrix sym = spectral_propagator(e, cfg.alpha, cfg.dt);
  const int n = grid.r_max + 1;
  prop_phys_.resize(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      prop_phys_(i, j) = sym(i, j) *
                         std::sqrt(grid.weights[j] / grid.weights[i]);
}

CMatrix Stepper::physical_propagator(double time) const {
  Eigs e = eig_minus_s(grid_);
  CMatrix sym = spectral_propagator(e, cfg_.alpha, time);
  const int n = grid_.r_max + 1;
  CMatrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      out(i, j) = sym(i, j) * std::sqrt(grid_.weights[j] / grid_.weights[i]);
  return out;
}

void Stepper::step(RadialState& s) const {
  nonlinear_halfstep(s, cfg_, 0.5 * cfg_.dt);
  s.values = prop_phys_ * s.values;
  nonlinear_halfstep(s, cfg_, 0.5 * cfg_.dt);
  s.time += cfg_.dt;
}

Trajectory nls_solve(const RadialGrid& grid, const RadialState& u0,
                     const NlsConfig& cfg, const std::vector<double>& qs,
                     int sample_every) {
  cfg.validate();
  if (u0.values.size() != grid.r_max + 1)
    throw DomainError("nls_solve: state size does not match grid");
  Stepper stepper(grid, cfg);
  const int nsteps = int(std::llround(cfg.T / cfg.dt));

  Trajectory traj;
  traj.qs = qs;
  traj.lq_series.resize(qs.size());
  RadialState s = u0;

  auto record = [&](const RadialState& st) {
    traj.times.push_back(st.time);
    traj.mass_series.push_back(mass(grid, st));
    for (std::size_t iq = 0; iq < qs.size(); ++iq)
      traj.lq_series[iq].push_back(lq_norm(grid, st, qs[iq]));
  };
  record(s);
  traj.samples.push_back(s);
  traj.sample_times.push_back(s.time);

  for (int k = 1; k <= nsteps; ++k) {
    stepper.step(s);
    record(s);
    if ((sample_every > 0 && k % sample_every == 0) || k == nsteps) {
      traj.samples.push_back(s);
      traj.sample_times.push_back(s.time);
    }
  }
  return traj;
}

double mixed_norm(const Trajectory& traj, double p, double q) {
  if (traj.times.size() < 2)
    throw InsufficientData("mixed_norm: need >= 2 time samples");
  std::size_t iq = traj.qs.size();
  for (std::size_t i = 0; i < traj.qs.size(); ++i)
    if (traj.qs[i] == q) iq = i;
  if (iq == traj.qs.size())
    throw DomainError("mixed_norm: q was not recorded in the trajectory");
  const auto& g = traj.lq_series[iq];
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : g) m = std::max(m, v);
    return m;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < traj.times.size(); ++i) {
    double h = traj.times[i + 1] - traj.times[i];
    acc += 0.5 * h * (std::pow(g[i], p) + std::pow(g[i + 1], p));
  }
  return std::pow(acc, 1.0 / p);
}

}  // namespace fracdisp::nls

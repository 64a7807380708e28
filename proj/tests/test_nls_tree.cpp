#include <doctest.h>

#include <cmath>

#include "fracdisp/errors.hpp"
#include "fracdisp/nls_tree.hpp"

using namespace fracdisp;
using nls::Complex;
using nls::RadialGrid;
using nls::RadialState;

namespace {

RadialState delta_state(const RadialGrid& g) {
  RadialState s;
  s.values = nls::CVector::Zero(g.r_max + 1);
  s.values(0) = Complex(1.0, 0.0);
  return s;
}

RadialState gaussian_state(const RadialGrid& g, double amp, double width) {
  RadialState s;
  s.values = nls::CVector::Zero(g.r_max + 1);
  double m = 0.0;
  for (int r = 0; r <= g.r_max; ++r) {
    double v = std::exp(-double(r * r) / (2.0 * width * width));
    s.values(r) = Complex(v, 0.0);
    m += g.weights[r] * v * v;
  }
  s.values *= amp / std::sqrt(m);
  return s;
}

}  // namespace

TEST_SUITE("nls_tree") {

TEST_CASE("laplacian stencil and symmetrization") {
  auto t2 = tree::Tree::make(2);
  auto g = RadialGrid::make(t2, 16);
  auto S = nls::radial_laplacian(g);
  // hand-symmetrized entries for Q = 2
  CHECK(S(0, 1) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(S(1, 0) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(S(1, 2) == doctest::Approx(std::sqrt(2.0) / 3.0).epsilon(1e-14));
  CHECK(S(2, 1) == doctest::Approx(std::sqrt(2.0) / 3.0).epsilon(1e-14));
  CHECK(S(3, 3) == doctest::Approx(-1.0).epsilon(1e-14));
  // interior rows of the raw action annihilate constants: check via D^{-1}SD
  for (int r = 1; r < 15; ++r) {
    double row = 0.0;
    for (int c = std::max(0, r - 1); c <= r + 1; ++c)
      row += std::sqrt(g.weights[c] / g.weights[r]) * S(r, c);
    CHECK(std::fabs(row) < 1e-13);
  }
}

TEST_CASE("laplacian spectrum approaches [1-gamma0, 1+gamma0]") {
  auto t2 = tree::Tree::make(2);
  double prev_gap = 1e300;
  for (int rmax : {32, 64, 128}) {
    auto g = RadialGrid::make(t2, rmax);
    auto S = nls::radial_laplacian(g);
    Eigen::SelfAdjointEigenSolver<nls::Matrix> es(-S);
    double lo = es.eigenvalues().minCoeff();
    double hi = es.eigenvalues().maxCoeff();
    // Dirichlet eigenvalues stay inside the band and approach its edges
    CHECK(lo >= 1.0 - t2.gamma0 - 1e-10);
    CHECK(hi <= 1.0 + t2.gamma0 + 1e-10);
    double gap = std::max(lo - (1.0 - t2.gamma0), (1.0 + t2.gamma0) - hi);
    CHECK(gap < prev_gap + 1e-12);
    prev_gap = gap;
  }
  CHECK(prev_gap < 0.01);
}

TEST_CASE("propagator identity and unitarity") {
  auto t2 = tree::Tree::make(2);
  auto g = RadialGrid::make(t2, 32);
  auto P0 = nls::linear_propagator(g, 1.5, 0.0);
  CHECK((P0 - nls::CMatrix::Identity(33, 33)).cwiseAbs().maxCoeff() < 1e-12);
  auto P = nls::linear_propagator(g, 1.5, 0.7);
  nls::CVector u = nls::CVector::Random(33);
  CHECK(std::fabs((P * u).norm() - u.norm()) < 1e-11);
}

TEST_CASE("delta propagation matches tree kernel") {
  auto t2 = tree::Tree::make(2);
  auto g = RadialGrid::make(t2, 200);
  nls::NlsConfig cfg;
  cfg.alpha = 1.5;
  cfg.dt = 3.0;
  nls::Stepper st(g, cfg);
  auto P = st.physical_propagator(3.0);
  for (int r = 0; r <= 100; r += 10) {
    auto k = tree::tree_kernel(t2, 1.5, 3.0, r, 1e-12);
    CHECK(std::abs(P(r, 0) - k.value) < 1e-6);
  }
}

TEST_CASE("nonlinear rotation preserves modulus") {
  auto t2 = tree::Tree::make(2);
  auto g = RadialGrid::make(t2, 8);
  RadialState s = delta_state(g);
  s.values(0) = Complex(0.3, -0.4);
  nls::NlsConfig cfg;
  cfg.eta = 3.0;
  cfg.coupling = 2.0;
  double before = std::abs(s.values(0));
  nls::nonlinear_halfstep(s, cfg, 0.37);
  CHECK(std::abs(s.values(0)) == doctest::Approx(before).epsilon(1e-14));
}

TEST_CASE("coupling zero equals linear propagator") {
  auto t2 = tree::Tree::make(2);
  auto g = RadialGrid::make(t2, 64);
  nls::NlsConfig cfg;
  cfg.alpha = 2.0;
  cfg.coupling = 0.0;
  cfg.dt = 0.05;
  cfg.T = 0.5;
  auto traj = nls::nls_solve(g, delta_state(g), cfg);
  auto P = nls::Stepper(g, cfg).physical_propagator(0.5);
  nls::CVector ref = P * delta_state(g).values;
  double err = (traj.samples.back().values - ref).norm();
  CHECK(err < 1e-10);
}

TEST_CASE("mass conservation gauge invariant") {
  for (int Q : {2, 3}) {
    auto t = tree::Tree::make(Q);
    auto g = RadialGrid::make(t, 48);
    for (double alpha : {0.5, 1.0, 1.5, 2.0}) {
      for (double eta : {2.0, 3.0}) {
        nls::NlsConfig cfg;
        cfg.alpha = alpha;
        cfg.eta = eta;
        cfg.coupling = 1.0;
        cfg.dt = 0.01;
        cfg.T = 1.0;  // 100 steps per combination keeps the sweep fast
        auto traj = nls::nls_solve(g, gaussian_state(g, 1.0, 3.0), cfg);
        double m0 = traj.mass_series.front();
        for (double m : traj.mass_series)
          CHECK(std::fabs(m - m0) <= 1e-9 * m0);
      }
    }
  }
}

TEST_CASE("mass drift without gauge invariance") {
  auto t2 = tree::Tree::make(2);
  auto g = RadialGrid::make(t2, 32);
  nls::NlsConfig cfg;
  cfg.gauge_invariant = false;
  cfg.eta = 3.0;
  cfg.coupling = 1.0;
  cfg.dt = 0.01;
  cfg.T = 1.0;
  auto traj = nls::nls_solve(g, gaussian_state(g, 1.0, 2.0), cfg);
  double drift = std::fabs(traj.mass_series.back() - traj.mass_series.front());
  CHECK(drift > 1e-6);  // reported, not conserved
}

TEST_CASE("perturbative small data stays near linear") {
  auto t2 = tree::Tree::make(2);
  auto g = RadialGrid::make(t2, 64);
  nls::NlsConfig cfg;
  cfg.alpha = 2.0;
  cfg.eta = 3.0;
  cfg.coupling = 1.0;
  cfg.dt = 0.01;
  cfg.T = 1.0;
  auto u0 = gaussian_state(g, 1e-3, 2.0);
  auto traj = nls::nls_solve(g, u0, cfg);
  nls::NlsConfig lin = cfg;
  lin.coupling = 0.0;
  auto ltraj = nls::nls_solve(g, u0, lin);
  double d = (traj.samples.back().values - ltraj.samples.back().values).norm();
  CHECK(d < 2e-5);
}

TEST_CASE("strang second order band") {
  auto t2 = tree::Tree::make(2);
  auto g = RadialGrid::make(t2, 32);
  auto u0 = gaussian_state(g, 2.0, 2.0);
  auto run = [&](double dt) {
    nls::NlsConfig cfg;
    cfg.alpha = 2.0;
    cfg.eta = 3.0;
    cfg.coupling = 1.0;
    cfg.dt = dt;
    cfg.T = 1.0;
    return nls::nls_solve(g, u0, cfg).samples.back().values;
  };
  auto ref = run(0.0125);  // dt/8 reference; all dt divide T exactly
  double e1 = (run(0.1) - ref).norm();
  double e2 = (run(0.05) - ref).norm();
  double ratio = e1 / e2;
  CHECK(ratio > 3.0);
  CHECK(ratio < 5.0);
}

TEST_CASE("boundary contamination guard") {
  auto t2 = tree::Tree::make(2);
  nls::NlsConfig cfg;
  cfg.alpha = 2.0;
  cfg.eta = 3.0;
  cfg.coupling = 1.0;
  cfg.dt = 0.02;
  cfg.T = 5.0;
  auto g1 = RadialGrid::make(t2, 40);
  auto g2 = RadialGrid::make(t2, 80);
  auto u1 = delta_state(g1);
  auto u2 = delta_state(g2);
  auto t1 = nls::nls_solve(g1, u1, cfg);
  auto t2run = nls::nls_solve(g2, u2, cfg);
  double worst = 0.0;
  for (int r = 0; r <= 20; ++r)
    worst = std::max(worst, std::abs(t1.samples.back().values(r) -
                                     t2run.samples.back().values(r)));
  CHECK(worst < 1e-8);
}

TEST_CASE("mixed norm conventions") {
  nls::Trajectory traj;
  traj.qs = {4.0};
  traj.lq_series.resize(1);
  for (int i = 0; i <= 20; ++i) {
    traj.times.push_back(0.1 * i);
    traj.lq_series[0].push_back(1.0);
  }
  CHECK(nls::mixed_norm(traj, 2.0, 4.0) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK(nls::mixed_norm(traj, std::numeric_limits<double>::infinity(), 4.0) ==
        doctest::Approx(1.0));
}

TEST_CASE("mixed norm of linear delta evolution tracks lq decay") {
  auto t2 = tree::Tree::make(2);
  auto g = RadialGrid::make(t2, 96);
  nls::NlsConfig cfg;
  cfg.alpha = 2.0;
  cfg.coupling = 0.0;
  cfg.dt = 0.5;
  cfg.T = 50.0;
  auto traj = nls::nls_solve(g, delta_state(g), cfg, {2.0, 4.0});
  double v = nls::mixed_norm(traj, 2.0, 4.0);
  CHECK(std::isfinite(v));
  // l4 norm at late times must sit well below the early ones (decay)
  auto& l4 = traj.lq_series[1];
  CHECK(l4.back() < 0.2 * l4.front());
}

}  // TEST_SUITE

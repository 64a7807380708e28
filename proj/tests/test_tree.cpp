#include <doctest.h>

#include <cmath>

#include "fracdisp/errors.hpp"
#include "fracdisp/tree.hpp"

using namespace fracdisp;
using tree::Complex;
using tree::Tree;

TEST_SUITE("tree") {

TEST_CASE("tree constants") {
  auto t2 = Tree::make(2);
  CHECK(t2.gamma0 == doctest::Approx(0.94280904158206336).epsilon(1e-14));
  CHECK(t2.tau == doctest::Approx(2.0 * M_PI / std::log(2.0)).epsilon(1e-14));
  CHECK_THROWS_AS(Tree::make(1), DomainError);
}

TEST_CASE("gamma at 0 and periodicity") {
  auto t2 = Tree::make(2);
  CHECK(tree::tree_gamma(t2, 0.0) == doctest::Approx(t2.gamma0));
  CHECK(tree::tree_gamma(t2, 0.3 + t2.tau) ==
        doctest::Approx(tree::tree_gamma(t2, 0.3)).epsilon(1e-13));
}

TEST_CASE("c(l) + c(-l) = 1") {
  for (int Q : {2, 3}) {
    auto t = Tree::make(Q);
    for (double l : {0.2, 0.7, 1.1}) {
      Complex s = tree::tree_c(t, l) + tree::tree_c(t, -l);
      CHECK(std::abs(s - Complex(1.0, 0.0)) < 1e-12);
    }
  }
}

TEST_CASE("c pole") {
  auto t2 = Tree::make(2);
  CHECK_THROWS_AS(tree::tree_c(t2, 0.0), PoleError);
  CHECK_THROWS_AS(tree::tree_c(t2, M_PI / std::log(2.0)), PoleError);
}

TEST_CASE("phi at r=0 and reality") {
  for (int Q : {2, 3}) {
    auto t = Tree::make(Q);
    for (double l : {0.13, 0.62, 1.9}) {
      auto v = tree::tree_phi(t, l, 0);
      CHECK(std::abs(v.value - Complex(1.0, 0.0)) < 1e-12);
      for (int r : {1, 3, 9}) {
        auto w = tree::tree_phi(t, l, r);
        CHECK(std::fabs(w.value.imag()) <= 1e-12);
      }
    }
  }
}

TEST_CASE("phi pole extension flagged") {
  auto t2 = Tree::make(2);
  auto v = tree::tree_phi(t2, 0.0, 2);
  CHECK(v.pole_extended);
  CHECK(std::isfinite(v.value.real()));
}

TEST_CASE("phi envelope (1+r) Q^{-r/2}") {
  auto t2 = Tree::make(2);
  double cmax = 0.0;
  for (double l = 0.05; l < 2.2; l += 0.07) {
    for (int r = 0; r <= 20; ++r) {
      double v = std::abs(tree::tree_phi(t2, l, r).value);
      double env = (1.0 + r) * std::pow(2.0, -0.5 * r);
      cmax = std::max(cmax, v / env);
    }
  }
  CHECK(cmax < 10.0);
}

TEST_CASE("phase report alpha=2 closed forms") {
  auto t2 = Tree::make(2);
  auto rep = tree::tree_phase_report(t2, 2.0, 1.0, 0.0);
  CHECK(rep.lambda0 == doctest::Approx(M_PI / 2.0).epsilon(1e-10));
  CHECK(rep.M == doctest::Approx(t2.gamma0).epsilon(1e-10));
  // lambda1(mu) = arcsin(mu/gamma0) at mu = gamma0/2 -> pi/6
  double mu = 0.5 * t2.gamma0;
  auto rep2 = tree::tree_phase_report(t2, 2.0, 1.0, mu);
  REQUIRE(rep2.stationary == tree::TreeStationaryCase::TwoStationary);
  CHECK(*rep2.lambda1 == doctest::Approx(M_PI / 6.0).epsilon(1e-10));
  CHECK(*rep2.lambda2 == doctest::Approx(M_PI - M_PI / 6.0).epsilon(1e-10));
}

TEST_CASE("phase theta endpoints") {
  for (int Q : {2, 3, 5}) {
    auto t = Tree::make(Q);
    for (double alpha : {0.5, 1.0, 1.7}) {
      // theta(0) = 1 - gamma0 > 0 and theta(pi) = -1 - gamma0 < 0 translate
      // into lambda0 in (0, pi/2] and positive M
      auto rep = tree::tree_phase_report(t, alpha, 1.0, 0.0);
      CHECK(rep.lambda0 > 0.0);
      CHECK(rep.lambda0 <= M_PI / 2.0 + 1e-12);
      CHECK(rep.M > 0.0);
    }
  }
}

TEST_CASE("phase no-stationary regime") {
  auto t2 = Tree::make(2);
  auto probe = tree::tree_phase_report(t2, 1.5, 1.0, 0.0);
  double M = probe.M;
  auto rep = tree::tree_phase_report(t2, 1.5, 1.0, 2.0 * M);
  CHECK(rep.stationary == tree::TreeStationaryCase::NoStationary);
  // min over the circle of |t psi'(l) - r| > 0
  double t = 7.0, r = 2.0 * M * t;
  double minv = 1e300;
  for (double l = 0.0; l < 2.0 * M_PI; l += 1e-3) {
    double h = 1e-6;
    auto psi = [&](double x) {
      return std::pow(1.0 - t2.gamma0 * std::cos(x), 0.75);
    };
    double d = t * (psi(l + h) - psi(l - h)) / (2 * h) - r;
    minv = std::min(minv, std::fabs(d));
  }
  CHECK(minv > 0.0);
}

TEST_CASE("phase report root residuals") {
  for (int Q : {2, 3}) {
    auto t = Tree::make(Q);
    for (double alpha : {0.5, 1.0, 2.0}) {
      auto probe = tree::tree_phase_report(t, alpha, 1.0, 0.0);
      for (double frac : {0.1, 0.5, 0.9}) {
        double tv = 3.0, r = frac * probe.M * tv;
        auto rep = tree::tree_phase_report(t, alpha, tv, r);
        REQUIRE(rep.stationary == tree::TreeStationaryCase::TwoStationary);
        auto dpsi = [&](double l) {
          return 0.5 * alpha * t.gamma0 *
                 std::pow(1.0 - t.gamma0 * std::cos(l), 0.5 * alpha - 1.0) *
                 std::sin(l);
        };
        CHECK(std::fabs(dpsi(*rep.lambda1) - r / tv) <= 1e-10);
        CHECK(std::fabs(dpsi(*rep.lambda2) - r / tv) <= 1e-10);
        CHECK(*rep.lambda1 < rep.lambda0);
        CHECK(rep.lambda0 < *rep.lambda2);
      }
    }
  }
}

TEST_CASE("kernel identity at t=0") {
  auto t2 = Tree::make(2);
  auto k0 = tree::tree_kernel(t2, 2.0, 0.0, 0, 1e-13);
  CHECK(std::abs(k0.value - Complex(1.0, 0.0)) < 1e-12);
  for (int r = 1; r <= 10; ++r)
    CHECK(std::abs(tree::tree_kernel(t2, 2.0, 0.0, r, 1e-13).value) < 1e-12);
}

TEST_CASE("kernel unitarity at delta data") {
  auto t2 = Tree::make(2);
  for (double tv : {0.0, 1.0, 5.0, 20.0}) {
    int r_max = int(t2.gamma0 * tv) + 60;
    double mass = 0.0;
    for (int r = 0; r <= r_max; ++r) {
      auto s = tree::tree_kernel(t2, 2.0, tv, r, 1e-12);
      mass += tree::sphere_size_d(t2, r) * std::norm(s.value);
    }
    CHECK(std::fabs(mass - 1.0) <= 1e-8);
  }
}

TEST_CASE("kernel time reversal") {
  auto t3 = Tree::make(3);
  for (int r : {0, 1, 4}) {
    auto p = tree::tree_kernel(t3, 1.5, 2.5, r, 1e-12);
    auto m = tree::tree_kernel(t3, 1.5, -2.5, r, 1e-12);
    CHECK(std::abs(m.value - std::conj(p.value)) < 1e-12);
  }
}

TEST_CASE("kernel uniform Q^{-r/2} ratio") {
  auto t2 = Tree::make(2);
  double cmax = 0.0;
  for (double tv : {0.5, 2.0, 8.0, 32.0}) {
    for (int r = 0; r <= 30; r += 3) {
      auto s = tree::tree_kernel(t2, 0.5, tv, r, 1e-11);
      cmax = std::max(cmax,
                      std::abs(s.value) * std::pow(2.0, 0.5 * r));
    }
  }
  CHECK(cmax < 10.0);
  CHECK(cmax > 0.0);
}

TEST_CASE("sphere sizes") {
  auto t2 = Tree::make(2);
  CHECK(tree::sphere_size(t2, 0) == 1);
  CHECK(tree::sphere_size(t2, 1) == 3);
  // breadth-first count on an explicit depth-4 tree: 3*2^2 = 12 at r=3
  CHECK(tree::sphere_size(t2, 3) == 12);
  CHECK(tree::sphere_size_d(t2, 3) == 12.0);
}

TEST_CASE("lq norm geometric closed form") {
  auto t2 = Tree::make(2);
  // k(r) = Q^{-r/2}: norm^4 = 1 + (3/2) sum_{r>=1} 2^{-r} = 2.5
  std::vector<Complex> k;
  for (int r = 0; r <= 120; ++r)
    k.emplace_back(std::pow(2.0, -0.5 * r), 0.0);
  double v = tree::tree_lq_norm(t2, k, 4.0, 1e-9);
  CHECK(v == doctest::Approx(std::pow(2.5, 0.25)).epsilon(1e-9));
  CHECK_THROWS_AS(tree::tree_lq_norm(t2, k, 2.0), TailError);
  // delta kernel: norm = 1 for all q (tail bound needs a long window at q=3)
  std::vector<Complex> d(140, Complex(0, 0));
  d[0] = Complex(1, 0);
  CHECK(tree::tree_lq_norm(t2, d, 3.0) == doctest::Approx(1.0));
  CHECK(tree::tree_lq_norm(t2, d, 6.0) == doctest::Approx(1.0));
}

TEST_CASE("kernel periodic integrand endpoints") {
  // 2 pi periodicity of the integrand is what the circle rule relies on;
  // check the defining functions at 0 and 2 pi
  auto t2 = Tree::make(2);
  auto a = [&](double l) {
    double sq = std::sqrt(2.0);
    Complex den = sq * std::exp(Complex(0.0, l)) -
                  (1.0 / sq) * std::exp(Complex(0.0, -l));
    return std::sin(l) / den;
  };
  CHECK(std::abs(a(0.0) - a(2.0 * M_PI)) < 1e-15);
  double psi0 = std::pow(1.0 - t2.gamma0 * std::cos(0.0), 0.25);
  double psi2pi = std::pow(1.0 - t2.gamma0 * std::cos(2.0 * M_PI), 0.25);
  CHECK(psi0 == psi2pi);
}

TEST_CASE("verify_tree_estimates on an asymptotic window") {
  auto t3 = Tree::make(3);
  std::vector<double> grid;
  for (int i = 0; i < 12; ++i) grid.push_back(40.0 * std::pow(15.0, i / 11.0));
  auto rep = tree::verify_tree_estimates(t3, 2.0, grid, 1e-9);
  CHECK(rep.pass);
  CHECK(rep.wavefront_fit.slope <= -1.35);
  CHECK(rep.lq_fits.at(3).slope <= -1.35);
  CHECK(rep.lq_fits.at(4).slope <= -1.35);
  CHECK(rep.lq_fits.at(6).slope <= -1.35);
  CHECK(std::isfinite(rep.uniform_ratio));
  CHECK(rep.uniform_ratio > 0.0);
}

}  // TEST_SUITE

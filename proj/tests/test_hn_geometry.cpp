#include <doctest.h>

#include <cmath>
#include <random>

#include "fracdisp/errors.hpp"
#include "fracdisp/hn_geometry.hpp"
#include "fracdisp/specfun.hpp"

using namespace fracdisp;
using hn::Complex;
using hn::HyperbolicSpace;

TEST_SUITE("hn_geometry") {

TEST_CASE("space invariants") {
  auto h3 = HyperbolicSpace::make(3);
  CHECK(h3.rho == 1.0);
  CHECK(HyperbolicSpace::make(2).rho == 0.5);
  CHECK_THROWS_AS(HyperbolicSpace::make(1), DomainError);
}

TEST_CASE("c function at n=3 lambda=1") {
  // c(1) = Gamma(i)/Gamma(1+i) = 1/i = -i
  auto h3 = HyperbolicSpace::make(3);
  Complex c = hn::c_function(h3, {1.0, 0.0});
  CHECK(std::abs(c - Complex(0.0, -1.0)) < 1e-13);
}

TEST_CASE("c function n=2 against frozen oracle") {
  auto h2 = HyperbolicSpace::make(2);
  Complex c = hn::c_function(h2, {2.0, 0.0});
  CHECK(std::abs(c - Complex(0.26371154716749187, -0.29935309091746939)) <
        1e-13);
}

TEST_CASE("c function modulus even") {
  auto h3 = HyperbolicSpace::make(3);
  for (double l : {0.5, 1.0, 3.0}) {
    double a = std::abs(hn::c_function(h3, {l, 0.0}));
    double b = std::abs(hn::c_function(h3, {-l, 0.0}));
    CHECK(std::abs(a - b) < 1e-13 * a);
  }
}

TEST_CASE("c function pole at 0") {
  auto h3 = HyperbolicSpace::make(3);
  CHECK_THROWS_AS(hn::c_function(h3, {0.0, 0.0}), PoleError);
}

TEST_CASE("plancherel density vs |c|^-2 and asymptotics") {
  for (int n : {2, 3, 4, 5}) {
    auto sp = HyperbolicSpace::make(n);
    CHECK(hn::plancherel_density(sp, 0.0) == 0.0);
    for (double l : {0.3, 1.0, 2.7, 10.0}) {
      double direct = 1.0 / std::norm(hn::c_function(sp, {l, 0.0}));
      double closed = hn::plancherel_density(sp, l);
      CHECK(std::abs(direct - closed) <= 1e-11 * direct);
      CHECK(hn::plancherel_density(sp, -l) == closed);
    }
  }
  // lambda^2 band near zero, lambda^{n-1} band at infinity (n = 3)
  auto h3 = HyperbolicSpace::make(3);
  double lo = 1e300, hi = 0.0;
  for (double l = 0.01; l <= 1.0; l *= 1.3) {
    double v = hn::plancherel_density(h3, l) / (l * l);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo < 100.0);
  lo = 1e300, hi = 0.0;
  for (double l = 1.0; l <= 50.0; l *= 1.4) {
    double v = hn::plancherel_density(h3, l) / std::pow(l, 2);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo < 100.0);
}

TEST_CASE("phi_hc basics") {
  auto h3 = HyperbolicSpace::make(3);
  auto v0 = hn::phi_hc(h3, {1.7, 0.0}, 0.0);
  CHECK(v0.value == Complex(1.0, 0.0));
  // evenness in lambda
  auto a = hn::phi_hc(h3, {1.3, 0.0}, 2.0);
  auto b = hn::phi_hc(h3, {-1.3, 0.0}, 2.0);
  CHECK(std::abs(a.value - b.value) < 1e-12);
  // H^3 closed form phi_lambda(r) = sin(lambda r)/(lambda sinh r)
  auto v = hn::phi_hc(h3, {1.0, 0.0}, 1.0);
  CHECK(std::abs(v.value - Complex(0.71602291536043387, 0.0)) < 1e-11);
}

TEST_CASE("phi_hc against closed form on a grid") {
  auto h3 = HyperbolicSpace::make(3);
  for (double l : {0.3, 0.9, 2.2, 5.0}) {
    for (double r : {0.1, 0.7, 1.9, 4.0}) {
      double exact = std::sin(l * r) / (l * std::sinh(r));
      CHECK(std::abs(hn::phi_hc(h3, {l, 0.0}, r).value - Complex(exact, 0.0)) <
            1e-10);
    }
  }
}

TEST_CASE("phi_large agrees with phi_hc") {
  auto h3 = HyperbolicSpace::make(3);
  auto h2 = HyperbolicSpace::make(2);
  CHECK(std::abs(hn::phi_large(h3, 2.0, 3.0).value -
                 hn::phi_hc(h3, {2.0, 0.0}, 3.0).value) < 1e-8);
  CHECK(std::abs(hn::phi_large(h2, 0.7, 5.0).value -
                 hn::phi_hc(h2, {0.7, 0.0}, 5.0).value) < 1e-8);
  // below sinh r = 1 the Pfaff route keeps the series convergent
  CHECK(std::abs(hn::phi_large(h2, 1.1, 0.6).value -
                 hn::phi_hc(h2, {1.1, 0.0}, 0.6).value) < 1e-8);
}

TEST_CASE("phi_large leading envelope") {
  // |phi| / ((2 sinh r)^{-rho} 2|c|) stays in [0, 1]-ish band for large r
  auto h3 = HyperbolicSpace::make(3);
  double cmod = std::abs(hn::c_function(h3, {1.0, 0.0}));
  for (double r : {2.0, 4.0, 8.0, 12.0}) {
    double env = 2.0 * cmod * std::pow(2.0 * std::sinh(r), -h3.rho);
    double v = std::abs(hn::phi_large(h3, 1.0, r).value);
    CHECK(v <= env * 1.01);
  }
}

TEST_CASE("phi_small values and orders") {
  auto h3 = HyperbolicSpace::make(3);
  auto v0 = hn::phi_small(h3, 4.2, 0.0, 3);
  CHECK(v0.value == Complex(1.0, 0.0));
  // M=1 already matches HC closely at small r
  auto v1 = hn::phi_small(h3, 1.0, 0.2, 1);
  CHECK(std::abs(v1.value - hn::phi_hc(h3, {1.0, 0.0}, 0.2).value) < 1e-3);
  // M=3 at moderate (lambda, r)
  auto v3 = hn::phi_small(h3, 4.0, 0.5, 3);
  CHECK(std::abs(v3.value - hn::phi_hc(h3, {4.0, 0.0}, 0.5).value) < 1e-6);
  CHECK_THROWS_AS(hn::phi_small(h3, 1.0, 2.0, 3), DomainError);
}

TEST_CASE("phi_small n=2 and n=4") {
  for (int n : {2, 4}) {
    auto sp = HyperbolicSpace::make(n);
    for (double l : {1.0, 4.0}) {
      for (double r : {0.1, 0.3, 0.5}) {
        auto v = hn::phi_small(sp, l, r, 3);
        auto ref = hn::phi_hc(sp, {l, 0.0}, r);
        CHECK(std::abs(v.value - ref.value) <=
              std::max(v.err_estimate, 1e-7));
      }
    }
  }
}

TEST_CASE("phi dispatch rules and self consistency") {
  auto h3 = HyperbolicSpace::make(3);
  auto a = hn::phi(h3, 0.0, 2.0);
  CHECK(a.method == hn::PhiMethod::HCIntegral);  // lambda = 0 pole route
  auto b = hn::phi(h3, 2.0, 4.0);
  CHECK(b.method == hn::PhiMethod::LargeScaleSeries);
  auto c = hn::phi(h3, 2.0, 0.3);
  CHECK(c.method == hn::PhiMethod::HCIntegral);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> ld(-9.0, 9.0), rd(0.0, 7.0);
  for (int i = 0; i < 50; ++i) {
    double l = ld(rng), r = rd(rng);
    auto v = hn::phi(h3, l, r);
    auto ref = hn::phi_hc(h3, {l, 0.0}, r, 1e-12);
    CHECK(std::abs(v.value - ref.value) <=
          v.err_estimate + ref.err_estimate + 1e-9);
  }
}

TEST_CASE("phi normalization at r=0") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ld(-10.0, 10.0);
  for (int n : {2, 3, 4}) {
    auto sp = HyperbolicSpace::make(n);
    for (int i = 0; i < 100; ++i) {
      auto v = hn::phi(sp, ld(rng), 0.0);
      CHECK(std::abs(v.value - Complex(1.0, 0.0)) <= 1e-10);
    }
  }
}

TEST_CASE("phi bound by phi_0") {
  auto h3 = HyperbolicSpace::make(3);
  for (int i = 0; i < 20; ++i) {
    double l = 0.5 * i;
    for (int j = 0; j < 20; ++j) {
      double r = 8.0 * j / 19.0;
      double v = std::abs(hn::phi(h3, l, r).value);
      double v0 = std::abs(hn::phi(h3, 0.0, r).value);
      CHECK(v <= v0 + 1e-9);
    }
  }
}

TEST_CASE("phi evenness in lambda") {
  for (int n : {2, 3}) {
    auto sp = HyperbolicSpace::make(n);
    for (double l : {0.02, 0.4, 3.0}) {
      for (double r : {0.2, 1.0, 5.0}) {
        auto a = hn::phi(sp, l, r);
        auto b = hn::phi(sp, -l, r);
        CHECK(std::abs(a.value - b.value) <= 1e-12);
      }
    }
  }
}

TEST_CASE("ground state envelope band") {
  auto h3 = HyperbolicSpace::make(3);
  double lo = 1e300, hi = 0.0;
  for (double r = 0.5; r <= 15.0; r += 0.5) {
    double v = hn::phi(h3, 0.0, r).value.real() * std::exp(h3.rho * r) /
               (1.0 + r);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(lo > 0.0);
  CHECK(hi / lo < 10.0);
}

TEST_CASE("cross-method window") {
  // max |phi_hc - phi_large| <= 1e-8 over r in [1,8], |lambda| in [0.2,8]
  for (int n : {2, 3}) {
    auto sp = HyperbolicSpace::make(n);
    double worst = 0.0;
    for (int i = 0; i < 8; ++i) {
      double l = 0.2 + (8.0 - 0.2) * i / 7.0;
      for (int j = 0; j < 8; ++j) {
        double r = 1.0 + 7.0 * j / 7.0;
        worst = std::max(worst, std::abs(hn::phi_hc(sp, {l, 0.0}, r).value -
                                         hn::phi_large(sp, l, r).value));
      }
    }
    CHECK(worst <= 1e-8);
  }
}

TEST_CASE("kunze stein weight") {
  auto h3 = HyperbolicSpace::make(3);
  CHECK(hn::kunze_stein_weight(h3, 0.0) == 0.0);
  // band of weight(r) (1+r)^{n-2} e^{-(n-1)r/2} / r^{n-1} on [0.1, 20]
  double lo = 1e300, hi = 0.0;
  for (double r = 0.1; r <= 20.0; r += 0.4) {
    double w = hn::kunze_stein_weight(h3, r);
    double v = w * (1.0 + r) * std::exp(-r) / (r * r);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  CHECK(hi / lo < 50.0);
  // numerically non-decreasing on r >= 1 for n = 2
  auto h2 = HyperbolicSpace::make(2);
  double prev = hn::kunze_stein_weight(h2, 1.0);
  for (double r = 1.25; r <= 10.0; r += 0.25) {
    double w = hn::kunze_stein_weight(h2, r);
    CHECK(w >= prev - 1e-12);
    prev = w;
  }
}

}  // TEST_SUITE

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "softcover/bounds.hpp"

using namespace softcover::bounds;
using Catch::Approx;

TEST_CASE("binomial absolute mean deviation") {
  auto r0 = binomial_abs_mean_dev_bound(10, 0.0, 1.0);
  CHECK(r0.lhs == 0.0);
  CHECK(r0.holds);

  auto r1 = binomial_abs_mean_dev_bound(10, 1.0, 1.0);
  CHECK(r1.lhs == Approx(0.0).margin(1e-14));
  CHECK(r1.rhs == Approx(std::min(2.0, 1.0 / std::sqrt(10.0))));

  // 11-term exact summation at M=10, p=0.3
  double mean = 3.0, dev = 0.0;
  auto binom = [](int n, int k) {
    double v = 1.0;
    for (int i = 0; i < k; ++i) v = v * (n - i) / (i + 1);
    return v;
  };
  for (int k = 0; k <= 10; ++k)
    dev += binom(10, k) * std::pow(0.3, k) * std::pow(0.7, 10 - k) * std::abs(k - mean);
  auto r2 = binomial_abs_mean_dev_bound(10, 0.3, 1.0);
  CHECK(r2.lhs == Approx(dev / 10.0).epsilon(1e-12));
  CHECK(r2.holds);

  // the scale parameter passes through linearly
  auto r3 = binomial_abs_mean_dev_bound(10, 0.3, 2.5);
  CHECK(r3.lhs == Approx(2.5 * r2.lhs).epsilon(1e-12));
}

TEST_CASE("binomial bound over the full grid") {
  for (int m = 1; m <= 50; ++m)
    for (int pi = 0; pi <= 20; ++pi) CHECK(binomial_abs_mean_dev_bound(m, 0.05 * pi, 1.0).holds);
}

TEST_CASE("poisson tail expectation bound") {
  auto r = poisson_tail_bound(10.0, 0.5);
  CHECK(r.holds);
  // deep tail: both sides nearly zero
  auto deep = poisson_tail_bound(100.0, 0.9);
  CHECK(deep.lhs < 1e-8);
  CHECK(deep.holds);
  CHECK_THROWS_AS(poisson_tail_bound(10.0, 0.05), std::domain_error);
  CHECK_THROWS_AS(poisson_tail_bound(0.5, 0.5), std::domain_error);

  for (double mu : {1.5, 2.0, 5.0, 10.0, 50.0})
    for (double delta : {0.2, 0.35, 0.5, 0.75, 0.9})
      if (delta > 1.0 / mu) CHECK(poisson_tail_bound(mu, delta).holds);
}

TEST_CASE("a_epsilon monotone decreasing below one") {
  CHECK(a_epsilon_constant(1e-12) == Approx(1.0).margin(1e-10));
  double prev = 1.0;
  for (double eps = 0.02; eps < 1.0; eps += 0.02) {
    double a = a_epsilon_constant(eps);
    CHECK(a < prev);
    CHECK(a < 1.0);
    prev = a;
  }
}

TEST_CASE("poisson absolute mean deviation closed form") {
  auto d1 = poisson_abs_mean_dev(1.0);
  CHECK(d1.exact == Approx(2.0 / std::exp(1.0)).epsilon(1e-12));
  auto dh = poisson_abs_mean_dev(0.5);
  CHECK(dh.exact == Approx(std::exp(-0.5)).epsilon(1e-12));
  // (1/4) min{2 xi, sqrt(xi)} = sqrt(0.5)/4 here
  CHECK(dh.lower == Approx(std::sqrt(0.5) / 4.0).epsilon(1e-12));
  CHECK(poisson_abs_mean_dev(1e-9).exact < 1e-8);

  for (int i = 1; i <= 200; ++i) {
    double xi = 0.1 * i;
    auto d = poisson_abs_mean_dev(xi);
    CHECK(d.exact >= d.lower - 1e-12);
    CHECK(d.exact == Approx(poisson_abs_mean_dev_by_summation(xi)).margin(1e-12));
  }
}

TEST_CASE("poisson mode mass bound") {
  auto r1 = poisson_mode_mass(1.0);
  CHECK(r1.rhs == Approx(std::exp(-1.0)).epsilon(1e-12));
  CHECK(r1.holds);  // e^{-1} > 1/8
  CHECK(poisson_mode_mass(100.0).holds);
  // bound decays like 1/sqrt(mu) while the mass does too; ordering persists
  auto big = poisson_mode_mass(1e4);
  CHECK(big.holds);
  CHECK(big.rhs == Approx(1.0 / std::sqrt(2.0 * 3.14159265358979 * 1e4)).epsilon(0.01));
  CHECK_THROWS_AS(poisson_mode_mass(0.5), std::domain_error);
}

TEST_CASE("poissonized concentration forms are ordered") {
  auto c = poissonized_tv_concentration_bound(100.0, 0.5);
  CHECK(c.ordered);
  // t -> infinity: both forms approach 2 e^{-mu}
  auto big = poissonized_tv_concentration_bound(3.0, 50.0);
  CHECK(big.tight == Approx(2.0 * std::exp(-3.0)).epsilon(1e-6));
  CHECK(big.loose == Approx(2.0 * std::exp(-3.0)).epsilon(1e-2));
  // t -> 0: both approach 2
  auto tiny = poissonized_tv_concentration_bound(3.0, 1e-9);
  CHECK(tiny.tight == Approx(2.0).margin(1e-8));
  CHECK(tiny.loose == Approx(2.0).margin(1e-8));
}

TEST_CASE("Robbins' sharpening of Stirling") {
  for (int k = 1; k <= 170; ++k) {
    double lhs = std::lgamma(k + 1.0);
    double rhs = k * std::log(static_cast<double>(k)) - k + 1.0 / (12.0 * k) +
                 0.5 * std::log(2.0 * 3.141592653589793 * k);
    CHECK(lhs <= rhs + 1e-12);
  }
}

TEST_CASE("full suite runs clean") {
  auto s = run_bounds_suite();
  CHECK(s.failed == 0);
  CHECK(s.checked > 1000);
}

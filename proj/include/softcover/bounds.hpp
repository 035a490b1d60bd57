#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "softcover/common.hpp"

// Standalone, exactly testable implementations of the binomial and Poisson
// absolute-mean-deviation and tail inequalities used by the proofs. "Exact"
// summations truncate once the remaining mass bound drops below 1e-15, so
// comparisons carry that tolerance.

namespace softcover::bounds {

struct BoundReport {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double slack = 0.0;
};

inline BoundReport make_report(double lhs, double rhs) {
  BoundReport r;
  r.lhs = lhs;
  r.rhs = rhs;
  r.slack = rhs - lhs;
  r.holds = lhs <= rhs + 1e-12;
  return r;
}

inline double log_binomial_pmf(int m, int k, double p) {
  if (p == 0.0) return k == 0 ? 0.0 : -kInf;
  if (p == 1.0) return k == m ? 0.0 : -kInf;
  return std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0) + k * std::log(p) +
         (m - k) * std::log(1.0 - p);
}

/// E|Z - EZ| for Z = (l/M) Binomial(M, p), against the envelope
/// l * min{2p, sqrt(p/M)} (the twice-mean and standard-deviation caps).
inline BoundReport binomial_abs_mean_dev_bound(int m, double p, double l) {
  if (m < 1) throw std::domain_error("binomial_abs_mean_dev_bound: M >= 1 required");
  if (p < 0.0 || p > 1.0) throw std::domain_error("binomial_abs_mean_dev_bound: p in [0,1] required");
  if (l < 0.0) throw std::domain_error("binomial_abs_mean_dev_bound: l >= 0 required");
  double mean = static_cast<double>(m) * p;
  double dev = 0.0;
  for (int k = 0; k <= m; ++k) dev += std::exp(log_binomial_pmf(m, k, p)) * std::abs(k - mean);
  double lhs = l / m * dev;
  double rhs = l * std::min(2.0 * p, std::sqrt(p / m));
  return make_report(lhs, rhs);
}

inline double a_epsilon_constant(double eps) { return std::exp(eps) / std::pow(1.0 + eps, 1.0 + eps); }

inline double log_poisson_pmf(double mu, long long k) {
  return k * std::log(mu) - mu - std::lgamma(static_cast<double>(k) + 1.0);
}

/// E[M 1{M > (1+delta) mu}] for Poisson M against mu * a_{delta - 1/mu}^mu.
inline BoundReport poisson_tail_bound(double mu, double delta) {
  if (!(mu > 1.0)) throw std::domain_error("poisson_tail_bound: mu > 1 required");
  if (!(delta > 1.0 / mu && delta < 1.0))
    throw std::domain_error("poisson_tail_bound: delta in (1/mu, 1) required");
  long long k0 = static_cast<long long>(std::floor((1.0 + delta) * mu)) + 1;
  double lhs = 0.0;
  for (long long k = k0;; ++k) {
    double term = static_cast<double>(k) * std::exp(log_poisson_pmf(mu, k));
    lhs += term;
    // geometric tail estimate: later terms shrink at least by mu/k
    if (k > mu && term * (mu / (k - mu + 1.0)) * (k + 1.0) / k < 1e-15 * (lhs + 1e-300)) break;
    if (k > k0 + 100 * (1 + static_cast<long long>(std::sqrt(mu)))) break;
  }
  double eps = delta - 1.0 / mu;
  double rhs = mu * std::exp(mu * std::log(a_epsilon_constant(eps)));
  return make_report(lhs, rhs);
}

struct PoissonDeviation {
  double exact = 0.0;  // closed form 2 xi^{floor(xi)+1} e^{-xi} / floor(xi)!
  double lower = 0.0;  // (1/4) min{2 xi, sqrt(xi)}
};

inline PoissonDeviation poisson_abs_mean_dev(double xi) {
  if (!(xi > 0.0)) throw std::domain_error("poisson_abs_mean_dev: xi > 0 required");
  PoissonDeviation d;
  double fl = std::floor(xi);
  d.exact = 2.0 * std::exp((fl + 1.0) * std::log(xi) - xi - std::lgamma(fl + 1.0));
  d.lower = 0.25 * std::min(2.0 * xi, std::sqrt(xi));
  return d;
}

/// Direct truncated summation of E|N - xi| for cross-checking the closed form.
inline double poisson_abs_mean_dev_by_summation(double xi) {
  double s = 0.0;
  long long hi = static_cast<long long>(xi + 60.0 * std::sqrt(xi) + 60.0);
  for (long long k = 0; k <= hi; ++k)
    s += std::exp(log_poisson_pmf(xi, k)) * std::abs(static_cast<double>(k) - xi);
  return s;
}

/// P[M = ceil(mu)] > 1/(8 sqrt(ceil(mu))): the report's lhs is the bound and
/// holds means the exactly computed mass exceeds it.
inline BoundReport poisson_mode_mass(double mu) {
  if (!(mu >= 1.0)) throw std::domain_error("poisson_mode_mass: mu >= 1 required");
  long long c = static_cast<long long>(std::ceil(mu));
  double mass = std::exp(log_poisson_pmf(mu, c));
  double bound = 1.0 / (8.0 * std::sqrt(static_cast<double>(c)));
  BoundReport r;
  r.lhs = bound;
  r.rhs = mass;
  r.slack = mass - bound;
  r.holds = mass > bound;
  return r;
}

struct PoissonTvConcentration {
  double tight = 0.0;  // 2 exp(-mu (1 - e^{-t^2/2}))
  double loose = 0.0;  // 2 exp(-mu t^2 / (2 + t^2))
  bool ordered = false;
};

inline PoissonTvConcentration poissonized_tv_concentration_bound(double mu, double t) {
  if (!(mu > 0.0) || !(t > 0.0))
    throw std::domain_error("poissonized_tv_concentration_bound: mu > 0, t > 0 required");
  PoissonTvConcentration c;
  c.tight = 2.0 * std::exp(-mu * (1.0 - std::exp(-t * t / 2.0)));
  c.loose = 2.0 * std::exp(-mu * t * t / (2.0 + t * t));
  c.ordered = c.tight <= c.loose + 1e-15;
  return c;
}

struct SuiteSummary {
  int checked = 0;
  int failed = 0;
  std::vector<std::string> failures;
};

/// Runs the full grid suite from the regression plan; used by the CLI.
inline SuiteSummary run_bounds_suite() {
  SuiteSummary s;
  auto record = [&](bool ok, const std::string& label) {
    ++s.checked;
    if (!ok) {
      ++s.failed;
      s.failures.push_back(label);
    }
  };

  for (int m = 1; m <= 50; ++m)
    for (int pi = 0; pi <= 20; ++pi) {
      double p = 0.05 * pi;
      auto r = binomial_abs_mean_dev_bound(m, p, 1.0);
      record(r.holds, "binomial M=" + std::to_string(m) + " p=" + std::to_string(p));
    }

  for (double mu : {1.5, 2.0, 5.0, 10.0, 50.0})
    for (double delta : {0.2, 0.35, 0.5, 0.75, 0.9}) {
      if (delta <= 1.0 / mu) continue;
      auto r = poisson_tail_bound(mu, delta);
      record(r.holds, "poisson-tail mu=" + std::to_string(mu) + " delta=" + std::to_string(delta));
    }

  for (int i = 1; i <= 200; ++i) {
    double xi = 0.1 * i;
    auto d = poisson_abs_mean_dev(xi);
    record(d.exact >= d.lower - 1e-12, "poisson-dev lower xi=" + std::to_string(xi));
    record(std::abs(d.exact - poisson_abs_mean_dev_by_summation(xi)) <= 1e-12,
           "poisson-dev closed-form xi=" + std::to_string(xi));
  }

  for (double mu : {1.0, 1.5, 2.0, 5.0, 10.0, 100.0, 1000.0, 10000.0})
    record(poisson_mode_mass(mu).holds, "poisson-mode mu=" + std::to_string(mu));

  for (double mu : {1.0, 10.0, 100.0})
    for (double t : {0.01, 0.1, 0.5, 1.0, 2.0, 10.0})
      record(poissonized_tv_concentration_bound(mu, t).ordered,
             "tv-concentration mu=" + std::to_string(mu) + " t=" + std::to_string(t));

  return s;
}

}  // namespace softcover::bounds

#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>

#include "helpers.hpp"
#include "softcover/exponents.hpp"
#include "softcover/simulator.hpp"

using namespace softcover;
using Catch::Approx;

TEST_CASE("codebook sampling: determinism and composition invariant") {
  Distribution p({0.3, 0.7});
  Codebook a = sample_codebook(p, 8, 16, 1234);
  Codebook b = sample_codebook(p, 8, 16, 1234);
  CHECK(a.codewords == b.codewords);
  Codebook c = sample_codebook(p, 8, 16, 1235);
  CHECK(a.codewords != c.codewords);

  Codebook cc = sample_codebook(p, {1, 1}, 4, 50, CodebookKind::constant_composition, 9);
  for (const auto& word : cc.codewords) {
    int ones = 0;
    for (auto s : word) ones += s;
    CHECK(ones == 2);
  }
  CHECK_THROWS(sample_codebook(p, {1, 1}, 5, 3, CodebookKind::constant_composition, 9));
  CHECK_THROWS(sample_codebook(p, 4, 0, 9));
}

TEST_CASE("single-symbol sampling matches the distribution (chi-square)") {
  Distribution p({0.3, 0.7});
  const int draws = 100000;
  int count0 = 0;
  for (int i = 0; i < draws; ++i) {
    Codebook cb = sample_codebook(p, 1, 1, mix_key(42, static_cast<std::uint64_t>(i)));
    count0 += cb.codewords[0][0] == 0;
  }
  double e0 = draws * 0.3, e1 = draws * 0.7;
  double chi2 = (count0 - e0) * (count0 - e0) / e0 +
                (draws - count0 - e1) * (draws - count0 - e1) / e1;
  CHECK(chi2 < 15.137);  // chi-square df=1 critical value at p = 1e-4
}

TEST_CASE("constant-composition words are uniform over the class (chi-square)") {
  Distribution p({0.5, 0.5});
  const int draws = 60000;
  std::map<std::vector<std::uint8_t>, int> counts;
  for (int i = 0; i < draws; ++i) {
    Codebook cb = sample_codebook(p, {1, 1}, 4, 1, CodebookKind::constant_composition,
                                  mix_key(77, static_cast<std::uint64_t>(i)));
    counts[cb.codewords[0]] += 1;
  }
  REQUIRE(counts.size() == 6);  // C(4,2) patterns
  double expect = draws / 6.0;
  double chi2 = 0.0;
  for (auto& [word, c] : counts) chi2 += (c - expect) * (c - expect) / expect;
  CHECK(chi2 < 25.745);  // chi-square df=5 critical value at p = 1e-4
}

TEST_CASE("exact_tv against the naive per-sequence oracle") {
  SplitMix64 rng(505);
  for (int trial = 0; trial < 50; ++trial) {
    int nx = 2 + trial % 2, ny = 2 + (trial / 2) % 2, n = 2 + trial % 3;
    Distribution p = testkit::random_distribution(rng, nx, 0.1);
    Channel w = testkit::random_channel(rng, nx, ny, 0.05);
    Distribution py = output_distribution(p, w);
    Codebook cb = sample_codebook(p, n, 7, 1000 + static_cast<std::uint64_t>(trial));
    double naive = 0.0;
    std::vector<int> y(static_cast<std::size_t>(n), 0);
    for (;;) {
      double induced = 0.0;
      for (const auto& x : cb.codewords) {
        double lik = 1.0;
        for (int i = 0; i < n; ++i) lik *= w(x[static_cast<std::size_t>(i)], y[static_cast<std::size_t>(i)]);
        induced += lik;
      }
      double target = 1.0;
      for (int i = 0; i < n; ++i) target *= py[y[static_cast<std::size_t>(i)]];
      naive += std::abs(induced / 7.0 - target);
      int pos = 0;
      while (pos < n) {
        if (++y[static_cast<std::size_t>(pos)] < ny) break;
        y[static_cast<std::size_t>(pos)] = 0;
        ++pos;
      }
      if (pos == n) break;
    }
    CHECK(exact_tv(cb, w, p).tv == Approx(naive).margin(1e-12));
  }
}

TEST_CASE("cc exact_tv against a whole-type-class oracle") {
  // naive reference: average the likelihood over every sequence in the type
  // class, no counting identities
  SplitMix64 rng(707);
  for (int trial = 0; trial < 8; ++trial) {
    int nx = 2 + trial % 2, ny = 2 + (trial / 2) % 2;
    int n = 2 * nx;
    std::vector<int> comp(static_cast<std::size_t>(nx), 1);
    Distribution p = testkit::random_distribution(rng, nx, 0.1);
    Channel w = testkit::random_channel(rng, nx, ny, 0.05);
    Codebook cb = sample_codebook(p, comp, n, 5, CodebookKind::constant_composition,
                                  2000 + static_cast<std::uint64_t>(trial));

    // enumerate the class once
    std::vector<std::vector<int>> type_class;
    std::vector<int> x(static_cast<std::size_t>(n), 0);
    for (;;) {
      std::vector<int> counts(static_cast<std::size_t>(nx), 0);
      for (int s : x) counts[static_cast<std::size_t>(s)] += 1;
      bool in_class = true;
      for (int a = 0; a < nx; ++a) in_class = in_class && counts[static_cast<std::size_t>(a)] == 2;
      if (in_class) type_class.push_back(x);
      int pos = 0;
      while (pos < n) {
        if (++x[static_cast<std::size_t>(pos)] < nx) break;
        x[static_cast<std::size_t>(pos)] = 0;
        ++pos;
      }
      if (pos == n) break;
    }

    double naive = 0.0;
    std::vector<int> y(static_cast<std::size_t>(n), 0);
    for (;;) {
      double induced = 0.0;
      for (const auto& word : cb.codewords) {
        double lik = 1.0;
        for (int i = 0; i < n; ++i) lik *= w(word[static_cast<std::size_t>(i)], y[static_cast<std::size_t>(i)]);
        induced += lik;
      }
      double target = 0.0;
      for (const auto& member : type_class) {
        double lik = 1.0;
        for (int i = 0; i < n; ++i)
          lik *= w(static_cast<std::size_t>(member[static_cast<std::size_t>(i)]),
                   y[static_cast<std::size_t>(i)]);
        target += lik;
      }
      target /= static_cast<double>(type_class.size());
      naive += std::abs(induced / 5.0 - target);
      int pos = 0;
      while (pos < n) {
        if (++y[static_cast<std::size_t>(pos)] < ny) break;
        y[static_cast<std::size_t>(pos)] = 0;
        ++pos;
      }
      if (pos == n) break;
    }
    CHECK(exact_tv(cb, w, p).tv == Approx(naive).margin(1e-12));
  }
}

TEST_CASE("cc L statistic uses the class-average target") {
  Channel w = testkit::bsc_channel();
  Distribution p({0.5, 0.5});
  std::vector<std::uint8_t> y = {0, 1, 1, 0};
  const int k = 4000;
  double mean = 0, m2 = 0;
  for (int i = 0; i < k; ++i) {
    Codebook cb = sample_codebook(p, {1, 1}, 4, 6, CodebookKind::constant_composition,
                                  mix_key(8, static_cast<std::uint64_t>(i)));
    double l = l_statistic(cb, w, p, y);
    mean += l;
    m2 += l * l;
  }
  mean /= k;
  double se = std::sqrt((m2 / k - mean * mean) / k);
  CHECK(std::abs(mean - 1.0) <= 3.0 * se);

  Channel degen({{0.41, 0.59}, {0.41, 0.59}});
  Codebook cb = sample_codebook(p, {1, 1}, 4, 6, CodebookKind::constant_composition, 3);
  CHECK(l_statistic(cb, degen, p, y) == Approx(1.0).margin(1e-12));
}

TEST_CASE("exact_tv: closed forms and guards") {
  Distribution p({0.4, 0.6});
  Channel w = testkit::bsc_channel();
  Distribution py = output_distribution(p, w);

  // n=1, M=1: sum_y |W(y|x) - P_Y(y)| for the sampled x
  Codebook cb = sample_codebook(p, 1, 1, 3);
  int x = cb.codewords[0][0];
  double expect = std::abs(w(x, 0) - py[0]) + std::abs(w(x, 1) - py[1]);
  CHECK(exact_tv(cb, w, p).tv == Approx(expect).epsilon(1e-12));

  Channel degen({{0.41, 0.59}, {0.41, 0.59}});
  Distribution pd({0.5, 0.5});
  CHECK(exact_tv(sample_codebook(pd, 6, 9, 7), degen, pd).tv <= 1e-12);

  CHECK_THROWS_AS(exact_tv(sample_codebook(p, 30, 2, 1), w, p), size_guard_error);
}

TEST_CASE("tv samples stay in range and reproduce bit-identically") {
  Distribution p = testkit::bsc_input();
  Channel w = testkit::bsc_channel();
  SplitMix64 rng(606);
  for (int i = 0; i < 20; ++i) {
    Codebook cb = sample_codebook(p, 6, 11, rng.next());
    double tv = exact_tv(cb, w, p).tv;
    CHECK(tv >= 0.0);
    CHECK(tv <= 2.0);
  }
  auto e1 = estimate_exponent(p, {}, w, 6, testkit::bsc_rate_nats(), 10, 99, CodebookKind::iid);
  auto e2 = estimate_exponent(p, {}, w, 6, testkit::bsc_rate_nats(), 10, 99, CodebookKind::iid);
  CHECK(e1.tvs == e2.tvs);  // bit-identical streams
}

TEST_CASE("estimate_exponent guards and degenerate flag") {
  Distribution p = testkit::bsc_input();
  Channel w = testkit::bsc_channel();
  CHECK_THROWS(estimate_exponent(p, {}, w, 4, 0.6, 1, 5, CodebookKind::iid));
  std::vector<std::uint64_t> dup = {7, 7};
  CHECK_THROWS_AS(estimate_exponent(p, {}, w, 4, 0.6, 2, 5, CodebookKind::iid, &dup),
                  std::invalid_argument);

  Channel degen({{0.41, 0.59}, {0.41, 0.59}});
  Distribution pd({0.5, 0.5});
  auto e = estimate_exponent(pd, {}, degen, 4, 0.6, 4, 5, CodebookKind::iid);
  CHECK(e.exponent_infinite);
  CHECK(e.mean_tv <= 1e-12);
}

TEST_CASE("poissonized estimate") {
  Distribution p = testkit::bsc_input();
  Channel w = testkit::bsc_channel();
  double R = testkit::bsc_rate_nats();
  const int n = 8, reps = 60;
  auto e = poissonized_estimate(p, {}, w, n, R, reps, 31337, CodebookKind::iid);
  double mu = std::exp(n * R);
  double mean_m = 0.0;
  for (long long m : e.ms) mean_m += static_cast<double>(m);
  mean_m /= reps;
  CHECK(std::abs(mean_m - mu) <= 3.0 * std::sqrt(mu / reps));

  CHECK_THROWS(poissonized_estimate(p, {}, w, 1, 0.5, 10, 1, CodebookKind::iid));  // exp(nR) too small

  Channel degen({{0.41, 0.59}, {0.41, 0.59}});
  Distribution pd({0.5, 0.5});
  auto ed = poissonized_estimate(pd, {}, degen, 6, 1.0, 4, 5, CodebookKind::iid);
  CHECK(ed.mean_tv <= 1e-12);
}

TEST_CASE("poisson sampler distribution sanity") {
  SplitMix64 rng(12321);
  const double mu = 50.0;
  const int k = 20000;
  double mean = 0, m2 = 0;
  for (int i = 0; i < k; ++i) {
    double v = static_cast<double>(poisson_draw(rng, mu));
    mean += v;
    m2 += v * v;
  }
  mean /= k;
  double var = m2 / k - mean * mean;
  CHECK(mean == Approx(mu).margin(3.0 * std::sqrt(mu / k)));
  CHECK(var == Approx(mu).margin(0.1 * mu));
}

TEST_CASE("McDiarmid concentration table") {
  Distribution p = testkit::bsc_input();
  Channel w = testkit::bsc_channel();
  double R = testkit::bsc_rate_nats();
  auto rows = concentration_check(p, {}, w, 8, R, 120, {0.0, 0.01, 2.0}, 2024, CodebookKind::iid);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].bound == Approx(2.0));  // vacuous at t = 0
  CHECK(rows[0].holds);
  CHECK(rows[2].fraction == 0.0);  // the TV range makes t = 2 impossible
  CHECK(rows[2].holds);
  for (const auto& r : rows) CHECK(r.holds);
  CHECK_THROWS(concentration_check(p, {}, w, 8, R, 50, {0.1}, 1, CodebookKind::iid));
}

TEST_CASE("L statistic") {
  Distribution p = testkit::bsc_input();
  Channel w = testkit::bsc_channel();

  Channel degen({{0.41, 0.59}, {0.41, 0.59}});
  Distribution pd({0.5, 0.5});
  std::vector<std::uint8_t> y = {0, 1, 1, 0, 1};
  for (int i = 0; i < 5; ++i) {
    Codebook cb = sample_codebook(pd, 5, 8, static_cast<std::uint64_t>(i));
    CHECK(l_statistic(cb, degen, pd, y) == Approx(1.0).margin(1e-12));
  }

  // M=1, n=1: W(y|x)/P_Y(y)
  Distribution py = output_distribution(p, w);
  Codebook one = sample_codebook(p, 1, 1, 11);
  std::vector<std::uint8_t> y1 = {1};
  CHECK(l_statistic(one, w, p, y1) == Approx(w(one.codewords[0][0], 1) / py[1]).epsilon(1e-12));

  // Monte Carlo mean of L is 1 within 3 sigma
  const int k = 10000;
  double mean = 0, m2 = 0;
  for (int i = 0; i < k; ++i) {
    Codebook cb = sample_codebook(p, 5, 12, mix_key(5, static_cast<std::uint64_t>(i)));
    double l = l_statistic(cb, w, p, y);
    mean += l;
    m2 += l * l;
  }
  mean /= k;
  double se = std::sqrt((m2 / k - mean * mean) / k);
  CHECK(std::abs(mean - 1.0) <= 3.0 * se);
}

TEST_CASE("cc ensemble decays at least as fast as iid") {
  Channel w = testkit::bsc_channel();
  double R = testkit::bsc_rate_nats();
  TypeDescriptor comp({2, 3}, 5);
  Distribution px = comp.as_distribution();
  // The composition denominator is 5, so block lengths run over multiples of 5.
  const int n = 10, reps = 60;
  auto cc = estimate_exponent(px, comp.counts, w, n, R, reps, 321, CodebookKind::constant_composition);
  auto iid = estimate_exponent(px, {}, w, n, R, reps, 321, CodebookKind::iid);
  double ci_cc = cc.ci95_high - cc.ci95_low;
  double ci_iid = iid.ci95_high - iid.ci95_low;
  CHECK(cc.empirical_exponent >= iid.empirical_exponent - 2.0 * (ci_cc + ci_iid));
  // both ensembles decay with n; at desk scale the cc decay is slow (the
  // polynomial prefactor dominates), so compare the endpoints of the range
  auto iid5 = estimate_exponent(px, {}, w, 5, R, reps, 321, CodebookKind::iid);
  auto iid15 = estimate_exponent(px, {}, w, 15, R, 24, 321, CodebookKind::iid);
  CHECK(iid15.mean_tv < iid5.mean_tv);
  auto cc5 = estimate_exponent(px, comp.counts, w, 5, R, 120, 321, CodebookKind::constant_composition);
  auto cc15 = estimate_exponent(px, comp.counts, w, 15, R, 24, 321, CodebookKind::constant_composition);
  CHECK(cc15.mean_tv < cc5.mean_tv);
}

TEST_CASE("zero channel entries flow through both ensembles") {
  // Z channel: one error-free input symbol
  Distribution p({0.4, 0.6});
  Channel z({{1.0, 0.0}, {0.05, 0.95}});
  double R = mutual_information(p, z) + 0.2 * kLn2;
  auto iid = estimate_exponent(p, {}, z, 10, R, 20, 11, CodebookKind::iid);
  CHECK(std::isfinite(iid.mean_tv));
  CHECK(iid.mean_tv > 0.0);
  TypeDescriptor comp({2, 3}, 5);
  auto cc = estimate_exponent(comp.as_distribution(), comp.counts, z, 10, R, 20, 11,
                              CodebookKind::constant_composition);
  CHECK(std::isfinite(cc.mean_tv));
  CHECK(cc.mean_tv > 0.0);
  CHECK(cc.mean_tv <= 2.0);
  // the class-average target still normalizes
  double total = 0.0;
  for (int ones = 0; ones <= 10; ++ones)
    total += cc_output_probability(z, {4, 6}, {10 - ones, ones}) *
             std::exp(std::lgamma(11.0) - std::lgamma(ones + 1.0) - std::lgamma(11.0 - ones));
  CHECK(total == Approx(1.0).epsilon(1e-12));
}

TEST_CASE("results do not depend on the worker thread count") {
  Distribution p = testkit::bsc_input();
  Channel w = testkit::bsc_channel();
  double R = testkit::bsc_rate_nats();
  setenv("SOFTCOVER_THREADS", "1", 1);
  auto one = estimate_exponent(p, {}, w, 7, R, 12, 404, CodebookKind::iid);
  setenv("SOFTCOVER_THREADS", "4", 1);
  auto four = estimate_exponent(p, {}, w, 7, R, 12, 404, CodebookKind::iid);
  CHECK(one.tvs == four.tvs);
  CHECK(one.mean_tv == four.mean_tv);

  // oversized jobs are refused before any codebook is sampled
  CHECK_THROWS_AS(estimate_exponent(p, {}, w, 30, R, 4, 1, CodebookKind::iid), size_guard_error);
  // worker exceptions resurface on the calling thread
  CHECK_THROWS_AS(parallel_for(8,
                               [](int i) {
                                 if (i == 3) throw std::runtime_error("boom");
                               }),
                  std::runtime_error);
  unsetenv("SOFTCOVER_THREADS");
}

TEST_CASE("cc target distribution is a probability distribution") {
  Channel w = testkit::bsc_channel();
  std::vector<int> row_counts = {2, 4};
  const int n = 6;
  double total = 0.0;
  for (int ones = 0; ones <= n; ++ones) {
    double v = cc_output_probability(w, row_counts, {n - ones, ones});
    total += v * std::exp(std::lgamma(n + 1.0) - std::lgamma(ones + 1.0) - std::lgamma(n - ones + 1.0));
  }
  CHECK(total == Approx(1.0).epsilon(1e-12));
}

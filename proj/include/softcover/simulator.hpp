#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <functional>
#include <map>
#include <thread>
#include <vector>

#include "softcover/common.hpp"
#include "softcover/distribution.hpp"
#include "softcover/measures.hpp"
#include "softcover/typespace.hpp"

// Monte Carlo verification of the soft-covering claims at desk scale:
// sample random codebooks, compute the exact total variation distance of the
// induced output distribution by exhaustive output enumeration, and check
// the concentration and finite-blocklength statements empirically.

namespace softcover {

// ---------------------------------------------------------------------------
// Counter-based randomness: every draw is a pure function of
// (master seed, replica index, codeword index, draw counter), so replicas are
// independent, order-insensitive and bit-reproducible across platforms.
// std::uniform_*_distribution is implementation-defined and never used here.

struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  double next_unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Unbiased draw from {0, ..., bound-1} by rejection.
  std::uint64_t next_below(std::uint64_t bound) {
    std::uint64_t threshold = (0ull - bound) % bound;
    for (;;) {
      std::uint64_t r = next();
      if (r >= threshold) return r % bound;
    }
  }
};

inline std::uint64_t mix_key(std::uint64_t a, std::uint64_t b, std::uint64_t c = 0) {
  SplitMix64 s(a ^ 0x6a09e667f3bcc909ull);
  std::uint64_t h = s.next();
  s.state ^= b + 0xbb67ae8584caa73bull + (h << 6) + (h >> 2);
  h ^= s.next();
  s.state ^= c + 0x3c6ef372fe94f82bull + (h << 6) + (h >> 2);
  return s.next();
}

inline int env_thread_cap() {
  if (const char* v = std::getenv("SOFTCOVER_THREADS")) {
    int n = std::atoi(v);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::min<unsigned>(hw == 0 ? 1 : hw, 8));
}

/// Runs fn(i) for i in [0, count) across worker threads; fn writes only to
/// its own slot, so results do not depend on scheduling. The first exception
/// raised in a worker is rethrown on the calling thread after all join.
template <class Fn>
void parallel_for(int count, Fn&& fn) {
  int workers = std::min(env_thread_cap(), count);
  if (workers <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(count));
  std::atomic<bool> failed{false};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t)
    pool.emplace_back([&]() {
      for (;;) {
        int i = next.fetch_add(1);
        if (i >= count) return;
        try {
          fn(i);
        } catch (...) {
          errors[static_cast<std::size_t>(i)] = std::current_exception();
          failed.store(true);
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failed.load())
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
}

// ---------------------------------------------------------------------------
// Codebooks

enum class CodebookKind { iid, constant_composition };

struct Codebook {
  std::vector<std::vector<std::uint8_t>> codewords;
  CodebookKind kind = CodebookKind::iid;
  std::uint64_t seed = 0;
  int n = 0;
  long long m = 0;
};

/// Draws an i.i.d. codebook from p, or a constant-composition codebook in
/// which each codeword is an independent uniform shuffle of the fixed symbol
/// multiset given by the composition counts.
inline Codebook sample_codebook(const Distribution& p, const std::vector<int>& composition_counts, int n,
                                long long m, CodebookKind kind, std::uint64_t seed) {
  if (m < 1) throw std::domain_error("sample_codebook: M must be at least 1");
  if (n < 1) throw std::domain_error("sample_codebook: n must be at least 1");
  Codebook cb;
  cb.kind = kind;
  cb.seed = seed;
  cb.n = n;
  cb.m = m;
  cb.codewords.assign(static_cast<std::size_t>(m), std::vector<std::uint8_t>(static_cast<std::size_t>(n)));

  std::vector<std::uint8_t> base;
  if (kind == CodebookKind::constant_composition) {
    long long total = 0;
    for (int c : composition_counts) total += c;
    if (total <= 0 || n % total != 0)
      throw std::domain_error("sample_codebook: n must be a multiple of the composition denominator");
    int scale = static_cast<int>(n / total);
    for (std::size_t sym = 0; sym < composition_counts.size(); ++sym)
      base.insert(base.end(), static_cast<std::size_t>(composition_counts[sym]) * scale,
                  static_cast<std::uint8_t>(sym));
  }

  std::vector<double> cdf(p.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    acc += p[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;

  for (long long j = 0; j < m; ++j) {
    SplitMix64 rng(mix_key(seed, static_cast<std::uint64_t>(j)));
    auto& word = cb.codewords[static_cast<std::size_t>(j)];
    if (kind == CodebookKind::iid) {
      for (int i = 0; i < n; ++i) {
        double u = rng.next_unit();
        std::size_t s = 0;
        while (s + 1 < cdf.size() && u >= cdf[s]) ++s;
        word[i] = static_cast<std::uint8_t>(s);
      }
    } else {
      std::copy(base.begin(), base.end(), word.begin());
      for (int i = n - 1; i > 0; --i) {
        auto k = static_cast<std::size_t>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
        std::swap(word[static_cast<std::size_t>(i)], word[k]);
      }
    }
  }
  return cb;
}

inline Codebook sample_codebook(const Distribution& p, int n, long long m, std::uint64_t seed) {
  return sample_codebook(p, {}, n, m, CodebookKind::iid, seed);
}

inline Codebook sample_codebook(const TypeDescriptor& composition, int n, long long m, std::uint64_t seed) {
  return sample_codebook(composition.as_distribution(), composition.counts, n, m,
                         CodebookKind::constant_composition, seed);
}

// ---------------------------------------------------------------------------
// Exact total variation by exhaustive output enumeration

struct TvSample {
  double tv = 0.0;
  std::uint64_t codebook_seed = 0;
  int n = 0;
  long long m = 0;
};

inline constexpr double kOutputSpaceGuard = 16777216.0;  // 2^24 sequences

namespace detail {

/// Per-codeword likelihoods are functions of the joint type of (x^n, y^n)
/// alone, so they reduce to pair counts and table lookups of channel powers.
struct LikelihoodTables {
  int n, nx, ny;
  // pw[x][y][k] = W(y|x)^k, with the 0^0 = 1 convention and 0 elsewhere
  std::vector<std::vector<std::vector<double>>> pw;
  std::vector<std::vector<double>> py_pow;  // P_Y(y)^k

  LikelihoodTables(const Channel& w, const Distribution& py, int n_)
      : n(n_), nx(static_cast<int>(w.input_size())), ny(static_cast<int>(w.output_size())) {
    pw.assign(nx, std::vector<std::vector<double>>(ny, std::vector<double>(n + 1, 1.0)));
    for (int x = 0; x < nx; ++x)
      for (int y = 0; y < ny; ++y)
        for (int k = 1; k <= n; ++k) pw[x][y][k] = pw[x][y][k - 1] * w(x, y);
    py_pow.assign(ny, std::vector<double>(n + 1, 1.0));
    for (int y = 0; y < ny; ++y)
      for (int k = 1; k <= n; ++k) py_pow[y][k] = py_pow[y][k - 1] * py[y];
  }
};

/// Joint-type path for arbitrary alphabets: count symbol pairs, then one
/// product of precomputed powers.
inline double likelihood_by_type(const std::vector<std::uint8_t>& x, const std::vector<std::uint8_t>& y,
                                 const LikelihoodTables& t, std::vector<int>& scratch) {
  std::fill(scratch.begin(), scratch.end(), 0);
  for (int i = 0; i < t.n; ++i) scratch[x[i] * t.ny + y[i]] += 1;
  double v = 1.0;
  for (int a = 0; a < t.nx; ++a)
    for (int b = 0; b < t.ny; ++b) {
      int c = scratch[a * t.ny + b];
      if (c > 0) v *= t.pw[a][b][c];
    }
  return v;
}

}  // namespace detail

/// Exact output probability of y^n under the constant-composition input:
/// the average likelihood over the type class, a function of the type of y^n
/// alone. Computed by enumerating the transport matrices K between the
/// composition row counts and the output counts; the number of x^n in the
/// class with pair counts K factorizes per output symbol into multinomials.
inline double cc_output_probability(const Channel& w, const std::vector<int>& row_counts,
                                    const std::vector<int>& y_counts) {
  const int nx = static_cast<int>(row_counts.size());
  const int ny = static_cast<int>(y_counts.size());
  int n = 0;
  for (int c : y_counts) n += c;
  double log_class = std::lgamma(n + 1.0);
  for (int c : row_counts) log_class -= std::lgamma(c + 1.0);

  std::vector<std::vector<double>> logw(nx, std::vector<double>(ny));
  for (int a = 0; a < nx; ++a)
    for (int b = 0; b < ny; ++b) logw[a][b] = w(a, b) > 0.0 ? std::log(w(a, b)) : -kInf;

  double sum = 0.0;
  std::vector<int> remaining = row_counts;
  std::vector<std::vector<int>> cols(static_cast<std::size_t>(ny));
  std::function<void(int, double)> rec = [&](int b, double log_acc) {
    if (b == ny) {
      sum += std::exp(log_acc);
      return;
    }
    for_each_composition(y_counts[b], nx, [&](const std::vector<int>& col) {
      double term = std::lgamma(y_counts[b] + 1.0);
      bool ok = true;
      for (int a = 0; a < nx && ok; ++a) {
        if (col[a] == 0) continue;
        if (col[a] > remaining[a] || logw[a][b] == -kInf) {
          ok = false;
          break;
        }
        term += col[a] * logw[a][b] - std::lgamma(col[a] + 1.0);
      }
      if (!ok) return;
      for (int a = 0; a < nx; ++a) remaining[a] -= col[a];
      rec(b + 1, log_acc + term);
      for (int a = 0; a < nx; ++a) remaining[a] += col[a];
    });
  };
  rec(0, -log_class);
  return sum;
}

namespace detail {

/// Target output probability per y^n: the i.i.d. product, or the type-class
/// average for the constant-composition ensemble (memoized on the y type).
class TargetOutput {
 public:
  TargetOutput(const Codebook& cb, const Channel& w, const Distribution& p, const Distribution& py)
      : kind_(cb.kind), n_(cb.n), ny_(static_cast<int>(w.output_size())), py_(py.probs()) {
    if (kind_ == CodebookKind::constant_composition) {
      row_counts_.assign(w.input_size(), 0);
      for (int i = 0; i < n_; ++i) row_counts_[cb.codewords.front()[static_cast<std::size_t>(i)]] += 1;
      w_ = &w;
    }
    (void)p;
  }

  double at_counts(const std::vector<int>& y_counts) {
    if (kind_ == CodebookKind::iid) {
      double v = 1.0;
      for (int b = 0; b < ny_; ++b)
        for (int k = 0; k < y_counts[b]; ++k) v *= py_[static_cast<std::size_t>(b)];
      return v;
    }
    auto it = memo_.find(y_counts);
    if (it != memo_.end()) return it->second;
    double v = cc_output_probability(*w_, row_counts_, y_counts);
    memo_.emplace(y_counts, v);
    return v;
  }

 private:
  CodebookKind kind_;
  int n_, ny_;
  std::vector<double> py_;
  std::vector<int> row_counts_;
  const Channel* w_ = nullptr;
  std::map<std::vector<int>, double> memo_;
};

}  // namespace detail

/// Exact ||P_{Y^n|C} - target||_1 by summation over every output sequence,
/// where the target is the i.i.d. output P_{Y^n} or the constant-composition
/// output R_{Y^n} matching the codebook's ensemble. Likelihoods are
/// evaluated through joint-type counts; binary alphabets use popcount
/// tallies on bitmasks.
inline TvSample exact_tv(const Codebook& cb, const Channel& w, const Distribution& p) {
  require_compatible(p, w);
  const int n = cb.n;
  const int ny = static_cast<int>(w.output_size());
  double space = std::pow(static_cast<double>(ny), n);
  if (space > kOutputSpaceGuard) throw size_guard_error("exact_tv: |Y|^n exceeds the 2^24 guard");
  const auto total = static_cast<std::uint64_t>(space + 0.5);

  Distribution py = output_distribution(p, w);
  detail::LikelihoodTables tables(w, py, n);
  detail::TargetOutput target(cb, w, p, py);
  const double inv_m = 1.0 / static_cast<double>(cb.m);

  double tv = 0.0;
  if (static_cast<int>(w.input_size()) == 2 && ny == 2 && n <= 62) {
    std::vector<double> target_by_ones(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) target_by_ones[static_cast<std::size_t>(k)] = target.at_counts({n - k, k});
    // bit i of the mask holds symbol i; one popcount recovers the pair counts
    std::vector<std::uint64_t> xmask(cb.codewords.size(), 0);
    std::vector<int> xones(cb.codewords.size(), 0);
    for (std::size_t j = 0; j < cb.codewords.size(); ++j) {
      std::uint64_t m = 0;
      for (int i = 0; i < n; ++i)
        if (cb.codewords[j][i]) m |= 1ull << i;
      xmask[j] = m;
      xones[j] = __builtin_popcountll(m);
    }
    for (std::uint64_t ym = 0; ym < total; ++ym) {
      int yones = __builtin_popcountll(ym);
      double induced = 0.0;
      for (std::size_t j = 0; j < cb.codewords.size(); ++j) {
        int n11 = __builtin_popcountll(xmask[j] & ym);
        int n10 = xones[j] - n11;
        int n01 = yones - n11;
        int n00 = n - xones[j] - yones + n11;
        induced += tables.pw[0][0][n00] * tables.pw[0][1][n01] * tables.pw[1][0][n10] * tables.pw[1][1][n11];
      }
      tv += std::abs(induced * inv_m - target_by_ones[static_cast<std::size_t>(yones)]);
    }
  } else {
    std::vector<std::uint8_t> y(static_cast<std::size_t>(n), 0);
    std::vector<int> ycounts(static_cast<std::size_t>(ny), 0);
    ycounts[0] = n;
    std::vector<int> scratch(w.input_size() * w.output_size());
    for (std::uint64_t idx = 0;; ++idx) {
      double induced = 0.0;
      for (const auto& x : cb.codewords) induced += detail::likelihood_by_type(x, y, tables, scratch);
      tv += std::abs(induced * inv_m - target.at_counts(ycounts));
      int pos = 0;
      while (pos < n) {
        ycounts[y[pos]] -= 1;
        if (++y[pos] < ny) {
          ycounts[y[pos]] += 1;
          break;
        }
        y[pos] = 0;
        ycounts[0] += 1;
        ++pos;
      }
      if (pos == n) break;
    }
  }
  return TvSample{tv, cb.seed, n, cb.m};
}

/// L-statistic, the likelihood ratio of the induced output against the
/// ensemble's target output at one sequence; 1 by convention off the support.
inline double l_statistic(const Codebook& cb, const Channel& w, const Distribution& p,
                          const std::vector<std::uint8_t>& y) {
  require_compatible(p, w);
  Distribution py = output_distribution(p, w);
  detail::TargetOutput target_fn(cb, w, p, py);
  std::vector<int> ycounts(w.output_size(), 0);
  for (auto s : y) ycounts[s] += 1;
  double target = target_fn.at_counts(ycounts);
  if (target == 0.0) return 1.0;
  detail::LikelihoodTables tables(w, py, cb.n);
  std::vector<int> scratch(w.input_size() * w.output_size());
  double induced = 0.0;
  for (const auto& x : cb.codewords) induced += detail::likelihood_by_type(x, y, tables, scratch);
  return induced / static_cast<double>(cb.m) / target;
}

// ---------------------------------------------------------------------------
// Replicated estimates

struct ExponentEstimate {
  int n = 0;
  long long m = 0;
  int replicas = 0;
  double mean_tv = 0.0;
  double std_tv = 0.0;
  double empirical_exponent = 0.0;  // nats
  bool exponent_infinite = false;
  double ci95_low = 0.0;   // exponent scale, nats
  double ci95_high = 0.0;
  std::vector<double> tvs;
  std::vector<std::uint64_t> seeds;
  std::vector<long long> ms;  // per-replica codebook sizes (Poissonized runs)
};

/// Poisson draw by chunked products of uniforms (exact, deterministic).
inline long long poisson_draw(SplitMix64& rng, double mean) {
  long long total = 0;
  double remaining = mean;
  while (remaining > 0.0) {
    double chunk = std::min(remaining, 30.0);
    double limit = std::exp(-chunk);
    double prod = 1.0;
    long long k = -1;
    do {
      prod *= rng.next_unit();
      ++k;
    } while (prod > limit);
    total += k;
    remaining -= chunk;
  }
  return total;
}

namespace detail {

inline double pairwise_sum(const std::vector<double>& v, std::size_t lo, std::size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (std::size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

inline ExponentEstimate summarize(std::vector<double> tvs, std::vector<std::uint64_t> seeds,
                                  std::vector<long long> ms, int n, long long m_nominal) {
  ExponentEstimate e;
  e.n = n;
  e.m = m_nominal;
  e.replicas = static_cast<int>(tvs.size());
  double sum = pairwise_sum(tvs, 0, tvs.size());
  e.mean_tv = sum / e.replicas;
  double ss = 0.0;
  for (double t : tvs) ss += (t - e.mean_tv) * (t - e.mean_tv);
  e.std_tv = e.replicas > 1 ? std::sqrt(ss / (e.replicas - 1)) : 0.0;
  // a mean at rounding-noise level means the induced and target outputs
  // coincide (degenerate channel); the exponent is flagged infinite
  if (e.mean_tv > 1e-12) {
    e.empirical_exponent = -std::log(e.mean_tv) / n;
    double se = e.std_tv / std::sqrt(static_cast<double>(e.replicas));
    double hi_tv = e.mean_tv + 1.96 * se;
    double lo_tv = std::max(e.mean_tv - 1.96 * se, 1e-300);
    e.ci95_low = -std::log(hi_tv) / n;
    e.ci95_high = -std::log(lo_tv) / n;
  } else {
    e.exponent_infinite = true;
    e.empirical_exponent = kInf;
    e.ci95_low = e.ci95_high = kInf;
  }
  e.tvs = std::move(tvs);
  e.seeds = std::move(seeds);
  e.ms = std::move(ms);
  return e;
}

}  // namespace detail

/// Mean exact TV over independently seeded codebooks with M = ceil(exp(nR)).
/// Per-replica seeds are derived from (seed, replica index); an explicit
/// seed list is accepted and checked for collisions.
inline ExponentEstimate estimate_exponent(const Distribution& p, const std::vector<int>& composition,
                                          const Channel& w, int n, double rate_nats, int replicas,
                                          std::uint64_t seed, CodebookKind kind,
                                          const std::vector<std::uint64_t>* explicit_seeds = nullptr) {
  if (replicas < 2) throw std::domain_error("estimate_exponent: need at least 2 replicas");
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(replicas));
  if (explicit_seeds) {
    if (static_cast<int>(explicit_seeds->size()) != replicas)
      throw std::domain_error("estimate_exponent: seed list length mismatch");
    seeds = *explicit_seeds;
  } else {
    for (int i = 0; i < replicas; ++i) seeds[i] = mix_key(seed, 0x5eedull, static_cast<std::uint64_t>(i));
  }
  for (std::size_t i = 0; i < seeds.size(); ++i)
    for (std::size_t j = i + 1; j < seeds.size(); ++j)
      if (seeds[i] == seeds[j]) throw std::invalid_argument("estimate_exponent: replica seed collision");
  // refuse before sampling: the codebooks themselves can dwarf memory
  if (std::pow(static_cast<double>(w.output_size()), n) > kOutputSpaceGuard)
    throw size_guard_error("estimate_exponent: |Y|^n exceeds the 2^24 guard");

  long long m = codebook_size_for_rate(n, rate_nats);
  std::vector<double> tvs(static_cast<std::size_t>(replicas));
  std::vector<long long> ms(static_cast<std::size_t>(replicas), m);
  parallel_for(replicas, [&](int i) {
    Codebook cb = sample_codebook(p, composition, n, m, kind, seeds[static_cast<std::size_t>(i)]);
    tvs[static_cast<std::size_t>(i)] = exact_tv(cb, w, p).tv;
  });
  return detail::summarize(std::move(tvs), std::move(seeds), std::move(ms), n, m);
}

/// Same estimate with the codebook size drawn per replica from a Poisson law
/// with mean exp(nR), for checking the depoissonization step empirically.
inline ExponentEstimate poissonized_estimate(const Distribution& p, const std::vector<int>& composition,
                                             const Channel& w, int n, double rate_nats, int replicas,
                                             std::uint64_t seed, CodebookKind kind) {
  if (replicas < 2) throw std::domain_error("poissonized_estimate: need at least 2 replicas");
  if (std::pow(static_cast<double>(w.output_size()), n) > kOutputSpaceGuard)
    throw size_guard_error("poissonized_estimate: |Y|^n exceeds the 2^24 guard");
  double mu = std::exp(n * rate_nats);
  if (mu < 10.0)
    throw std::domain_error("poissonized_estimate: exp(nR) below 10, zero-size codebooks would be likely");
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(replicas));
  for (int i = 0; i < replicas; ++i) seeds[i] = mix_key(seed, 0x9015ull, static_cast<std::uint64_t>(i) + 1);
  std::vector<double> tvs(static_cast<std::size_t>(replicas));
  std::vector<long long> ms(static_cast<std::size_t>(replicas), 0);
  parallel_for(replicas, [&](int i) {
    SplitMix64 rng(mix_key(seeds[static_cast<std::size_t>(i)], 0xa11ull));
    long long m = poisson_draw(rng, mu);
    if (m < 1) throw std::runtime_error("poissonized_estimate: drew an empty codebook");
    Codebook cb = sample_codebook(p, composition, n, m, kind, seeds[static_cast<std::size_t>(i)]);
    tvs[static_cast<std::size_t>(i)] = exact_tv(cb, w, p).tv;
    ms[static_cast<std::size_t>(i)] = m;
  });
  return detail::summarize(std::move(tvs), std::move(seeds), std::move(ms), n,
                           static_cast<long long>(mu));
}

// ---------------------------------------------------------------------------
// Concentration table

struct ConcentrationRow {
  double t = 0.0;
  double fraction = 0.0;   // empirical P[|tv - mean| >= t]
  double bound = 0.0;      // 2 exp(-M t^2 / 2)
  double slack = 0.0;      // binomial sampling allowance
  bool holds = false;
};

/// Empirical check of the McDiarmid concentration of the TV distance around
/// its mean, for both ensembles. The sampling slack allows three extra hits
/// on top of three binomial standard deviations.
inline std::vector<ConcentrationRow> concentration_check(const Distribution& p,
                                                         const std::vector<int>& composition,
                                                         const Channel& w, int n, double rate_nats,
                                                         int replicas, const std::vector<double>& t_grid,
                                                         std::uint64_t seed, CodebookKind kind) {
  if (replicas < 100) throw std::domain_error("concentration_check: need at least 100 replicas");
  ExponentEstimate est = estimate_exponent(p, composition, w, n, rate_nats, replicas, seed, kind);
  double m = static_cast<double>(est.m);
  std::vector<ConcentrationRow> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid) {
    ConcentrationRow row;
    row.t = t;
    int hits = 0;
    for (double tv : est.tvs)
      if (std::abs(tv - est.mean_tv) >= t) ++hits;
    row.fraction = static_cast<double>(hits) / replicas;
    row.bound = std::min(2.0 * std::exp(-m * t * t / 2.0), 2.0);
    row.slack = 3.0 * std::sqrt(std::min(row.bound, 1.0) * (1.0 - std::min(row.bound, 1.0)) / replicas) +
                3.0 / replicas;
    row.holds = row.fraction <= row.bound + row.slack;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace softcover

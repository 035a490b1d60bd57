#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include "softcover/common.hpp"
#include "softcover/compositions.hpp"
#include "softcover/distribution.hpp"
#include "softcover/measures.hpp"

// Method-of-types combinatorics: type enumeration, exact log type-class
// cardinalities, the success probabilities of the counting argument, and the
// finite-blocklength exponents with their explicit vanishing constants.
// Cardinalities live in the log domain; they overflow 64-bit integers fast.

namespace softcover {

struct TypeDescriptor {
  std::vector<int> counts;
  int n = 0;

  TypeDescriptor() = default;
  TypeDescriptor(std::vector<int> c, int n_) : counts(std::move(c)), n(n_) {
    long long s = 0;
    for (int v : counts) {
      if (v < 0) throw std::invalid_argument("TypeDescriptor: negative count");
      s += v;
    }
    if (s != n) throw std::invalid_argument("TypeDescriptor: counts do not sum to n");
  }

  Distribution as_distribution() const {
    std::vector<double> p(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i) p[i] = static_cast<double>(counts[i]) / n;
    return Distribution(std::move(p));
  }
};

struct JointTypeDescriptor {
  std::vector<std::vector<int>> counts;  // counts[x][y]
  int n = 0;

  JointTypeDescriptor() = default;
  JointTypeDescriptor(std::vector<std::vector<int>> c, int n_) : counts(std::move(c)), n(n_) {
    long long s = 0;
    for (const auto& row : counts)
      for (int v : row) {
        if (v < 0) throw std::invalid_argument("JointTypeDescriptor: negative count");
        s += v;
      }
    if (s != n) throw std::invalid_argument("JointTypeDescriptor: counts do not sum to n");
  }

  TypeDescriptor marginal_x() const {
    std::vector<int> m(counts.size(), 0);
    for (std::size_t x = 0; x < counts.size(); ++x)
      for (int v : counts[x]) m[x] += v;
    return TypeDescriptor(std::move(m), n);
  }

  TypeDescriptor marginal_y() const {
    std::vector<int> m(counts.front().size(), 0);
    for (const auto& row : counts)
      for (std::size_t y = 0; y < row.size(); ++y) m[y] += row[y];
    return TypeDescriptor(std::move(m), n);
  }
};

/// Streams every n-type over the alphabet in lexicographic count order.
class TypeEnumerator {
 public:
  TypeEnumerator(int n, int alphabet) : enum_(n, alphabet), n_(n) {
    if (n < 1 || alphabet < 1) throw std::invalid_argument("TypeEnumerator: need n >= 1, alphabet >= 1");
  }

  bool next(TypeDescriptor& out) {
    if (!enum_.next(scratch_)) return false;
    out.counts = scratch_;
    out.n = n_;
    return true;
  }

 private:
  CompositionEnumerator enum_;
  int n_;
  std::vector<int> scratch_;
};

/// Exact number of n-types, C(n+k-1, k-1), as a double.
inline double count_types(int n, int alphabet) { return composition_count(n, alphabet); }

/// ln( n! / prod counts! ), the exact log cardinality of the type class.
inline double log_type_class_size(const TypeDescriptor& t) {
  double v = std::lgamma(static_cast<double>(t.n) + 1.0);
  for (int c : t.counts) v -= std::lgamma(static_cast<double>(c) + 1.0);
  return v;
}

/// ln of the conditional type class size |T_{Q_{X|Y}}(y^n)|: a product of
/// per-output-symbol multinomials over the columns of the joint count table.
inline double log_conditional_type_class_size(const JointTypeDescriptor& q) {
  TypeDescriptor my = q.marginal_y();
  double v = 0.0;
  for (std::size_t y = 0; y < my.counts.size(); ++y) {
    v += std::lgamma(static_cast<double>(my.counts[y]) + 1.0);
    for (std::size_t x = 0; x < q.counts.size(); ++x)
      v -= std::lgamma(static_cast<double>(q.counts[x][y]) + 1.0);
  }
  return v;
}

struct TypeProbability {
  double log_prob = -kInf;
  bool support_violation = false;
  double prob() const { return std::exp(log_prob); }
};

/// P[X^n lands in the conditional type class of q_joint against a fixed y^n
/// of matching Y-marginal type], X^n i.i.d. from p. Exact in the log domain:
/// exp(-n E[i_P(X-)]) * |T_cond|.
inline TypeProbability log_conditional_type_probability(const JointTypeDescriptor& q, const Distribution& p) {
  if (q.counts.size() != p.size())
    throw dimension_error("conditional_type_probability: X alphabet mismatch");
  TypeProbability out;
  double logp = 0.0;
  TypeDescriptor mx = q.marginal_x();
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (mx.counts[x] == 0) continue;
    if (p[x] == 0.0) {
      out.support_violation = true;
      out.log_prob = -kInf;
      return out;
    }
    logp += mx.counts[x] * std::log(p[x]);
  }
  out.log_prob = logp + log_conditional_type_class_size(q);
  return out;
}

inline double conditional_type_probability(const JointTypeDescriptor& q, const Distribution& p) {
  return log_conditional_type_probability(q, p).prob();
}

/// Constant-composition counterpart: |T_{Q_XY}| / (|T_{P_X}| |T_{Q_Y}|),
/// requiring the X-marginal of the joint type to match the composition.
inline double cc_conditional_type_probability(const JointTypeDescriptor& q, const TypeDescriptor& p_type) {
  if (q.counts.size() != p_type.counts.size())
    throw dimension_error("cc_conditional_type_probability: X alphabet mismatch");
  if (q.n % p_type.n != 0)
    throw std::invalid_argument("cc_conditional_type_probability: n must be a multiple of the composition denominator");
  const int scale = q.n / p_type.n;
  TypeDescriptor mx = q.marginal_x();
  for (std::size_t x = 0; x < p_type.counts.size(); ++x)
    if (mx.counts[x] != p_type.counts[x] * scale)
      throw std::invalid_argument("cc_conditional_type_probability: joint type X-marginal does not match composition");

  TypeDescriptor scaled(std::vector<int>(p_type.counts), p_type.n);
  for (int& c : scaled.counts) c *= scale;
  scaled.n = q.n;

  std::vector<int> flat;
  for (const auto& row : q.counts) flat.insert(flat.end(), row.begin(), row.end());
  TypeDescriptor joint_flat(std::move(flat), q.n);
  double lg = log_type_class_size(joint_flat) - log_type_class_size(scaled) -
              log_type_class_size(q.marginal_y());
  return std::exp(lg);
}

/// min{ 2 p_Q, M^{-1/2} p_Q^{1/2} }, the absolute-mean-deviation envelope of
/// one conditional-type bin.
inline double frak_y(double m_codewords, const JointTypeDescriptor& q, const Distribution& p) {
  if (m_codewords <= 0.0) throw std::domain_error("frak_y: M must be positive");
  double pq = conditional_type_probability(q, p);
  return std::min(2.0 * pq, std::sqrt(pq / m_codewords));
}

struct FiniteNExponent {
  double value = kInf;  // nats
  JointTypeDescriptor minimizer;
};

inline void check_joint_enumeration_guard(int n, int cells) {
  if (composition_count(n, cells) > 1e7)
    throw size_guard_error("finite-n enumeration would exceed 1e7 joint types");
}

/// Exact finite-blocklength exponent alpha_n: the exact-exponent objective
/// minimized over joint n-types only.
inline FiniteNExponent alpha_finite_n(const Distribution& p, const Channel& w, double rate, int n) {
  require_compatible(p, w);
  const int nx = static_cast<int>(w.input_size()), ny = static_cast<int>(w.output_size());
  const int cells = nx * ny;
  check_joint_enumeration_guard(n, cells);

  std::vector<double> log_pxy(static_cast<std::size_t>(cells));
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) {
      double v = p[x] * w(x, y);
      log_pxy[static_cast<std::size_t>(x) * ny + y] = v > 0.0 ? std::log(v) : -kInf;
    }
  std::vector<double> log_px(nx);
  for (int x = 0; x < nx; ++x) log_px[x] = p[x] > 0.0 ? std::log(p[x]) : -kInf;
  std::vector<double> tab(n + 1, 0.0);
  for (int i = 1; i <= n; ++i) tab[i] = static_cast<double>(i) / n * std::log(static_cast<double>(i) / n);

  FiniteNExponent best;
  std::vector<int> margx(nx), margy(ny);
  for_each_composition(n, cells, [&](const std::vector<int>& c) {
    double hq = 0.0, cross = 0.0;
    std::fill(margx.begin(), margx.end(), 0);
    std::fill(margy.begin(), margy.end(), 0);
    for (int i = 0; i < cells; ++i) {
      if (c[i] == 0) continue;
      if (log_pxy[i] == -kInf) return;
      hq += tab[c[i]];
      cross += static_cast<double>(c[i]) / n * log_pxy[i];
      margx[i / ny] += c[i];
      margy[i % ny] += c[i];
    }
    double d_joint = hq - cross;
    double cross_px = 0.0, hy = 0.0;
    for (int x = 0; x < nx; ++x)
      if (margx[x] > 0) cross_px += static_cast<double>(margx[x]) / n * log_px[x];
    for (int y = 0; y < ny; ++y) hy += tab[margy[y]];
    double v = d_joint + 0.5 * positive_part(rate - (hq - cross_px - hy));
    if (v < best.value) {
      best.value = v;
      std::vector<std::vector<int>> cm(nx, std::vector<int>(ny));
      for (int i = 0; i < cells; ++i) cm[i / ny][i % ny] = c[i];
      best.minimizer = JointTypeDescriptor(std::move(cm), n);
    }
  });
  return best;
}

/// Constant-composition counterpart aleph_n: minimization over conditional
/// n-types with the X-marginal pinned to the composition. Rows are
/// enumerated independently (row x is a composition of n*P(x) into |Y| parts).
inline FiniteNExponent aleph_finite_n(const TypeDescriptor& p_type, const Channel& w, double rate, int n) {
  if (p_type.counts.size() != w.input_size())
    throw dimension_error("aleph_finite_n: composition does not match channel input");
  if (n % p_type.n != 0)
    throw std::invalid_argument("aleph_finite_n: n must be a multiple of the composition denominator");
  const int nx = static_cast<int>(w.input_size()), ny = static_cast<int>(w.output_size());
  const int scale = n / p_type.n;

  std::vector<int> row_totals(nx);
  double total_count = 1.0;
  for (int x = 0; x < nx; ++x) {
    row_totals[x] = p_type.counts[x] * scale;
    total_count *= composition_count(row_totals[x], ny);
  }
  if (total_count > 1e7) throw size_guard_error("aleph_finite_n enumeration would exceed 1e7 conditional types");

  Distribution px = p_type.as_distribution();
  FiniteNExponent best;
  std::vector<std::vector<int>> rows(nx);
  std::function<void(int)> rec = [&](int x) {
    if (x == nx) {
      std::vector<std::vector<double>> q(nx, std::vector<double>(ny, 0.0));
      for (int xx = 0; xx < nx; ++xx) {
        if (row_totals[xx] == 0) {
          q[xx] = w.row(xx);
          continue;
        }
        for (int y = 0; y < ny; ++y) q[xx][y] = static_cast<double>(rows[xx][y]) / row_totals[xx];
      }
      Channel qc(q);
      Distribution qy = output_distribution(px, qc);
      double d_joint = 0.0, d_prod = 0.0;
      for (int xx = 0; xx < nx; ++xx) {
        if (px[xx] == 0.0) continue;
        for (int y = 0; y < ny; ++y) {
          double mass = px[xx] * qc(xx, y);
          double t = xlog_ratio(mass, px[xx] * w(xx, y));
          if (t == kInf) return;
          d_joint += t;
          d_prod += xlog_ratio(mass, px[xx] * qy[y]);
        }
      }
      double v = d_joint + 0.5 * positive_part(rate - d_prod);
      if (v < best.value) {
        best.value = v;
        std::vector<std::vector<int>> cm(nx, std::vector<int>(ny, 0));
        for (int xx = 0; xx < nx; ++xx)
          if (row_totals[xx] > 0) cm[xx] = rows[xx];
        best.minimizer = JointTypeDescriptor(std::move(cm), n);
      }
      return;
    }
    if (row_totals[x] == 0) {
      rows[x].assign(ny, 0);
      rec(x + 1);
      return;
    }
    for_each_composition(row_totals[x], ny, [&](const std::vector<int>& c) {
      rows[x] = c;
      rec(x + 1);
    });
  };
  rec(0);
  return best;
}

struct FiniteNConstants {
  double kappa_n = 0.0;
  double rho_n = 0.0;
  double upsilon_n = 0.0;
  double phi_n = 0.0;
  double a_eps = 0.0;
  double mu_n = 0.0;
  double delta = 0.0;
  double r = 0.0;
  bool upsilon_vacuous = false;
};

inline double a_epsilon(double eps) { return std::exp(eps) / std::pow(1.0 + eps, 1.0 + eps); }

/// The explicit vanishing constants of the finite-blocklength sandwich for
/// the i.i.d. ensemble. All log terms in nats. With integer_m set, the lower
/// bound constant uses the ceil-aware variant (log 2*sqrt(2) instead of log 2).
inline FiniteNConstants finite_n_constants(int n, int alph_x, int alph_y, double rate, double alpha_n,
                                           double delta, double r, bool integer_m = false) {
  if (n < 1 || alph_x < 1 || alph_y < 1) throw std::domain_error("finite_n_constants: bad sizes");
  FiniteNConstants c;
  c.mu_n = std::exp(n * rate);
  if (!(delta > std::exp(-static_cast<double>(n) * rate) && delta < 1.0))
    throw std::domain_error("finite_n_constants: delta must lie in (exp(-nR), 1)");
  if (!(r > alpha_n && r < rate / 2.0))
    throw std::domain_error("finite_n_constants: r must lie in (alpha_n, R/2)");
  c.delta = delta;
  c.r = r;
  const double logn1 = std::log(static_cast<double>(n) + 1.0);
  c.kappa_n = static_cast<double>(alph_x) * alph_y / n * logn1 +
              (integer_m ? std::log(2.0 * std::sqrt(2.0)) : std::log(2.0)) / n;
  c.rho_n = static_cast<double>(alph_x + 1) * alph_y / n * logn1 + std::log(4.0) / n;
  c.a_eps = a_epsilon(delta - 1.0 / c.mu_n);
  // phi_n in the log domain: the a_eps^{mu_n} factor underflows long before
  // the surrounding terms matter.
  double log_tail = n * std::log(static_cast<double>(alph_y)) + c.mu_n * std::log(c.a_eps);
  c.phi_n = std::exp(n * (alpha_n + c.rho_n)) *
            (1.0 / std::sqrt(c.mu_n) + std::exp(log_tail) + 2.0 * (1.0 + delta) * std::exp(-n * r));
  if (c.phi_n >= 1.0) {
    c.upsilon_vacuous = true;
    c.upsilon_n = kInf;
  } else {
    c.upsilon_n = c.rho_n + c.phi_n / (1.0 - c.phi_n) / n + std::log(1.0 + delta) / n;
  }
  return c;
}

/// Constant-composition twins of the finite-blocklength constants.
inline FiniteNConstants cc_finite_n_constants(int n, int alph_x, int alph_y, double rate, double aleph_n,
                                              double delta, double r, bool integer_m = false) {
  if (n < 1 || alph_x < 1 || alph_y < 1) throw std::domain_error("cc_finite_n_constants: bad sizes");
  FiniteNConstants c;
  c.mu_n = std::exp(n * rate);
  if (!(delta > std::exp(-static_cast<double>(n) * rate) && delta < 1.0))
    throw std::domain_error("cc_finite_n_constants: delta must lie in (exp(-nR), 1)");
  if (!(r > aleph_n && r < rate / 2.0))
    throw std::domain_error("cc_finite_n_constants: r must lie in (aleph_n, R/2)");
  c.delta = delta;
  c.r = r;
  const double logn1 = std::log(static_cast<double>(n) + 1.0);
  // eta-breve plays the lower-bound role that kappa_n plays for i.i.d. codes
  c.kappa_n = static_cast<double>(alph_x) * (2.0 + 3.0 * alph_y) / (2.0 * n) * logn1 +
              (integer_m ? std::log(2.0 * std::sqrt(2.0)) / n : 0.0);
  c.rho_n = static_cast<double>(alph_x + 2 * alph_x * alph_y + alph_y) / (2.0 * n) * logn1 +
            std::log(4.0) / n;
  c.a_eps = a_epsilon(delta - 1.0 / c.mu_n);
  double log_tail = n * std::log(static_cast<double>(alph_y)) + c.mu_n * std::log(c.a_eps);
  c.phi_n = std::exp(n * (aleph_n + c.rho_n)) *
            (1.0 / std::sqrt(c.mu_n) + std::exp(log_tail) + 2.0 * (1.0 + delta) * std::exp(-n * r));
  if (c.phi_n >= 1.0) {
    c.upsilon_vacuous = true;
    c.upsilon_n = kInf;
  } else {
    c.upsilon_n = c.rho_n + c.phi_n / (1.0 - c.phi_n) / n + std::log(1.0 + delta) / n;
  }
  return c;
}

}  // namespace softcover

#pragma once

#include <cmath>
#include <utility>
#include <vector>

#include "softcover/common.hpp"
#include "softcover/distribution.hpp"

// Scalar information measures, all in nats. Singular orders (Renyi order 1,
// tilted order parameter 0) are resolved by continuity with an explicit
// branch at |lambda| < 1e-9.

namespace softcover {

inline constexpr double kOrderSingularity = 1e-9;

inline double entropy(const Distribution& p) {
  double h = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) h -= xlogx(p[i]);
  return h;
}

inline double relative_entropy(const Distribution& p, const Distribution& q) {
  if (p.size() != q.size()) throw dimension_error("relative_entropy: alphabet size mismatch");
  double d = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    double t = xlog_ratio(p[i], q[i]);
    if (t == kInf) return kInf;
    d += t;
  }
  return d < 0.0 ? 0.0 : d;
}

inline double conditional_relative_entropy(const Channel& p_cond, const Channel& q_cond,
                                           const Distribution& weights) {
  if (p_cond.input_size() != q_cond.input_size() || p_cond.output_size() != q_cond.output_size())
    throw dimension_error("conditional_relative_entropy: channel dimension mismatch");
  if (weights.size() != p_cond.input_size())
    throw dimension_error("conditional_relative_entropy: weights dimension mismatch");
  double d = 0.0;
  for (std::size_t b = 0; b < weights.size(); ++b) {
    if (weights[b] == 0.0) continue;
    for (std::size_t a = 0; a < p_cond.output_size(); ++a) {
      double t = xlog_ratio(p_cond(b, a), q_cond(b, a));
      if (t == kInf) return kInf;
      d += weights[b] * t;
    }
  }
  return d < 0.0 ? 0.0 : d;
}

inline double mutual_information(const Distribution& p, const Channel& w) {
  require_compatible(p, w);
  Distribution py = output_distribution(p, w);
  double mi = 0.0;
  for (std::size_t x = 0; x < w.input_size(); ++x) {
    if (p[x] == 0.0) continue;
    for (std::size_t y = 0; y < w.output_size(); ++y) {
      if (w(x, y) == 0.0) continue;
      mi += p[x] * w(x, y) * std::log(w(x, y) / py[y]);
    }
  }
  return mi < 0.0 ? 0.0 : mi;
}

/// Renyi divergence D_{order}(P_XY || P_X P_Y) of the joint from the product
/// of its marginals, evaluated in the log domain so large orders stay finite.
inline double renyi_divergence_joint(const Distribution& p, const Channel& w, double order) {
  require_compatible(p, w);
  if (order <= 0.0) throw std::domain_error("renyi_divergence_joint: order must be positive");
  const double lambda = order - 1.0;
  if (std::abs(lambda) < kOrderSingularity) return mutual_information(p, w);
  Distribution py = output_distribution(p, w);
  std::vector<double> terms;
  terms.reserve(p.size() * py.size());
  for (std::size_t x = 0; x < w.input_size(); ++x) {
    if (p[x] == 0.0) continue;
    for (std::size_t y = 0; y < w.output_size(); ++y) {
      if (w(x, y) == 0.0) continue;
      // log[ P_XY * (P_{Y|X}/P_Y)^lambda ]
      terms.push_back(std::log(p[x] * w(x, y)) + lambda * std::log(w(x, y) / py[y]));
    }
  }
  return logsumexp(terms) / lambda;
}

/// The conditionally smoothed divergence
/// (2/lambda') log E[ E^{1/2}[ exp(lambda' i(X;Y)) | Y ] ], lambda' <= 1.
inline double tilde_renyi(const Distribution& p, const Channel& w, double order_param) {
  require_compatible(p, w);
  if (order_param > 1.0) throw std::domain_error("tilde_renyi: order parameter must be <= 1");
  if (std::abs(order_param) < kOrderSingularity) return mutual_information(p, w);
  Distribution py = output_distribution(p, w);
  std::vector<double> outer;
  outer.reserve(py.size());
  for (std::size_t y = 0; y < w.output_size(); ++y) {
    if (py[y] == 0.0) continue;
    std::vector<double> inner;
    inner.reserve(p.size());
    for (std::size_t x = 0; x < w.input_size(); ++x) {
      double pxy = p[x] * w(x, y);
      if (pxy == 0.0) continue;
      // log[ P_{X|Y}(x|y) exp(lambda' i(x;y)) ]
      inner.push_back(std::log(pxy / py[y]) + order_param * std::log(w(x, y) / py[y]));
    }
    outer.push_back(std::log(py[y]) + 0.5 * logsumexp(inner));
  }
  return 2.0 / order_param * logsumexp(outer);
}

/// Sibson's alpha-mutual information of order lambda,
/// (lambda/(lambda-1)) log sum_y ( sum_x P(x) W(y|x)^lambda )^{1/lambda}.
/// Stable in the log domain for very large orders.
inline double sibson_mi(const Distribution& p, const Channel& w, double order) {
  require_compatible(p, w);
  if (order <= 0.0) throw std::domain_error("sibson_mi: order must be positive");
  if (std::abs(order - 1.0) < kOrderSingularity) return mutual_information(p, w);
  double total = 0.0;
  for (std::size_t y = 0; y < w.output_size(); ++y) {
    std::vector<double> inner;
    inner.reserve(p.size());
    for (std::size_t x = 0; x < w.input_size(); ++x) {
      if (p[x] == 0.0 || w(x, y) == 0.0) continue;
      inner.push_back(std::log(p[x]) + order * std::log(w(x, y)));
    }
    double lse = logsumexp(inner);
    if (lse > -kInf) total += std::exp(lse / order);
  }
  return order / (order - 1.0) * std::log(total);
}

struct CsiszarResult {
  double value;            // nats
  Distribution minimizer;  // the achieving S_Y
  int iterations;
  double residual;
};

/// Csiszar's alpha-mutual information of order alpha > 1:
/// min over S_Y of E_X[ D_alpha(P_{Y|X}(.|X) || S_Y) ]. Solved by fixed-point
/// iteration on the first-order stationarity condition (the tilted-channel
/// average), initialized at the output distribution, damped by 0.5 when the
/// residual stops decreasing. A one-shot evaluation at the Sibson minimizer
/// is kept as a fallback candidate since it upper-bounds the true minimum.
inline CsiszarResult csiszar_mi(const Distribution& p, const Channel& w, double order,
                                double tol = 1e-12, int max_iters = 10000) {
  require_compatible(p, w);
  if (order <= 1.0) throw std::domain_error("csiszar_mi: order must be > 1");
  const std::size_t nx = w.input_size(), ny = w.output_size();
  const double lambda = order - 1.0;

  auto objective = [&](const std::vector<double>& s) {
    double val = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      if (p[x] == 0.0) continue;
      std::vector<double> terms;
      terms.reserve(ny);
      for (std::size_t y = 0; y < ny; ++y) {
        if (w(x, y) == 0.0) continue;
        if (s[y] <= 0.0) return kInf;
        terms.push_back(order * std::log(w(x, y)) + (1.0 - order) * std::log(s[y]));
      }
      val += p[x] * logsumexp(terms) / lambda;
    }
    return val;
  };

  // Tilted-channel averaging step; output is automatically normalized.
  auto step = [&](const std::vector<double>& s) {
    std::vector<double> next(ny, 0.0);
    for (std::size_t x = 0; x < nx; ++x) {
      if (p[x] == 0.0) continue;
      double zx = 0.0;
      std::vector<double> tilt(ny, 0.0);
      for (std::size_t y = 0; y < ny; ++y) {
        if (w(x, y) == 0.0 || s[y] <= 0.0) continue;
        tilt[y] = std::exp(order * std::log(w(x, y)) + (1.0 - order) * std::log(s[y]));
        zx += tilt[y];
      }
      for (std::size_t y = 0; y < ny; ++y) next[y] += p[x] * tilt[y] / zx;
    }
    return next;
  };

  std::vector<double> s = output_distribution(p, w).probs();
  double prev_res = kInf;
  double damping = 0.0;
  int iter = 0;
  double res = kInf;
  for (; iter < max_iters; ++iter) {
    std::vector<double> next = step(s);
    res = 0.0;
    for (std::size_t y = 0; y < ny; ++y) res = std::max(res, std::abs(next[y] - s[y]));
    double rho = res / prev_res;
    if (damping == 0.0 && iter % 16 == 15 && rho > 0.5 && rho < 0.99999) {
      // The iteration contracts linearly; jump to the geometric limit along
      // the current step (secant extrapolation), then let plain iterations
      // verify. Rescued cases are the nearly degenerate channels whose
      // contraction factor approaches one.
      double tail = rho / (1.0 - rho);
      double norm = 0.0;
      for (std::size_t y = 0; y < ny; ++y) {
        next[y] = std::max(next[y] + tail * (next[y] - s[y]), 1e-300);
        norm += next[y];
      }
      for (std::size_t y = 0; y < ny; ++y) next[y] /= norm;
      prev_res = kInf;
    } else {
      if (damping > 0.0)
        for (std::size_t y = 0; y < ny; ++y) next[y] = damping * s[y] + (1.0 - damping) * next[y];
      if (res > prev_res) damping = 0.5;
      prev_res = res;
    }
    s = std::move(next);
    if (res < tol) break;
  }
  if (res >= tol && iter >= max_iters) {
    // The objective is convex in S for order > 1 (each term is log-convex),
    // so a deterministic pattern search from the stalled iterate reaches the
    // unique minimizer when the contraction factor is too close to one.
    double best = objective(s);
    double delta = std::min(0.1, 16.0 * res);
    for (int level = 0; level < 160; ++level) {
      bool improved = true;
      int guard = 0;
      while (improved && guard++ < 200) {
        improved = false;
        for (std::size_t i = 0; i < ny; ++i) {
          if (s[i] < delta) continue;
          for (std::size_t j = 0; j < ny; ++j) {
            if (i == j) continue;
            s[i] -= delta;
            s[j] += delta;
            double v = objective(s);
            if (v < best - 1e-18) {
              best = v;
              improved = true;
            } else {
              s[i] += delta;
              s[j] -= delta;
            }
          }
        }
      }
      delta *= 0.5;
    }
    // acceptance in value terms: near-degenerate channels leave the iterate
    // residual large while the objective is flat and fully converged
    std::vector<double> verify = step(s);
    res = 0.0;
    for (std::size_t y = 0; y < ny; ++y) res = std::max(res, std::abs(verify[y] - s[y]));
    double v_here = objective(s), v_next = objective(verify);
    if (v_next < v_here) s = std::move(verify);
    if (std::min(v_here, v_next) < v_here - 1e-11)
      throw convergence_error("csiszar_mi: fixed point did not converge", s, res, iter);
  }

  double val = objective(s);

  // Sibson minimizer as an upper-bound candidate: S(y) ~ (sum_x P W^order)^{1/order}.
  {
    std::vector<double> cand(ny, 0.0);
    double norm = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      std::vector<double> inner;
      for (std::size_t x = 0; x < nx; ++x)
        if (p[x] > 0.0 && w(x, y) > 0.0) inner.push_back(std::log(p[x]) + order * std::log(w(x, y)));
      double lse = logsumexp(inner);
      cand[y] = lse > -kInf ? std::exp(lse / order) : 0.0;
      norm += cand[y];
    }
    for (double& v : cand) v /= norm;
    double cv = objective(cand);
    if (cv < val) {
      val = cv;
      s = std::move(cand);
    }
  }

  return CsiszarResult{val, Distribution(s), iter, res};
}

/// Evaluates the Csiszar objective E_X[D_order(rows || s)] at a given S_Y.
inline double csiszar_objective_at(const Distribution& p, const Channel& w, double order,
                                   const Distribution& s) {
  const double lambda = order - 1.0;
  if (std::abs(lambda) < kOrderSingularity) {
    double v = 0.0;
    for (std::size_t x = 0; x < w.input_size(); ++x)
      if (p[x] > 0.0) v += p[x] * relative_entropy(Distribution(w.row(x)), s);
    return v;
  }
  double val = 0.0;
  for (std::size_t x = 0; x < w.input_size(); ++x) {
    if (p[x] == 0.0) continue;
    std::vector<double> terms;
    for (std::size_t y = 0; y < w.output_size(); ++y) {
      if (w(x, y) == 0.0) continue;
      if (s[y] <= 0.0) return kInf;
      terms.push_back(order * std::log(w(x, y)) + (1.0 - order) * std::log(s[y]));
    }
    val += p[x] * logsumexp(terms) / lambda;
  }
  return val;
}

/// Entry (x,y) = log(W(y|x)/P_Y(y)); -inf where W(y|x)=0 < P_Y(y); NaN flags
/// the undefined columns where P_Y(y)=0.
inline std::vector<std::vector<double>> information_density_table(const Distribution& p, const Channel& w) {
  require_compatible(p, w);
  Distribution py = output_distribution(p, w);
  std::vector<std::vector<double>> t(w.input_size(), std::vector<double>(w.output_size(), 0.0));
  for (std::size_t x = 0; x < w.input_size(); ++x)
    for (std::size_t y = 0; y < w.output_size(); ++y) {
      if (py[y] == 0.0)
        t[x][y] = std::numeric_limits<double>::quiet_NaN();
      else if (w(x, y) == 0.0)
        t[x][y] = -kInf;
      else
        t[x][y] = std::log(w(x, y) / py[y]);
    }
  return t;
}

inline double mutual_varentropy(const Distribution& p, const Channel& w) {
  require_compatible(p, w);
  Distribution py = output_distribution(p, w);
  double mean = 0.0, second = 0.0;
  for (std::size_t x = 0; x < w.input_size(); ++x) {
    if (p[x] == 0.0) continue;
    for (std::size_t y = 0; y < w.output_size(); ++y) {
      if (w(x, y) == 0.0) continue;
      double mass = p[x] * w(x, y);
      double dens = std::log(w(x, y) / py[y]);
      mean += mass * dens;
      second += mass * dens * dens;
    }
  }
  double var = second - mean * mean;
  return var < 0.0 ? 0.0 : var;
}

/// Unnormalized l1 distance, sum |p - q| in [0, 2] for probability vectors.
inline double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
  if (p.size() != q.size()) throw dimension_error("total_variation: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
  return s;
}

inline double total_variation(const Distribution& p, const Distribution& q) {
  return total_variation(p.probs(), q.probs());
}

}  // namespace softcover

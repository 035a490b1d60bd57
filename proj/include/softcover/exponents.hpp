#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "softcover/common.hpp"
#include "softcover/compositions.hpp"
#include "softcover/distribution.hpp"
#include "softcover/measures.hpp"

// Soft-covering exponents for nondegenerate discrete memoryless channels.
// Rates and returned values are in nats; base conversion happens at the
// serialization boundary.

namespace softcover {

struct SolverDiagnostics {
  int iterations = 0;
  double residual = 0.0;
  std::string method;
  std::vector<std::string> warnings;
};

struct ExponentResult {
  double value = 0.0;            // nats, >= 0
  double optimizer_param = 0.0;  // lambda* (or the active dual parameter)
  std::optional<JointDistribution> optimizer_joint;
  std::optional<Channel> optimizer_channel;
  std::optional<Distribution> optimizer_dist;
  SolverDiagnostics diagnostics;
};

/// A rate bound to the channel and input it applies to, with the link to
/// concrete codebook sizes M = ceil(exp(nR)).
struct RatePoint {
  double rate;  // nats
  Channel channel_ref;
  Distribution input_ref;

  RatePoint(double rate_nats, Channel w, Distribution p)
      : rate(rate_nats), channel_ref(std::move(w)), input_ref(std::move(p)) {
    if (!(rate > 0.0)) throw std::domain_error("RatePoint: rate must be positive");
  }

  long long codebook_size(int n) const { return codebook_size_for_rate(n, rate); }
};

namespace detail {

struct Search1D {
  double x = 0.0;
  double value = -kInf;
  int evals = 0;
};

/// Coarse pre-grid followed by golden-section maximization on the bracketing
/// cell. Returns the best point ever evaluated, so the result never
/// undershoots a grid value.
template <class F>
Search1D maximize_scalar(F&& f, double lo, double hi, int pregrid = 101, double xtol = 1e-12) {
  Search1D best;
  double step = (hi - lo) / (pregrid - 1);
  int best_i = 0;
  for (int i = 0; i < pregrid; ++i) {
    double x = lo + step * i;
    double v = f(x);
    ++best.evals;
    if (v > best.value) {
      best.value = v;
      best.x = x;
      best_i = i;
    }
  }
  double a = lo + step * std::max(0, best_i - 1);
  double b = lo + step * std::min(pregrid - 1, best_i + 1);
  const double invphi = 0.6180339887498949;
  double x1 = b - invphi * (b - a);
  double x2 = a + invphi * (b - a);
  double f1 = f(x1), f2 = f(x2);
  best.evals += 2;
  while (b - a > xtol) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + invphi * (b - a);
      f2 = f(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - invphi * (b - a);
      f1 = f(x1);
    }
    ++best.evals;
    double fx = std::max(f1, f2);
    double xx = f1 >= f2 ? x1 : x2;
    if (fx > best.value) {
      best.value = fx;
      best.x = xx;
    }
  }
  return best;
}

}  // namespace detail

// --------------------------------------------------------------------------
// Exact exponent, i.i.d. ensemble

inline void require_nondegenerate(const Channel& w) {
  if (is_degenerate(w))
    throw degenerate_channel_error(
        "degenerate channel: the induced output equals the target for every codebook, "
        "so the exponent is not a finite number");
}

/// Reconstructs the minimizing joint distribution of the primal problem from
/// the dual parameter. With tilt t = lambda_star - 1, the conditional is the
/// exponentially tilted P_{X|Y} and the output marginal is P_Y scaled by the
/// conditional moment raised to 1/lambda_star (the (2-lambda)/2 coefficient
/// of the minimax chain), both renormalized.
inline JointDistribution tilted_optimizer(const Distribution& p, const Channel& w, double lambda_star) {
  require_compatible(p, w);
  if (lambda_star < 1.0 - 1e-12 || lambda_star > 2.0 + 1e-12)
    throw std::domain_error("tilted_optimizer: lambda_star must lie in [1,2]");
  const double t = lambda_star - 1.0;
  Distribution py = output_distribution(p, w);
  const std::size_t nx = w.input_size(), ny = w.output_size();

  std::vector<double> qy(ny, 0.0);
  std::vector<std::vector<double>> qxgy(ny, std::vector<double>(nx, 0.0));
  double norm = 0.0;
  for (std::size_t y = 0; y < ny; ++y) {
    if (py[y] == 0.0) continue;
    // conditional moment E[exp(t i(X;Y)) | Y=y]
    double m = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      if (p[x] == 0.0 || w(x, y) == 0.0) continue;
      double pxgy = p[x] * w(x, y) / py[y];
      double tiltv = pxgy * std::exp(t * std::log(w(x, y) / py[y]));
      qxgy[y][x] = tiltv;
      m += tiltv;
    }
    for (std::size_t x = 0; x < nx; ++x) qxgy[y][x] /= m;
    qy[y] = py[y] * std::pow(m, 1.0 / lambda_star);
    norm += qy[y];
  }
  std::vector<std::vector<double>> q(nx, std::vector<double>(ny, 0.0));
  for (std::size_t y = 0; y < ny; ++y)
    for (std::size_t x = 0; x < nx; ++x) q[x][y] = qxgy[y][x] * qy[y] / norm;
  return JointDistribution(std::move(q));
}

/// D(Q||P_XY) + 0.5 [R - D(Q||P_X Q_Y)]_+, the quantity the exact exponent
/// minimizes over joints.
inline double alpha_primal_objective(const JointDistribution& q, const Distribution& p, const Channel& w,
                                     double rate) {
  if (q.input_size() != w.input_size() || q.output_size() != w.output_size())
    throw dimension_error("alpha_primal_objective: dimension mismatch");
  JointDistribution pxy = joint_from(p, w);
  Distribution qy = q.marginal_y();
  double d_joint = 0.0, d_prod = 0.0;
  for (std::size_t x = 0; x < q.input_size(); ++x)
    for (std::size_t y = 0; y < q.output_size(); ++y) {
      double t = xlog_ratio(q(x, y), pxy(x, y));
      if (t == kInf) return kInf;
      d_joint += t;
      d_prod += xlog_ratio(q(x, y), p[x] * qy[y]);
    }
  return d_joint + 0.5 * positive_part(rate - d_prod);
}

/// Exact soft-covering exponent for the i.i.d. ensemble via the dual form
/// max over mu in [0,1] of (mu/2)(R - Sibson(2/(2-mu))), which is concave in mu.
inline ExponentResult alpha_dual(const Distribution& p, const Channel& w, double rate) {
  require_nondegenerate(w);
  if (rate <= 0.0) throw std::domain_error("alpha_dual: rate must be positive");
  ExponentResult r;
  r.diagnostics.method = "golden-section on concave dual (Sibson)";
  if (rate <= mutual_information(p, w)) {
    // low-rate regime: the base joint is the optimizer and the exponent is 0
    r.value = 0.0;
    r.optimizer_param = 1.0;
    r.optimizer_joint = joint_from(p, w);
    return r;
  }
  auto f = [&](double mu) {
    double order = 2.0 / (2.0 - mu);
    return 0.5 * mu * (rate - sibson_mi(p, w, order));
  };
  auto s = detail::maximize_scalar(f, 0.0, 1.0);
  r.diagnostics.iterations = s.evals;
  if (s.value <= 0.0) {
    r.value = 0.0;
    r.optimizer_param = 1.0;
    r.optimizer_joint = joint_from(p, w);
    return r;
  }
  r.value = s.value;
  r.optimizer_param = 2.0 / (2.0 - s.x);
  r.optimizer_joint = tilted_optimizer(p, w, r.optimizer_param);
  return r;
}

namespace detail {

/// Pattern search on the probability simplex: repeatedly transfers mass
/// delta between coordinate pairs, halving delta when no transfer helps.
template <class Obj>
double simplex_pattern_search(std::vector<double>& q, Obj&& obj, double initial_step, int halvings = 200) {
  double best = obj(q);
  double delta = initial_step;
  const std::size_t k = q.size();
  for (int level = 0; level < halvings; ++level) {
    bool improved = true;
    int guard = 0;
    while (improved && guard++ < 500) {
      improved = false;
      for (std::size_t i = 0; i < k; ++i) {
        if (q[i] < delta) continue;
        for (std::size_t j = 0; j < k; ++j) {
          if (i == j) continue;
          q[i] -= delta;
          q[j] += delta;
          double v = obj(q);
          if (v < best - 1e-18) {
            best = v;
            improved = true;
          } else {
            q[i] += delta;
            q[j] -= delta;
          }
        }
      }
    }
    delta *= 0.5;
    if (delta < 1e-18) break;
  }
  return best;
}

struct GridOracleTables {
  std::vector<double> log_pxy;   // flattened lnP_XY, -inf where zero
  std::vector<double> log_px;    // lnP_X
  std::vector<double> tab_xlogx; // (i/N) ln(i/N)
  int nx, ny, steps;
};

inline GridOracleTables make_grid_tables(const Distribution& p, const Channel& w, int steps) {
  GridOracleTables t;
  t.nx = static_cast<int>(w.input_size());
  t.ny = static_cast<int>(w.output_size());
  t.steps = steps;
  t.log_pxy.resize(static_cast<std::size_t>(t.nx) * t.ny);
  t.log_px.resize(t.nx);
  for (int x = 0; x < t.nx; ++x) {
    t.log_px[x] = p[x] > 0.0 ? std::log(p[x]) : -kInf;
    for (int y = 0; y < t.ny; ++y) {
      double v = p[x] * w(x, y);
      t.log_pxy[static_cast<std::size_t>(x) * t.ny + y] = v > 0.0 ? std::log(v) : -kInf;
    }
  }
  t.tab_xlogx.resize(steps + 1);
  t.tab_xlogx[0] = 0.0;
  for (int i = 1; i <= steps; ++i) {
    double v = static_cast<double>(i) / steps;
    t.tab_xlogx[i] = v * std::log(v);
  }
  return t;
}

}  // namespace detail

/// Brute-force primal oracle: grid over the joint simplex followed by
/// deterministic pattern-search refinement. Upper-bounds the true exponent
/// and converges to it as the grid refines. The enumerated grid is capped at
/// 2.5e7 points; the requested spacing is coarsened when the cap binds (the
/// refinement stage recovers the resolution).
inline double alpha_primal_bruteforce(const Distribution& p, const Channel& w, double rate,
                                      double grid_step) {
  require_nondegenerate(w);
  const int nx = static_cast<int>(w.input_size()), ny = static_cast<int>(w.output_size());
  const int k = nx * ny;
  if (k > 9) throw size_guard_error("alpha_primal_bruteforce: alphabet product exceeds 9 cells");
  if (!(grid_step > 0.0 && grid_step <= 0.1))
    throw std::domain_error("alpha_primal_bruteforce: grid_step must lie in (0, 0.1]");

  int steps = std::max(1, static_cast<int>(std::llround(1.0 / grid_step)));
  while (composition_count(steps, k) > 2.5e7 && steps > 8) steps = steps * 4 / 5;

  auto tables = detail::make_grid_tables(p, w, steps);

  // Grid scan: all entropy-like terms come from the shared (i/N)ln(i/N) table.
  std::vector<int> bestc;
  double bestv = kInf;
  std::vector<int> margx(nx), margy(ny);
  for_each_composition(steps, k, [&](const std::vector<int>& c) {
    double hq = 0.0, cross = 0.0;
    std::fill(margx.begin(), margx.end(), 0);
    std::fill(margy.begin(), margy.end(), 0);
    for (int i = 0; i < k; ++i) {
      if (c[i] == 0) continue;
      if (tables.log_pxy[i] == -kInf) return;  // outside supp(P_XY)
      hq += tables.tab_xlogx[c[i]];
      cross += c[i] * tables.log_pxy[i];
      margx[i / ny] += c[i];
      margy[i % ny] += c[i];
    }
    cross /= steps;
    double d_joint = hq - cross;
    double cross_px = 0.0, hy = 0.0;
    for (int x = 0; x < nx; ++x)
      if (margx[x] > 0) cross_px += margx[x] * tables.log_px[x];
    cross_px /= steps;
    for (int y = 0; y < ny; ++y) hy += tables.tab_xlogx[margy[y]];
    double d_prod = hq - cross_px - hy;
    double v = d_joint + 0.5 * positive_part(rate - d_prod);
    if (v < bestv) {
      bestv = v;
      bestc = c;
    }
  });

  // Continuous objective for refinement.
  JointDistribution pxy = joint_from(p, w);
  auto obj = [&](const std::vector<double>& q) {
    double d_joint = 0.0, hq = 0.0;
    std::vector<double> mx(nx, 0.0), my(ny, 0.0);
    for (int x = 0; x < nx; ++x)
      for (int y = 0; y < ny; ++y) {
        double v = q[static_cast<std::size_t>(x) * ny + y];
        double t = xlog_ratio(v, pxy(x, y));
        if (t == kInf) return kInf;
        d_joint += t;
        hq += xlogx(v);
        mx[x] += v;
        my[y] += v;
      }
    double cross_px = 0.0, hy = 0.0;
    for (int x = 0; x < nx; ++x) {
      if (mx[x] > 0.0 && p[x] == 0.0) return kInf;
      if (mx[x] > 0.0) cross_px += mx[x] * std::log(p[x]);
    }
    for (int y = 0; y < ny; ++y) hy += xlogx(my[y]);
    double d_prod = hq - cross_px - hy;
    return d_joint + 0.5 * positive_part(rate - d_prod);
  };

  std::vector<std::vector<double>> starts;
  if (!bestc.empty()) {
    std::vector<double> q(k);
    for (int i = 0; i < k; ++i) q[i] = static_cast<double>(bestc[i]) / steps;
    starts.push_back(std::move(q));
  }
  {
    std::vector<double> q(k);
    for (int x = 0; x < nx; ++x)
      for (int y = 0; y < ny; ++y) q[static_cast<std::size_t>(x) * ny + y] = pxy(x, y);
    starts.push_back(std::move(q));
  }
  {
    Distribution py = output_distribution(p, w);
    std::vector<double> q(k);
    for (int x = 0; x < nx; ++x)
      for (int y = 0; y < ny; ++y) q[static_cast<std::size_t>(x) * ny + y] = p[x] * py[y];
    starts.push_back(std::move(q));
  }

  double result = bestv;
  for (auto& q : starts) {
    double v = detail::simplex_pattern_search(q, obj, std::max(grid_step, 1.0 / steps));
    result = std::min(result, v);
  }
  return result;
}

// --------------------------------------------------------------------------
// Exact exponent, constant-composition ensemble

/// D(P Q_{Y|X} || P W) + 0.5 [R - D(P Q_{Y|X} || P Q_Y)]_+ for the
/// constant-composition primal.
inline double aleph_primal_objective(const Channel& q_cond, const Distribution& p_type, const Channel& w,
                                     double rate) {
  if (q_cond.input_size() != w.input_size() || q_cond.output_size() != w.output_size())
    throw dimension_error("aleph_primal_objective: dimension mismatch");
  Distribution qy = output_distribution(p_type, q_cond);
  double d_joint = 0.0, d_prod = 0.0;
  for (std::size_t x = 0; x < w.input_size(); ++x) {
    if (p_type[x] == 0.0) continue;
    for (std::size_t y = 0; y < w.output_size(); ++y) {
      double mass = p_type[x] * q_cond(x, y);
      double t = xlog_ratio(mass, p_type[x] * w(x, y));
      if (t == kInf) return kInf;
      d_joint += t;
      d_prod += xlog_ratio(mass, p_type[x] * qy[y]);
    }
  }
  return d_joint + 0.5 * positive_part(rate - d_prod);
}

/// Tilted reconstruction of the minimizing random transformation:
/// Q*(y|x) ~ W(y|x)^{lambda} S*(y)^{1-lambda} row-normalized, with S* the
/// Csiszar minimizer at the optimal order.
inline Channel aleph_tilted_optimizer(const Channel& w, const Distribution& s_star, double lambda_star) {
  std::vector<std::vector<double>> rows(w.input_size(), std::vector<double>(w.output_size(), 0.0));
  for (std::size_t x = 0; x < w.input_size(); ++x) {
    double z = 0.0;
    for (std::size_t y = 0; y < w.output_size(); ++y) {
      if (w(x, y) > 0.0 && s_star[y] > 0.0)
        rows[x][y] = std::exp(lambda_star * std::log(w(x, y)) + (1.0 - lambda_star) * std::log(s_star[y]));
      z += rows[x][y];
    }
    for (double& v : rows[x]) v /= z;
  }
  return Channel(std::move(rows));
}

/// Exact constant-composition exponent via the dual form with the Csiszar
/// alpha-mutual information. Inner-solver convergence failures propagate.
inline ExponentResult aleph_dual(const Distribution& p_type, const Channel& w, double rate) {
  require_nondegenerate(w);
  if (rate <= 0.0) throw std::domain_error("aleph_dual: rate must be positive");
  ExponentResult r;
  r.diagnostics.method = "golden-section on concave dual (Csiszar fixed point)";
  if (rate <= mutual_information(p_type, w)) {
    r.value = 0.0;
    r.optimizer_param = 1.0;
    r.optimizer_channel = w;
    return r;
  }
  auto f = [&](double mu) {
    double order = 2.0 / (2.0 - mu);
    double ic = (order - 1.0 < kOrderSingularity) ? mutual_information(p_type, w)
                                                  : csiszar_mi(p_type, w, order).value;
    return 0.5 * mu * (rate - ic);
  };
  auto s = detail::maximize_scalar(f, 0.0, 1.0);
  r.diagnostics.iterations = s.evals;
  if (s.value <= 0.0) {
    r.value = 0.0;
    r.optimizer_param = 1.0;
    r.optimizer_channel = w;
    return r;
  }
  r.value = s.value;
  r.optimizer_param = 2.0 / (2.0 - s.x);
  auto inner = csiszar_mi(p_type, w, std::max(r.optimizer_param, 1.0 + 1e-9));
  r.optimizer_dist = inner.minimizer;
  r.optimizer_channel = aleph_tilted_optimizer(w, inner.minimizer, r.optimizer_param);
  r.diagnostics.residual = inner.residual;
  return r;
}

// --------------------------------------------------------------------------
// Comparison exponents, i.i.d. ensemble

/// Previously best known lower bound: a 2-D maximization over the Renyi
/// order lambda >= 0 and the smoothing parameter lambda' <= 1. The unbounded
/// domain is truncated to [0,32] x [-32,1]; hitting the box edge is reported
/// as a diagnostics warning, not an error.
inline ExponentResult beta_exponent(const Distribution& p, const Channel& w, double rate) {
  require_nondegenerate(w);
  const double lmax = 32.0, lpmin = -32.0;

  // Memoized 1-D slices: the two divergences depend on one variable each.
  auto renyi_of = [&](double lam) { return lam < kOrderSingularity ? mutual_information(p, w)
                                                                   : renyi_divergence_joint(p, w, 1.0 + lam); };
  auto tilde_of = [&](double lp) { return tilde_renyi(p, w, std::min(lp, 1.0)); };

  auto obj = [&](double lam, double lp, double dl, double dlp) {
    if (lam <= 0.0) return 0.0;
    double denom = 2.0 * lam + 1.0 - lp;
    if (denom <= 1e-12) return -kInf;
    return lam / denom * (rate - (1.0 - lp) * dl - lp * dlp);
  };

  double best = 0.0, best_l = 0.0, best_lp = 0.0;
  auto scan_box = [&](double l_lo, double l_hi, double lp_lo, double lp_hi, int npts) {
    std::vector<double> dls(npts), dlps(npts);
    for (int i = 0; i < npts; ++i) {
      double lam = l_lo + (l_hi - l_lo) * i / (npts - 1);
      dls[i] = renyi_of(lam);
    }
    for (int j = 0; j < npts; ++j) {
      double lp = lp_lo + (lp_hi - lp_lo) * j / (npts - 1);
      dlps[j] = tilde_of(lp);
    }
    for (int i = 0; i < npts; ++i)
      for (int j = 0; j < npts; ++j) {
        double lam = l_lo + (l_hi - l_lo) * i / (npts - 1);
        double lp = lp_lo + (lp_hi - lp_lo) * j / (npts - 1);
        double v = obj(lam, lp, dls[i], dlps[j]);
        if (v > best) {
          best = v;
          best_l = lam;
          best_lp = lp;
        }
      }
  };

  // Coarse pass is quadratically spaced toward the small-lambda corner where
  // the optimum sits for every channel tested.
  {
    const int npts = 65;
    std::vector<double> ls(npts), lps(npts);
    for (int i = 0; i < npts; ++i) {
      double u = static_cast<double>(i) / (npts - 1);
      ls[i] = lmax * u * u;
      lps[i] = 1.0 - (1.0 - lpmin) * u * u;
    }
    std::vector<double> dls(npts), dlps(npts);
    for (int i = 0; i < npts; ++i) dls[i] = renyi_of(ls[i]);
    for (int j = 0; j < npts; ++j) dlps[j] = tilde_of(lps[j]);
    for (int i = 0; i < npts; ++i)
      for (int j = 0; j < npts; ++j) {
        double v = obj(ls[i], lps[j], dls[i], dlps[j]);
        if (v > best) {
          best = v;
          best_l = ls[i];
          best_lp = lps[j];
        }
      }
  }

  // Seed with the diagonal point of the gamma optimizer; restricting
  // lambda' = lambda is exactly how beta dominates gamma.
  {
    auto g = detail::maximize_scalar(
        [&](double lam) { return lam / (1.0 + lam) * (rate - renyi_of(lam)); }, 0.0, 1.0);
    double lam = g.x;
    double v = obj(lam, lam, renyi_of(lam), tilde_of(lam));
    if (v > best) {
      best = v;
      best_l = lam;
      best_lp = lam;
    }
  }

  // Dyadic shrink around the incumbent.
  double wl = lmax / 16.0, wlp = (1.0 - lpmin) / 16.0;
  for (int round = 0; round < 90; ++round) {
    double l_lo = std::max(0.0, best_l - wl), l_hi = std::min(lmax, best_l + wl);
    double lp_lo = std::max(lpmin, best_lp - wlp), lp_hi = std::min(1.0, best_lp + wlp);
    scan_box(l_lo, l_hi, lp_lo, lp_hi, 9);
    wl *= 0.5;
    wlp *= 0.5;
    if (wl < 1e-13 && wlp < 1e-13) break;
  }

  ExponentResult r;
  r.value = std::max(0.0, best);
  r.optimizer_param = best_l;
  r.diagnostics.method = "truncated box search with dyadic refinement";
  if (best_l > lmax - 1e-6) r.diagnostics.warnings.push_back("lambda optimizer saturated the [0,32] box");
  if (best_lp < lpmin + 1e-6) r.diagnostics.warnings.push_back("lambda' optimizer saturated the [-32,1] box");
  return r;
}

inline ExponentResult gamma_exponent(const Distribution& p, const Channel& w, double rate) {
  require_nondegenerate(w);
  auto f = [&](double lam) {
    double d = lam < kOrderSingularity ? mutual_information(p, w) : renyi_divergence_joint(p, w, 1.0 + lam);
    return lam / (1.0 + lam) * (rate - d);
  };
  auto s = detail::maximize_scalar(f, 0.0, 1.0);
  ExponentResult r;
  r.value = std::max(0.0, s.value);
  r.optimizer_param = s.value > 0.0 ? 1.0 + s.x : 1.0;
  r.diagnostics.method = "golden-section on [0,1]";
  r.diagnostics.iterations = s.evals;
  return r;
}

inline ExponentResult zeta_exponent(const Distribution& p, const Channel& w, double rate) {
  require_nondegenerate(w);
  auto f = [&](double lam) {
    double d = lam < kOrderSingularity ? mutual_information(p, w) : renyi_divergence_joint(p, w, 1.0 + lam);
    return lam * (rate - d);
  };
  auto s = detail::maximize_scalar(f, 0.0, 1.0);
  ExponentResult r;
  r.value = std::max(0.0, s.value);
  r.optimizer_param = s.value > 0.0 ? 1.0 + s.x : 1.0;
  r.diagnostics.method = "golden-section on [0,1] (concave: lam*R - cgf)";
  r.diagnostics.iterations = s.evals;
  return r;
}

/// Primal form of the relative-entropy exponent,
/// min over Q of D(Q||P_XY) + [R - E_Q[i_P(X;Y)]]_+, by simplex grid plus
/// pattern-search refinement. Convex objective, so refinement is reliable.
inline double zeta_primal_bruteforce(const Distribution& p, const Channel& w, double rate,
                                     double grid_step) {
  require_nondegenerate(w);
  const int nx = static_cast<int>(w.input_size()), ny = static_cast<int>(w.output_size());
  const int k = nx * ny;
  if (k > 9) throw size_guard_error("zeta_primal_bruteforce: alphabet product exceeds 9 cells");
  if (!(grid_step > 0.0 && grid_step <= 0.1))
    throw std::domain_error("zeta_primal_bruteforce: grid_step must lie in (0, 0.1]");
  int steps = std::max(1, static_cast<int>(std::llround(1.0 / grid_step)));
  while (composition_count(steps, k) > 2.5e7 && steps > 8) steps = steps * 4 / 5;

  auto tables = detail::make_grid_tables(p, w, steps);
  Distribution py = output_distribution(p, w);
  std::vector<double> dens(static_cast<std::size_t>(k), 0.0);
  for (int x = 0; x < nx; ++x)
    for (int y = 0; y < ny; ++y) {
      double v = w(x, y);
      dens[static_cast<std::size_t>(x) * ny + y] = v > 0.0 && py[y] > 0.0 ? std::log(v / py[y]) : -kInf;
    }

  double bestv = kInf;
  std::vector<int> bestc;
  for_each_composition(steps, k, [&](const std::vector<int>& c) {
    double d = 0.0, e = 0.0;
    for (int i = 0; i < k; ++i) {
      if (c[i] == 0) continue;
      if (tables.log_pxy[i] == -kInf) return;
      d += tables.tab_xlogx[c[i]] - static_cast<double>(c[i]) / steps * tables.log_pxy[i];
      e += static_cast<double>(c[i]) / steps * dens[i];
    }
    double v = d + positive_part(rate - e);
    if (v < bestv) {
      bestv = v;
      bestc = c;
    }
  });

  JointDistribution pxy = joint_from(p, w);
  auto obj = [&](const std::vector<double>& q) {
    double d = 0.0, e = 0.0;
    for (int i = 0; i < k; ++i) {
      double t = xlog_ratio(q[i], pxy(i / ny, i % ny));
      if (t == kInf) return kInf;
      d += t;
      if (q[i] > 0.0) e += q[i] * dens[i];
    }
    return d + positive_part(rate - e);
  };
  std::vector<double> q(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) q[i] = static_cast<double>(bestc[i]) / steps;
  double refined = detail::simplex_pattern_search(q, obj, std::max(grid_step, 1.0 / steps));
  return std::min(bestv, refined);
}

// --------------------------------------------------------------------------
// Comparison exponents, constant-composition ensemble

struct IpfResult {
  std::vector<std::vector<double>> joint;
  double divergence = kInf;  // D(joint || reference)
  int sweeps = 0;
  double residual = kInf;
  bool converged = false;
  bool feasible = true;
};

/// Iterative proportional fitting: the I-projection of `reference` onto the
/// transportation polytope with the given row and column marginals.
inline IpfResult ipf_project(const std::vector<std::vector<double>>& reference,
                             const std::vector<double>& row_marginal,
                             const std::vector<double>& col_marginal, double tol = 1e-12,
                             int max_sweeps = 50000) {
  const std::size_t nx = reference.size(), ny = reference.front().size();
  IpfResult r;
  r.joint = reference;
  for (r.sweeps = 0; r.sweeps < max_sweeps; ++r.sweeps) {
    for (std::size_t x = 0; x < nx; ++x) {
      double s = 0.0;
      for (std::size_t y = 0; y < ny; ++y) s += r.joint[x][y];
      if (s == 0.0) {
        if (row_marginal[x] > 0.0) {
          r.feasible = false;
          return r;
        }
        continue;
      }
      double f = row_marginal[x] / s;
      for (std::size_t y = 0; y < ny; ++y) r.joint[x][y] *= f;
    }
    r.residual = 0.0;
    for (std::size_t y = 0; y < ny; ++y) {
      double s = 0.0;
      for (std::size_t x = 0; x < nx; ++x) s += r.joint[x][y];
      if (s == 0.0) {
        if (col_marginal[y] > 0.0) {
          r.feasible = false;
          return r;
        }
        continue;
      }
      double f = col_marginal[y] / s;
      for (std::size_t x = 0; x < nx; ++x) r.joint[x][y] *= f;
      r.residual = std::max(r.residual, std::abs(s - col_marginal[y]));
    }
    if (r.residual < tol) {
      r.converged = true;
      break;
    }
  }
  double d = 0.0;
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) {
      double t = xlog_ratio(r.joint[x][y], reference[x][y]);
      if (t == kInf) {
        d = kInf;
        break;
      }
      d += t;
    }
  r.divergence = std::max(0.0, d);
  return r;
}

/// The G functional: H(Q_Y) - E[i_{P_{Y|X}}(Y~|X-)] plus the KL projection of
/// P_XY onto the polytope with row marginal P and column marginal Q_Y.
/// Returns +inf for transformations outside the support of the channel.
inline double g_function(const Channel& q_cond, const Distribution& p_type, const Channel& w,
                         bool throw_on_nonconvergence = true) {
  if (q_cond.input_size() != w.input_size() || q_cond.output_size() != w.output_size())
    throw dimension_error("g_function: dimension mismatch");
  Distribution qy = output_distribution(p_type, q_cond);
  double h = entropy(qy);
  double cond_info = 0.0;  // E[-ln W(Y~|X-)] under P x Q
  for (std::size_t x = 0; x < w.input_size(); ++x) {
    if (p_type[x] == 0.0) continue;
    for (std::size_t y = 0; y < w.output_size(); ++y) {
      if (q_cond(x, y) == 0.0) continue;
      if (w(x, y) == 0.0) return kInf;
      cond_info -= p_type[x] * q_cond(x, y) * std::log(w(x, y));
    }
  }
  std::vector<std::vector<double>> ref(w.input_size(), std::vector<double>(w.output_size(), 0.0));
  for (std::size_t x = 0; x < w.input_size(); ++x)
    for (std::size_t y = 0; y < w.output_size(); ++y) ref[x][y] = p_type[x] * w(x, y);
  IpfResult ipf = ipf_project(ref, p_type.probs(), qy.probs());
  if (!ipf.feasible) return kInf;
  if (!ipf.converged) {
    if (throw_on_nonconvergence)
      throw convergence_error("g_function: IPF did not converge", {}, ipf.residual, ipf.sweeps);
    return kInf;
  }
  return h - cond_info + ipf.divergence;
}

namespace detail {

/// Shared outer minimization over random transformations Q_{Y|X} for the
/// constant-composition comparison exponents. Binary-by-binary channels get
/// the full 2-D grid plus dyadic refinement; larger alphabets run a
/// deterministic multi-start pattern search over the rows.
template <class Obj>
std::pair<double, Channel> minimize_over_transformations(const Channel& w, Obj&& obj,
                                                         const std::vector<Channel>& extra_starts,
                                                         double grid_step = 1e-3) {
  const std::size_t nx = w.input_size(), ny = w.output_size();
  double best = kInf;
  std::vector<std::vector<double>> bestq;

  auto consider = [&](const std::vector<std::vector<double>>& rows) {
    double v = obj(rows);
    if (v < best) {
      best = v;
      bestq = rows;
    }
  };

  if (nx == 2 && ny == 2) {
    const int steps = static_cast<int>(std::llround(1.0 / grid_step));
    std::vector<std::vector<double>> rows(2, std::vector<double>(2, 0.0));
    for (int i = 0; i <= steps; ++i) {
      double a = static_cast<double>(i) / steps;
      rows[0][0] = a;
      rows[0][1] = 1.0 - a;
      for (int j = 0; j <= steps; ++j) {
        double b = static_cast<double>(j) / steps;
        rows[1][0] = b;
        rows[1][1] = 1.0 - b;
        consider(rows);
      }
    }
    // dyadic refinement in the (a, b) square around the incumbent
    double a0 = bestq[0][0], b0 = bestq[1][0];
    double width = grid_step;
    for (int round = 0; round < 60; ++round) {
      for (int di = -2; di <= 2; ++di)
        for (int dj = -2; dj <= 2; ++dj) {
          if (di == 0 && dj == 0) continue;
          double a = std::clamp(a0 + di * width / 2.0, 0.0, 1.0);
          double b = std::clamp(b0 + dj * width / 2.0, 0.0, 1.0);
          rows[0][0] = a;
          rows[0][1] = 1.0 - a;
          rows[1][0] = b;
          rows[1][1] = 1.0 - b;
          consider(rows);
        }
      a0 = bestq[0][0];
      b0 = bestq[1][0];
      width *= 0.5;
    }
  } else {
    // deterministic multi-start: perturbations of the channel and flat rows
    std::uint64_t state = 0x9e3779b97f4a7c15ull;
    auto next_unit = [&]() {
      state += 0x9e3779b97f4a7c15ull;
      std::uint64_t z = state;
      z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
      z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
      z ^= z >> 31;
      return static_cast<double>(z >> 11) * 0x1.0p-53;
    };
    std::vector<std::vector<std::vector<double>>> starts;
    {
      std::vector<std::vector<double>> rows(nx, std::vector<double>(ny));
      for (std::size_t x = 0; x < nx; ++x)
        for (std::size_t y = 0; y < ny; ++y) rows[x][y] = w(x, y);
      starts.push_back(rows);
      for (auto& r : rows) std::fill(r.begin(), r.end(), 1.0 / static_cast<double>(ny));
      starts.push_back(rows);
    }
    for (int s = 0; s < 30; ++s) {
      std::vector<std::vector<double>> rows(nx, std::vector<double>(ny));
      for (std::size_t x = 0; x < nx; ++x) {
        double z = 0.0;
        for (std::size_t y = 0; y < ny; ++y) {
          rows[x][y] = 0.05 + next_unit();
          z += rows[x][y];
        }
        for (double& v : rows[x]) v /= z;
      }
      starts.push_back(std::move(rows));
    }
    for (auto& rows : starts) {
      auto flat_obj = [&](const std::vector<std::vector<double>>& q) { return obj(q); };
      // per-row pattern search, cycling rows
      double delta = 0.25;
      double cur = obj(rows);
      if (cur < best) {
        best = cur;
        bestq = rows;
      }
      for (int level = 0; level < 60; ++level) {
        bool improved = true;
        int guard = 0;
        while (improved && guard++ < 200) {
          improved = false;
          for (std::size_t x = 0; x < nx; ++x)
            for (std::size_t i = 0; i < ny; ++i) {
              if (rows[x][i] < delta) continue;
              for (std::size_t j = 0; j < ny; ++j) {
                if (i == j) continue;
                rows[x][i] -= delta;
                rows[x][j] += delta;
                double v = flat_obj(rows);
                if (v < cur - 1e-18) {
                  cur = v;
                  improved = true;
                } else {
                  rows[x][i] += delta;
                  rows[x][j] -= delta;
                }
              }
            }
        }
        delta *= 0.5;
      }
      if (cur < best) {
        best = cur;
        bestq = rows;
      }
    }
  }

  for (const auto& ch : extra_starts) {
    std::vector<std::vector<double>> rows(nx, std::vector<double>(ny));
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) rows[x][y] = ch(x, y);
    consider(rows);
    // local polish around the seed
    double a0, b0;
    if (nx == 2 && ny == 2) {
      a0 = rows[0][0];
      b0 = rows[1][0];
      double width = 1e-3;
      for (int round = 0; round < 60; ++round) {
        for (int di = -2; di <= 2; ++di)
          for (int dj = -2; dj <= 2; ++dj) {
            double a = std::clamp(a0 + di * width / 2.0, 0.0, 1.0);
            double b = std::clamp(b0 + dj * width / 2.0, 0.0, 1.0);
            rows[0][0] = a;
            rows[0][1] = 1.0 - a;
            rows[1][0] = b;
            rows[1][1] = 1.0 - b;
            double v = obj(rows);
            if (v < best) {
              best = v;
              bestq = rows;
              a0 = a;
              b0 = b;
            }
          }
        width *= 0.5;
      }
    }
  }

  return {best, Channel(std::move(bestq))};
}

}  // namespace detail

/// Parizi-style constant-composition exponent,
/// min over Q_{Y|X} of D(PQ||PW) + [R - G(Q)]_+.
inline ExponentResult beth_exponent(const Distribution& p_type, const Channel& w, double rate,
                                    const std::vector<Channel>& extra_starts = {}) {
  require_nondegenerate(w);
  auto obj = [&](const std::vector<std::vector<double>>& rows) {
    Channel q(rows);
    double d = 0.0;
    for (std::size_t x = 0; x < w.input_size(); ++x) {
      if (p_type[x] == 0.0) continue;
      for (std::size_t y = 0; y < w.output_size(); ++y) {
        double t = xlog_ratio(p_type[x] * q(x, y), p_type[x] * w(x, y));
        if (t == kInf) return kInf;
        d += t;
      }
    }
    double g = g_function(q, p_type, w, /*throw_on_nonconvergence=*/false);
    if (g == kInf) return kInf;
    return d + positive_part(rate - g);
  };
  auto [best, argmin] = detail::minimize_over_transformations(w, obj, extra_starts);
  ExponentResult r;
  r.value = std::max(0.0, best);
  r.optimizer_channel = argmin;
  r.diagnostics.method = "transformation grid + IPF inner projection";
  return r;
}

/// Hayashi-Matsumoto constant-composition exponent,
/// min over Q_{Y|X} of D(PQ||PW) + [R - D(PQ||PQ_Y)]_+
/// (the constant-composition primal with the 1/2 removed).
inline ExponentResult gimel_exponent(const Distribution& p_type, const Channel& w, double rate,
                                     const std::vector<Channel>& extra_starts = {}) {
  require_nondegenerate(w);
  auto obj = [&](const std::vector<std::vector<double>>& rows) {
    Channel q(rows);
    Distribution qy = output_distribution(p_type, q);
    double d = 0.0, d2 = 0.0;
    for (std::size_t x = 0; x < w.input_size(); ++x) {
      if (p_type[x] == 0.0) continue;
      for (std::size_t y = 0; y < w.output_size(); ++y) {
        double mass = p_type[x] * q(x, y);
        double t = xlog_ratio(mass, p_type[x] * w(x, y));
        if (t == kInf) return kInf;
        d += t;
        d2 += xlog_ratio(mass, p_type[x] * qy[y]);
      }
    }
    return d + positive_part(rate - d2);
  };
  auto [best, argmin] = detail::minimize_over_transformations(w, obj, extra_starts);
  ExponentResult r;
  r.value = std::max(0.0, best);
  r.optimizer_channel = argmin;
  r.diagnostics.method = "transformation grid";
  return r;
}

/// Hayashi's universal constant-composition bound,
/// max over lam in [0,1) of lam(R - Sibson_{1/(1-lam)}), with the open
/// endpoint handled by capping the Sibson order at 1e6 (the order-infinity
/// saturation proxy) and the search interval at 1 - 1e-6.
inline ExponentResult daleth_exponent(const Distribution& p_type, const Channel& w, double rate) {
  require_nondegenerate(w);
  auto f = [&](double lam) {
    double order = lam < kOrderSingularity ? 1.0 : std::min(1.0 / (1.0 - lam), 1e6);
    double d = std::abs(order - 1.0) < kOrderSingularity ? mutual_information(p_type, w)
                                                         : sibson_mi(p_type, w, order);
    return lam * (rate - d);
  };
  auto s = detail::maximize_scalar(f, 0.0, 1.0 - 1e-6);
  ExponentResult r;
  r.value = std::max(0.0, s.value);
  r.optimizer_param = s.x;
  r.diagnostics.method = "golden-section on [0, 1-1e-6]";
  r.diagnostics.iterations = s.evals;
  return r;
}

}  // namespace softcover

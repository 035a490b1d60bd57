#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <utility>
#include <vector>

#include "softcover/common.hpp"

namespace softcover {

inline constexpr double kProbSumTolerance = 1e-9;
inline constexpr double kDegeneracyTolerance = 1e-12;

/// A probability vector over a finite alphabet. Entries are validated
/// nonnegative and summing to one (within kProbSumTolerance), then
/// renormalized so downstream arithmetic sees an exact simplex point.
class Distribution {
 public:
  explicit Distribution(std::vector<double> probs) : p_(std::move(probs)) {
    if (p_.empty()) throw dimension_error("Distribution: empty probability vector");
    double sum = 0.0;
    for (double& v : p_) {
      if (v < 0.0) {
        if (v < -1e-12) throw std::invalid_argument("Distribution: negative probability");
        v = 0.0;
      }
      sum += v;
    }
    if (std::abs(sum - 1.0) > kProbSumTolerance)
      throw std::invalid_argument("Distribution: probabilities sum to " + std::to_string(sum));
    for (double& v : p_) v /= sum;
  }

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t i) const { return p_[i]; }
  const std::vector<double>& probs() const { return p_; }

  static Distribution point_mass(std::size_t alphabet, std::size_t at) {
    std::vector<double> v(alphabet, 0.0);
    v[at] = 1.0;
    return Distribution(std::move(v));
  }

  static Distribution uniform(std::size_t alphabet) {
    return Distribution(std::vector<double>(alphabet, 1.0 / static_cast<double>(alphabet)));
  }

 private:
  std::vector<double> p_;
};

/// A stochastic matrix P_{Y|X}: row x holds the output distribution given x.
class Channel {
 public:
  explicit Channel(std::vector<std::vector<double>> rows) {
    if (rows.empty()) throw dimension_error("Channel: no rows");
    const std::size_t ny = rows.front().size();
    rows_.reserve(rows.size());
    for (auto& r : rows) {
      if (r.size() != ny) throw dimension_error("Channel: ragged rows");
      Distribution d(std::move(r));
      rows_.push_back(d.probs());
    }
  }

  std::size_t input_size() const { return rows_.size(); }
  std::size_t output_size() const { return rows_.front().size(); }
  double operator()(std::size_t x, std::size_t y) const { return rows_[x][y]; }
  const std::vector<double>& row(std::size_t x) const { return rows_[x]; }

  static Channel bsc(double crossover) {
    return Channel({{1.0 - crossover, crossover}, {crossover, 1.0 - crossover}});
  }

 private:
  std::vector<std::vector<double>> rows_;
};

/// A joint probability matrix over X x Y.
class JointDistribution {
 public:
  explicit JointDistribution(std::vector<std::vector<double>> probs) : p_(std::move(probs)) {
    if (p_.empty() || p_.front().empty()) throw dimension_error("JointDistribution: empty matrix");
    const std::size_t ny = p_.front().size();
    double sum = 0.0;
    for (auto& row : p_) {
      if (row.size() != ny) throw dimension_error("JointDistribution: ragged rows");
      for (double& v : row) {
        if (v < 0.0) {
          if (v < -1e-12) throw std::invalid_argument("JointDistribution: negative entry");
          v = 0.0;
        }
        sum += v;
      }
    }
    if (std::abs(sum - 1.0) > kProbSumTolerance)
      throw std::invalid_argument("JointDistribution: entries sum to " + std::to_string(sum));
    for (auto& row : p_)
      for (double& v : row) v /= sum;
  }

  std::size_t input_size() const { return p_.size(); }
  std::size_t output_size() const { return p_.front().size(); }
  double operator()(std::size_t x, std::size_t y) const { return p_[x][y]; }
  const std::vector<std::vector<double>>& probs() const { return p_; }

  Distribution marginal_x() const {
    std::vector<double> m(input_size(), 0.0);
    for (std::size_t x = 0; x < input_size(); ++x)
      for (std::size_t y = 0; y < output_size(); ++y) m[x] += p_[x][y];
    return Distribution(std::move(m));
  }

  Distribution marginal_y() const {
    std::vector<double> m(output_size(), 0.0);
    for (std::size_t x = 0; x < input_size(); ++x)
      for (std::size_t y = 0; y < output_size(); ++y) m[y] += p_[x][y];
    return Distribution(std::move(m));
  }

 private:
  std::vector<std::vector<double>> p_;
};

inline void require_compatible(const Distribution& p, const Channel& w) {
  if (p.size() != w.input_size())
    throw dimension_error("input distribution size does not match channel input size");
}

/// Joint P_X(x) * P_{Y|X}(y|x).
inline JointDistribution joint_from(const Distribution& p, const Channel& w) {
  require_compatible(p, w);
  std::vector<std::vector<double>> j(w.input_size(), std::vector<double>(w.output_size(), 0.0));
  for (std::size_t x = 0; x < w.input_size(); ++x)
    for (std::size_t y = 0; y < w.output_size(); ++y) j[x][y] = p[x] * w(x, y);
  return JointDistribution(std::move(j));
}

/// Output distribution P_X -> P_{Y|X} -> P_Y.
inline Distribution output_distribution(const Distribution& p, const Channel& w) {
  require_compatible(p, w);
  std::vector<double> out(w.output_size(), 0.0);
  for (std::size_t x = 0; x < w.input_size(); ++x)
    for (std::size_t y = 0; y < w.output_size(); ++y) out[y] += p[x] * w(x, y);
  return Distribution(std::move(out));
}

/// A channel is degenerate when all rows coincide: the output carries no
/// information about the input, and the induced output equals the common row
/// for every input distribution.
inline bool is_degenerate(const Channel& w, double tol = kDegeneracyTolerance) {
  std::vector<double> avg(w.output_size(), 0.0);
  for (std::size_t x = 0; x < w.input_size(); ++x)
    for (std::size_t y = 0; y < w.output_size(); ++y) avg[y] += w(x, y) / static_cast<double>(w.input_size());
  for (std::size_t x = 0; x < w.input_size(); ++x)
    for (std::size_t y = 0; y < w.output_size(); ++y)
      if (std::abs(w(x, y) - avg[y]) > tol) return false;
  return true;
}

/// Reverse direction P_Y -> P_{X|Y}. Outputs of probability zero get a row
/// equal to the input distribution so the result is still a valid channel;
/// such rows carry zero weight under P_Y.
inline std::pair<Distribution, Channel> reverse_channel(const Distribution& p, const Channel& w) {
  Distribution py = output_distribution(p, w);
  std::vector<std::vector<double>> rows(w.output_size(), std::vector<double>(w.input_size(), 0.0));
  for (std::size_t y = 0; y < w.output_size(); ++y) {
    if (py[y] > 0.0) {
      for (std::size_t x = 0; x < w.input_size(); ++x) rows[y][x] = p[x] * w(x, y) / py[y];
    } else {
      for (std::size_t x = 0; x < w.input_size(); ++x) rows[y][x] = p[x];
    }
  }
  return {py, Channel(std::move(rows))};
}

/// Joint built from weights on Y and a conditional P_{X|Y} (used when the
/// conditioning variable is the second index).
inline JointDistribution joint_from_conditional_on_y(const Channel& x_given_y, const Distribution& weights) {
  if (weights.size() != x_given_y.input_size())
    throw dimension_error("weights size does not match conditional rows");
  std::vector<std::vector<double>> j(x_given_y.output_size(), std::vector<double>(weights.size(), 0.0));
  for (std::size_t y = 0; y < weights.size(); ++y)
    for (std::size_t x = 0; x < x_given_y.output_size(); ++x) j[x][y] = weights[y] * x_given_y(y, x);
  return JointDistribution(std::move(j));
}

}  // namespace softcover

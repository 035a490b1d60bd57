#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace softcover {

inline constexpr double kInf = std::numeric_limits<double>::infinity();
inline constexpr double kLn2 = 0.6931471805599453094172321214581766;

enum class LogBase { bits, nats };

inline double to_nats(double x, LogBase base) { return base == LogBase::bits ? x * kLn2 : x; }
inline double from_nats(double x, LogBase base) { return base == LogBase::bits ? x / kLn2 : x; }

inline const char* log_base_name(LogBase base) { return base == LogBase::bits ? "bits" : "nats"; }

inline LogBase parse_log_base(const std::string& s) {
  if (s == "bits") return LogBase::bits;
  if (s == "nats") return LogBase::nats;
  throw std::invalid_argument("unknown log base '" + s + "' (expected bits|nats)");
}

struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct degenerate_channel_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct size_guard_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Carries the last iterate so callers can inspect how far a fixed point got.
struct convergence_error : std::runtime_error {
  std::vector<double> last_iterate;
  double residual;
  int iterations;
  convergence_error(const std::string& what, std::vector<double> iterate, double res, int iters)
      : std::runtime_error(what), last_iterate(std::move(iterate)), residual(res), iterations(iters) {}
};

/// Codebook size M = ceil(exp(n R)) for a rate in nats; the long-double
/// round trip keeps rates specified in bits landing on the intended integer.
inline long long codebook_size_for_rate(int n, double rate_nats) {
  long double v = std::exp(static_cast<long double>(n) * static_cast<long double>(rate_nats));
  return static_cast<long long>(std::ceil(v - 1e-9L));
}

// x*log(x/y) with the 0*log0 = 0 convention; +inf when x>0, y=0.
inline double xlog_ratio(double x, double y) {
  if (x <= 0.0) return 0.0;
  if (y <= 0.0) return kInf;
  return x * std::log(x / y);
}

// x*log(x) with 0*log0 = 0.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

inline double logsumexp(const std::vector<double>& v) {
  double m = -kInf;
  for (double x : v)
    if (x > m) m = x;
  if (m == -kInf) return -kInf;
  double s = 0.0;
  for (double x : v)
    if (x > -kInf) s += std::exp(x - m);
  return m + std::log(s);
}

inline double positive_part(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace softcover

#pragma once

#include <vector>

#include "softcover/distribution.hpp"
#include "softcover/simulator.hpp"

// Shared fixtures: the BSC instance every regression value refers to, and
// seeded random channels for the property checks.

namespace testkit {

inline softcover::Distribution bsc_input() { return softcover::Distribution({0.4, 0.6}); }
inline softcover::Channel bsc_channel() { return softcover::Channel::bsc(0.05); }
inline double bsc_rate_nats() { return 0.85 * softcover::kLn2; }

inline softcover::Distribution random_distribution(softcover::SplitMix64& rng, int k, double floor = 0.05) {
  std::vector<double> v(static_cast<std::size_t>(k));
  double s = 0.0;
  for (auto& x : v) {
    x = floor + rng.next_unit();
    s += x;
  }
  for (auto& x : v) x /= s;
  return softcover::Distribution(v);
}

inline softcover::Channel random_channel(softcover::SplitMix64& rng, int nx, int ny, double floor = 0.02) {
  for (;;) {
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(nx));
    for (auto& r : rows) {
      r.resize(static_cast<std::size_t>(ny));
      double s = 0.0;
      for (auto& x : r) {
        x = floor + rng.next_unit();
        s += x;
      }
      for (auto& x : r) x /= s;
    }
    softcover::Channel w(rows);
    if (!softcover::is_degenerate(w)) return w;
  }
}

}  // namespace testkit

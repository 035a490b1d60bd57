#pragma once

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "softcover/common.hpp"
#include "softcover/exponents.hpp"
#include "softcover/simulator.hpp"

namespace softcover {

// Canonical column order of the sweep CSV; absent columns are omitted.
inline const std::vector<std::string>& sweep_column_order() {
  static const std::vector<std::string> cols = {"alpha",     "beta",       "gamma",      "half_zeta",
                                                "aleph",     "half_beth",  "half_gimel", "half_daleth"};
  return cols;
}

struct SweepTable {
  std::vector<std::string> columns;          // selected, in canonical order
  std::vector<double> rates;                 // nats
  std::vector<std::vector<double>> values;   // values[row][col], nats; NaN on solver error
  std::vector<std::string> cell_errors;      // diagnostics sidecar, one line per failed cell
};

/// Evaluates the selected exponents at every rate. Rows run in parallel and
/// are pure functions of the row inputs. Chain-consistent seeding: the
/// constant-composition minimizations start from the exact-exponent
/// optimizer so the proven orderings survive numerically.
inline SweepTable rate_sweep(const Distribution& p, const Channel& w, const std::vector<double>& rates_nats,
                             const std::set<std::string>& which) {
  for (const auto& name : which) {
    bool known = false;
    for (const auto& c : sweep_column_order()) known = known || c == name;
    if (!known) throw std::invalid_argument("rate_sweep: unknown exponent name '" + name + "'");
  }
  for (std::size_t i = 1; i < rates_nats.size(); ++i)
    if (rates_nats[i] <= rates_nats[i - 1])
      throw std::invalid_argument("rate_sweep: rates must be strictly increasing");

  SweepTable t;
  for (const auto& c : sweep_column_order())
    if (which.count(c)) t.columns.push_back(c);
  t.rates = rates_nats;
  t.values.assign(rates_nats.size(), std::vector<double>(t.columns.size(), std::nan("")));
  std::vector<std::vector<std::string>> errs(rates_nats.size());

  auto col_index = [&](const std::string& name) {
    for (std::size_t i = 0; i < t.columns.size(); ++i)
      if (t.columns[i] == name) return static_cast<int>(i);
    return -1;
  };

  parallel_for(static_cast<int>(rates_nats.size()), [&](int row) {
    double rate = rates_nats[static_cast<std::size_t>(row)];
    auto put = [&](const std::string& name, double v) {
      int c = col_index(name);
      if (c >= 0) t.values[static_cast<std::size_t>(row)][static_cast<std::size_t>(c)] = v;
    };
    auto guard = [&](const std::string& name, auto&& fn) {
      if (col_index(name) < 0) return;
      try {
        fn();
      } catch (const std::exception& e) {
        errs[static_cast<std::size_t>(row)].push_back("rate=" + std::to_string(rate) + " " + name + ": " +
                                                      e.what());
      }
    };

    guard("alpha", [&] { put("alpha", alpha_dual(p, w, rate).value); });
    guard("gamma", [&] { put("gamma", gamma_exponent(p, w, rate).value); });
    guard("half_zeta", [&] { put("half_zeta", 0.5 * zeta_exponent(p, w, rate).value); });
    guard("beta", [&] { put("beta", beta_exponent(p, w, rate).value); });

    std::vector<Channel> cc_seeds;
    guard("aleph", [&] {
      auto a = aleph_dual(p, w, rate);
      put("aleph", a.value);
      if (a.optimizer_channel) cc_seeds.push_back(*a.optimizer_channel);
    });
    guard("half_beth", [&] {
      auto b = beth_exponent(p, w, rate, cc_seeds);
      put("half_beth", 0.5 * b.value);
      if (b.optimizer_channel) cc_seeds.push_back(*b.optimizer_channel);
    });
    guard("half_gimel", [&] { put("half_gimel", 0.5 * gimel_exponent(p, w, rate, cc_seeds).value); });
    guard("half_daleth", [&] { put("half_daleth", 0.5 * daleth_exponent(p, w, rate).value); });
  });

  for (auto& e : errs) t.cell_errors.insert(t.cell_errors.end(), e.begin(), e.end());
  return t;
}

}  // namespace softcover

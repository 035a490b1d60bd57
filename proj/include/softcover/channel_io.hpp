#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "softcover/common.hpp"
#include "softcover/distribution.hpp"
#include "softcover/exponents.hpp"
#include "softcover/sweep.hpp"

namespace softcover {

struct ChannelSpec {
  Distribution input;
  Channel channel;
  LogBase base = LogBase::bits;
};

struct parse_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Parses the channel specification document:
/// { "input_dist": [...], "channel": [[...], ...], "base": "bits"|"nats" }.
/// Rows more than 1e-9 away from summing to one are rejected; the rest are
/// renormalized.
inline ChannelSpec parse_channel_spec(const std::string& text, const std::string& origin = "<input>") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw parse_error(origin + ": " + e.what());
  }
  auto fail = [&](const std::string& field, const std::string& why) {
    throw parse_error(origin + ": field '" + field + "': " + why);
  };
  if (!doc.contains("input_dist") || !doc["input_dist"].is_array())
    fail("input_dist", "missing or not an array");
  if (!doc.contains("channel") || !doc["channel"].is_array()) fail("channel", "missing or not an array");

  std::vector<double> input;
  double s = 0.0;
  for (const auto& v : doc["input_dist"]) {
    if (!v.is_number()) fail("input_dist", "non-numeric entry");
    input.push_back(v.get<double>());
    s += input.back();
  }
  if (input.empty()) fail("input_dist", "empty");
  if (std::abs(s - 1.0) > 1e-9) fail("input_dist", "sums to " + std::to_string(s));

  std::vector<std::vector<double>> rows;
  std::size_t row_idx = 0;
  for (const auto& jrow : doc["channel"]) {
    ++row_idx;
    if (!jrow.is_array()) fail("channel", "row " + std::to_string(row_idx) + " is not an array");
    std::vector<double> row;
    double rs = 0.0;
    for (const auto& v : jrow) {
      if (!v.is_number()) fail("channel", "row " + std::to_string(row_idx) + " has a non-numeric entry");
      row.push_back(v.get<double>());
      rs += row.back();
    }
    if (std::abs(rs - 1.0) > 1e-9)
      fail("channel", "row " + std::to_string(row_idx) + " sums to " + std::to_string(rs));
    rows.push_back(std::move(row));
  }
  if (rows.size() != input.size()) fail("channel", "row count does not match input_dist length");

  LogBase base = LogBase::bits;
  if (doc.contains("base")) {
    if (!doc["base"].is_string()) fail("base", "not a string");
    base = parse_log_base(doc["base"].get<std::string>());
  }
  return ChannelSpec{Distribution(std::move(input)), Channel(std::move(rows)), base};
}

inline ChannelSpec load_channel_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open channel file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_channel_spec(ss.str(), path);
}

/// Rate grammar: a single value or `start:stop:step` with both endpoints
/// inclusive within 1e-12 (so figure abscissae like 0.8:0.805:1e-4 land
/// exactly on the last point).
inline std::vector<double> parse_rate_range(const std::string& text) {
  std::vector<double> out;
  auto c1 = text.find(':');
  if (c1 == std::string::npos) {
    out.push_back(std::stod(text));
    return out;
  }
  auto c2 = text.find(':', c1 + 1);
  if (c2 == std::string::npos) throw std::invalid_argument("rate range must be start:stop:step");
  double start = std::stod(text.substr(0, c1));
  double stop = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
  double step = std::stod(text.substr(c2 + 1));
  if (step <= 0 || stop < start) throw std::invalid_argument("rate range must be increasing with step > 0");
  for (int i = 0;; ++i) {
    double v = start + i * step;
    if (v > stop + 1e-12) break;
    out.push_back(std::min(v, stop));
  }
  return out;
}

/// Fixed-format numeric printing: 12 significant digits, '.' decimal point,
/// never locale-dependent.
inline std::string format_number(double v) {
  if (std::isnan(v)) return "";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

inline nlohmann::json exponent_result_json(const std::string& name, double rate_nats,
                                           const ExponentResult& r, LogBase base) {
  nlohmann::json j;
  j["exponent"] = name;
  j["rate"] = from_nats(rate_nats, base);
  j["base"] = log_base_name(base);
  j["value"] = from_nats(r.value, base);
  j["lambda_star"] = r.optimizer_param;
  j["diagnostics"] = {{"iterations", r.diagnostics.iterations},
                      {"residual", r.diagnostics.residual},
                      {"method", r.diagnostics.method},
                      {"warnings", r.diagnostics.warnings}};
  return j;
}

/// CSV with header `rate,<selected columns>`, values converted to the
/// requested base with 12 significant digits.
inline std::string sweep_to_csv(const SweepTable& t, LogBase base) {
  std::string out = "rate";
  for (const auto& c : t.columns) out += "," + c;
  out += "\n";
  for (std::size_t row = 0; row < t.rates.size(); ++row) {
    out += format_number(from_nats(t.rates[row], base));
    for (std::size_t c = 0; c < t.columns.size(); ++c)
      out += "," + format_number(from_nats(t.values[row][c], base));
    out += "\n";
  }
  return out;
}

}  // namespace softcover

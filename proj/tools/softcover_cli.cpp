// Command-line front end: exponents, rate sweeps, scalar measures, finite-n
// enumeration, Monte Carlo simulation, and the probability-bounds suite.
//
// Exit codes: 0 success, 2 validation error, 3 solver convergence failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "softcover/bounds.hpp"
#include "softcover/channel_io.hpp"
#include "softcover/exponents.hpp"
#include "softcover/measures.hpp"
#include "softcover/simulator.hpp"
#include "softcover/sweep.hpp"
#include "softcover/typespace.hpp"

using nlohmann::json;
using namespace softcover;

namespace {

struct RunConfig {
  std::string command;
  std::string channel_path;
  std::string base_name = "bits";
  std::string which;
  std::string rates;
  std::string direction = "forward";
  std::string kind = "iid";
  std::string out = "-";
  std::string format = "json";
  double rate = 0.0;
  double order = 0.0;
  double delta = 0.5;
  double r_param = 0.0;
  int n = 0;
  int replicas = 0;
  long long seed = 1;
  bool poisson = false;
  bool integer_m = false;

  json echo() const {
    json j;
    j["command"] = command;
    j["channel"] = channel_path;
    j["base"] = base_name;
    if (!which.empty()) j["which"] = which;
    if (!rates.empty()) j["rates"] = rates;
    if (rate > 0) j["rate"] = rate;
    if (order > 0) j["order"] = order;
    if (n > 0) j["n"] = n;
    if (replicas > 0) j["replicas"] = replicas;
    j["seed"] = seed;
    j["kind"] = kind;
    j["direction"] = direction;
    if (command == "finite-n") {
      j["delta"] = delta;
      j["r"] = r_param;
      j["integer_m"] = integer_m;
    }
    if (command == "simulate") j["poisson"] = poisson;
    j["out"] = out;
    j["format"] = format;
    return j;
  }
};

void write_output(const RunConfig& cfg, const std::string& payload) {
  if (cfg.out == "-") {
    std::cout << payload;
    return;
  }
  std::ofstream f(cfg.out);
  if (!f) throw std::runtime_error("cannot open output file '" + cfg.out + "'");
  f << payload;
}

std::set<std::string> parse_which(const std::string& text) {
  std::set<std::string> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    auto comma = text.find(',', pos);
    std::string tok = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!tok.empty()) out.insert(tok);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return out;
}

int run_exponent(const RunConfig& cfg) {
  ChannelSpec spec = load_channel_spec(cfg.channel_path);
  LogBase base = parse_log_base(cfg.base_name);
  double rate = to_nats(cfg.rate, base);
  Distribution p = spec.input;
  Channel w = spec.channel;
  if (cfg.direction == "reverse") {
    auto rev = reverse_channel(spec.input, spec.channel);
    p = rev.first;
    w = rev.second;
  }

  json out;
  out["config"] = cfg.echo();
  auto emit = [&](const std::string& name, const ExponentResult& r) {
    out["results"].push_back(exponent_result_json(name, rate, r, base));
  };
  std::vector<Channel> cc_seeds;
  for (const auto& name : parse_which(cfg.which.empty() ? "alpha" : cfg.which)) {
    if (name == "alpha") emit(name, alpha_dual(p, w, rate));
    else if (name == "beta") emit(name, beta_exponent(p, w, rate));
    else if (name == "gamma") emit(name, gamma_exponent(p, w, rate));
    else if (name == "zeta") emit(name, zeta_exponent(p, w, rate));
    else if (name == "aleph") {
      auto a = aleph_dual(p, w, rate);
      if (a.optimizer_channel) cc_seeds.push_back(*a.optimizer_channel);
      emit(name, a);
    } else if (name == "beth") {
      auto b = beth_exponent(p, w, rate, cc_seeds);
      if (b.optimizer_channel) cc_seeds.push_back(*b.optimizer_channel);
      emit(name, b);
    } else if (name == "gimel") emit(name, gimel_exponent(p, w, rate, cc_seeds));
    else if (name == "daleth") emit(name, daleth_exponent(p, w, rate));
    else throw std::invalid_argument("--which: unknown exponent '" + name + "'");
  }
  write_output(cfg, out.dump(2) + "\n");
  return 0;
}

int run_sweep(const RunConfig& cfg) {
  ChannelSpec spec = load_channel_spec(cfg.channel_path);
  LogBase base = parse_log_base(cfg.base_name);
  std::vector<double> rates = parse_rate_range(cfg.rates);
  for (double& r : rates) r = to_nats(r, base);
  auto which = parse_which(cfg.which.empty() ? "alpha,beta,gamma,half_zeta" : cfg.which);
  SweepTable t = rate_sweep(spec.input, spec.channel, rates, which);
  for (const auto& e : t.cell_errors) std::cerr << "cell error: " << e << "\n";
  if (cfg.format == "csv") {
    write_output(cfg, sweep_to_csv(t, base));
  } else {
    json out;
    out["config"] = cfg.echo();
    out["columns"] = t.columns;
    for (std::size_t row = 0; row < t.rates.size(); ++row) {
      json jr;
      jr["rate"] = from_nats(t.rates[row], base);
      for (std::size_t c = 0; c < t.columns.size(); ++c)
        jr[t.columns[c]] = from_nats(t.values[row][c], base);
      out["rows"].push_back(jr);
    }
    out["cell_errors"] = t.cell_errors;
    write_output(cfg, out.dump(2) + "\n");
  }
  return 0;
}

int run_mi(const RunConfig& cfg) {
  ChannelSpec spec = load_channel_spec(cfg.channel_path);
  LogBase base = parse_log_base(cfg.base_name);
  json out;
  out["config"] = cfg.echo();
  out["base"] = log_base_name(base);
  out["mutual_information"] = from_nats(mutual_information(spec.input, spec.channel), base);
  out["mutual_varentropy"] =
      mutual_varentropy(spec.input, spec.channel) / (base == LogBase::bits ? kLn2 * kLn2 : 1.0);
  out["entropy_output"] = from_nats(entropy(output_distribution(spec.input, spec.channel)), base);
  if (cfg.order > 0.0) {
    out["order"] = cfg.order;
    out["sibson"] = from_nats(sibson_mi(spec.input, spec.channel, cfg.order), base);
    out["renyi_joint_vs_product"] =
        from_nats(renyi_divergence_joint(spec.input, spec.channel, cfg.order), base);
    if (cfg.order > 1.0) {
      auto c = csiszar_mi(spec.input, spec.channel, cfg.order);
      out["csiszar"] = from_nats(c.value, base);
      out["csiszar_minimizer"] = c.minimizer.probs();
    }
  }
  write_output(cfg, out.dump(2) + "\n");
  return 0;
}

int run_finite_n(const RunConfig& cfg) {
  ChannelSpec spec = load_channel_spec(cfg.channel_path);
  LogBase base = parse_log_base(cfg.base_name);
  if (cfg.n < 1) throw std::invalid_argument("--n must be at least 1");
  double rate = to_nats(cfg.rate, base);
  auto an = alpha_finite_n(spec.input, spec.channel, rate, cfg.n);
  double r_param = cfg.r_param > 0.0 ? to_nats(cfg.r_param, base) : (an.value + rate / 2.0) / 2.0;
  json out;
  out["config"] = cfg.echo();
  out["n"] = cfg.n;
  out["base"] = log_base_name(base);
  out["alpha_n"] = from_nats(an.value, base);
  try {
    auto c = finite_n_constants(cfg.n, static_cast<int>(spec.channel.input_size()),
                                static_cast<int>(spec.channel.output_size()), rate, an.value, cfg.delta,
                                r_param, cfg.integer_m);
    out["kappa_n"] = from_nats(c.kappa_n, base);
    out["upsilon_n"] = c.upsilon_vacuous ? json("inf") : json(from_nats(c.upsilon_n, base));
    out["upsilon_vacuous"] = c.upsilon_vacuous;
  } catch (const std::domain_error& e) {
    out["constants_error"] = e.what();
  }
  out["minimizing_type"] = an.minimizer.counts;
  write_output(cfg, out.dump(2) + "\n");
  return 0;
}

int run_simulate(const RunConfig& cfg) {
  ChannelSpec spec = load_channel_spec(cfg.channel_path);
  LogBase base = parse_log_base(cfg.base_name);
  if (cfg.n < 1) throw std::invalid_argument("--n must be at least 1");
  if (cfg.replicas < 2) throw std::invalid_argument("--replicas must be at least 2");
  double rate = to_nats(cfg.rate, base);

  // desk-scale envelope: refuse jobs that would thrash rather than run them
  if (cfg.n > 14) throw std::invalid_argument("--n above the desk-scale envelope (n <= 14)");
  if (cfg.replicas > 500)
    throw std::invalid_argument("--replicas above the desk-scale envelope (replicas <= 500)");
  if (std::pow(static_cast<double>(spec.channel.output_size()), cfg.n) > 16384.0)
    throw std::invalid_argument("|Y|^n above the desk-scale envelope (16384 output sequences)");
  if (codebook_size_for_rate(cfg.n, rate) > 20000)
    throw std::invalid_argument("codebook size above the desk-scale envelope (M <= 20000)");

  CodebookKind kind = CodebookKind::iid;
  std::vector<int> composition;
  if (cfg.kind == "cc") {
    kind = CodebookKind::constant_composition;
    // smallest integer composition matching the input distribution
    for (int denom = 1; denom <= cfg.n; ++denom) {
      bool ok = cfg.n % denom == 0;
      std::vector<int> c(spec.input.size());
      int sum = 0;
      for (std::size_t i = 0; ok && i < spec.input.size(); ++i) {
        double v = spec.input[i] * denom;
        c[i] = static_cast<int>(std::llround(v));
        ok = std::abs(v - c[i]) < 1e-9;
        sum += c[i];
      }
      if (ok && sum == denom) {
        composition = c;
        break;
      }
    }
    if (composition.empty())
      throw std::invalid_argument("input_dist is not an m-type with m dividing n; cannot build a "
                                  "constant-composition codebook");
  } else if (cfg.kind != "iid") {
    throw std::invalid_argument("--kind must be iid or cc");
  }

  ExponentEstimate est =
      cfg.poisson
          ? poissonized_estimate(spec.input, composition, spec.channel, cfg.n, rate, cfg.replicas,
                                 static_cast<std::uint64_t>(cfg.seed), kind)
          : estimate_exponent(spec.input, composition, spec.channel, cfg.n, rate, cfg.replicas,
                              static_cast<std::uint64_t>(cfg.seed), kind);
  json out;
  out["config"] = cfg.echo();
  out["n"] = est.n;
  out["m"] = est.m;
  out["replicas"] = est.replicas;
  out["mean_tv"] = est.mean_tv;
  out["std_tv"] = est.std_tv;
  out["base"] = log_base_name(base);
  out["empirical_exponent"] = est.exponent_infinite ? json("inf") : json(from_nats(est.empirical_exponent, base));
  out["exponent_infinite"] = est.exponent_infinite;
  out["ci95_low"] = est.exponent_infinite ? json("inf") : json(from_nats(est.ci95_low, base));
  out["ci95_high"] = est.exponent_infinite ? json("inf") : json(from_nats(est.ci95_high, base));
  out["tvs"] = est.tvs;
  out["seeds"] = est.seeds;
  if (cfg.poisson) out["ms"] = est.ms;
  write_output(cfg, out.dump(2) + "\n");
  return 0;
}

int run_check_bounds(const RunConfig& cfg) {
  auto s = softcover::bounds::run_bounds_suite();
  json out;
  out["config"] = cfg.echo();
  out["checked"] = s.checked;
  out["failed"] = s.failed;
  out["pass"] = s.failed == 0;
  out["failures"] = s.failures;
  write_output(cfg, out.dump(2) + "\n");
  return s.failed == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"soft-covering exponent calculator and Monte Carlo verifier"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto add_common = [&](CLI::App* sub, bool needs_channel) {
    if (needs_channel) sub->add_option("--channel", cfg.channel_path, "channel spec JSON file")->required();
    sub->add_option("--base", cfg.base_name, "log base for rates and outputs (bits|nats)");
    sub->add_option("--out", cfg.out, "output path, or - for stdout");
  };

  auto* exponent = app.add_subcommand("exponent", "compute exponents at one rate");
  add_common(exponent, true);
  exponent->add_option("--which", cfg.which, "comma list: alpha,beta,gamma,zeta,aleph,beth,gimel,daleth");
  exponent->add_option("--rate", cfg.rate, "codebook rate")->required();
  exponent->add_option("--direction", cfg.direction, "forward|reverse (reverse runs P_Y -> P_{X|Y})");

  auto* sweep = app.add_subcommand("sweep", "tabulate exponents over a rate range");
  add_common(sweep, true);
  sweep->add_option("--which", cfg.which, "comma list of CSV columns");
  sweep->add_option("--rates", cfg.rates, "start:stop:step (inclusive) or a single rate")->required();
  sweep->add_option("--format", cfg.format, "csv|json");

  auto* mi = app.add_subcommand("mi", "scalar information measures of the channel");
  add_common(mi, true);
  mi->add_option("--order", cfg.order, "also evaluate the order-lambda measures");

  auto* finite = app.add_subcommand("finite-n", "exact finite-blocklength exponent by type enumeration");
  add_common(finite, true);
  finite->add_option("--rate", cfg.rate, "codebook rate")->required();
  finite->add_option("--n", cfg.n, "block length")->required();
  finite->add_option("--delta", cfg.delta, "delta in (exp(-nR), 1) for the upper-bound constants");
  finite->add_option("--r", cfg.r_param, "r in (alpha_n, R/2); default midpoint");
  finite->add_flag("--integer-m", cfg.integer_m, "use the ceil(exp(nR))-aware constants");

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimate of the TV decay");
  add_common(simulate, true);
  simulate->add_option("--rate", cfg.rate, "codebook rate")->required();
  simulate->add_option("--n", cfg.n, "block length")->required();
  simulate->add_option("--replicas", cfg.replicas, "independent codebooks")->required();
  simulate->add_option("--seed", cfg.seed, "master seed");
  simulate->add_option("--kind", cfg.kind, "iid|cc");
  simulate->add_flag("--poisson", cfg.poisson, "Poissonize the codebook size");

  auto* check = app.add_subcommand("check-bounds", "run the probability-bounds grid suite");
  add_common(check, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (exponent->parsed()) { cfg.command = "exponent"; return run_exponent(cfg); }
    if (sweep->parsed()) { cfg.command = "sweep"; return run_sweep(cfg); }
    if (mi->parsed()) { cfg.command = "mi"; return run_mi(cfg); }
    if (finite->parsed()) { cfg.command = "finite-n"; return run_finite_n(cfg); }
    if (simulate->parsed()) { cfg.command = "simulate"; return run_simulate(cfg); }
    if (check->parsed()) { cfg.command = "check-bounds"; return run_check_bounds(cfg); }
  } catch (const convergence_error& e) {
    std::cerr << "solver did not converge: " << e.what() << " (residual " << e.residual << " after "
              << e.iterations << " iterations)\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

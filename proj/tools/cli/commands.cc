// Copyright 2026 The ehcap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "commands.h"

#include <fmt/format.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <iostream>

#include "ehcap/aloha.h"
#include "ehcap/csma.h"
#include "ehcap/energy_queue.h"
#include "ehcap/game.h"
#include "ehcap/model.h"
#include "ehcap/montecarlo.h"
#include "ehcap/version.h"
#include "verify/acceptance.h"

namespace ehcap::cli {

namespace {

std::string num(double x) { return fmt::format("{:.10g}", x); }

double parse_double(std::string_view text, const char* flag) {
  while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
  while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
  double value = 0.0;
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size() ||
      !std::isfinite(value)) {
    throw UsageError(fmt::format("--{}: '{}' is not a number", flag, text));
  }
  return value;
}

double single(const std::string& text, const char* flag) {
  const std::vector<double> values = parse_list(text, flag);
  if (values.size() != 1) {
    throw UsageError(fmt::format("--{}: expects a single value", flag));
  }
  return values.front();
}

ChannelParams channel_of(const Flags& f) {
  return ChannelParams(f.alpha, f.theta, f.d);
}

// Rounded critical densities often quoted for these channels.
std::optional<double> printed_lambda_max(const ChannelParams& ch) {
  if (ch == ChannelParams(3.0, 2.0, 2.0)) return 0.023;
  if (ch == ChannelParams(3.0, 1.0, 1.0)) return 0.2632;
  return std::nullopt;
}

void write_header(std::ostream& out, const char* command, const Flags& f,
                  const ChannelParams& ch,
                  std::initializer_list<std::pair<const char*, std::string>>
                      extra) {
  const DerivedChannel derived = derive_channel(ch);
  out << fmt::format("# ehcap {} version={}\n", command, kVersion);
  out << fmt::format("# alpha={} theta={} d={}\n", num(ch.alpha()),
                     num(ch.theta()), num(ch.d()));
  out << fmt::format("# lambda_max={} kappa={} rate={}\n",
                     num(derived.lambda_max), num(derived.kappa),
                     num(derived.rate));
  if (const auto printed = printed_lambda_max(ch)) {
    out << fmt::format(
        "# lambda_max_published={} (rounded; not used)\n",
        num(*printed));
  }
  out << fmt::format("# lambda={} p={} B={}\n", f.lambda, f.p, f.battery);
  for (const auto& [key, value] : extra) {
    out << fmt::format("# {}={}\n", key, value);
  }
}

SimConfig sim_config(const Flags& f, const ChannelParams& ch,
                     std::int64_t default_trials) {
  SimConfig config = SimConfig::for_channel(ch);
  if (f.window_radius) config.window_radius = *f.window_radius;
  config.trials = f.trials.value_or(default_trials);
  if (f.slots) config.slots = *f.slots;
  config.seed = f.seed;
  config.threads = f.threads;
  config.validate(ch);
  return config;
}

}  // namespace

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> values;
  std::string_view rest = text;
  while (true) {
    const std::size_t comma = rest.find(',');
    const std::string_view item = rest.substr(0, comma);
    if (item.find_first_not_of(' ') == std::string_view::npos) {
      if (comma == std::string_view::npos && values.empty() && rest.empty()) {
        break;
      }
      throw UsageError(fmt::format("--{}: empty list entry", flag));
    }
    values.push_back(parse_double(item, flag));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  if (values.empty()) throw UsageError(fmt::format("--{}: empty list", flag));
  return values;
}

std::optional<int> parse_battery(const std::string& text) {
  if (text == "inf" || text == "Inf" || text == "INF") return std::nullopt;
  int value = 0;
  const auto [end, ec] =
      std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || end != text.data() + text.size() ||
      value < 1) {
    throw UsageError("--B: expects 'inf' or a positive integer, got '" + text +
                     "'");
  }
  return value;
}

int run_aloha(const Flags& f, std::ostream& out) {
  if (f.points < 2) throw UsageError("--points: must be at least 2");
  const ChannelParams ch = channel_of(f);
  const EnergyModel energy(single(f.p, "p"), parse_battery(f.battery));
  const NetworkParams params(single(f.lambda, "lambda"), ch, energy);
  const Load load = Load::of(params);
  const OptimalAccess opt = optimal_q(load);

  write_header(out, "aloha", f, ch,
               {{"points", std::to_string(f.points)},
                {"optimum", opt.access.to_string()},
                {"optimal_capacity", num(opt.capacity)}});
  out << "q,r,f,lambda_a,p_suc,capacity\n";
  for (int i = 0; i < f.points; ++i) {
    const double q = i == f.points - 1 ? 1.0 : static_cast<double>(i) / (f.points - 1);
    const AlohaResult res = evaluate_aloha(load, q);
    out << fmt::format("{},{},{},{},{},{}\n", num(q), num(res.r),
                       num(res.q * res.r), num(res.active_density),
                       num(res.p_suc), num(res.capacity));
  }
  return 0;
}

int run_csma(const Flags& f, std::ostream& out) {
  const ChannelParams ch = channel_of(f);
  const std::vector<double> lambdas = parse_list(f.lambda, "lambda");
  const EnergyModel energy(single(f.p, "p"), parse_battery(f.battery));
  if (!energy.is_unbounded()) {
    throw ValidationError("B", "the CSMA model needs an unbounded battery");
  }
  write_header(out, "csma", f, ch, {{"L", std::to_string(f.packet_slots)}});
  out << "lambda,branch,p_b,p_fail,p_out,fkg_bound,capacity,"
         "p_fail_general_sum,p_out_general_sum\n";
  for (double lambda : lambdas) {
    const CsmaParams params(NetworkParams(lambda, ch, energy), f.packet_slots);
    const CsmaResult res = evaluate_csma(params);
    out << fmt::format("{},{},{},{},{},{},{},{},{}\n", num(lambda),
                       to_string(res.branch), num(res.p_b),
                       num(res.p_fail_given_no_backoff), num(res.p_out),
                       num(res.fkg_bound), num(res.capacity),
                       num(res.p_fail_inclusion_exclusion),
                       num(res.p_out_inclusion_exclusion));
  }
  return 0;
}

int run_game(const Flags& f, std::ostream& out) {
  const ChannelParams ch = channel_of(f);
  const std::vector<double> lambdas = parse_list(f.lambda, "lambda");
  const std::vector<double> ps = parse_list(f.p, "p");
  const std::optional<int> battery = parse_battery(f.battery);
  // Validate the whole grid before writing anything.
  std::vector<Load> loads;
  for (double lambda : lambdas) {
    for (double p : ps) {
      loads.push_back(Load::of(NetworkParams(lambda, ch, EnergyModel(p, battery))));
    }
  }
  write_header(out, "game", f, ch, {});
  out << "lambda,p,B,equilibrium,per_node_throughput,sne_capacity,"
         "optimal_capacity,poa\n";
  for (const Load& load : loads) {
    const SneResult eq = sne(load);
    out << fmt::format("{},{},{},{},{},{},{},{}\n", num(load.lambda),
                       num(load.energy.p()), load.energy.capacity_string(),
                       eq.equilibrium.to_string(), num(eq.per_node_throughput),
                       num(eq.capacity_at_sne), num(optimal_q(load).capacity),
                       num(eq.poa));
  }
  return 0;
}

int run_optimal_q(const Flags& f, std::ostream& out) {
  const ChannelParams ch = channel_of(f);
  const std::vector<double> lambdas = parse_list(f.lambda, "lambda");
  const EnergyModel energy(single(f.p, "p"), parse_battery(f.battery));
  std::vector<Load> loads;
  for (double lambda : lambdas) {
    loads.push_back(Load::of(NetworkParams(lambda, ch, energy)));
  }
  write_header(out, "optimal-q", f, ch, {});
  out << "lambda,optimum,q_star,capacity\n";
  for (const Load& load : loads) {
    const OptimalAccess opt = optimal_q(load);
    out << fmt::format("{},{},{},{}\n", num(load.lambda),
                       opt.access.to_string(), num(opt.access.lo),
                       num(opt.capacity));
  }
  return 0;
}

int run_simulate(const Flags& f, std::ostream& out) {
  const ChannelParams ch = channel_of(f);
  const EnergyModel energy(single(f.p, "p"), parse_battery(f.battery));
  const auto row = [&](const char* quantity, double analytic,
                       const SimEstimate& est) {
    out << fmt::format("{},{},{},{},{},{:.3f}\n", quantity, num(analytic),
                       num(est.mean), num(est.std_error), est.trials,
                       est.z_score(analytic));
  };
  const char* columns = "quantity,analytic,simulated,std_error,samples,z\n";

  if (f.target == "queue") {
    if (!f.q) throw UsageError("--q: required for --target queue");
    require_probability(*f.q, "q");
    const std::int64_t slots = f.slots.value_or(10'000'000);
    if (slots < 100) throw ValidationError("slots", "must be at least 100");
    write_header(out, "simulate", f, ch,
                 {{"target", "queue"}, {"q", num(*f.q)},
                  {"slots", std::to_string(slots)},
                  {"seed", std::to_string(f.seed)}});
    out << columns;
    row("r", occupancy(energy, *f.q).r,
        simulate_energy_queue(energy, *f.q, slots, f.seed));
    return 0;
  }
  const double lambda = single(f.lambda, "lambda");
  if (f.target == "aloha") {
    if (!f.q) throw UsageError("--q: required for --target aloha");
    require_probability(*f.q, "q");
    const NetworkParams params(lambda, ch, energy);
    const SimConfig config = sim_config(f, ch, 100'000);
    write_header(out, "simulate", f, ch,
                 {{"target", "aloha"}, {"q", num(*f.q)},
                  {"trials", std::to_string(config.trials)},
                  {"window_radius", num(config.window_radius)},
                  {"seed", std::to_string(f.seed)}});
    out << columns;
    row("p_suc", evaluate_aloha(params, *f.q).p_suc,
        estimate_aloha_psuc(params, *f.q, config));
    return 0;
  }
  if (f.target == "csma") {
    const CsmaParams params(NetworkParams(lambda, ch, energy), f.packet_slots);
    const SimConfig config = sim_config(f, ch, 100'000);
    const CsmaResult res = evaluate_csma(params);
    const CsmaEstimate est = estimate_csma(params, config);
    write_header(out, "simulate", f, ch,
                 {{"target", "csma"}, {"L", std::to_string(f.packet_slots)},
                  {"trials", std::to_string(config.trials)},
                  {"window_radius", num(config.window_radius)},
                  {"seed", std::to_string(f.seed)},
                  {"branch", to_string(res.branch)},
                  {"simulated_branch", to_string(est.branch)}});
    out << columns;
    row("p_b", res.p_b, est.p_b);
    row("p_fail", res.p_fail_given_no_backoff, est.p_fail);
    row("p_out", res.p_out, est.p_out);
    return 0;
  }
  throw UsageError("--target: expects queue, aloha or csma, got '" + f.target +
                   "'");
}

int run_verify(const Flags& f, std::ostream& out) {
  verify::Options options;
  options.trials = f.trials;
  options.slots = f.slots;
  options.seed = f.seed;
  options.threads = f.threads;
  if (f.trials && *f.trials < 1) throw ValidationError("trials", "must be positive");
  if (f.slots && *f.slots < 100) throw ValidationError("slots", "must be at least 100");

  std::vector<std::string_view> names;
  if (f.criterion.empty()) {
    names = verify::criterion_names();
  } else {
    const auto& all = verify::criterion_names();
    const auto it = std::find(all.begin(), all.end(), f.criterion);
    if (it == all.end()) {
      throw UsageError("--criterion: unknown criterion '" + f.criterion + "'");
    }
    names.push_back(*it);
  }

  std::vector<verify::CriterionReport> reports;
  bool all_pass = true;
  for (std::string_view name : names) {
    const auto start = std::chrono::steady_clock::now();
    reports.push_back(verify::run_criterion(name, options));
    const std::chrono::duration<double> took =
        std::chrono::steady_clock::now() - start;
    all_pass = all_pass && reports.back().pass;
    std::cerr << fmt::format("{} {} in {:.2f} s\n", name,
                             reports.back().pass ? "PASS" : "FAIL",
                             took.count());
  }
  out << verify::format_report(reports, options);
  return all_pass ? 0 : 1;
}

}  // namespace ehcap::cli

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

#include "ehcap/montecarlo.h"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <thread>

#include "ehcap/energy_queue.h"

namespace ehcap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::int64_t kChunk = 2048;

enum StreamFamily : std::uint64_t {
  kAlohaStream = 1,
  kCsmaSenseStream = 2,
  kCsmaPacketStream = 3,
};

// |x|^-alpha from |x|^2, with the common exponents special-cased.
class PathGain {
 public:
  explicit PathGain(double alpha) : alpha_(alpha), half_(-0.5 * alpha) {}

  double operator()(double r2) const {
    if (alpha_ == 3.0) return 1.0 / (r2 * std::sqrt(r2));
    if (alpha_ == 4.0) return 1.0 / (r2 * r2);
    return std::pow(r2, half_);
  }

 private:
  double alpha_;
  double half_;
};

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(trial, counters) for every trial. Counters are per chunk and
// summed in chunk order; chunk boundaries do not depend on the thread count,
// so totals are identical for any number of threads.
template <std::size_t K, typename Fn>
std::array<std::int64_t, K> run_trials(std::int64_t trials, int threads,
                                       const Fn& fn) {
  using Counters = std::array<std::int64_t, K>;
  const std::int64_t chunks = (trials + kChunk - 1) / kChunk;
  std::vector<Counters> partial(static_cast<std::size_t>(chunks), Counters{});
  std::atomic<std::int64_t> next{0};

  auto worker = [&] {
    for (std::int64_t c = next++; c < chunks; c = next++) {
      Counters& acc = partial[static_cast<std::size_t>(c)];
      const std::int64_t end = std::min(trials, (c + 1) * kChunk);
      for (std::int64_t t = c * kChunk; t < end; ++t) fn(t, acc);
    }
  };

  const int n = std::min<std::int64_t>(resolve_threads(threads), chunks);
  if (n <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pool.emplace_back(worker);
  }

  Counters total{};
  for (const Counters& c : partial) {
    for (std::size_t k = 0; k < K; ++k) total[k] += c[k];
  }
  return total;
}

SimEstimate binomial_estimate(std::int64_t successes, std::int64_t trials,
                              std::uint64_t seed) {
  const double n = static_cast<double>(trials);
  const double mean = trials > 0 ? successes / n : 0.0;
  const double se = trials > 0 ? std::sqrt(mean * (1.0 - mean) / n) : 0.0;
  return {mean, se, trials, seed};
}

// Probability that the PPP of the given density outside `radius` does not
// push a unit-mean exponential signal below threshold on its own:
// exp(-density * int_{|x| > radius} 1 / (1 + |x|^alpha / s^alpha) dx).
double outer_void_probability(double density, const ChannelParams& channel,
                              double radius, const QuadratureSpec& spec) {
  if (density == 0.0) return 1.0;
  return std::exp(-density * csma_spatial_integral_beyond(
                                 1, 1.0, channel, radius, spec));
}

}  // namespace

SimConfig SimConfig::for_channel(const ChannelParams& channel) {
  SimConfig config;
  config.window_radius = 20.0 * std::max(channel.d(), channel.length_scale());
  return config;
}

void SimConfig::validate(const ChannelParams& channel) const {
  const double min_radius = 20.0 * std::max(channel.d(), channel.length_scale());
  // Accept the boundary value despite rounding in length_scale().
  if (!(window_radius >= min_radius * (1.0 - 1e-12))) {
    throw ValidationError("window-radius",
                          "must be at least 20 max(d, d theta^(1/alpha)) = " +
                              std::to_string(min_radius));
  }
  if (trials < 1) throw ValidationError("trials", "must be positive");
  if (slots < 1) throw ValidationError("slots", "must be positive");
  if (!(confidence > 0.0)) {
    throw ValidationError("confidence", "must be positive");
  }
  quadrature.validate();
}

double SimEstimate::z_score(double value) const {
  const double diff = mean - value;
  if (diff == 0.0) return 0.0;
  if (std_error == 0.0) return std::copysign(std::numeric_limits<double>::infinity(), diff);
  return diff / std_error;
}

bool SimEstimate::agrees_with(double value, double k_sigma) const {
  return std::abs(z_score(value)) <= k_sigma;
}

std::vector<Point> sample_ppp(double density, double window_radius, Rng& rng) {
  if (!(density >= 0.0)) throw ValidationError("density", "must be >= 0");
  if (!(window_radius > 0.0)) {
    throw ValidationError("window-radius", "must be positive");
  }
  std::vector<Point> points;
  if (density == 0.0) return points;
  const double mean = density * kPi * window_radius * window_radius;
  std::poisson_distribution<std::int64_t> count(mean);
  const std::int64_t n = count(rng);
  points.reserve(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) {
    const double radius = window_radius * std::sqrt(rng.uniform());
    const double angle = 2.0 * kPi * rng.uniform();
    points.push_back({radius * std::cos(angle), radius * std::sin(angle)});
  }
  return points;
}

double typical_sir(std::span<const Point> interferers,
                   std::span<const std::uint8_t> active_marks,
                   const ChannelParams& channel, Rng& rng) {
  if (interferers.size() != active_marks.size()) {
    throw ValidationError("active_marks", "must match the interferer count");
  }
  const PathGain gain(channel.alpha());
  const double signal = rng.exponential() * gain(channel.d() * channel.d());
  double interference = 0.0;
  for (std::size_t i = 0; i < interferers.size(); ++i) {
    if (!active_marks[i]) continue;
    const Point& x = interferers[i];
    interference += rng.exponential() * gain(x.x * x.x + x.y * x.y);
  }
  if (interference == 0.0) return std::numeric_limits<double>::infinity();
  return signal / interference;
}

SimEstimate simulate_energy_queue(double p, double q,
                                  std::optional<int> capacity,
                                  std::int64_t slots, Rng& rng) {
  require_probability(p, "p");
  require_probability(q, "q");
  if (capacity && *capacity < 1) {
    throw ValidationError("B", "battery capacity must be at least 1");
  }
  constexpr std::int64_t kBatches = 100;
  if (slots < kBatches) {
    throw ValidationError("slots", "need at least 100 slots for batch means");
  }
  const std::int64_t burn_in = std::min<std::int64_t>(slots / 100, 100'000);
  const std::int64_t cap =
      capacity ? *capacity : std::numeric_limits<std::int64_t>::max();

  std::int64_t energy = 0;
  auto step = [&] {
    const bool charged = energy >= 1;
    const bool arrival = rng.bernoulli(p);
    const bool sent = charged && rng.bernoulli(q);
    energy = std::min(energy + (arrival ? 1 : 0) - (sent ? 1 : 0), cap);
    return charged;
  };
  for (std::int64_t t = 0; t < burn_in; ++t) step();

  const std::int64_t per_batch = slots / kBatches;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::int64_t b = 0; b < kBatches; ++b) {
    std::int64_t charged = 0;
    for (std::int64_t t = 0; t < per_batch; ++t) charged += step() ? 1 : 0;
    const double mean = static_cast<double>(charged) / per_batch;
    sum += mean;
    sum_sq += mean * mean;
  }
  const double mean = sum / kBatches;
  const double var = std::max(0.0, (sum_sq - kBatches * mean * mean) /
                                       (kBatches - 1));
  // Batch means report zero spread when the rare state never shows up. The
  // chain is positively correlated, so the independent-slot binomial error
  // (with the Agresti-Coull shift) is a floor on the true standard error.
  const double n = static_cast<double>(per_batch * kBatches);
  const double shifted = (mean * n + 2.0) / (n + 4.0);
  const double floor = std::sqrt(shifted * (1.0 - shifted) / n);
  return {mean, std::max(std::sqrt(var / kBatches), floor),
          per_batch * kBatches, 0};
}

SimEstimate simulate_energy_queue(const EnergyModel& energy, double q,
                                  std::int64_t slots, std::uint64_t seed) {
  Rng rng(seed);
  SimEstimate est = simulate_energy_queue(energy.p(), q, energy.capacity(),
                                          slots, rng);
  est.seed = seed;
  return est;
}

SimEstimate estimate_aloha_psuc(const NetworkParams& params, double q,
                                const SimConfig& config) {
  const ChannelParams& channel = params.channel();
  config.validate(channel);
  require_probability(q, "q");

  const double active_density =
      params.lambda() * effective_access(params.energy(), q);
  if (active_density == 0.0) return {1.0, 0.0, config.trials, config.seed};

  const double radius = config.window_radius;
  const double radius_sq = radius * radius;
  const double outer = config.far_field
                           ? outer_void_probability(active_density, channel,
                                                    radius, config.quadrature)
                           : 1.0;
  const double signal_scale =
      1.0 / (channel.theta() * std::pow(channel.d(), channel.alpha()));
  const double area_per_unit = 1.0 / (kPi * active_density);
  const PathGain gain(channel.alpha());
  const std::uint64_t seed = config.seed;

  // Interferers are generated in order of distance (squared distances are
  // the arrival times of a Poisson process of rate pi * density), so a
  // larger window sees the same nearby points under the same seed.
  auto trial = [&](std::int64_t index, std::array<std::int64_t, 1>& acc) {
    Rng rng(stream_seed(seed, kAlohaStream, static_cast<std::uint64_t>(index)));
    const double threshold = rng.exponential() * signal_scale;
    const double far_draw = rng.uniform();
    if (far_draw >= outer) return;
    double interference = 0.0;
    double arrival = 0.0;
    for (;;) {
      arrival += rng.exponential();
      const double r2 = arrival * area_per_unit;
      if (r2 > radius_sq) break;
      interference += rng.exponential() * gain(r2);
      if (interference >= threshold) return;
    }
    ++acc[0];
  };

  const auto counts = run_trials<1>(config.trials, config.threads, trial);
  return binomial_estimate(counts[0], config.trials, seed);
}

namespace {

struct EmpiricalFixedPoint {
  BackoffBranch branch;
  double nu;
  double p_b;
  double std_error;
};

// Given per-trial critical activity levels (back-off iff nu > critical),
// solves nu = min(p, 1 - F(nu)) with F the empirical back-off curve.
EmpiricalFixedPoint solve_empirical_fixed_point(std::vector<double> critical,
                                                double p) {
  std::sort(critical.begin(), critical.end());
  const double n = static_cast<double>(critical.size());
  auto backoff_at = [&](double nu) {
    const auto below = std::lower_bound(critical.begin(), critical.end(), nu);
    return static_cast<double>(below - critical.begin()) / n;
  };
  auto binomial_se = [&](double f) { return std::sqrt(f * (1.0 - f) / n); };

  const double f_at_p = backoff_at(p);
  if (p + f_at_p <= 1.0) {
    return {BackoffBranch::kHighEnergy, p, f_at_p, binomial_se(f_at_p)};
  }

  // Smallest nu with nu + F(nu) >= 1. F is constant on (c_k, c_{k+1}].
  const std::size_t count = critical.size();
  double nu = 0.0;
  for (std::size_t k = 0; k <= count; ++k) {
    const double lo = k == 0 ? 0.0 : critical[k - 1];
    const double hi =
        k == count ? std::numeric_limits<double>::infinity() : critical[k];
    const double candidate = std::max(1.0 - static_cast<double>(k) / n, lo);
    if (candidate <= hi) {
      nu = candidate;
      break;
    }
  }
  // Delta method: d(nu) (1 + F'(nu)) = -dF, with F' from a central
  // difference of the empirical curve.
  const double h = 0.01;
  const double slope =
      (backoff_at(std::min(nu + h, 1.0)) - backoff_at(std::max(nu - h, 0.0))) /
      (std::min(nu + h, 1.0) - std::max(nu - h, 0.0));
  const double p_b = 1.0 - nu;
  return {BackoffBranch::kEnergyLimited, nu, p_b,
          binomial_se(backoff_at(nu)) / (1.0 + slope)};
}

}  // namespace

CsmaEstimate estimate_csma(const CsmaParams& params, const SimConfig& config) {
  const NetworkParams& net = params.network();
  const ChannelParams& channel = net.channel();
  config.validate(channel);

  const int slots = params.packet_slots();
  const double lambda = net.lambda();
  const double p = net.energy().p();
  const double radius = config.window_radius;
  const double radius_sq = radius * radius;
  const double area = kPi * radius_sq;
  const double signal_scale =
      1.0 / (channel.theta() * std::pow(channel.d(), channel.alpha()));
  const PathGain gain(channel.alpha());
  const std::uint64_t seed = config.seed;
  const QuadratureSpec& quad = config.quadrature;

  // Outer-region integrals of 1 - g^k, g = 1 / (1 + s^alpha |x|^-alpha).
  std::vector<double> outer_overlap(static_cast<std::size_t>(slots) + 1, 0.0);
  if (config.far_field) {
    for (int k = 1; k <= slots; ++k) {
      outer_overlap[k] =
          csma_spatial_integral_beyond(k, 1.0, channel, radius, quad);
    }
  }

  // Sweep 1: packets on the air in slot 0 started in slots -L+1..0, i.e. a
  // PPP(lambda) in total. Each carries a uniform mark and is sent iff
  // mark < nu, so sensing fails for every nu above a per-trial critical
  // level.
  std::vector<double> critical(static_cast<std::size_t>(config.trials));
  const double sense_mean = lambda * area;
  auto sense_trial = [&](std::int64_t index, std::array<std::int64_t, 1>&) {
    Rng rng(stream_seed(seed, kCsmaSenseStream,
                        static_cast<std::uint64_t>(index)));
    const double threshold = rng.exponential() * signal_scale;
    const double far_draw = rng.uniform_positive();
    std::poisson_distribution<std::int64_t> count_dist(sense_mean);
    const std::int64_t n = count_dist(rng);

    thread_local std::vector<std::pair<double, double>> marked;
    marked.clear();
    for (std::int64_t i = 0; i < n; ++i) {
      const double r2 = radius_sq * rng.uniform();
      const double power = rng.exponential() * gain(r2);
      marked.emplace_back(rng.uniform(), power);
    }
    std::sort(marked.begin(), marked.end());
    double level = std::numeric_limits<double>::infinity();
    double interference = 0.0;
    for (const auto& [mark, power] : marked) {
      interference += power;
      if (interference >= threshold) {
        level = mark;
        break;
      }
    }
    if (outer_overlap[1] > 0.0) {
      level = std::min(level, -std::log(far_draw) / (lambda * outer_overlap[1]));
    }
    critical[static_cast<std::size_t>(index)] = level;
  };
  run_trials<1>(config.trials, config.threads, sense_trial);
  const EmpiricalFixedPoint fixed =
      solve_empirical_fixed_point(std::move(critical), p);
  const double nu = fixed.nu;

  // Sweep 2: slots 0..L at the resolved nu. A packet that starts in slot s
  // is on the air in slots s..s+L-1.
  const double outer_first =
      std::exp(-lambda * nu * outer_overlap[1]);
  double outer_all_exponent = 0.0;
  for (int k = 1; k <= slots; ++k) outer_all_exponent += 2.0 * outer_overlap[k];
  const double outer_all = std::exp(-(lambda * nu / slots) * outer_all_exponent);
  const double per_start_mean = lambda * nu * area / slots;

  auto packet_trial = [&](std::int64_t index,
                          std::array<std::int64_t, 2>& acc) {
    Rng rng(stream_seed(seed, kCsmaPacketStream,
                        static_cast<std::uint64_t>(index)));
    thread_local std::vector<double> threshold;
    thread_local std::vector<double> interference;
    threshold.assign(static_cast<std::size_t>(slots) + 1, 0.0);
    interference.assign(static_cast<std::size_t>(slots) + 1, 0.0);
    for (double& t : threshold) t = rng.exponential() * signal_scale;
    const double far_draw = rng.uniform();

    std::poisson_distribution<std::int64_t> count_dist(per_start_mean);
    for (int start = -slots + 1; start <= slots; ++start) {
      const std::int64_t n = per_start_mean > 0.0 ? count_dist(rng) : 0;
      const int first = std::max(start, 0);
      const int last = std::min(start + slots - 1, slots);
      for (std::int64_t i = 0; i < n; ++i) {
        const double g = gain(radius_sq * rng.uniform());
        for (int t = first; t <= last; ++t) {
          interference[t] += rng.exponential() * g;
        }
      }
    }

    const bool sensed_idle =
        interference[0] < threshold[0] && far_draw < outer_first;
    if (!sensed_idle) return;
    ++acc[0];
    if (!(far_draw < outer_all)) return;
    for (int t = 1; t <= slots; ++t) {
      if (interference[t] >= threshold[t]) return;
    }
    ++acc[1];
  };
  const auto counts = run_trials<2>(config.trials, config.threads, packet_trial);

  CsmaEstimate est;
  est.branch = fixed.branch;
  est.nu = nu;
  est.p_b = {fixed.p_b, fixed.std_error, config.trials, seed};
  const SimEstimate success_given_idle =
      binomial_estimate(counts[1], counts[0], seed);
  est.p_fail = {1.0 - success_given_idle.mean, success_given_idle.std_error,
                counts[0], seed};
  const SimEstimate success = binomial_estimate(counts[1], config.trials, seed);
  est.p_out = {1.0 - success.mean, success.std_error, config.trials, seed};
  return est;
}

}  // namespace ehcap

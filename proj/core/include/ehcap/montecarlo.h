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

#ifndef EHCAP_MONTECARLO_H_
#define EHCAP_MONTECARLO_H_

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "ehcap/csma.h"
#include "ehcap/model.h"
#include "ehcap/numerics.h"
#include "ehcap/rng.h"

namespace ehcap {

struct Point {
  double x;
  double y;
};

struct SimConfig {
  // Interferers are drawn explicitly inside a disc of this radius centered
  // on the typical receiver.
  double window_radius = 0.0;
  std::int64_t trials = 100'000;
  std::int64_t slots = 10'000'000;  // temporal (queue) simulations
  std::uint64_t seed = 42;
  double confidence = 3.0;  // multiplier used by agrees_with callers
  int threads = 1;          // 0 means std::thread::hardware_concurrency()

  // When set, interferers beyond window_radius are accounted for by an
  // independent pass/fail draw with the exact Poisson void probability of
  // the outer region (see README). Otherwise they are dropped.
  bool far_field = true;
  QuadratureSpec quadrature{};

  // window_radius = 20 max(d, d theta^(1/alpha)).
  static SimConfig for_channel(const ChannelParams& channel);

  // Throws ValidationError unless window_radius >= 20 max(d, d
  // theta^(1/alpha)) and trials, slots >= 1.
  void validate(const ChannelParams& channel) const;
};

struct SimEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;

  // (mean - value) / std_error; 0 when both agree exactly.
  double z_score(double value) const;
  bool agrees_with(double value, double k_sigma) const;
};

// Homogeneous PPP of the given density on the disc of radius window_radius
// centered at the origin.
std::vector<Point> sample_ppp(double density, double window_radius, Rng& rng);

// SIR at a receiver at the origin whose transmitter sits at distance d, with
// unit-mean exponential power fading on every link. Only points with a
// nonzero mark interfere. Returns +infinity with no active interferers.
double typical_sir(std::span<const Point> interferers,
                   std::span<const std::uint8_t> active_marks,
                   const ChannelParams& channel, Rng& rng);

// Fraction of slots that start with E >= 1, after a burn-in prefix, for the
// Bernoulli(p) arrival / Bernoulli(q) attempt chain. The standard error comes
// from 100 batch means.
SimEstimate simulate_energy_queue(double p, double q,
                                  std::optional<int> capacity,
                                  std::int64_t slots, Rng& rng);

// Same with a seeded stream; the seed is recorded in the estimate.
SimEstimate simulate_energy_queue(const EnergyModel& energy, double q,
                                  std::int64_t slots, std::uint64_t seed);

// Snapshot estimate of P(SIR > theta) when each transmitter of the
// PPP(lambda) is independently active with probability q r. Binomial
// standard error. Uses config.trials, window_radius, seed, threads.
SimEstimate estimate_aloha_psuc(const NetworkParams& params, double q,
                                const SimConfig& config);

struct CsmaEstimate {
  BackoffBranch branch;  // branch of the empirical fixed point
  double nu;             // self-consistent probability a packet is sent
  SimEstimate p_b;       // self-consistent back-off probability
  SimEstimate p_fail;    // P(some slot 1..L fails | slot 0 sensed idle)
  SimEstimate p_out;     // P(back-off or failure)
};

// Packet-model simulation around a tagged link at the origin. A first sweep
// records, per trial, the activity level at which slot-0 sensing flips to
// back-off and solves nu = min(p, 1 - P_b(nu)) on the empirical curve. A
// second sweep simulates slots 0..L at that nu.
CsmaEstimate estimate_csma(const CsmaParams& params, const SimConfig& config);

}  // namespace ehcap

#endif  // EHCAP_MONTECARLO_H_

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

#ifndef EHCAP_CSMA_H_
#define EHCAP_CSMA_H_

#include <optional>

#include "ehcap/model.h"
#include "ehcap/numerics.h"

namespace ehcap {

// CSMA on the packet-arrival model: packets arrive as a space-time Poisson
// process of rate lambda / L per slot and area, each lasting L slots. Only
// the unbounded battery is modeled.
class CsmaParams {
 public:
  // Throws ValidationError unless L >= 1 and the battery is unbounded.
  CsmaParams(NetworkParams network, int packet_slots);

  const NetworkParams& network() const { return network_; }
  int packet_slots() const { return packet_slots_; }

 private:
  NetworkParams network_;
  int packet_slots_;
};

enum class BackoffBranch {
  kHighEnergy,     // -lambda_max ln p / lambda > p; r < 1, (1 - P_b) r = p
  kEnergyLimited,  // r = 1; P_b from the Lambert W fixed point
};

const char* to_string(BackoffBranch branch);

struct Backoff {
  double p_b;
  BackoffBranch branch;
  double r;   // min(p / (1 - p_b), 1)
  double nu;  // (1 - p_b) r: probability an arriving packet is sent
};

// Solves P_b = 1 - exp(-lambda (1 - P_b) r / lambda_max) with
// r = min(p / (1 - P_b), 1). High-energy branch: P_b = 1 - exp(-p lambda /
// lambda_max). Energy-limited: P_b = 1 - (lambda_max / lambda)
// W0(lambda / lambda_max).
Backoff backoff_probability(const CsmaParams& params);

// The high-energy value as often printed, 1 - exp(-lambda / lambda_max),
// without the factor p. Kept for comparison only.
double backoff_probability_printed_high_energy(const CsmaParams& params);

// |P_b - (1 - exp(-lambda (1 - P_b) r / lambda_max))| with r recomputed from
// p_b.
double backoff_fixed_point_residual(const CsmaParams& params, double p_b);

struct FailureProbability {
  double value;             // clamped to [0, 1]
  double unclamped;
  bool clamped;             // unclamped value left [0, 1]
  bool precision_warning;   // L > 16
};

// Conditional failure probability from the inclusion-exclusion expression
//   1 - sum_{l=0}^{L+1} (-1)^l C(L+1, l)
//         exp(-(lambda / L) I(l, (1 - p_b) r)) / (1 - p_b),
// with I = csma_spatial_integral. The alternating sum is the probability
// that all of L + 1 slots of a static network fail, not that all succeed,
// so this disagrees with simulation and with the FKG bound; it is reported
// for comparison and never feeds p_out.
FailureProbability failure_probability(const CsmaParams& params, double p_b,
                                       double r,
                                       const QuadratureSpec& spec = {});

// The L = 1 expression
//   1 - (1 - p_b) exp(2 lambda theta^(2/alpha) d^2 (1 - p_b)^2 r^2 pi^2
//                     ((alpha - 2) / alpha) csc(2 pi / alpha)),
// evaluated verbatim. Requires L = 1. Reported for comparison only.
FailureProbability failure_probability_l1_closed_form(const CsmaParams& params,
                                                      double p_b, double r);

// Conditional failure probability for the packet model itself. A packet
// that starts in slot s is on the air for k_s of the slots 0..L, and with
// per-slot Rayleigh fading the joint success probability is
//   exp(-(lambda nu / L) sum_s I(k_s, 1)) = exp(-(2 lambda nu / L)
//       sum_{k=1}^{L} I(k, 1)),
// so p_fail = 1 - joint / (1 - p_b). Never needs clamping.
FailureProbability failure_probability_packet_model(
    const CsmaParams& params, double p_b, double r,
    const QuadratureSpec& spec = {});

// 1 - (1 - p_b)^(L + 1).
double fkg_outage_bound(double p_b, int packet_slots);

struct CsmaResult {
  double p_b;
  BackoffBranch branch;
  double r;
  double nu;
  double p_fail_given_no_backoff;  // packet model
  double p_out;                    // p_b + (1 - p_b) p_fail_given_no_backoff
  double fkg_bound;
  double capacity;                 // lambda (1 - p_out) rate

  // Comparison values that do not feed p_out.
  double p_fail_inclusion_exclusion;
  double p_out_inclusion_exclusion;
  std::optional<double> p_fail_l1_closed_form;

  int clamp_count;         // comparison values that needed clamping
  bool precision_warning;  // L > 16
};

// Composes the above. Throws std::logic_error if the result breaks the
// fixed-point, branch, FKG or outage-identity invariants.
CsmaResult evaluate_csma(const CsmaParams& params,
                         const QuadratureSpec& spec = {});

}  // namespace ehcap

#endif  // EHCAP_CSMA_H_

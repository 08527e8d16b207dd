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

#include "ehcap/csma.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace ehcap {

CsmaParams::CsmaParams(NetworkParams network, int packet_slots)
    : network_(std::move(network)), packet_slots_(packet_slots) {
  if (packet_slots < 1) {
    throw ValidationError("L", "packet duration must be at least one slot");
  }
  if (!network_.energy().is_unbounded()) {
    throw ValidationError("B", "CSMA analysis covers the unbounded battery only");
  }
}

const char* to_string(BackoffBranch branch) {
  switch (branch) {
    case BackoffBranch::kHighEnergy:
      return "high-energy";
    case BackoffBranch::kEnergyLimited:
      return "energy-limited";
  }
  return "unknown";
}

Backoff backoff_probability(const CsmaParams& params) {
  const NetworkParams& net = params.network();
  const double p = net.energy().p();
  const double lambda_max = net.derived().lambda_max;
  const double intensity = net.lambda() / lambda_max;

  if (-std::log(p) / intensity > p) {
    const double p_b = -std::expm1(-p * intensity);
    return {p_b, BackoffBranch::kHighEnergy, p / (1.0 - p_b), p};
  }
  const double p_b = 1.0 - lambert_w0(intensity) / intensity;
  return {p_b, BackoffBranch::kEnergyLimited, 1.0, 1.0 - p_b};
}

double backoff_probability_printed_high_energy(const CsmaParams& params) {
  const NetworkParams& net = params.network();
  return -std::expm1(-net.lambda() / net.derived().lambda_max);
}

double backoff_fixed_point_residual(const CsmaParams& params, double p_b) {
  const NetworkParams& net = params.network();
  const double p = net.energy().p();
  const double r = std::min(p / (1.0 - p_b), 1.0);
  const double rhs =
      -std::expm1(-net.lambda() * (1.0 - p_b) * r / net.derived().lambda_max);
  return std::abs(p_b - rhs);
}

double fkg_outage_bound(double p_b, int packet_slots) {
  return 1.0 - std::pow(1.0 - p_b, packet_slots + 1);
}

namespace {

FailureProbability clamp_probability(double value, bool precision_warning) {
  const double clamped = std::clamp(value, 0.0, 1.0);
  return {clamped, value, clamped != value, precision_warning};
}

void check_backoff_args(double p_b, double r) {
  require_probability(p_b, "p_b");
  require_probability(r, "r");
  if (p_b >= 1.0) throw ValidationError("p_b", "must be below 1");
}

}  // namespace

FailureProbability failure_probability(const CsmaParams& params, double p_b,
                                       double r, const QuadratureSpec& spec) {
  check_backoff_args(p_b, r);
  const NetworkParams& net = params.network();
  const int slots = params.packet_slots();
  const double nu = (1.0 - p_b) * r;
  const bool warn = slots + 2 > kWellConditionedTerms;
  if (nu == 0.0) return {0.0, 0.0, false, warn};

  std::vector<double> terms(slots + 2);
  for (int l = 0; l <= slots + 1; ++l) {
    const double integral = csma_spatial_integral(l, nu, net.channel(), spec);
    terms[l] = std::exp(-(net.lambda() / slots) * integral);
  }
  const AlternatingSum sum = alternating_binomial_sum(terms);
  return clamp_probability(1.0 - sum.value / (1.0 - p_b),
                           warn || sum.precision_warning);
}

FailureProbability failure_probability_l1_closed_form(const CsmaParams& params,
                                                      double p_b, double r) {
  if (params.packet_slots() != 1) {
    throw ValidationError("L", "the closed form holds for L = 1 only");
  }
  check_backoff_args(p_b, r);
  const NetworkParams& net = params.network();
  const ChannelParams& ch = net.channel();
  constexpr double pi = std::numbers::pi;
  const double alpha = ch.alpha();
  const double exponent = 2.0 * net.lambda() *
                          std::pow(ch.theta(), 2.0 / alpha) * ch.d() * ch.d() *
                          std::pow(1.0 - p_b, 2) * r * r * pi * pi *
                          ((alpha - 2.0) / alpha) / std::sin(2.0 * pi / alpha);
  return clamp_probability(1.0 - (1.0 - p_b) * std::exp(exponent), false);
}

FailureProbability failure_probability_packet_model(
    const CsmaParams& params, double p_b, double r,
    const QuadratureSpec& spec) {
  check_backoff_args(p_b, r);
  const NetworkParams& net = params.network();
  const int slots = params.packet_slots();
  const double nu = (1.0 - p_b) * r;
  if (nu == 0.0) return {0.0, 0.0, false, false};

  // I(1, 1) = 1 / lambda_max exactly; the rest by quadrature.
  double overlap_sum = 1.0 / net.derived().lambda_max;
  for (int k = 2; k <= slots; ++k) {
    overlap_sum += csma_spatial_integral(k, 1.0, net.channel(), spec);
  }
  const double joint =
      std::exp(-(2.0 * net.lambda() * nu / slots) * overlap_sum);
  return clamp_probability(1.0 - joint / (1.0 - p_b), false);
}

CsmaResult evaluate_csma(const CsmaParams& params, const QuadratureSpec& spec) {
  const NetworkParams& net = params.network();
  const Backoff backoff = backoff_probability(params);
  const int slots = params.packet_slots();

  const FailureProbability packet =
      failure_probability_packet_model(params, backoff.p_b, backoff.r, spec);
  const FailureProbability incl_excl =
      failure_probability(params, backoff.p_b, backoff.r, spec);

  CsmaResult result{};
  result.p_b = backoff.p_b;
  result.branch = backoff.branch;
  result.r = backoff.r;
  result.nu = backoff.nu;
  result.p_fail_given_no_backoff = packet.value;
  result.p_out = backoff.p_b + (1.0 - backoff.p_b) * packet.value;
  result.fkg_bound = fkg_outage_bound(backoff.p_b, slots);
  result.capacity = net.lambda() * (1.0 - result.p_out) * net.derived().rate;
  result.p_fail_inclusion_exclusion = incl_excl.value;
  result.p_out_inclusion_exclusion =
      backoff.p_b + (1.0 - backoff.p_b) * incl_excl.value;
  result.clamp_count = (packet.clamped ? 1 : 0) + (incl_excl.clamped ? 1 : 0);
  result.precision_warning = incl_excl.precision_warning;
  if (slots == 1) {
    const FailureProbability closed =
        failure_probability_l1_closed_form(params, backoff.p_b, backoff.r);
    result.p_fail_l1_closed_form = closed.value;
    result.clamp_count += closed.clamped ? 1 : 0;
  }

  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::logic_error(std::string("evaluate_csma: ") + what);
  };
  require(backoff_fixed_point_residual(params, backoff.p_b) <= 1e-10,
          "back-off fixed point not satisfied");
  const double p = net.energy().p();
  if (backoff.branch == BackoffBranch::kHighEnergy) {
    require(backoff.p_b <= 1.0 - p + 1e-12, "high-energy branch needs p_b <= 1 - p");
  } else {
    require(1.0 - backoff.p_b <= p + 1e-12, "energy-limited branch needs 1 - p_b <= p");
  }
  require(!packet.clamped, "packet-model failure probability left [0, 1]");
  require(result.p_out <= result.fkg_bound + 1e-9, "outage exceeds FKG bound");
  return result;
}

}  // namespace ehcap

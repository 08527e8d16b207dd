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

#include "ehcap/model.h"

#include <cmath>
#include <numbers>
#include <utility>

namespace ehcap {

ValidationError::ValidationError(std::string field, const std::string& what)
    : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}

namespace {

void require_finite(double value, const char* name) {
  if (!std::isfinite(value)) throw ValidationError(name, "must be finite");
}

}  // namespace

void require_probability(double value, const char* name) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw ValidationError(name, "must lie in [0, 1], got " +
                                    std::to_string(value));
  }
}

ChannelParams::ChannelParams(double alpha, double theta, double d)
    : alpha_(alpha), theta_(theta), d_(d) {
  require_finite(alpha, "alpha");
  require_finite(theta, "theta");
  require_finite(d, "d");
  if (!(alpha > 2.0)) {
    throw ValidationError("alpha", "path-loss exponent must exceed 2, got " +
                                       std::to_string(alpha));
  }
  if (!(theta > 0.0)) {
    throw ValidationError("theta", "SIR threshold must be positive, got " +
                                       std::to_string(theta));
  }
  if (!(d > 0.0)) {
    throw ValidationError("d", "link distance must be positive, got " +
                                   std::to_string(d));
  }
}

double ChannelParams::length_scale() const {
  return d_ * std::pow(theta_, 1.0 / alpha_);
}

double kappa(double alpha) {
  if (!(alpha > 2.0)) {
    throw ValidationError("alpha", "kappa(alpha) diverges for alpha <= 2");
  }
  constexpr double pi = std::numbers::pi;
  return 2.0 * pi * pi / (alpha * std::sin(2.0 * pi / alpha));
}

double rate_for_threshold(double theta) { return std::log2(1.0 + theta); }

DerivedChannel derive_channel(const ChannelParams& channel) {
  const double k = kappa(channel.alpha());
  const double scale = channel.length_scale();
  return {
      .kappa = k,
      .lambda_max = 1.0 / (scale * scale * k),
      .rate = rate_for_threshold(channel.theta()),
  };
}

EnergyModel::EnergyModel(double p, std::optional<int> capacity)
    : p_(p), capacity_(capacity) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw ValidationError("p", "arrival rate must lie in (0, 1], got " +
                                   std::to_string(p));
  }
  if (capacity_ && *capacity_ < 1) {
    throw ValidationError("B", "battery capacity must be at least 1, got " +
                                   std::to_string(*capacity_));
  }
}

std::string EnergyModel::capacity_string() const {
  return capacity_ ? std::to_string(*capacity_) : std::string("inf");
}

NetworkParams::NetworkParams(double lambda, ChannelParams channel,
                             EnergyModel energy)
    : lambda_(lambda),
      channel_(channel),
      energy_(energy),
      derived_(derive_channel(channel)) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw ValidationError("lambda", "density must be positive, got " +
                                        std::to_string(lambda));
  }
}

NetworkParams NetworkParams::with_lambda(double lambda) const {
  return NetworkParams(lambda, channel_, energy_);
}

NetworkParams NetworkParams::with_energy(EnergyModel energy) const {
  return NetworkParams(lambda_, channel_, energy);
}

Load Load::of(const NetworkParams& params) {
  return {params.lambda(), params.derived().lambda_max, params.derived().rate,
          params.energy()};
}

}  // namespace ehcap

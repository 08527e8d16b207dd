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

#ifndef EHCAP_MODEL_H_
#define EHCAP_MODEL_H_

#include <optional>
#include <stdexcept>
#include <string>

namespace ehcap {

// Thrown when a parameter violates its domain. field() names the offending
// parameter using the same short name as the CLI flag (e.g. "alpha").
class ValidationError : public std::invalid_argument {
 public:
  ValidationError(std::string field, const std::string& what);

  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

// Link geometry and decoding threshold. Interference limited: no noise term.
class ChannelParams {
 public:
  // Throws ValidationError unless alpha > 2, theta > 0 and d > 0.
  ChannelParams(double alpha, double theta, double d);

  double alpha() const { return alpha_; }
  double theta() const { return theta_; }
  double d() const { return d_; }

  // d * theta^(1/alpha): the radius at which an interferer's mean received
  // power equals the signal power divided by theta.
  double length_scale() const;

  bool operator==(const ChannelParams&) const = default;

 private:
  double alpha_;
  double theta_;
  double d_;
};

struct DerivedChannel {
  double kappa;       // 2 pi^2 / (alpha sin(2 pi / alpha))
  double lambda_max;  // 1 / (d^2 theta^(2/alpha) kappa), per m^2
  double rate;        // bits/sec/Hz
};

// kappa(alpha); alpha must exceed 2.
double kappa(double alpha);

// Rate R carried by a successful transmission at SIR threshold theta.
// The base-2 log lives here and nowhere else.
double rate_for_threshold(double theta);

DerivedChannel derive_channel(const ChannelParams& channel);

// Bernoulli energy arrivals with rate p into a battery of `capacity` units.
// An empty capacity means an unbounded battery.
class EnergyModel {
 public:
  // Throws ValidationError unless 0 < p <= 1 and capacity >= 1 when finite.
  EnergyModel(double p, std::optional<int> capacity);

  static EnergyModel unbounded(double p) { return {p, std::nullopt}; }
  static EnergyModel finite(double p, int capacity) { return {p, capacity}; }

  double p() const { return p_; }
  std::optional<int> capacity() const { return capacity_; }
  bool is_unbounded() const { return !capacity_.has_value(); }

  // "inf" or the integer capacity.
  std::string capacity_string() const;

  bool operator==(const EnergyModel&) const = default;

 private:
  double p_;
  std::optional<int> capacity_;
};

class NetworkParams {
 public:
  // Throws ValidationError unless lambda > 0.
  NetworkParams(double lambda, ChannelParams channel, EnergyModel energy);

  double lambda() const { return lambda_; }
  const ChannelParams& channel() const { return channel_; }
  const EnergyModel& energy() const { return energy_; }
  const DerivedChannel& derived() const { return derived_; }

  NetworkParams with_lambda(double lambda) const;
  NetworkParams with_energy(EnergyModel energy) const;

 private:
  double lambda_;
  ChannelParams channel_;
  EnergyModel energy_;
  DerivedChannel derived_;
};

// The slice of the network that the ALOHA and game analysis depend on: the
// density, the channel only through lambda_max and the rate, and the energy
// model. Lets callers pin lambda_max directly (e.g. to a published value).
struct Load {
  double lambda;
  double lambda_max;
  double rate;
  EnergyModel energy;

  static Load of(const NetworkParams& params);

  // lambda / lambda_max.
  double intensity() const { return lambda / lambda_max; }
};

// Probability arguments are checked against [0, 1]; `name` is used in the
// ValidationError.
void require_probability(double value, const char* name);

}  // namespace ehcap

#endif  // EHCAP_MODEL_H_

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

#include "ehcap/game.h"

#include <cmath>
#include <numbers>

#include "ehcap/energy_queue.h"

namespace ehcap {

namespace {

// p exp(-p lambda / lambda_max) * rate: what each node gets at any SNE.
double equilibrium_throughput(const Load& load) {
  const double p = load.energy.p();
  return p * std::exp(-p * load.intensity()) * load.rate;
}

bool optimum_at_full_access(const Load& load) {
  return load.energy.p() < load.lambda_max / load.lambda;
}

}  // namespace

double throughput(const Load& load, double q, double q_other) {
  require_probability(q, "q");
  require_probability(q_other, "q_other");
  const double own = effective_access(load.energy, q);
  const double others = effective_access(load.energy, q_other);
  return own * std::exp(-others * load.intensity()) * load.rate;
}

AccessSet best_response(const Load& load, double q_other) {
  require_probability(q_other, "q_other");
  if (load.energy.is_unbounded()) {
    return AccessSet::interval(load.energy.p(), 1.0);
  }
  return AccessSet::point(1.0);
}

SneResult sne(const Load& load) {
  const AccessSet eq = load.energy.is_unbounded()
                           ? AccessSet::interval(load.energy.p(), 1.0)
                           : AccessSet::point(1.0);
  const double th = equilibrium_throughput(load);
  return {eq, th, load.lambda * th, price_of_anarchy(load)};
}

double price_of_anarchy(const Load& load) {
  if (load.energy.is_unbounded()) {
    if (load.energy.p() < load.lambda_max / load.lambda) return 1.0;
  } else if (const auto root = solve_effective_access(load);
             !root || *root >= 1.0) {
    return 1.0;
  }
  const double optimum = optimal_q(load).capacity;
  return optimum / (load.lambda * equilibrium_throughput(load));
}

double price_of_anarchy_closed_form(const Load& load) {
  if (optimum_at_full_access(load)) return 1.0;
  const double p = load.energy.p();
  return load.lambda_max /
         (std::numbers::e * p * load.lambda * std::exp(-p * load.intensity()));
}

double price_of_anarchy_printed_finite(const Load& load) {
  const std::optional<double> root = solve_effective_access(load);
  if (!root || *root >= 1.0) return 1.0;
  const double q = *root;
  const double p = load.energy.p();
  return (q * std::exp(-q * load.intensity())) /
         (p * std::exp(-p * load.intensity()));
}

}  // namespace ehcap

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

#include "ehcap/aloha.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "ehcap/energy_queue.h"
#include "ehcap/numerics.h"

namespace ehcap {

namespace {

constexpr double kRootTolerance = 1e-15;

void check_load(const Load& load) {
  if (!(load.lambda > 0.0)) throw ValidationError("lambda", "must be positive");
  if (!(load.lambda_max > 0.0)) {
    throw ValidationError("lambda_max", "must be positive");
  }
}

double capacity_at_access(const Load& load, double f) {
  const double active = load.lambda * f;
  return active * std::exp(-active / load.lambda_max) * load.rate;
}

}  // namespace

AccessSet AccessSet::interval(double lo, double hi) {
  if (lo == hi) return point(lo);
  return {Kind::kInterval, lo, hi};
}

std::string AccessSet::to_string() const {
  std::ostringstream out;
  out.precision(10);
  if (kind == Kind::kPoint) {
    out << "point(" << lo << ")";
  } else {
    out << "interval(" << lo << ";" << hi << ")";
  }
  return out.str();
}

AlohaResult evaluate_aloha(const Load& load, double q) {
  check_load(load);
  require_probability(q, "q");
  const QueueOccupancy occ = occupancy(load.energy, q);
  const double active = occ.effective_access * load.lambda;
  const double p_suc = std::exp(-active / load.lambda_max);
  return {
      .q = q,
      .r = occ.r,
      .active_density = active,
      .p_suc = p_suc,
      .capacity = active * p_suc * load.rate,
  };
}

AlohaResult evaluate_aloha(const NetworkParams& params, double q) {
  return evaluate_aloha(Load::of(params), q);
}

OptimalAccess optimal_q_infinite(const Load& load) {
  check_load(load);
  if (!load.energy.is_unbounded()) {
    throw ValidationError("B", "optimal_q_infinite needs an unbounded battery");
  }
  const double p = load.energy.p();
  const double ratio = load.lambda_max / load.lambda;
  if (p > ratio) {
    // ratio < p <= 1, so the unconstrained optimum is feasible.
    return {AccessSet::point(ratio), capacity_at_access(load, ratio)};
  }
  return {AccessSet::interval(p, 1.0), capacity_at_access(load, p)};
}

std::optional<double> solve_effective_access(const Load& load) {
  check_load(load);
  const double target = load.lambda_max / load.lambda;
  return find_root_increasing(
      [&](double q) { return effective_access(load.energy, q); }, target, 0.0,
      1.0, kRootTolerance);
}

OptimalAccess optimal_q_finite(const Load& load) {
  check_load(load);
  if (load.energy.is_unbounded()) {
    throw ValidationError("B", "optimal_q_finite needs a finite battery");
  }
  const std::optional<double> root = solve_effective_access(load);
  const double q_star = root ? std::min(*root, 1.0) : 1.0;
  return {AccessSet::point(q_star),
          capacity_at_access(load, effective_access(load.energy, q_star))};
}

OptimalAccess optimal_q(const Load& load) {
  return load.energy.is_unbounded() ? optimal_q_infinite(load)
                                    : optimal_q_finite(load);
}

UnitBatteryOptimum unit_battery_optimum(double p, double lambda,
                                        double lambda_max) {
  if (!(p > 0.0 && p <= 1.0)) throw ValidationError("p", "must lie in (0, 1]");
  if (!(lambda > 0.0)) throw ValidationError("lambda", "must be positive");
  if (!(lambda_max > 0.0)) {
    throw ValidationError("lambda_max", "must be positive");
  }
  const double denominator = lambda * p - lambda_max * (1.0 - p);
  const double q_star =
      denominator > 0.0 ? std::min(lambda_max * p / denominator, 1.0) : 1.0;
  const double printed =
      std::min(p * lambda_max / (lambda * p + lambda_max * (1.0 - p)), 1.0);
  return {q_star, printed};
}

}  // namespace ehcap

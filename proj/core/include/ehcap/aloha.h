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

#ifndef EHCAP_ALOHA_H_
#define EHCAP_ALOHA_H_

#include <string>

#include "ehcap/model.h"

namespace ehcap {

struct AlohaResult {
  double q;
  double r;
  double active_density;  // q * r * lambda
  double p_suc;           // exp(-active_density / lambda_max)
  double capacity;        // active_density * p_suc * rate
};

AlohaResult evaluate_aloha(const Load& load, double q);
AlohaResult evaluate_aloha(const NetworkParams& params, double q);

// A single access probability or a closed interval of equally good ones.
struct AccessSet {
  enum class Kind { kPoint, kInterval };

  Kind kind;
  double lo;
  double hi;

  static AccessSet point(double q) { return {Kind::kPoint, q, q}; }
  // Collapses to a point when lo == hi.
  static AccessSet interval(double lo, double hi);

  bool contains(double q, double tol = 0.0) const {
    return q >= lo - tol && q <= hi + tol;
  }
  // "point(0.2)" or "interval(0.5,1)".
  std::string to_string() const;
};

struct OptimalAccess {
  AccessSet access;
  double capacity;  // capacity at any q in `access`
};

// Unbounded battery: q* = lambda_max / lambda when p > lambda_max / lambda,
// otherwise every q in [p, 1] is optimal. Requires load.energy unbounded.
OptimalAccess optimal_q_infinite(const Load& load);

// Finite battery: q* = min(q_hat, 1) with f_B(q_hat) = lambda_max / lambda,
// found by bisection on the monotone f_B. Requires a finite battery.
OptimalAccess optimal_q_finite(const Load& load);

// Dispatches on the battery model.
OptimalAccess optimal_q(const Load& load);

// Root of f_B(q) = lambda_max / lambda in [0, 1], or nullopt when
// f_B(1) = p falls short of it.
std::optional<double> solve_effective_access(const Load& load);

struct UnitBatteryOptimum {
  // Solves f_1(q) = lambda_max / lambda exactly:
  // min(lambda_max p / (lambda p - lambda_max (1 - p)), 1), and 1 when the
  // denominator is not positive.
  double q_star;
  // min(p lambda_max / (lambda p + lambda_max (1 - p)), 1) as commonly
  // printed. It does not satisfy f_1(q) = lambda_max / lambda and is kept
  // only for comparison.
  double printed_form;
};

UnitBatteryOptimum unit_battery_optimum(double p, double lambda,
                                        double lambda_max);

}  // namespace ehcap

#endif  // EHCAP_ALOHA_H_

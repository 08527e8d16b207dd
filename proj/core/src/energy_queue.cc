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

#include "ehcap/energy_queue.h"

#include <cmath>
#include <string>

#include <Eigen/Dense>

namespace ehcap {

namespace {

// Below this gap the p = q closed form is used. The log-space form is
// accurate down to much smaller gaps; this only avoids the exact 0/0.
constexpr double kEqualRatesGap = 1e-12;

void check_args(double p, double q) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw ValidationError("p", "arrival rate must lie in (0, 1]");
  }
  require_probability(q, "q");
}

void check_capacity(int capacity) {
  if (capacity < 1) {
    throw ValidationError("B", "battery capacity must be at least 1, got " +
                                   std::to_string(capacity));
  }
}

}  // namespace

QueueOccupancy occupancy_infinite(double p, double q) {
  check_args(p, q);
  if (q <= p) return {1.0, q};
  return {p / q, p};
}

QueueOccupancy occupancy_finite(double p, double q, int capacity) {
  check_args(p, q);
  check_capacity(capacity);
  if (p == 1.0 || q == 0.0) return {1.0, q};

  const double b = capacity;
  double r;
  if (std::abs(p - q) < kEqualRatesGap) {
    r = b / (b + 1.0 - p);
  } else {
    // rho = p (1 - q) / (q (1 - p)); rho - 1 and p/q - 1 are formed from
    // p - q directly so nothing cancels near p = q.
    const double log_rho = std::log1p((p - q) / (q * (1.0 - p)));
    const double log_ratio = std::log1p((p - q) / q);
    if (log_rho < 0.0) {
      r = (p / q) * std::expm1(b * log_rho) /
          std::expm1(log_ratio + b * log_rho);
    } else {
      // Divide through by rho^B so nothing overflows for large B.
      r = std::expm1(-b * log_rho) / std::expm1(-b * log_rho - log_ratio);
    }
  }
  return {r, q * r};
}

QueueOccupancy occupancy_finite_oracle(double p, double q, int capacity) {
  if (!(p > 0.0)) {
    throw ValidationError("p", "chain is degenerate for p <= 0");
  }
  check_args(p, q);
  check_capacity(capacity);

  const int n = capacity + 1;
  Eigen::MatrixXd transition = Eigen::MatrixXd::Zero(n, n);
  const double up = p * (1.0 - q);
  const double down = q * (1.0 - p);
  transition(0, 1) = p;
  transition(0, 0) = 1.0 - p;
  for (int e = 1; e < capacity; ++e) {
    transition(e, e + 1) = up;
    transition(e, e - 1) = down;
    transition(e, e) = 1.0 - up - down;
  }
  transition(capacity, capacity - 1) = down;
  transition(capacity, capacity) = 1.0 - down;

  // pi (P - I) = 0 with sum(pi) = 1 replacing the last balance equation.
  Eigen::MatrixXd system =
      transition.transpose() - Eigen::MatrixXd::Identity(n, n);
  system.row(n - 1).setOnes();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  rhs(n - 1) = 1.0;

  const Eigen::FullPivLU<Eigen::MatrixXd> lu(system);
  if (!lu.isInvertible()) {
    throw SingularChain("energy chain has no unique stationary distribution");
  }
  const Eigen::VectorXd pi = lu.solve(rhs);
  const double r = 1.0 - pi(0);
  return {r, q * r};
}

QueueOccupancy occupancy(const EnergyModel& energy, double q) {
  if (energy.is_unbounded()) return occupancy_infinite(energy.p(), q);
  return occupancy_finite(energy.p(), q, *energy.capacity());
}

double effective_access(const EnergyModel& energy, double q) {
  return occupancy(energy, q).effective_access;
}

}  // namespace ehcap

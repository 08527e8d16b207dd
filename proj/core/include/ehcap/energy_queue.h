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

#ifndef EHCAP_ENERGY_QUEUE_H_
#define EHCAP_ENERGY_QUEUE_H_

#include <stdexcept>

#include "ehcap/model.h"

namespace ehcap {

// Stationary summary of one transmitter's energy level E(t) when it attempts
// with probability q whenever E(t) >= 1.
struct QueueOccupancy {
  double r;                 // P(E >= 1)
  double effective_access;  // q * r, the unconditional transmit probability
};

// Unbounded battery: r = min(p / q, 1). r = 1 at q = 0 by convention.
QueueOccupancy occupancy_infinite(double p, double q);

// Battery of `capacity` units. An arrival at a full battery is lost unless a
// transmission in the same slot frees a unit.
QueueOccupancy occupancy_finite(double p, double q, int capacity);

// Builds the (capacity + 1)-state transition matrix explicitly and solves for
// its stationary distribution. Independent of the closed forms above; used to
// check them. Throws ValidationError for p <= 0 and SingularChain when the
// chain has no unique stationary law.
QueueOccupancy occupancy_finite_oracle(double p, double q, int capacity);

class SingularChain : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Dispatches on the battery model.
QueueOccupancy occupancy(const EnergyModel& energy, double q);

// f_B(q) = q * r_B(q). Nondecreasing in q with f_B(1) = p for every B.
double effective_access(const EnergyModel& energy, double q);

}  // namespace ehcap

#endif  // EHCAP_ENERGY_QUEUE_H_

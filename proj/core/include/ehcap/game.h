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

#ifndef EHCAP_GAME_H_
#define EHCAP_GAME_H_

#include "ehcap/aloha.h"
#include "ehcap/model.h"

namespace ehcap {

// Throughput of one transmitter using q while every other transmitter uses
// q_other: f_B(q) * exp(-f_B(q_other) * lambda / lambda_max) * rate.
double throughput(const Load& load, double q, double q_other);

// The q maximizing throughput(q, q_other). It depends on q only through
// f_B(q), so this is [p, 1] for an unbounded battery and {1} otherwise.
AccessSet best_response(const Load& load, double q_other);

struct SneResult {
  AccessSet equilibrium;
  double per_node_throughput;  // includes the rate factor
  double capacity_at_sne;      // lambda * per_node_throughput
  double poa;
};

// Symmetric Nash equilibrium. Every equilibrium yields the same throughput,
// p exp(-p lambda / lambda_max) * rate.
SneResult sne(const Load& load);

// Globally optimal capacity over capacity at the equilibrium, from the
// capacity routines. Exactly 1 when p < lambda_max / lambda for the
// unbounded battery, or when f_B(q) = lambda_max / lambda has no root below 1.
double price_of_anarchy(const Load& load);

// Closed-form ratio lambda_max / (e p lambda exp(-p lambda / lambda_max)),
// or 1 on the branch above. Valid for both battery models since an interior
// optimum always has lambda f_B(q*) = lambda_max.
double price_of_anarchy_closed_form(const Load& load);

// Finite-battery ratio as commonly printed, with q* in place of f_B(q*):
// lambda q* exp(-q* lambda / lambda_max) / (lambda p exp(-p lambda /
// lambda_max)). Kept for comparison only; 1 on the branch above.
double price_of_anarchy_printed_finite(const Load& load);

}  // namespace ehcap

#endif  // EHCAP_GAME_H_

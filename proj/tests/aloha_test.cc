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

#include <gtest/gtest.h>

#include <cmath>

#include "ehcap/aloha.h"
#include "ehcap/energy_queue.h"

namespace ehcap {
namespace {

const ChannelParams kChannel(3.0, 2.0, 2.0);
constexpr double kLambdaMax = 0.0207288634306;

Load load_of(double lambda, EnergyModel energy) {
  return Load::of(NetworkParams(lambda, kChannel, energy));
}

TEST(EvaluateAloha, FrozenPoint) {
  const AlohaResult res =
      evaluate_aloha(load_of(0.1, EnergyModel::unbounded(0.5)), 0.23);
  EXPECT_DOUBLE_EQ(res.r, 1.0);
  EXPECT_NEAR(res.active_density, 0.023, 1e-15);
  EXPECT_NEAR(res.p_suc, 0.329702690029, 1e-11);
  EXPECT_NEAR(res.capacity, 0.0120190272, 1e-10);
}

TEST(EvaluateAloha, SilentNetwork) {
  const AlohaResult res =
      evaluate_aloha(load_of(0.1, EnergyModel::finite(0.5, 3)), 0.0);
  EXPECT_EQ(res.p_suc, 1.0);
  EXPECT_EQ(res.capacity, 0.0);
}

TEST(OptimalQInfinite, PointBranch) {
  const OptimalAccess opt = optimal_q(load_of(0.1, EnergyModel::unbounded(0.5)));
  EXPECT_EQ(opt.access.kind, AccessSet::Kind::kPoint);
  EXPECT_NEAR(opt.access.lo, kLambdaMax / 0.1, 1e-12);
  EXPECT_NEAR(opt.access.lo, 0.207288634306, 1e-11);

  const OptimalAccess dense =
      optimal_q(load_of(0.2, EnergyModel::unbounded(0.5)));
  EXPECT_NEAR(dense.access.lo, 0.103644317153, 1e-11);
}

TEST(OptimalQInfinite, IntervalBranch) {
  const Load load = load_of(0.02, EnergyModel::unbounded(0.5));
  const OptimalAccess opt = optimal_q(load);
  EXPECT_EQ(opt.access.kind, AccessSet::Kind::kInterval);
  EXPECT_EQ(opt.access.lo, 0.5);
  EXPECT_EQ(opt.access.hi, 1.0);
  EXPECT_NEAR(opt.capacity,
              0.02 * 0.5 * std::exp(-0.5 * 0.02 / load.lambda_max) * load.rate,
              1e-16);
}

TEST(OptimalQInfinite, FullEnergyIsConventionalOptimum) {
  const OptimalAccess opt = optimal_q(load_of(0.1, EnergyModel::unbounded(1.0)));
  EXPECT_EQ(opt.access.kind, AccessSet::Kind::kPoint);
  EXPECT_NEAR(opt.access.lo, kLambdaMax / 0.1, 1e-12);
}

TEST(OptimalQInfinite, AgreesWithGridSearch) {
  const Load load = load_of(0.2, EnergyModel::unbounded(0.5));
  double best_q = 0.0;
  double best = -1.0;
  for (int i = 0; i <= 100'000; ++i) {
    const double q = i / 100'000.0;
    const double c = evaluate_aloha(load, q).capacity;
    if (c > best) {
      best = c;
      best_q = q;
    }
  }
  EXPECT_NEAR(best_q, optimal_q(load).access.lo, 1e-4);
}

TEST(OptimalQFinite, UnitBatteryRoot) {
  const Load load{0.1, 0.023, std::log2(3.0), EnergyModel::finite(0.5, 1)};
  const OptimalAccess opt = optimal_q(load);
  EXPECT_EQ(opt.access.kind, AccessSet::Kind::kPoint);
  EXPECT_NEAR(opt.access.lo, 0.298701298701, 1e-11);
  EXPECT_NEAR(effective_access(load.energy, opt.access.lo), 0.23, 1e-12);
}

TEST(OptimalQFinite, ClampsWhenUnbracketed) {
  const Load load{0.02, 0.023, std::log2(3.0), EnergyModel::finite(0.5, 1)};
  EXPECT_FALSE(solve_effective_access(load).has_value());
  EXPECT_EQ(optimal_q(load).access.lo, 1.0);
}

TEST(OptimalQFinite, EqualRatesPoint) {
  // f_5(0.5) = 0.5 * 5 / 5.5, so this load puts the optimum at q = p.
  const double ratio = 0.5 * 5.0 / 5.5;
  const Load load{1.0, ratio, 1.0, EnergyModel::finite(0.5, 5)};
  EXPECT_NEAR(optimal_q(load).access.lo, 0.5, 1e-10);
}

TEST(UnitBatteryOptimum, CorrectedAndPrintedForms) {
  const UnitBatteryOptimum opt = unit_battery_optimum(0.5, 0.1, 0.023);
  EXPECT_NEAR(opt.q_star, 0.298701298701, 1e-12);
  EXPECT_NEAR(opt.printed_form, 0.186991869919, 1e-12);
  EXPECT_NEAR(occupancy_finite(0.5, opt.q_star, 1).effective_access, 0.23,
              1e-12);
  EXPECT_GT(std::abs(occupancy_finite(0.5, opt.printed_form, 1).effective_access -
                     0.23),
            1e-3);
  EXPECT_NEAR(unit_battery_optimum(1.0, 0.1, 0.023).q_star, 0.23, 1e-15);
  EXPECT_EQ(unit_battery_optimum(0.5, 0.02, 0.023).q_star, 1.0);
}

TEST(AccessSet, Formatting) {
  EXPECT_EQ(AccessSet::point(0.25).to_string(), "point(0.25)");
  EXPECT_EQ(AccessSet::interval(0.5, 1.0).to_string(), "interval(0.5;1)");
  EXPECT_EQ(AccessSet::interval(1.0, 1.0).kind, AccessSet::Kind::kPoint);
  EXPECT_TRUE(AccessSet::interval(0.5, 1.0).contains(0.75));
  EXPECT_FALSE(AccessSet::point(0.5).contains(0.51));
}

}  // namespace
}  // namespace ehcap

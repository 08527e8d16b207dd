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

#include "ehcap/csma.h"

namespace ehcap {
namespace {

const ChannelParams kChannel(3.0, 2.0, 2.0);

CsmaParams params_of(double lambda, int slots, double p = 0.5) {
  return CsmaParams(NetworkParams(lambda, kChannel, EnergyModel::unbounded(p)),
                    slots);
}

TEST(CsmaParams, Validation) {
  const NetworkParams net(0.01, kChannel, EnergyModel::unbounded(0.5));
  EXPECT_THROW(CsmaParams(net, 0), ValidationError);
  EXPECT_THROW(CsmaParams(net.with_energy(EnergyModel::finite(0.5, 2)), 1),
               ValidationError);
}

TEST(Backoff, HighEnergyBranch) {
  const Backoff b = backoff_probability(params_of(0.01, 1));
  EXPECT_EQ(b.branch, BackoffBranch::kHighEnergy);
  EXPECT_NEAR(b.p_b, 0.214323036290, 1e-12);
  EXPECT_NEAR(b.nu, 0.5, 1e-15);
  EXPECT_LT(b.r, 1.0);
}

TEST(Backoff, EnergyLimitedBranch) {
  struct Case {
    double lambda;
    double p_b;
  };
  for (const Case c : {Case{0.035, 0.540042974819}, Case{0.05, 0.609820874002},
                       Case{0.1, 0.729201905826}}) {
    const Backoff b = backoff_probability(params_of(c.lambda, 1));
    EXPECT_EQ(b.branch, BackoffBranch::kEnergyLimited) << c.lambda;
    EXPECT_NEAR(b.p_b, c.p_b, 1e-11) << c.lambda;
    EXPECT_EQ(b.r, 1.0);
  }
}

TEST(Backoff, SelfConsistent) {
  for (double lambda : {1e-4, 0.01, 0.02, 0.03, 0.035, 0.1, 1.0, 50.0}) {
    for (double p : {0.05, 0.5, 0.95, 1.0}) {
      const CsmaParams params = params_of(lambda, 2, p);
      const Backoff b = backoff_probability(params);
      EXPECT_LE(backoff_fixed_point_residual(params, b.p_b), 1e-10)
          << lambda << " " << p;
      EXPECT_NEAR(b.r, std::min(p / (1.0 - b.p_b), 1.0), 1e-12);
    }
  }
}

TEST(Backoff, PrintedHighEnergyFormOmitsEnergy) {
  const CsmaParams params = params_of(0.01, 1);
  EXPECT_NEAR(backoff_probability_printed_high_energy(params), 0.382711708695,
              1e-11);
  EXPECT_GT(backoff_fixed_point_residual(
                params, backoff_probability_printed_high_energy(params)),
            0.1);
}

TEST(FailureProbability, PacketModelSingleSlotEqualsBackoff) {
  const CsmaParams params = params_of(0.01, 1);
  const Backoff b = backoff_probability(params);
  const FailureProbability f =
      failure_probability_packet_model(params, b.p_b, b.r);
  EXPECT_NEAR(f.value, b.p_b, 1e-12);
}

TEST(FailureProbability, FrozenOutage) {
  struct Case {
    int slots;
    double packet_fail;
    double packet_out;
    double sum_fail;
    double sum_out;
    double fkg;
  };
  const Case cases[] = {
      {1, 0.214323, 0.382712, 0.909306, 0.928744, 0.382712},
      {2, 0.331030, 0.474406, 0.986029, 0.989024, 0.515011},
      {4, 0.491344, 0.600360, 0.998905, 0.999139, 0.700622},
  };
  for (const Case& c : cases) {
    const CsmaResult res = evaluate_csma(params_of(0.01, c.slots));
    EXPECT_NEAR(res.p_fail_given_no_backoff, c.packet_fail, 1e-6);
    EXPECT_NEAR(res.p_out, c.packet_out, 1e-6);
    EXPECT_NEAR(res.p_fail_inclusion_exclusion, c.sum_fail, 1e-6);
    EXPECT_NEAR(res.p_out_inclusion_exclusion, c.sum_out, 1e-6);
    EXPECT_NEAR(res.fkg_bound, c.fkg, 1e-6);
  }
}

TEST(FailureProbability, SingleSlotClosedForm) {
  const CsmaResult res = evaluate_csma(params_of(0.01, 1));
  ASSERT_TRUE(res.p_fail_l1_closed_form.has_value());
  EXPECT_NEAR(*res.p_fail_l1_closed_form, 0.113616, 1e-6);
  EXPECT_FALSE(evaluate_csma(params_of(0.01, 2)).p_fail_l1_closed_form);
  EXPECT_THROW(failure_probability_l1_closed_form(params_of(0.01, 2), 0.2, 1.0),
               ValidationError);
}

TEST(FailureProbability, SilentNetworkNeverFails) {
  const CsmaParams params = params_of(0.01, 3);
  EXPECT_EQ(failure_probability(params, 0.2, 0.0).value, 0.0);
  EXPECT_EQ(failure_probability_packet_model(params, 0.2, 0.0).value, 0.0);
}

TEST(EvaluateCsma, OutageWithinFkgBound) {
  for (double lambda : {1e-5, 0.003, 0.01, 0.035, 0.1, 0.5}) {
    for (int slots : {1, 2, 3, 6, 10}) {
      const CsmaResult res = evaluate_csma(params_of(lambda, slots));
      EXPECT_LE(res.p_out, res.fkg_bound + 1e-9) << lambda << " " << slots;
      EXPECT_GE(res.p_out, res.p_b);
      EXPECT_NEAR(res.capacity,
                  lambda * (1.0 - res.p_out) * std::log2(3.0), 1e-15);
    }
  }
}

TEST(EvaluateCsma, SparseNetworkRarelyBacksOff) {
  const CsmaResult res = evaluate_csma(params_of(1e-6, 2));
  EXPECT_LT(res.p_b, 1e-4);
  EXPECT_LT(res.p_out, 1e-3);
}

TEST(EvaluateCsma, LongPacketsWarnAboutCancellation) {
  EXPECT_TRUE(evaluate_csma(params_of(0.01, 20)).precision_warning);
  EXPECT_FALSE(evaluate_csma(params_of(0.01, 4)).precision_warning);
}

TEST(FkgBound, Values) {
  EXPECT_NEAR(fkg_outage_bound(0.2, 1), 0.36, 1e-15);
  EXPECT_EQ(fkg_outage_bound(0.0, 5), 0.0);
}

}  // namespace
}  // namespace ehcap

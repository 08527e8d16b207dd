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
#include <numbers>
#include <vector>

#include "ehcap/aloha.h"
#include "ehcap/csma.h"
#include "ehcap/montecarlo.h"

namespace ehcap {
namespace {

const ChannelParams kChannel(3.0, 2.0, 2.0);

SimConfig config_with(std::int64_t trials, std::uint64_t seed) {
  SimConfig config = SimConfig::for_channel(kChannel);
  config.trials = trials;
  config.seed = seed;
  return config;
}

TEST(StreamSeed, DistinctStreams) {
  EXPECT_NE(stream_seed(1, 1, 0), stream_seed(1, 1, 1));
  EXPECT_NE(stream_seed(1, 1, 0), stream_seed(1, 2, 0));
  EXPECT_NE(stream_seed(1, 1, 0), stream_seed(2, 1, 0));
  EXPECT_EQ(stream_seed(5, 3, 9), stream_seed(5, 3, 9));
}

TEST(Rng, UniformRanges) {
  Rng rng(3);
  double sum = 0.0;
  for (int i = 0; i < 100'000; ++i) {
    const double u = rng.uniform();
    const double v = rng.uniform_positive();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    ASSERT_GT(v, 0.0);
    ASSERT_LE(v, 1.0);
    sum += rng.exponential();
  }
  EXPECT_NEAR(sum / 100'000, 1.0, 0.015);
}

TEST(SamplePpp, EmptyAtZeroDensity) {
  Rng rng(1);
  EXPECT_TRUE(sample_ppp(0.0, 100.0, rng).empty());
  EXPECT_THROW(sample_ppp(-1.0, 100.0, rng), ValidationError);
}

TEST(SamplePpp, PoissonCountsInsideDisc) {
  Rng rng(2);
  const double mean = 0.1 * std::numbers::pi * 100.0 * 100.0;
  constexpr int kDraws = 10'000;
  double sum = 0.0;
  double sum_sq = 0.0;
  for (int i = 0; i < kDraws; ++i) {
    const std::vector<Point> pts = sample_ppp(0.1, 100.0, rng);
    const double n = static_cast<double>(pts.size());
    sum += n;
    sum_sq += n * n;
    if (i < 10) {
      for (const Point& p : pts) ASSERT_LE(std::hypot(p.x, p.y), 100.0);
    }
  }
  const double avg = sum / kDraws;
  const double var = sum_sq / kDraws - avg * avg;
  EXPECT_NEAR(avg, mean, 3.0 * std::sqrt(mean / kDraws));
  // Poisson: variance equals the mean.
  EXPECT_NEAR(var / mean, 1.0, 0.05);
}

TEST(SamplePpp, Deterministic) {
  Rng a(77);
  Rng b(77);
  const std::vector<Point> pa = sample_ppp(0.01, 50.0, a);
  const std::vector<Point> pb = sample_ppp(0.01, 50.0, b);
  ASSERT_EQ(pa.size(), pb.size());
  for (std::size_t i = 0; i < pa.size(); ++i) {
    EXPECT_EQ(pa[i].x, pb[i].x);
    EXPECT_EQ(pa[i].y, pb[i].y);
  }
}

TEST(TypicalSir, NoActiveInterferers) {
  Rng rng(4);
  const std::vector<Point> pts = {{1.0, 0.0}, {0.0, 3.0}};
  const std::vector<std::uint8_t> marks = {0, 0};
  EXPECT_TRUE(std::isinf(typical_sir(pts, marks, kChannel, rng)));
  EXPECT_TRUE(std::isinf(typical_sir({}, {}, kChannel, rng)));
  const std::vector<std::uint8_t> short_marks = {1};
  EXPECT_THROW(typical_sir(pts, short_marks, kChannel, rng), ValidationError);
}

TEST(TypicalSir, EquidistantInterfererIsEvenOdds) {
  // With one interferer at the link distance, SIR is a ratio of two i.i.d.
  // exponentials, so P(SIR > 1) = 1/2.
  Rng rng(5);
  const std::vector<Point> pts = {{0.0, kChannel.d()}};
  const std::vector<std::uint8_t> marks = {1};
  int above = 0;
  constexpr int kTrials = 200'000;
  for (int i = 0; i < kTrials; ++i) {
    above += typical_sir(pts, marks, kChannel, rng) > 1.0 ? 1 : 0;
  }
  EXPECT_NEAR(above / static_cast<double>(kTrials), 0.5,
              3.0 * std::sqrt(0.25 / kTrials));
}

TEST(SimConfig, Validation) {
  SimConfig config = SimConfig::for_channel(kChannel);
  EXPECT_NO_THROW(config.validate(kChannel));
  EXPECT_NEAR(config.window_radius, 20.0 * 2.0 * std::cbrt(2.0), 1e-12);
  config.window_radius = 30.0;
  EXPECT_THROW(config.validate(kChannel), ValidationError);
  config = SimConfig::for_channel(kChannel);
  config.trials = 0;
  EXPECT_THROW(config.validate(kChannel), ValidationError);
}

TEST(SimEstimate, ZScore) {
  const SimEstimate est{0.5, 0.01, 100, 1};
  EXPECT_NEAR(est.z_score(0.48), 2.0, 1e-12);
  EXPECT_TRUE(est.agrees_with(0.48, 3.0));
  EXPECT_FALSE(est.agrees_with(0.45, 3.0));
  const SimEstimate exact{1.0, 0.0, 100, 1};
  EXPECT_EQ(exact.z_score(1.0), 0.0);
  EXPECT_TRUE(std::isinf(exact.z_score(0.9)));
}

TEST(AlohaEstimate, SilentNetworkAlwaysSucceeds) {
  const NetworkParams params(0.1, kChannel, EnergyModel::unbounded(0.5));
  const SimEstimate est = estimate_aloha_psuc(params, 0.0, config_with(1000, 1));
  EXPECT_EQ(est.mean, 1.0);
  EXPECT_EQ(est.std_error, 0.0);
}

TEST(AlohaEstimate, UnitBatteryMatchesClosedForm) {
  const NetworkParams params(0.05, kChannel, EnergyModel::finite(0.5, 1));
  const SimEstimate est =
      estimate_aloha_psuc(params, 1.0, config_with(200'000, 3));
  EXPECT_TRUE(est.agrees_with(evaluate_aloha(params, 1.0).p_suc, 3.0))
      << est.mean << " +- " << est.std_error;
}

TEST(AlohaEstimate, TruncatedWindowIsBiasedUpward) {
  // Without the outer-region correction the missing interference shows up
  // as excess success.
  const NetworkParams params(0.1, kChannel, EnergyModel::unbounded(0.5));
  SimConfig config = config_with(200'000, 4);
  config.far_field = false;
  const SimEstimate est = estimate_aloha_psuc(params, 0.23, config);
  EXPECT_GT(est.z_score(evaluate_aloha(params, 0.23).p_suc), 5.0);
}

TEST(AlohaEstimate, IndependentOfThreadCount) {
  const NetworkParams params(0.1, kChannel, EnergyModel::unbounded(0.5));
  SimConfig config = config_with(20'000, 9);
  const SimEstimate one = estimate_aloha_psuc(params, 0.23, config);
  config.threads = 3;
  const SimEstimate three = estimate_aloha_psuc(params, 0.23, config);
  EXPECT_EQ(one.mean, three.mean);
  EXPECT_EQ(one.std_error, three.std_error);
}

TEST(CsmaEstimate, SparseNetwork) {
  const CsmaParams params(
      NetworkParams(1e-6, kChannel, EnergyModel::unbounded(0.5)), 2);
  SimConfig config = config_with(20'000, 5);
  config.window_radius = 100.0;
  const CsmaEstimate est = estimate_csma(params, config);
  EXPECT_LT(est.p_b.mean, 1e-3);
  EXPECT_LT(est.p_out.mean, 1e-3);
}

TEST(CsmaEstimate, BackoffMatchesFixedPoint) {
  for (double lambda : {0.01, 0.1}) {
    const CsmaParams params(
        NetworkParams(lambda, kChannel, EnergyModel::unbounded(0.5)), 1);
    const Backoff b = backoff_probability(params);
    const CsmaEstimate est = estimate_csma(params, config_with(50'000, 6));
    EXPECT_EQ(est.branch, b.branch);
    EXPECT_TRUE(est.p_b.agrees_with(b.p_b, 3.0))
        << lambda << ": " << est.p_b.mean << " +- " << est.p_b.std_error;
  }
}

TEST(CsmaEstimate, OutageRespectsFkgBound) {
  const CsmaParams params(
      NetworkParams(0.01, kChannel, EnergyModel::unbounded(0.5)), 2);
  const CsmaEstimate est = estimate_csma(params, config_with(100'000, 7));
  const double bound = fkg_outage_bound(est.p_b.mean, 2);
  EXPECT_LE(est.p_out.mean, bound + 3.0 * est.p_out.std_error);
  EXPECT_TRUE(est.p_out.agrees_with(evaluate_csma(params).p_out, 3.0));
}

TEST(CsmaEstimate, IndependentOfThreadCount) {
  const CsmaParams params(
      NetworkParams(0.05, kChannel, EnergyModel::unbounded(0.5)), 3);
  SimConfig config = config_with(5'000, 8);
  const CsmaEstimate one = estimate_csma(params, config);
  config.threads = 4;
  const CsmaEstimate four = estimate_csma(params, config);
  EXPECT_EQ(one.p_b.mean, four.p_b.mean);
  EXPECT_EQ(one.p_fail.mean, four.p_fail.mean);
  EXPECT_EQ(one.p_out.mean, four.p_out.mean);
}

}  // namespace
}  // namespace ehcap

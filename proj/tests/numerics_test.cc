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
#include <stdexcept>
#include <vector>

#include "ehcap/numerics.h"

namespace ehcap {
namespace {

// Plain bisection on w e^w = x over the principal branch.
double lambert_by_bisection(double x) {
  double lo = -1.0;
  double hi = std::max(1.0, std::log1p(x) + 1.0);
  for (int i = 0; i < 400; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid * std::exp(mid) < x) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// 2 pi s^2 * int_0^inf u (1 - (1 - nu / (1 + u^alpha))^ell) du by the
// midpoint rule, with the leading-order tail beyond the cutoff.
double spatial_integral_by_sum(int ell, double nu, const ChannelParams& ch) {
  const double alpha = ch.alpha();
  const double cutoff = 3000.0;
  const double h = 2e-4;
  double sum = 0.0;
  for (double u = 0.5 * h; u < cutoff; u += h) {
    sum += u * (1.0 - std::pow(1.0 - nu / (1.0 + std::pow(u, alpha)), ell));
  }
  sum *= h;
  sum += ell * nu * std::pow(cutoff, 2.0 - alpha) / (alpha - 2.0);
  const double s = ch.length_scale();
  return 2.0 * std::numbers::pi * s * s * sum;
}

TEST(LambertW0, SpecialValues) {
  EXPECT_EQ(lambert_w0(0.0), 0.0);
  EXPECT_NEAR(lambert_w0(std::numbers::e), 1.0, 1e-15);
  EXPECT_NEAR(lambert_w0(-1.0 / std::numbers::e), -1.0, 1e-7);
  EXPECT_NEAR(lambert_w0(4.826), 1.306594122276, 1e-12);
}

TEST(LambertW0, AgreesWithBisection) {
  std::vector<double> xs = {-0.3678, -0.3, -0.1, -1e-8, 1e-10, 0.01, 0.5,
                            1.0,     2.0,  4.8241917, 10.0, 123.4, 1e4, 1e8,
                            1e15};
  for (double x : xs) {
    const double w = lambert_w0(x);
    EXPECT_NEAR(w, lambert_by_bisection(x), 1e-12 * std::max(1.0, std::abs(w)))
        << "x=" << x;
    EXPECT_NEAR(w * std::exp(w), x, 1e-13 * std::max(1.0, std::abs(x)))
        << "x=" << x;
  }
}

TEST(LambertW0, RejectsBelowBranchPoint) {
  EXPECT_THROW(lambert_w0(-0.5), std::domain_error);
  EXPECT_TRUE(std::isnan(lambert_w0(std::nan(""))));
}

TEST(FindRootIncreasing, SolvesAndReportsMissingBracket) {
  auto cube = [](double x) { return x * x * x; };
  const auto root = find_root_increasing(cube, 0.125, 0.0, 1.0, 1e-14);
  ASSERT_TRUE(root.has_value());
  EXPECT_NEAR(*root, 0.5, 1e-13);
  EXPECT_FALSE(find_root_increasing(cube, 2.0, 0.0, 1.0, 1e-14).has_value());
  EXPECT_THROW(find_root_increasing(cube, 0.1, 1.0, 0.0, 1e-14),
               ValidationError);
}

TEST(SpatialIntegral, SingleSlotHasClosedForm) {
  const ChannelParams channels[] = {{3.0, 1.0, 1.0}, {3.0, 2.0, 2.0},
                                    {4.0, 1.0, 1.0}, {2.5, 3.0, 0.7}};
  for (const ChannelParams& ch : channels) {
    for (double nu : {0.05, 0.5, 1.0}) {
      const double exact = nu * ch.d() * ch.d() *
                           std::pow(ch.theta(), 2.0 / ch.alpha()) *
                           kappa(ch.alpha());
      EXPECT_NEAR(csma_spatial_integral(1, nu, ch) / exact, 1.0, 1e-9);
    }
  }
}

TEST(SpatialIntegral, FrozenValues) {
  const ChannelParams ch(3.0, 1.0, 1.0);
  EXPECT_NEAR(csma_spatial_integral(1, 1.0, ch), 7.5976250103, 1e-8);
  EXPECT_NEAR(csma_spatial_integral(2, 0.5, ch), 6.96448959282, 1e-8);
  EXPECT_EQ(csma_spatial_integral(0, 0.7, ch), 0.0);
  EXPECT_EQ(csma_spatial_integral(3, 0.0, ch), 0.0);
}

TEST(SpatialIntegral, AgreesWithMidpointSum) {
  const ChannelParams ch(3.0, 2.0, 2.0);
  for (int ell : {1, 2, 3, 5}) {
    for (double nu : {0.3, 1.0}) {
      const double fast = csma_spatial_integral(ell, nu, ch);
      EXPECT_NEAR(fast / spatial_integral_by_sum(ell, nu, ch), 1.0, 1e-5)
          << "ell=" << ell << " nu=" << nu;
    }
  }
}

TEST(SpatialIntegral, IncreasesInSlotsAndActivity) {
  const ChannelParams ch(3.0, 2.0, 2.0);
  double prev = 0.0;
  for (int ell = 1; ell <= 6; ++ell) {
    const double cur = csma_spatial_integral(ell, 0.4, ch);
    EXPECT_GT(cur, prev);
    prev = cur;
  }
  EXPECT_LT(csma_spatial_integral(3, 0.2, ch), csma_spatial_integral(3, 0.6, ch));
}

TEST(SpatialIntegral, OuterPartMatchesArctangentForm) {
  // For alpha = 4: int_U^inf u / (1 + u^4) du = pi/4 - atan(U^2) / 2.
  const ChannelParams ch(4.0, 16.0, 1.0);  // length scale 2
  const double s = ch.length_scale();
  for (double radius : {0.5, 2.0, 10.0, 400.0}) {
    const double u = radius / s;
    const double exact = 2.0 * std::numbers::pi * s * s *
                         (std::numbers::pi / 4.0 - 0.5 * std::atan(u * u));
    EXPECT_NEAR(csma_spatial_integral_beyond(1, 1.0, ch, radius) / exact, 1.0,
                1e-8)
        << "radius=" << radius;
  }
}

TEST(SpatialIntegral, InnerAndOuterPartsAddUp) {
  const ChannelParams ch(3.0, 2.0, 2.0);
  const double total = csma_spatial_integral(2, 1.0, ch);
  const double outer = csma_spatial_integral_beyond(2, 1.0, ch, 50.0);
  EXPECT_GT(outer, 0.0);
  EXPECT_LT(outer, total);
  EXPECT_NEAR(csma_spatial_integral_beyond(2, 1.0, ch, 1e-9), total,
              1e-8 * total);
}

TEST(AlternatingBinomialSum, MatchesBinomialTheorem) {
  for (int n : {1, 4, 10, 17}) {
    const double x = 0.37;
    std::vector<double> terms(n + 1);
    for (int k = 0; k <= n; ++k) terms[k] = std::pow(x, k);
    const AlternatingSum sum = alternating_binomial_sum(terms);
    EXPECT_NEAR(sum.value, std::pow(1.0 - x, n), 1e-13) << "n=" << n;
    EXPECT_FALSE(sum.precision_warning);
  }
  std::vector<double> long_terms(kWellConditionedTerms + 1, 1.0);
  EXPECT_TRUE(alternating_binomial_sum(long_terms).precision_warning);
}

TEST(QuadratureSpec, Validation) {
  EXPECT_NO_THROW(QuadratureSpec{}.validate());
  EXPECT_THROW((QuadratureSpec{0.0, 1e4}.validate()), ValidationError);
  EXPECT_THROW((QuadratureSpec{1e-8, 2.0}.validate()), ValidationError);
}

}  // namespace
}  // namespace ehcap

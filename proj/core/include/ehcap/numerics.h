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

#ifndef EHCAP_NUMERICS_H_
#define EHCAP_NUMERICS_H_

#include <cmath>
#include <optional>
#include <span>

#include "ehcap/model.h"

namespace ehcap {

// Controls csma_spatial_integral. The radial integral is evaluated on
// [0, truncation_radius_factor] in units of ChannelParams::length_scale()
// and the remainder is added from its leading-order asymptotic.
struct QuadratureSpec {
  double rel_tol = 1e-8;
  double truncation_radius_factor = 1e4;

  // Throws ValidationError unless rel_tol in (0, 1) and the factor >= 10.
  void validate() const;
};

// Principal branch of the Lambert W function: the w >= -1 solving
// w * exp(w) = x. Throws std::domain_error for x < -1/e.
double lambert_w0(double x);

// Bisection for f(x) = target on [lo, hi] with f nondecreasing. Returns the
// midpoint of a bracket no wider than tol, or nullopt when target lies
// outside [f(lo), f(hi)].
template <typename F>
std::optional<double> find_root_increasing(F&& f, double target, double lo,
                                           double hi, double tol) {
  if (!(lo < hi) || !(tol > 0.0)) {
    throw ValidationError("bracket", "need lo < hi and tol > 0");
  }
  const double f_lo = f(lo);
  const double f_hi = f(hi);
  if (!(f_lo <= target && target <= f_hi)) return std::nullopt;
  if (f_lo == target) return lo;
  if (f_hi == target) return hi;
  for (int iter = 0; iter < 2000 && hi - lo > tol; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (f(mid) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Integral over the plane of 1 - (1 - nu / (1 + (|x| / s)^alpha))^ell with
// s = channel.length_scale(), i.e.
//   2 pi s^2 * int_0^inf u (1 - (1 - nu / (1 + u^alpha))^ell) du.
// With nu = 1 and ell = 1 this is kappa(alpha) * s^2 = 1 / lambda_max.
double csma_spatial_integral(int ell, double nu, const ChannelParams& channel,
                             const QuadratureSpec& spec = {});

// Same integrand restricted to |x| > radius.
double csma_spatial_integral_beyond(int ell, double nu,
                                    const ChannelParams& channel,
                                    double radius,
                                    const QuadratureSpec& spec = {});

struct AlternatingSum {
  double value;
  // Set when the cancellation in the sum may cost more than ~1e-10 of
  // absolute accuracy (more than kWellConditionedTerms terms).
  bool precision_warning;
};

// Terms beyond this count (n + 1 > 18, i.e. packet length L > 16) lose
// digits to cancellation: C(n, n/2) grows like 2^n / sqrt(n).
inline constexpr int kWellConditionedTerms = 18;

// sum_{l=0}^{n} (-1)^l C(n, l) terms[l] with n = terms.size() - 1, using
// Neumaier-compensated summation. Throws ValidationError on empty input.
AlternatingSum alternating_binomial_sum(std::span<const double> terms);

}  // namespace ehcap

#endif  // EHCAP_NUMERICS_H_

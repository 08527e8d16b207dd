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

#include "ehcap/numerics.h"

#include <algorithm>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace ehcap {

void QuadratureSpec::validate() const {
  if (!(rel_tol > 0.0 && rel_tol < 1.0)) {
    throw ValidationError("rel_tol", "must lie in (0, 1)");
  }
  if (!(truncation_radius_factor >= 10.0)) {
    throw ValidationError("truncation_radius_factor", "must be at least 10");
  }
}

// ---------------------------------------------------------------------------
// Lambert W0

namespace {

constexpr double kInvE = 0.36787944117144232159552377016146;

double lambert_initial_guess(double x) {
  if (x < -0.25) {
    // Branch-point series in p = sqrt(2 (e x + 1)).
    const double p = std::sqrt(std::max(0.0, 2.0 * (std::numbers::e * x + 1.0)));
    return -1.0 + p * (1.0 + p * (-1.0 / 3.0 + p * (11.0 / 72.0)));
  }
  if (x < 3.0) {
    // Winitzki's uniform approximation.
    const double l = std::log1p(x);
    return l * (1.0 - std::log1p(l) / (2.0 + l));
  }
  const double l = std::log(x);
  const double ll = std::log(l);
  return l - ll + ll / l;
}

}  // namespace

double lambert_w0(double x) {
  if (std::isnan(x)) return x;
  if (x < -kInvE) {
    // Allow rounding of -1/e itself.
    if (x >= -kInvE * (1.0 + 4.0 * std::numeric_limits<double>::epsilon())) {
      return -1.0;
    }
    throw std::domain_error("lambert_w0: argument below -1/e: " +
                            std::to_string(x));
  }
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return x;

  // Bracket: W is increasing, W(-1/e) = -1, W(0) = 0, W(e) = 1 and
  // W(x) <= log(x) for x >= e.
  double lo = x < 0.0 ? -1.0 : 0.0;
  double hi = x < 0.0 ? 0.0 : (x <= std::numbers::e ? 1.0 : std::log(x));
  double w = std::clamp(lambert_initial_guess(x), lo, hi);

  for (int iter = 0; iter < 200; ++iter) {
    const double ew = std::exp(w);
    const double residual = w * ew - x;
    if (residual == 0.0) return w;
    if (residual > 0.0) {
      hi = w;
    } else {
      lo = w;
    }
    // Halley step for g(w) = w e^w - x.
    const double wp1 = w + 1.0;
    double next = w;
    if (wp1 != 0.0) {
      next = w - residual / (ew * wp1 - (w + 2.0) * residual / (2.0 * wp1));
    }
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    const double step = std::abs(next - w);
    w = next;
    if (step <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(w) ||
        hi - lo <= std::numeric_limits<double>::min()) {
      break;
    }
  }
  return w;
}

// ---------------------------------------------------------------------------
// Radial quadrature

namespace {

class RadialIntegrand {
 public:
  RadialIntegrand(int ell, double nu, double alpha)
      : ell_(ell), nu_(nu), alpha_(alpha) {}

  // u * (1 - (1 - nu / (1 + u^alpha))^ell)
  double operator()(double u) const {
    const double y = nu_ / (1.0 + std::pow(u, alpha_));
    if (y >= 1.0) return u;
    return -u * std::expm1(ell_ * std::log1p(-y));
  }

 private:
  int ell_;
  double nu_;
  double alpha_;
};

struct SimpsonPanel {
  double a, m, b;
  double fa, fm, fb;
  double whole;
};

double simpson(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

template <typename F>
double adaptive_simpson(const F& f, const SimpsonPanel& p, double tol,
                        int depth) {
  const double lm = 0.5 * (p.a + p.m);
  const double rm = 0.5 * (p.m + p.b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = simpson(p.a, p.m, p.fa, flm, p.fm);
  const double right = simpson(p.m, p.b, p.fm, frm, p.fb);
  const double delta = left + right - p.whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(f, {p.a, lm, p.m, p.fa, flm, p.fm, left}, 0.5 * tol,
                          depth - 1) +
         adaptive_simpson(f, {p.m, rm, p.b, p.fm, frm, p.fb, right}, 0.5 * tol,
                          depth - 1);
}

// Integrates f over [a, b] to relative accuracy rel_tol. The integrand is
// nonnegative, so a relative bound per panel bounds the total.
template <typename F>
double integrate_panel(const F& f, double a, double b, double rel_tol) {
  const double m = 0.5 * (a + b);
  const double fa = f(a);
  const double fm = f(m);
  const double fb = f(b);
  const double coarse = simpson(a, b, fa, fm, fb);
  // Seed the tolerance from a refined estimate so a lucky coarse value
  // cannot make the target too loose.
  const double q1 = 0.5 * (a + m);
  const double q3 = 0.5 * (m + b);
  const double refined = simpson(a, m, fa, f(q1), fm) + simpson(m, b, fm, f(q3), fb);
  const double scale = std::max(std::abs(coarse), std::abs(refined));
  const double tol = std::max(rel_tol * scale, 1e-300);
  return adaptive_simpson(f, {a, m, b, fa, fm, fb, coarse}, tol, 48);
}

// int_{u_lo}^{inf} of the radial integrand. Panels grow geometrically so
// each covers a comparable share of a power-law tail.
double radial_integral(int ell, double nu, double alpha, double u_lo,
                       const QuadratureSpec& spec) {
  const RadialIntegrand f(ell, nu, alpha);
  const double u_end = std::max(spec.truncation_radius_factor, 64.0 * u_lo);
  const double panel_tol = spec.rel_tol / 16.0;

  double total = 0.0;
  double a = u_lo;
  if (a < 1.0) {
    total += integrate_panel(f, a, 1.0, panel_tol);
    a = 1.0;
  }
  while (a < u_end) {
    const double b = std::min(2.0 * a, u_end);
    total += integrate_panel(f, a, b, panel_tol);
    a = b;
  }
  // For large u the integrand is ell nu u^(1 - alpha) (1 + O(u^-alpha)).
  total += ell * nu * std::pow(u_end, 2.0 - alpha) / (alpha - 2.0);
  return total;
}

void check_kernel_args(int ell, double nu) {
  if (ell < 0) throw ValidationError("ell", "must be nonnegative");
  require_probability(nu, "nu");
}

}  // namespace

double csma_spatial_integral(int ell, double nu, const ChannelParams& channel,
                             const QuadratureSpec& spec) {
  check_kernel_args(ell, nu);
  spec.validate();
  if (ell == 0 || nu == 0.0) return 0.0;
  const double s = channel.length_scale();
  return 2.0 * std::numbers::pi * s * s *
         radial_integral(ell, nu, channel.alpha(), 0.0, spec);
}

double csma_spatial_integral_beyond(int ell, double nu,
                                    const ChannelParams& channel,
                                    double radius,
                                    const QuadratureSpec& spec) {
  check_kernel_args(ell, nu);
  spec.validate();
  if (!(radius >= 0.0)) throw ValidationError("radius", "must be nonnegative");
  if (ell == 0 || nu == 0.0) return 0.0;
  const double s = channel.length_scale();
  return 2.0 * std::numbers::pi * s * s *
         radial_integral(ell, nu, channel.alpha(), radius / s, spec);
}

// ---------------------------------------------------------------------------
// Alternating binomial sum

AlternatingSum alternating_binomial_sum(std::span<const double> terms) {
  if (terms.empty()) {
    throw ValidationError("terms", "need at least one term");
  }
  const int n = static_cast<int>(terms.size()) - 1;

  double sum = 0.0;
  double compensation = 0.0;
  double binom = 1.0;  // C(n, l), built multiplicatively; exact for n <= 56
  for (int l = 0; l <= n; ++l) {
    const double term = (l % 2 == 0 ? 1.0 : -1.0) * binom * terms[l];
    const double t = sum + term;
    if (std::abs(sum) >= std::abs(term)) {
      compensation += (sum - t) + term;
    } else {
      compensation += (term - t) + sum;
    }
    sum = t;
    binom = binom * (n - l) / (l + 1);
  }
  return {sum + compensation, n + 1 > kWellConditionedTerms};
}

}  // namespace ehcap

// SPDX-License-Identifier: Apache-2.0
//
// iftrlib - analytical and Monte Carlo tools for two-ray fading channels
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "iftr/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "iftr/errors.hpp"

namespace iftr::specfun {

namespace {

constexpr double kEulerGamma = 0.57721566490153286060651209008240;
constexpr double kInf = std::numeric_limits<double>::infinity();

// Modified Lentz evaluation of a continued fraction
//   b0 + a1/(b1 + a2/(b2 + ...)),
// with coefficient callbacks a(i), b(i) for i >= 1.
template <typename FA, typename FB>
double lentz_cf(double b0, FA a, FB b, int max_iter = 400) {
  const double tiny = 1e-300;
  double f = (b0 == 0.0) ? tiny : b0;
  double c = f;
  double d = 0.0;
  for (int i = 1; i <= max_iter; ++i) {
    const double ai = a(i);
    const double bi = b(i);
    d = bi + ai * d;
    if (d == 0.0) d = tiny;
    c = bi + ai / c;
    if (c == 0.0) c = tiny;
    d = 1.0 / d;
    const double delta = c * d;
    f *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) return f;
  }
  throw truncation_error("continued fraction failed to converge");
}

// Lower regularized gamma by power series, for x < a + 1.
double gamma_p_series(double a, double x) {
  if (x == 0.0) return 0.0;
  double ap = a;
  double sum = 1.0 / a;
  double term = sum;
  for (int i = 0; i < 1000; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-17)
      return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
  }
  throw truncation_error("reg_lower_gamma series failed to converge");
}

// Upper regularized gamma by continued fraction, for x >= a + 1.
double gamma_q_cf(double a, double x) {
  const double f = lentz_cf(
      x + 1.0 - a, [&](int i) { return -i * (i - a); },
      [&](int i) { return x + 2.0 * i + 1.0 - a; });
  return std::exp(-x + a * std::log(x) - std::lgamma(a)) / f;
}

double e1_series(double x) {
  // E1(x) = -gamma - ln x + sum_{k>=1} (-1)^(k+1) x^k / (k k!),  0 < x <= 1
  double sum = 0.0;
  double term = 1.0;
  for (int k = 1; k <= 64; ++k) {
    term *= -x / k;
    sum -= term / k;
    if (std::fabs(term) < 1e-18 * (std::fabs(sum) + 1.0)) break;
  }
  return -kEulerGamma - std::log(x) + sum;
}

double e1_cf(double x) {
  // E1(x) = e^-x / (x + 1 - 1^2/(x + 3 - 2^2/(x + 5 - ...)))
  const double f = lentz_cf(
      x + 1.0, [&](int i) { return -static_cast<double>(i) * i; },
      [&](int i) { return x + 2.0 * i + 1.0; });
  return std::exp(-x) / f;
}

double ei_positive(double x) {
  if (x < 40.0) {
    // Ei(x) = gamma + ln x + sum_{k>=1} x^k / (k k!)  -- all terms positive
    double sum = 0.0;
    double term = 1.0;
    for (int k = 1; k <= 220; ++k) {
      term *= x / k;
      sum += term / k;
      if (term / k < 1e-18 * sum) break;
    }
    return kEulerGamma + std::log(x) + sum;
  }
  // Asymptotic series e^x/x * sum_k k!/x^k, truncated at its smallest term.
  double sum = 1.0;
  double term = 1.0;
  for (int k = 1; k < static_cast<int>(x); ++k) {
    const double next = term * k / x;
    if (next >= term) break;
    term = next;
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return std::exp(x) * sum / x;
}

}  // namespace

double log_gamma(double x) {
  if (!(x > 0.0)) throw std::domain_error("log_gamma: requires x > 0");
  return std::lgamma(x);
}

double reg_lower_gamma(double a, double x) {
  if (!(a > 0.0)) throw std::domain_error("reg_lower_gamma: requires a > 0");
  if (x < 0.0) throw std::domain_error("reg_lower_gamma: requires x >= 0");
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  return (x < a + 1.0) ? gamma_p_series(a, x) : 1.0 - gamma_q_cf(a, x);
}

double exp_integral_e1(double x) {
  if (!(x > 0.0)) throw std::domain_error("exp_integral_e1: requires x > 0");
  return (x <= 1.0) ? e1_series(x) : e1_cf(x);
}

double exp_integral_ei(double x) {
  if (x == 0.0) throw std::domain_error("exp_integral_ei: pole at x = 0");
  if (std::isnan(x)) return x;
  return (x < 0.0) ? -exp_integral_e1(-x) : ei_positive(x);
}

double upper_gamma_neg_int_scaled(int n, double x) {
  if (n < 0) throw std::domain_error("upper_gamma_neg_int: requires n >= 0");
  if (!(x > 0.0)) throw std::domain_error("upper_gamma_neg_int: requires x > 0");
  if (n == 0) return std::exp(x) * exp_integral_e1(x);
  if (x <= 1.5) {
    // forward recurrence y_k = (1 - x y_{k-1}) / k, stable for small x
    double y = std::exp(x) * exp_integral_e1(x);
    for (int k = 1; k <= n; ++k) y = (1.0 - x * y) / k;
    return y;
  }
  // y_n = 1/(x+n+1 - 1(n+1)/(x+n+3 - 2(n+2)/(x+n+5 - ...)))
  return 1.0 / lentz_cf(
                   x + n + 1.0,
                   [&](int i) { return -static_cast<double>(i) * (n + i); },
                   [&](int i) { return x + n + 2.0 * i + 1.0; });
}

std::vector<double> upper_gamma_neg_int_scaled_table(int n_max, double x) {
  if (n_max < 0) throw std::domain_error("upper_gamma_neg_int: requires n >= 0");
  if (!(x > 0.0)) throw std::domain_error("upper_gamma_neg_int: requires x > 0");
  std::vector<double> y(static_cast<size_t>(n_max) + 1);
  y[0] = std::exp(x) * exp_integral_e1(x);
  if (x <= 1.5) {
    for (int k = 1; k <= n_max; ++k) y[k] = (1.0 - x * y[k - 1]) / k;
  } else {
    for (int k = 1; k <= n_max; ++k) y[k] = upper_gamma_neg_int_scaled(k, x);
  }
  return y;
}

double upper_gamma_neg_int(int n, double x) {
  const double y = upper_gamma_neg_int_scaled(n, x);
  // Gamma(-n,x) = e^-x x^-n y_n; assemble in logs to survive large n ln x.
  return std::exp(-x - n * std::log(x) + std::log(y));
}

double log_binomial(std::int64_t n, std::int64_t k) {
  if (n < 0 || k < 0 || k > n) throw std::domain_error("log_binomial: requires 0 <= k <= n");
  if (k == 0 || k == n) return 0.0;
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

SignedLog signed_log_gamma(double x) {
  if (x > 0.0) return {std::lgamma(x), 1};
  if (x == std::floor(x)) return {kInf, 0};  // pole: 1/Gamma == 0 downstream
  // Gamma alternates sign between consecutive negative integers.
  const double fl = std::floor(x);
  const int sign = (static_cast<std::int64_t>(fl) % 2 == 0) ? 1 : -1;
  return {std::lgamma(x), sign};
}

SignedLog reg_gauss_2f1_log(double a, double b, double c, double z,
                            const SeriesControl& ctl) {
  if (!(z >= 0.0) || z >= 1.0)
    throw std::domain_error("reg_gauss_2f1: validated domain is 0 <= z < 1");
  if (ctl.max_terms < 1 || !(ctl.rel_tol > 0.0) || !(ctl.abs_tol > 0.0))
    throw std::domain_error("reg_gauss_2f1: invalid SeriesControl");

  const bool c_nonpos_int = (c <= 0.0) && (c == std::floor(c));
  const int k0 = c_nonpos_int ? static_cast<int>(1.0 - c) : 0;

  if (z == 0.0) {
    if (k0 > 0) return {-kInf, 0};
    const SignedLog g = signed_log_gamma(c);
    return {-g.log_abs, g.sign};
  }

  // Leading term t_{k0} = (a)_{k0} (b)_{k0} z^{k0} / (Gamma(c+k0) k0!),
  // built factor by factor so Pochhammer sign flips are tracked exactly.
  double lead_log = k0 * std::log(z) - std::lgamma(static_cast<double>(k0) + 1.0);
  int lead_sign = 1;
  for (int i = 0; i < k0; ++i) {
    const double fa = a + i;
    const double fb = b + i;
    if (fa == 0.0 || fb == 0.0) return {-kInf, 0};  // terminating numerator
    lead_log += std::log(std::fabs(fa)) + std::log(std::fabs(fb));
    if (fa < 0.0) lead_sign = -lead_sign;
    if (fb < 0.0) lead_sign = -lead_sign;
  }
  const SignedLog gck0 = signed_log_gamma(c + k0);
  if (gck0.sign == 0)
    throw std::domain_error("reg_gauss_2f1: Gamma pole not cleared");  // unreachable
  lead_log -= gck0.log_abs;
  lead_sign *= gck0.sign;

  // Scaled accumulation: true value = (sum) * exp(offset).
  double offset = lead_log;
  double term = static_cast<double>(lead_sign);
  double sum = term;
  int quiet = 0;
  for (int k = k0; k0 + ctl.max_terms > k; ++k) {
    const double ratio = (a + k) * (b + k) * z / ((c + k) * (k + 1.0));
    term *= ratio;
    sum += term;
    const double at = std::fabs(term);
    const bool abs_small =
        std::fabs(ratio) < 1.0 && at > 0.0 &&
        offset + std::log(at) < std::log(ctl.abs_tol);
    if (at < ctl.rel_tol * std::fabs(sum) || at == 0.0 || abs_small) {
      if (++quiet >= 3) {
        if (sum == 0.0) return {-kInf, 0};
        return {offset + std::log(std::fabs(sum)), sum > 0.0 ? 1 : -1};
      }
    } else {
      quiet = 0;
    }
    if (std::fabs(sum) > 1e280 || at > 1e280) {
      sum *= 1e-280;
      term *= 1e-280;
      offset += std::log(1e280);
    }
  }
  throw truncation_error("reg_gauss_2f1: series did not settle within max_terms");
}

double reg_gauss_2f1(double a, double b, double c, double z,
                     const SeriesControl& ctl) {
  const SignedLog r = reg_gauss_2f1_log(a, b, c, z, ctl);
  return r.sign * std::exp(r.log_abs);
}

}  // namespace iftr::specfun

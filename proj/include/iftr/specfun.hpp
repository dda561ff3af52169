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

#ifndef IFTR_SPECFUN_HPP
#define IFTR_SPECFUN_HPP

#include <cstdint>
#include <vector>

namespace iftr::specfun {

/// Termination policy shared by all infinite-series evaluations.
///
/// A series stops once the last term magnitude stays below
/// rel_tol * |partial sum| (or below abs_tol) for three consecutive terms,
/// and fails with truncation_error after max_terms.
struct SeriesControl {
  int max_terms = 10'000;
  double rel_tol = 1e-15;
  double abs_tol = 1e-300;
};

/// ln Gamma(x) for x > 0. Throws std::domain_error otherwise.
double log_gamma(double x);

/// Regularized lower incomplete gamma P(a,x) = gamma(a,x)/Gamma(a).
///
/// a > 0, x >= 0. Monotone nondecreasing in x, P(a,0) = 0, P(a,inf) = 1.
double reg_lower_gamma(double a, double x);

/// Exponential integral Ei(x) (Cauchy principal value for x > 0).
/// Ei(-x) = -E1(x) for x > 0. x == 0 is a pole and throws std::domain_error.
double exp_integral_ei(double x);

/// E1(x) = -Ei(-x) for x > 0.
double exp_integral_e1(double x);

/// Upper incomplete gamma with negative integer first parameter,
/// Gamma(-n, x) = int_x^inf t^(-n-1) e^(-t) dt, n >= 0, x > 0.
double upper_gamma_neg_int(int n, double x);

/// Scaled variant y_n = x^n e^x Gamma(-n,x), bounded in (0, 1/(x+n+1)]..-ish;
/// this is the form metric formulas consume (no overflow at small x).
double upper_gamma_neg_int_scaled(int n, double x);

/// y_0..y_n table of the scaled incomplete gamma above, one shared x.
std::vector<double> upper_gamma_neg_int_scaled_table(int n_max, double x);

/// Sign/log-magnitude pair for quantities spanning many orders of magnitude.
struct SignedLog {
  double log_abs;  // natural log of |value|; -inf encodes zero
  int sign;        // -1, 0, +1
};

/// Regularized Gauss hypergeometric function
///   2F1~(a,b;c;z) = sum_k (a)_k (b)_k z^k / (Gamma(c+k) k!)
/// valid for z in [0,1). c may be any real, including non-positive integers,
/// in which case the terms with k <= -c vanish and the series starts at
/// k = 1 - c. Result returned as sign + log magnitude so callers can fold it
/// into log-domain products without overflow.
SignedLog reg_gauss_2f1_log(double a, double b, double c, double z,
                            const SeriesControl& ctl = {});

/// Plain-value convenience wrapper of reg_gauss_2f1_log.
double reg_gauss_2f1(double a, double b, double c, double z,
                     const SeriesControl& ctl = {});

/// ln C(n,k) for 0 <= k <= n.
double log_binomial(std::int64_t n, std::int64_t k);

/// log|Gamma(x)| with the sign of Gamma(x), defined for non-integer x < 0 too.
SignedLog signed_log_gamma(double x);

}  // namespace iftr::specfun

#endif  // IFTR_SPECFUN_HPP

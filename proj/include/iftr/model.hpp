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

#ifndef IFTR_MODEL_HPP
#define IFTR_MODEL_HPP

#include <functional>
#include <span>
#include <vector>

#include "iftr/specfun.hpp"

namespace iftr {

/// Series truncation depth used by default wherever a mixture is expanded.
inline constexpr int kDefaultTruncation = 40;

/// Truncation depth treated as "effectively exact" in reference computations.
inline constexpr int kReferenceTruncation = 400;

/// Channel parameters of the two-ray model with independently fluctuating
/// specular components.
///
///   gamma_bar  mean SNR (linear scale)
///   m1, m2     fading severity of each specular component (> 0)
///   K          specular-to-diffuse average power ratio (>= 0)
///   delta      amplitude similarity of the two specular components, in [0,1]
struct IftrParams {
  double gamma_bar = 1.0;
  double m1 = 1.0;
  double m2 = 1.0;
  double K = 0.0;
  double delta = 0.0;

  /// Throws std::domain_error naming the violated constraint.
  void validate() const;
};

/// Per-component specular power ratios K1 >= K2 >= 0 with K1 + K2 = K and
/// K1*K2 = (K*delta/2)^2.
struct AncillaryParams {
  double K1 = 0.0;
  double K2 = 0.0;
};

AncillaryParams ancillary(const IftrParams& p);

/// Truncated Gamma-mixture representation of the SNR distribution: weight j
/// pairs with a Gamma(j+1, scale) component, scale = gamma_bar/(1+K).
struct GammaMixture {
  std::vector<double> weights;
  double scale = 1.0;
  double residual_mass = 0.0;

  int truncation() const { return static_cast<int>(weights.size()); }
  double pdf(double x) const;
  double cdf(double x) const;
  /// CDF restricted to components j in [j_lo, j_hi] (inclusive).
  double cdf_partial(double x, int j_lo, int j_hi) const;
};

/// Mixture weight A_j, evaluated from the model's closed-form coefficient
/// series where it is numerically well conditioned, and from the stable
/// latent-variable route otherwise. Always >= 0.
double coefficient(const IftrParams& p, int j);

/// First mixture weight A_0 in its dedicated closed form (single 2F1 term).
double coefficient_a0(const IftrParams& p);

GammaMixture build_mixture(const IftrParams& p, int J);

double pdf(const IftrParams& p, double x, int J = kDefaultTruncation);
double cdf(const IftrParams& p, double x, int J = kDefaultTruncation);

/// High-mean-SNR approximations: the leading mixture term alone.
double asymptotic_pdf(const IftrParams& p, double x);
double asymptotic_cdf(const IftrParams& p, double x);

/// Generalized MGF E{gamma^n e^(s gamma)} for real order n >= 0, via the
/// truncated mixture. Requires s < (1+K)/gamma_bar.
double gmgf_real(const IftrParams& p, double n, double s, int J = kDefaultTruncation);

/// Generalized MGF for integer order, in closed form (no mixture truncation).
/// Requires s < (1+K)/gamma_bar and s < m_i (1+K) / ((m_i + K_i) gamma_bar).
/// At s == 0 this reduces to moment_int.
double gmgf_int(const IftrParams& p, int n, double s);

/// n-th moment of the SNR, closed form for integer n.
double moment_int(const IftrParams& p, int n);

/// Moment of real order n >= 0 via the truncated mixture.
double moment_real(const IftrParams& p, double n, int J = kDefaultTruncation);

/// Amount of fading: Var(gamma)/E(gamma)^2.
double aof(const IftrParams& p);

/// Lifts a Nakagami-m average metric X(mean, m) to the two-ray model:
/// sum_j A_j X(scale*(j+1), j+1). The kernel receives integer m = j+1.
double nakagami_transfer(const IftrParams& p,
                         const std::function<double(double mean, int m)>& metric,
                         int J = kDefaultTruncation);

/// Kolmogorov-Smirnov distance between the series truncated after term j = J
/// and the reference truncated after j = J_ref, evaluated as a sup over the
/// given grid. J indexes the last retained term (matching the truncation
/// depth convention of the model's published accuracy tables).
double ks_truncation(const IftrParams& p, int J, int J_ref,
                     std::span<const double> grid);

/// Grid builder for ks_truncation: points linearly spaced on [0, x_max] with
/// cdf(x_max) just above 0.999 of the reference retained mass.
std::vector<double> ks_default_grid(const IftrParams& p, int J_ref,
                                    int points = 2000);

// --- special and limiting cases ------------------------------------------

/// Surrogate magnitudes standing in for infinite m / infinite K limits.
inline constexpr double kLimitSurrogate = 1e7;

IftrParams rayleigh(double gamma_bar);
IftrParams rice(double gamma_bar, double K, double m_big = kLimitSurrogate);
/// q in (0, 1]; q = 1 degenerates to Rayleigh.
IftrParams hoyt(double gamma_bar, double q);
IftrParams rician_shadowed(double gamma_bar, double K, double m);
IftrParams nakagami_limit(double gamma_bar, double m, double k_big = kLimitSurrogate);
IftrParams twdp_limit(double gamma_bar, double K, double delta,
                      double m_big = kLimitSurrogate);

namespace detail {

/// Closed-form coefficient series evaluated in signed log domain.
/// `condition` reports sum|term| / |sum term|; the value loses roughly
/// log10(condition) digits, so callers must treat large-condition results
/// as unusable.
struct SeriesEval {
  double value;
  double condition;
};
SeriesEval coefficient_series(const IftrParams& p, int j,
                              const specfun::SeriesControl& ctl = {});

/// Stable weight table A_0..A_{J-1} via quadrature over the latent
/// specular-fluctuation variables (positive integrand, no cancellation).
std::vector<double> weight_table(const IftrParams& p, int J);

}  // namespace detail

}  // namespace iftr

#endif  // IFTR_MODEL_HPP

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

#include "iftr/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "iftr/errors.hpp"
#include "iftr/specfun.hpp"

namespace iftr {

namespace {

// Per-branch SNR fraction B = beta*mean / (2(1+K) + beta*mean) and the BER
// bracket 1 - sqrt(B) sum_{k<=j} C(2k,k) ((1-B)/4)^k, for all j < J.
//
// Two algebraically equal routes: the direct partial sum, and the tail
// sum_{k>j} of the same series (sum_k C(2k,k) x^k = 1/sqrt(1-4x)). The tail
// route avoids the 1 - sqrt(B)*S_j cancellation that dominates once B is
// close to 1; the direct route converges fastest when B is small.
std::vector<double> ber_brackets(double B, int J) {
  const double x = (1.0 - B) / 4.0;
  const double sq = std::sqrt(B);
  std::vector<double> bracket(static_cast<size_t>(J));
  if (B >= 0.5) {
    // tail route; term_k = C(2k,k) x^k kept as one product so neither factor
    // overflows on its own
    std::vector<double> c;
    c.reserve(static_cast<size_t>(J) + 64);
    double term = 1.0;
    for (int k = 0;; ++k) {
      if (k > 0) term *= x * 2.0 * (2 * k - 1) / k;
      c.push_back(term);
      if (k >= J && term < 3e-26) break;
      if (k > J + 4096) break;  // unreachable for B >= 0.5
    }
    std::vector<double> tail(c.size() + 1, 0.0);
    for (int k = static_cast<int>(c.size()) - 1; k >= 0; --k)
      tail[k] = tail[k + 1] + c[k];
    for (int j = 0; j < J; ++j)
      bracket[j] = sq * (j + 1 < static_cast<int>(tail.size()) ? tail[j + 1] : 0.0);
  } else {
    double s = 0.0;
    double term = 1.0;
    for (int j = 0; j < J; ++j) {
      if (j > 0) term *= x * 2.0 * (2 * j - 1) / j;
      s += term;
      bracket[j] = std::max(0.0, 1.0 - sq * s);
    }
  }
  return bracket;
}

}  // namespace

void ModulationSpec::validate() const {
  if (terms.empty()) throw std::domain_error("ModulationSpec: needs at least one term");
  for (const Term& t : terms)
    if (!(t.alpha > 0.0) || !(t.beta > 0.0))
      throw std::domain_error("ModulationSpec: alpha and beta must be > 0");
}

void CciScenario::validate() const {
  if (antennas < 1 || antennas > 64)
    throw std::invalid_argument("CciScenario: antennas must be in [1, 64]");
  if (interferers < 1 || interferers > 64)
    throw std::invalid_argument("CciScenario: interferers must be in [1, 64]");
  if (!(interference_power > 0.0))
    throw std::domain_error("CciScenario: interference_power must be > 0");
  if (!(sir_threshold > 0.0))
    throw std::domain_error("CciScenario: sir_threshold must be > 0");
}

double avg_capacity(const IftrParams& p, int J) {
  p.validate();
  const std::vector<double> A = detail::weight_table(p, J);
  const double x = (1.0 + p.K) / p.gamma_bar;
  const std::vector<double> y = specfun::upper_gamma_neg_int_scaled_table(J - 1, x);
  double acc = 0.0;
  double prefix = 0.0;
  for (int j = 0; j < J; ++j) {
    prefix += y[j];
    acc += A[j] * prefix;
  }
  return acc / std::log(2.0);
}

double nakagami_capacity(double mean_snr, int m) {
  if (!(mean_snr > 0.0)) throw std::domain_error("nakagami_capacity: mean must be > 0");
  if (m < 1) throw std::domain_error("nakagami_capacity: integer m >= 1 required");
  const double x = m / mean_snr;
  const std::vector<double> y = specfun::upper_gamma_neg_int_scaled_table(m - 1, x);
  double s = 0.0;
  for (double v : y) s += v;
  return s / std::log(2.0);
}

double outage(const IftrParams& p, double gamma_th, int J) {
  if (!(gamma_th > 0.0)) throw std::domain_error("outage: gamma_th must be > 0");
  return cdf(p, gamma_th, J);
}

double outage_cci(const IftrParams& p, const CciScenario& sc) {
  p.validate();
  sc.validate();
  const int N = sc.antennas;
  const int L = sc.interferers;
  const double rp = sc.sir_threshold * sc.interference_power;
  const double s = -1.0 / rp;

  // workload guard: compositions of k into N parts over all k < L
  double comps = 0.0;
  for (int k = 0; k < L; ++k) {
    comps += std::exp(specfun::log_binomial(k + N - 1, N - 1));
    if (comps > 5e6)
      throw std::invalid_argument("outage_cci: composition enumeration too large");
  }

  std::vector<double> phi(static_cast<size_t>(L));
  std::vector<double> fact(static_cast<size_t>(L));
  for (int d = 0; d < L; ++d) {
    phi[d] = gmgf_int(p, d, s);
    fact[d] = std::tgamma(d + 1.0);
  }

  double total = 0.0;
  std::vector<int> u(static_cast<size_t>(N));
  for (int k = 0; k < L; ++k) {
    const double factor = std::pow(1.0 / rp, k);
    // lexicographic composition walk: (k,0,..,0) -> ... -> (0,..,0,k)
    std::fill(u.begin(), u.end(), 0);
    u[0] = k;
    while (true) {
      double prod = factor;
      for (int i = 0; i < N; ++i) prod *= phi[u[i]] / fact[u[i]];
      total += prod;
      if (u[N - 1] == k) break;
      int i = N - 2;
      while (u[i] == 0) --i;
      const int t = u[N - 1];
      u[i] -= 1;
      u[i + 1] = t + 1;
      if (i + 1 != N - 1) u[N - 1] = 0;
    }
  }
  return total;
}

double avg_ber(const IftrParams& p, const ModulationSpec& mod, int J) {
  p.validate();
  mod.validate();
  const std::vector<double> A = detail::weight_table(p, J);
  double ber = 0.0;
  for (const ModulationSpec::Term& t : mod.terms) {
    const double bg = t.beta * p.gamma_bar;
    const double B = bg / (2.0 * (1.0 + p.K) + bg);
    const std::vector<double> bracket = ber_brackets(B, J);
    double s = 0.0;
    for (int j = 0; j < J; ++j) s += A[j] * bracket[j];
    ber += 0.5 * t.alpha * s;
  }
  return ber;
}

double avg_ber_asymptotic(const IftrParams& p, const ModulationSpec& mod) {
  p.validate();
  mod.validate();
  const double a0 = coefficient_a0(p);
  double ber = 0.0;
  for (const ModulationSpec::Term& t : mod.terms) {
    const double bg = t.beta * p.gamma_bar;
    const double B = bg / (2.0 * (1.0 + p.K) + bg);
    // 1 - sqrt(B) without cancellation at large gamma_bar
    const double one_minus = (1.0 - B) / (1.0 + std::sqrt(B));
    ber += 0.5 * t.alpha * a0 * one_minus;
  }
  return ber;
}

double nakagami_ber(double mean_snr, int m, const ModulationSpec& mod) {
  if (!(mean_snr > 0.0)) throw std::domain_error("nakagami_ber: mean must be > 0");
  if (m < 1) throw std::domain_error("nakagami_ber: integer m >= 1 required");
  mod.validate();
  double ber = 0.0;
  for (const ModulationSpec::Term& t : mod.terms) {
    const double bg = t.beta * mean_snr;
    const double B = bg / (2.0 * m + bg);
    const std::vector<double> bracket = ber_brackets(B, m);
    ber += 0.5 * t.alpha * bracket[m - 1];
  }
  return ber;
}

}  // namespace iftr

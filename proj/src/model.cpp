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

#include "iftr/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <deque>
#include <limits>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

#include "iftr/errors.hpp"
#include "quadrature.hpp"

namespace iftr {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPi = 3.14159265358979323846;

double log_or_ninf(double v) { return v > 0.0 ? std::log(v) : -kInf; }

// ---------------------------------------------------------------------------
// Poisson pmf windows. pois_j(lam) falls below e^-48 outside
// |j - lam| ~ 10 sqrt(lam); everything here exploits that.

struct PoisWindow {
  int lo = 0;
  int hi = -1;                // inclusive; empty when hi < lo
  std::vector<double> pmf;    // pmf[j - lo]
};

PoisWindow poisson_pmf_window(double lam, int j_max) {
  PoisWindow w;
  if (lam <= 0.0) {
    w.lo = w.hi = 0;
    w.pmf = {1.0};
    return w;
  }
  const double h = 10.0 * std::sqrt(lam + 4.0) + 24.0;
  w.lo = std::max(0, static_cast<int>(lam - h));
  w.hi = std::min(j_max, static_cast<int>(lam + h) + 1);
  if (w.hi < w.lo) {
    w.hi = w.lo - 1;
    return w;
  }
  w.pmf.assign(static_cast<size_t>(w.hi - w.lo) + 1, 0.0);
  const int j0 = std::clamp(static_cast<int>(lam), w.lo, w.hi);
  const double lp0 = -lam + j0 * std::log(lam) - std::lgamma(j0 + 1.0);
  const double p0 = std::exp(lp0);
  double p = p0;
  for (int j = j0; j >= w.lo; --j) {
    w.pmf[j - w.lo] = p;
    p *= j / lam;
  }
  p = p0;
  for (int j = j0 + 1; j <= w.hi; ++j) {
    p *= lam / j;
    w.pmf[j - w.lo] = p;
  }
  return w;
}

// A[j] += weight * pois_j(lam) for 0 <= j < J, skipping negligible terms.
void accumulate_poisson(std::vector<double>& A, double lam, double weight) {
  const int J = static_cast<int>(A.size());
  if (lam <= 0.0) {
    A[0] += weight;
    return;
  }
  int j0 = std::min(J - 1, static_cast<int>(lam));
  const double lp0 = -lam + j0 * std::log(lam) - std::lgamma(j0 + 1.0);
  if (lp0 < -52.0) return;
  const double p0 = std::exp(lp0);
  const double cut = p0 * 1e-22;
  double p = p0;
  for (int j = j0; j >= 0; --j) {
    A[j] += weight * p;
    p *= j / lam;
    if (p < cut) break;
  }
  p = p0;
  for (int j = j0 + 1; j < J; ++j) {
    p *= lam / j;
    A[j] += weight * p;
    if (p < cut) break;
  }
}

// Smallest C >= J-1 such that pois_j(C) < e^-48 for every j < J.
double poisson_reach(int J) {
  const double target = -48.0;
  auto f = [&](double c) { return -c + (J - 1) * std::log(c) - std::lgamma(static_cast<double>(J)); };
  double lo = std::max(1.0, static_cast<double>(J - 1));
  if (f(lo) < target) return lo;
  double hi = lo + 12.0 * std::sqrt(lo + 4.0) + 96.0;
  while (f(hi) >= target) hi *= 1.5;
  for (int it = 0; it < 80; ++it) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) >= target ? lo : hi) = mid;
  }
  return hi;
}

// ---------------------------------------------------------------------------
// Weight tables.
//
// The closed-form coefficient series is an alternating sum whose terms
// outgrow the result exponentially in j (hundreds of orders of magnitude by
// j ~ 400), so tables are instead computed from the latent-variable
// representation: conditioned on the two fluctuation variables and the
// inter-component phase, the SNR is Gamma-mixed with Poisson weights
// pois_j(Kp), Kp = u1 K1 + u2 K2 + sqrt(u1 u2) K delta cos(phi).
// The integrand is positive, so plain double accumulation is exact to
// quadrature resolution.

struct LatentGrid {
  quad::Rule lag1, lag2, leg;
};

std::vector<double> weight_table_pass(double m1, double m2, double K1, double K2,
                                      double kd, int J, const LatentGrid& g) {
  const int n1 = static_cast<int>(g.lag1.x.size());
  const int n2 = static_cast<int>(g.lag2.x.size());
  const int np = static_cast<int>(g.leg.x.size());
  const double kcap = poisson_reach(J);

  std::vector<double> lw2(n2), u2s(n2);
  for (int i = 0; i < n2; ++i) {
    lw2[i] = log_or_ninf(g.lag2.w[i]);
    u2s[i] = g.lag2.x[i] / m2;
  }
  std::vector<double> A(static_cast<size_t>(J), 0.0);
  for (int i1 = 0; i1 < n1; ++i1) {
    const double lwa = log_or_ninf(g.lag1.w[i1]);
    if (lwa < -60.0) continue;
    const double u1 = g.lag1.x[i1] / m1;
    const double a1 = u1 * K1;
    for (int i2 = 0; i2 < n2; ++i2) {
      const double lw = lwa + lw2[i2];
      if (lw < -60.0) continue;
      const double u2 = u2s[i2];
      const double a = a1 + u2 * K2;
      const double c = kd * std::sqrt(u1 * u2);
      if (a - c > kcap) continue;
      const double W = std::exp(lw);
      if (c <= 1e-13 * (1.0 + a)) {
        accumulate_poisson(A, a, W);
        continue;
      }
      const double ct0 = (kcap - a) / c;
      const double phi0 = (ct0 >= 1.0) ? 0.0 : std::acos(std::max(-1.0, ct0));
      const double half = 0.5 * (kPi - phi0);
      const double mid = 0.5 * (kPi + phi0);
      for (int t = 0; t < np; ++t) {
        const double phi = mid + half * g.leg.x[t];
        const double wphi = W * g.leg.w[t] * half / kPi;
        accumulate_poisson(A, a + c * std::cos(phi), wphi);
      }
    }
  }
  return A;
}

std::vector<double> weight_table_uncached(const IftrParams& p, int J) {
  const AncillaryParams kk = ancillary(p);
  std::vector<double> A(static_cast<size_t>(J), 0.0);
  if (p.K == 0.0) {
    A[0] = 1.0;
    return A;
  }
  if (kk.K2 == 0.0) {
    // Single fluctuating specular component: negative-binomial weights.
    const double lr = std::log(p.m1 / (kk.K1 + p.m1));
    const double lq = std::log(kk.K1 / (kk.K1 + p.m1));
    for (int j = 0; j < J; ++j) {
      const double lt = std::lgamma(p.m1 + j) - std::lgamma(p.m1) -
                        std::lgamma(j + 1.0) + p.m1 * lr + j * lq;
      A[j] = std::exp(lt);
    }
    return A;
  }
  // General case: refine the latent quadrature until the table stabilizes.
  static constexpr int kLag[] = {180, 256, 360, 508};
  static constexpr int kPhi[] = {120, 168, 236, 330};
  std::vector<double> prev;
  for (int pass = 0; pass < 4; ++pass) {
    LatentGrid g{quad::gauss_laguerre_prob(p.m1 - 1.0, kLag[pass]),
                 quad::gauss_laguerre_prob(p.m2 - 1.0, kLag[pass]),
                 quad::gauss_legendre(kPhi[pass])};
    std::vector<double> cur = weight_table_pass(p.m1, p.m2, kk.K1, kk.K2,
                                                p.K * p.delta, J, g);
    if (!prev.empty()) {
      double diff = 0.0, top = 0.0;
      for (int j = 0; j < J; ++j) {
        diff = std::max(diff, std::fabs(cur[j] - prev[j]));
        top = std::max(top, cur[j]);
      }
      if (diff <= std::max(3e-13, 1e-12 * top)) return cur;
    }
    prev = std::move(cur);
  }
  return prev;
}

// Table cache, keyed by the shape parameters (weights do not depend on
// gamma_bar). Stores the longest table computed so far per key.
struct ShapeKey {
  double m1, m2, K, delta;
  bool operator==(const ShapeKey&) const = default;
};
struct ShapeKeyHash {
  size_t operator()(const ShapeKey& k) const {
    auto mix = [](size_t h, double v) {
      std::uint64_t b;
      std::memcpy(&b, &v, sizeof b);
      return h * 1099511628211ull ^ b;
    };
    return mix(mix(mix(mix(1469598103934665603ull, k.m1), k.m2), k.K), k.delta);
  }
};

std::shared_ptr<const std::vector<double>> cached_table(const IftrParams& p, int J) {
  static std::mutex mu;
  static std::unordered_map<ShapeKey, std::shared_ptr<const std::vector<double>>, ShapeKeyHash> cache;
  static std::deque<ShapeKey> order;
  const ShapeKey key{p.m1, p.m2, p.K, p.delta};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end() && static_cast<int>(it->second->size()) >= J)
      return it->second;
  }
  auto fresh = std::make_shared<const std::vector<double>>(weight_table_uncached(p, J));
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end() && static_cast<int>(it->second->size()) >= J)
    return it->second;
  if (it == cache.end()) {
    order.push_back(key);
    if (order.size() > 64) {
      cache.erase(order.front());
      order.pop_front();
    }
  }
  cache[key] = fresh;
  return fresh;
}

// Anchored signed accumulation of log-domain terms: callers stream
// (log|t|, sign) pairs twice, first to locate the anchor, then to sum.
struct SignedAccumulator {
  double max_log = -kInf;
  double sum = 0.0;
  double sum_abs = 0.0;

  void observe(double lt) { max_log = std::max(max_log, lt); }
  void add(double lt, int sign) {
    const double v = std::exp(lt - max_log);
    sum += sign * v;
    sum_abs += v;
  }
  double value() const { return std::exp(max_log) * sum; }
  double condition() const {
    return sum == 0.0 ? kInf : sum_abs / std::fabs(sum);
  }
};

}  // namespace

// ---------------------------------------------------------------------------

void IftrParams::validate() const {
  if (!(gamma_bar > 0.0)) throw std::domain_error("IftrParams: gamma_bar must be > 0");
  if (!(m1 > 0.0)) throw std::domain_error("IftrParams: m1 must be > 0");
  if (!(m2 > 0.0)) throw std::domain_error("IftrParams: m2 must be > 0");
  if (!(K >= 0.0)) throw std::domain_error("IftrParams: K must be >= 0");
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::domain_error("IftrParams: delta must be in [0,1]");
}

AncillaryParams ancillary(const IftrParams& p) {
  p.validate();
  const double root = std::sqrt(std::max(0.0, 1.0 - p.delta * p.delta));
  return {p.K * (1.0 + root) / 2.0, p.K * (1.0 - root) / 2.0};
}

// ---------------------------------------------------------------------------
// GammaMixture evaluations.

double GammaMixture::pdf(double x) const {
  if (x < 0.0) throw std::domain_error("GammaMixture::pdf: x must be >= 0");
  if (weights.empty()) return 0.0;
  if (x == 0.0) return weights[0] / scale;
  const double y = x / scale;
  const PoisWindow w = poisson_pmf_window(y, truncation() - 1);
  double acc = 0.0;
  for (int j = w.lo; j <= w.hi; ++j) acc += weights[j] * w.pmf[j - w.lo];
  return acc / scale;
}

double GammaMixture::cdf_partial(double x, int j_lo, int j_hi) const {
  if (x < 0.0) throw std::domain_error("GammaMixture::cdf: x must be >= 0");
  j_lo = std::max(j_lo, 0);
  j_hi = std::min(j_hi, truncation() - 1);
  if (x == 0.0 || j_hi < j_lo) return 0.0;
  const double y = x / scale;
  const PoisWindow w = poisson_pmf_window(y, j_hi);
  double acc = 0.0;
  double cum = 0.0;  // P(Pois(y) <= j) accumulated across the window
  for (int j = 0; j <= j_hi; ++j) {
    if (j >= w.lo && j <= w.hi) cum += w.pmf[j - w.lo];
    if (j < w.lo) {
      if (j >= j_lo) acc += weights[j];  // component CDF ~ 1 here
    } else if (j > w.hi) {
      break;  // component CDF ~ 0 for all later terms
    } else if (j >= j_lo) {
      acc += weights[j] * std::max(0.0, 1.0 - cum);
    }
  }
  return acc;
}

double GammaMixture::cdf(double x) const { return cdf_partial(x, 0, truncation() - 1); }

// ---------------------------------------------------------------------------

namespace detail {

SeriesEval coefficient_series(const IftrParams& p, int j,
                              const specfun::SeriesControl& ctl) {
  p.validate();
  if (j < 0) throw std::domain_error("coefficient: j must be >= 0");
  if (p.K == 0.0) return {j == 0 ? 1.0 : 0.0, 1.0};

  const AncillaryParams kk = ancillary(p);
  const double kd = p.K * p.delta;
  const double z = kd * kd / (4.0 * (kk.K1 + p.m1) * (kk.K2 + p.m2));
  const double lK1 = log_or_ninf(kk.K1);
  const double lK2 = log_or_ninf(kk.K2);
  const double lkd2 = (kd > 0.0) ? 2.0 * std::log(kd / 2.0) : -kInf;
  const double lKM1 = std::log(kk.K1 + p.m1);
  const double lKM2 = std::log(kk.K2 + p.m2);
  const double lCm = p.m1 * std::log(p.m1) - std::lgamma(p.m1) +
                     p.m2 * std::log(p.m2) - std::lgamma(p.m2);

  std::vector<double> lg1(static_cast<size_t>(j) + 1), lg2(static_cast<size_t>(j) + 1),
      lf(static_cast<size_t>(j) + 2);
  for (int t = 0; t <= j; ++t) {
    lg1[t] = std::lgamma(p.m1 + t);
    lg2[t] = std::lgamma(p.m2 + t);
  }
  for (int t = 0; t <= j + 1; ++t) lf[t] = std::lgamma(t + 1.0);
  auto lbin = [&](int n, int r) { return lf[n] - lf[r] - lf[n - r]; };

  std::unordered_map<int, specfun::SignedLog> memo;
  auto f2 = [&](int alpha, int i2l, int d) -> const specfun::SignedLog& {
    const int key = alpha * 4096 + (d + 2048);
    auto it = memo.find(key);
    if (it == memo.end()) {
      it = memo.emplace(key, specfun::reg_gauss_2f1_log(p.m1 + alpha, p.m2 + i2l,
                                                        d + 1.0, z, ctl))
               .first;
    }
    return it->second;
  };

  SignedAccumulator acc;
  for (int pass = 0; pass < 2; ++pass) {
    for (int k = 0; k <= j; ++k) {
      for (int q = 0; q <= j - k; ++q) {
        const int i2 = j - k - q;
        if (kk.K2 == 0.0 && i2 > 0) continue;
        const double base = lbin(j, k) + lbin(j - k, q) - lf[j] + q * lK1 +
                            (i2 > 0 ? i2 * lK2 : 0.0);
        for (int l = 0; l <= k; ++l) {
          if (kd == 0.0 && l > 0) break;
          const specfun::SignedLog& f = f2(q + l, i2 + l, 2 * l - k);
          if (f.sign == 0) continue;
          const double lt = base + lbin(k, l) + (l > 0 ? l * lkd2 : 0.0) +
                            lg1[q + l] - (p.m1 + q + l) * lKM1 +
                            lg2[i2 + l] - (p.m2 + i2 + l) * lKM2 + lCm + f.log_abs;
          const int sign = ((k & 1) ? -1 : 1) * f.sign;
          if (pass == 0)
            acc.observe(lt);
          else
            acc.add(lt, sign);
        }
      }
    }
  }
  return {acc.value(), acc.condition()};
}

std::vector<double> weight_table(const IftrParams& p, int J) {
  p.validate();
  if (J < 1) throw std::domain_error("weight_table: J must be >= 1");
  auto t = cached_table(p, J);
  return {t->begin(), t->begin() + J};
}

}  // namespace detail

double coefficient_a0(const IftrParams& p) {
  const AncillaryParams kk = ancillary(p);
  if (p.K == 0.0) return 1.0;
  const double kd = p.K * p.delta;
  const double z = kd * kd / (4.0 * (kk.K1 + p.m1) * (kk.K2 + p.m2));
  const double lead = p.m1 * std::log(p.m1 / (kk.K1 + p.m1)) +
                      p.m2 * std::log(p.m2 / (kk.K2 + p.m2));
  return std::exp(lead) * specfun::reg_gauss_2f1(p.m1, p.m2, 1.0, z);
}

double coefficient(const IftrParams& p, int j) {
  p.validate();
  if (j < 0) throw std::domain_error("coefficient: j must be >= 0");
  if (p.K == 0.0) return j == 0 ? 1.0 : 0.0;
  if (j <= 64) {
    const detail::SeriesEval e = detail::coefficient_series(p, j);
    if (e.condition <= 1e5) {
      if (e.value < -1e-9)
        throw internal_consistency_error("coefficient: well-conditioned series went negative");
      return std::max(e.value, 0.0);
    }
  }
  return (*cached_table(p, j + 1))[j];
}

GammaMixture build_mixture(const IftrParams& p, int J) {
  p.validate();
  if (J < 1) throw std::domain_error("build_mixture: J must be >= 1");
  GammaMixture m;
  m.weights = detail::weight_table(p, J);
  m.scale = p.gamma_bar / (1.0 + p.K);
  double s = 0.0;
  for (double w : m.weights) {
    if (w < -1e-9) throw internal_consistency_error("build_mixture: negative weight");
    s += w;
  }
  if (s > 1.0 + 1e-9) throw internal_consistency_error("build_mixture: weights exceed unit mass");
  m.residual_mass = std::max(0.0, 1.0 - s);
  return m;
}

double pdf(const IftrParams& p, double x, int J) {
  return build_mixture(p, J).pdf(x);
}

double cdf(const IftrParams& p, double x, int J) {
  return build_mixture(p, J).cdf(x);
}

double asymptotic_pdf(const IftrParams& p, double x) {
  if (x < 0.0) throw std::domain_error("asymptotic_pdf: x must be >= 0");
  const double inv_scale = (1.0 + p.K) / p.gamma_bar;
  return coefficient_a0(p) * inv_scale * std::exp(-x * inv_scale);
}

double asymptotic_cdf(const IftrParams& p, double x) {
  if (x < 0.0) throw std::domain_error("asymptotic_cdf: x must be >= 0");
  const double inv_scale = (1.0 + p.K) / p.gamma_bar;
  return coefficient_a0(p) * (-std::expm1(-x * inv_scale));
}

double gmgf_real(const IftrParams& p, double n, double s, int J) {
  p.validate();
  if (!(n >= 0.0)) throw std::domain_error("gmgf_real: n must be >= 0");
  const double nu = p.gamma_bar / (1.0 + p.K);
  if (!(s < 1.0 / nu))
    throw divergence_error("gmgf_real: requires s < (1+K)/gamma_bar");
  const std::vector<double> A = detail::weight_table(p, J);
  const double lrate = std::log(1.0 / nu - s);
  const double lnu = std::log(nu);
  double acc = 0.0;
  for (int j = 0; j < J; ++j) {
    if (A[j] == 0.0) continue;
    acc += A[j] * std::exp(std::lgamma(n + j + 1.0) - (n + j + 1.0) * lrate -
                           std::lgamma(j + 1.0) - (j + 1.0) * lnu);
  }
  return acc;
}

double gmgf_int(const IftrParams& p, int n, double s) {
  p.validate();
  if (n < 0) throw std::domain_error("gmgf_int: n must be >= 0");
  if (n > 512) throw std::domain_error("gmgf_int: order too large");
  if (s == 0.0) return moment_int(p, n);

  const AncillaryParams kk = ancillary(p);
  const double gs = p.gamma_bar * s;
  const double opk = 1.0 + p.K;
  const double d0 = opk - gs;
  const double d1 = p.m1 * opk - (p.m1 + kk.K1) * gs;
  const double d2 = p.m2 * opk - (p.m2 + kk.K2) * gs;
  if (!(d0 > 0.0) || !(d1 > 0.0) || !(d2 > 0.0))
    throw divergence_error("gmgf_int: s outside the convergence region");
  const double kd = p.K * p.delta;
  const double z = (kd * gs) * (kd * gs) / (4.0 * d1 * d2);
  if (!(z < 1.0)) throw divergence_error("gmgf_int: s outside the convergence region");

  const double lK1 = log_or_ninf(kk.K1);
  const double lK2 = log_or_ninf(kk.K2);
  const double lkd2 = (kd > 0.0) ? 2.0 * std::log(kd / 2.0) : -kInf;
  const double lgs = std::log(std::fabs(gs));
  const double ld1 = std::log(d1);
  const double ld2 = std::log(d2);
  const double lCm = p.m1 * std::log(p.m1) - std::lgamma(p.m1) +
                     p.m2 * std::log(p.m2) - std::lgamma(p.m2);
  const double lpref = n * std::log(p.gamma_bar) + std::lgamma(n + 1.0) +
                       (p.m1 + p.m2 - n - 1.0) * std::log(d0) + lCm;

  std::vector<double> lf(static_cast<size_t>(n) + 2);
  for (int t = 0; t <= n + 1; ++t) lf[t] = std::lgamma(t + 1.0);
  auto lbin = [&](int a, int b) { return lf[a] - lf[b] - lf[a - b]; };

  SignedAccumulator acc;
  for (int pass = 0; pass < 2; ++pass) {
    for (int q = 0; q <= n; ++q) {
      const double lq = lbin(n, q) + (q + 1.0) * std::log(opk) - lf[q];
      for (int r = 0; r <= q; ++r) {
        for (int p2 = 0; p2 <= q - r; ++p2) {
          if (kk.K2 == 0.0 && q - r - p2 > 0) continue;
          const double lqp = lq + lbin(q, r) + lbin(q - r, p2) + p2 * lK1 +
                             (q - r - p2 > 0 ? (q - r - p2) * lK2 : 0.0);
          for (int l = 0; l <= r; ++l) {
            if (kd == 0.0 && l > 0) break;
            const specfun::SignedLog f = specfun::reg_gauss_2f1_log(
                p.m1 + l + p2, p.m2 + l - p2 + q - r, 2.0 * l - r + 1.0, z);
            if (f.sign == 0) continue;
            const double lt = lqp + lbin(r, l) + (l > 0 ? l * lkd2 : 0.0) +
                              std::lgamma(p.m1 + l + p2) - (p.m1 + l + p2) * ld1 +
                              std::lgamma(p.m2 + l - p2 + q - r) -
                              (p.m2 + l - p2 + q - r) * ld2 +
                              (2 * l - r) * lgs + f.log_abs;
            const int sign = f.sign * ((gs < 0.0 && (r & 1)) ? -1 : 1);
            if (pass == 0)
              acc.observe(lt);
            else
              acc.add(lt, sign);
          }
        }
      }
    }
  }
  return std::exp(lpref) * acc.value();
}

double moment_int(const IftrParams& p, int n) {
  p.validate();
  if (n < 0) throw std::domain_error("moment_int: n must be >= 0");
  if (n > 512) throw std::domain_error("moment_int: order too large");
  if (n == 0) return 1.0;
  const AncillaryParams kk = ancillary(p);
  const double kd = p.K * p.delta;
  const double lK1 = log_or_ninf(kk.K1);
  const double lK2 = log_or_ninf(kk.K2);
  const double lkd = (kd > 0.0) ? std::log(kd / 2.0) : -kInf;
  const double lm1 = std::log(p.m1);
  const double lm2 = std::log(p.m2);

  std::vector<double> lf(static_cast<size_t>(n) + 2);
  for (int t = 0; t <= n + 1; ++t) lf[t] = std::lgamma(t + 1.0);
  auto lbin = [&](int a, int b) { return lf[a] - lf[b] - lf[a - b]; };

  SignedAccumulator acc;  // terms all positive; reused for anchored summing
  for (int pass = 0; pass < 2; ++pass) {
    for (int q = 0; q <= n; ++q) {
      const double lq = lbin(n, q) + lf[n] - lf[q];
      for (int r = 0; r <= q; r += 2) {  // Kronecker delta keeps r = 2l only
        const int l = r / 2;
        if (kd == 0.0 && r > 0) break;
        const double lqr = lq + lbin(q, r) + lbin(r, l) + r * lkd;
        for (int p2 = 0; p2 <= q - r; ++p2) {
          if (kk.K2 == 0.0 && q - r - p2 > 0) continue;
          const double lt = lqr + lbin(q - r, p2) + p2 * lK1 +
                            (q - r - p2 > 0 ? (q - r - p2) * lK2 : 0.0) +
                            std::lgamma(p.m1 + l + p2) - std::lgamma(p.m1) -
                            (l + p2) * lm1 +
                            std::lgamma(p.m2 + q - l - p2) - std::lgamma(p.m2) -
                            (q - l - p2) * lm2;
          if (pass == 0)
            acc.observe(lt);
          else
            acc.add(lt, 1);
        }
      }
    }
  }
  const double nu = p.gamma_bar / (1.0 + p.K);
  return std::pow(nu, n) * acc.value();
}

double moment_real(const IftrParams& p, double n, int J) {
  p.validate();
  if (!(n >= 0.0)) throw std::domain_error("moment_real: n must be >= 0");
  const std::vector<double> A = detail::weight_table(p, J);
  double acc = 0.0;
  for (int j = 0; j < J; ++j) {
    if (A[j] == 0.0) continue;
    acc += A[j] * std::exp(std::lgamma(n + j + 1.0) - std::lgamma(j + 1.0));
  }
  const double nu = p.gamma_bar / (1.0 + p.K);
  return std::pow(nu, n) * acc;
}

double aof(const IftrParams& p) {
  const AncillaryParams kk = ancillary(p);
  const double kd = p.K * p.delta;
  const double opk = 1.0 + p.K;
  return (1.0 + 2.0 * p.K + kd * kd / 2.0 + kk.K1 * kk.K1 / p.m1 +
          kk.K2 * kk.K2 / p.m2) /
         (opk * opk);
}

double nakagami_transfer(const IftrParams& p,
                         const std::function<double(double, int)>& metric,
                         int J) {
  p.validate();
  const std::vector<double> A = detail::weight_table(p, J);
  const double nu = p.gamma_bar / (1.0 + p.K);
  double acc = 0.0;
  for (int j = 0; j < J; ++j) {
    if (A[j] == 0.0) continue;
    acc += A[j] * metric(nu * (j + 1), j + 1);
  }
  return acc;
}

double ks_truncation(const IftrParams& p, int J, int J_ref,
                     std::span<const double> grid) {
  p.validate();
  if (J < 1) throw std::invalid_argument("ks_truncation: J must be >= 1");
  if (J >= J_ref) throw std::invalid_argument("ks_truncation: requires J < J_ref");
  if (grid.empty()) throw std::invalid_argument("ks_truncation: empty grid");
  GammaMixture m;
  m.weights = detail::weight_table(p, J_ref + 1);
  m.scale = p.gamma_bar / (1.0 + p.K);
  double sup = 0.0;
  for (double x : grid) sup = std::max(sup, m.cdf_partial(x, J + 1, J_ref));
  return sup;
}

std::vector<double> ks_default_grid(const IftrParams& p, int J_ref, int points) {
  p.validate();
  if (points < 2) throw std::invalid_argument("ks_default_grid: points must be >= 2");
  GammaMixture m;
  m.weights = detail::weight_table(p, J_ref + 1);
  m.scale = p.gamma_bar / (1.0 + p.K);
  double retained = 0.0;
  for (double w : m.weights) retained += w;
  const double target = 0.999 * retained;
  double lo = 0.0, hi = 8.0 * p.gamma_bar;
  while (m.cdf(hi) <= target) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    const double mid = 0.5 * (lo + hi);
    (m.cdf(mid) > target ? hi : lo) = mid;
  }
  std::vector<double> grid(static_cast<size_t>(points));
  for (int i = 0; i < points; ++i) grid[i] = hi * i / (points - 1);
  return grid;
}

// ---------------------------------------------------------------------------

IftrParams rayleigh(double gamma_bar) {
  IftrParams p{gamma_bar, 1.0, 1.0, 0.0, 0.0};
  p.validate();
  return p;
}

IftrParams rice(double gamma_bar, double K, double m_big) {
  IftrParams p{gamma_bar, m_big, 1.0, K, 0.0};
  p.validate();
  return p;
}

IftrParams hoyt(double gamma_bar, double q) {
  if (!(q > 0.0 && q <= 1.0)) throw std::domain_error("hoyt: q must be in (0, 1]");
  IftrParams p{gamma_bar, 0.5, 1.0, (1.0 / (q * q) - 1.0) / 2.0, 0.0};
  p.validate();
  return p;
}

IftrParams rician_shadowed(double gamma_bar, double K, double m) {
  IftrParams p{gamma_bar, m, 1.0, K, 0.0};
  p.validate();
  return p;
}

IftrParams nakagami_limit(double gamma_bar, double m, double k_big) {
  IftrParams p{gamma_bar, m, 1.0, k_big, 0.0};
  p.validate();
  return p;
}

IftrParams twdp_limit(double gamma_bar, double K, double delta, double m_big) {
  IftrParams p{gamma_bar, m_big, m_big, K, delta};
  p.validate();
  return p;
}

}  // namespace iftr

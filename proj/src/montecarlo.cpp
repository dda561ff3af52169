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

#include "iftr/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace iftr::mc {

namespace {

constexpr double kTwoPi = 6.28318530717958647692;
constexpr std::int64_t kChunk = 1 << 16;

struct SplitMix64 {
  std::uint64_t s;
  std::uint64_t next() {
    std::uint64_t z = (s += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
  }
};

// xoshiro256++ with per-chunk state expanded from (seed, chunk) via SplitMix64.
struct RandomStream {
  std::uint64_t s[4];
  bool has_spare = false;
  double spare = 0.0;

  RandomStream(std::uint64_t seed, std::uint64_t chunk) {
    SplitMix64 sm{seed};
    sm.s += chunk * 0xD1B54A32D192ED03ull;
    for (auto& w : s) w = sm.next();
  }

  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t next() {
    const std::uint64_t result = rotl(s[0] + s[3], 23) + s[0];
    const std::uint64_t t = s[1] << 17;
    s[2] ^= s[0];
    s[3] ^= s[1];
    s[1] ^= s[2];
    s[0] ^= s[3];
    s[2] ^= t;
    s[3] = rotl(s[3], 45);
    return result;
  }

  // uniform on (0, 1]
  double uniform() { return ((next() >> 11) + 1) * 0x1.0p-53; }

  double normal() {
    if (has_spare) {
      has_spare = false;
      return spare;
    }
    const double r = std::sqrt(-2.0 * std::log(uniform()));
    const double t = kTwoPi * uniform();
    spare = r * std::sin(t);
    has_spare = true;
    return r * std::cos(t);
  }

  // Marsaglia-Tsang squeeze for shape >= 1, boosted below 1; unit scale.
  double gamma(double shape) {
    if (shape < 1.0)
      return gamma(shape + 1.0) * std::pow(uniform(), 1.0 / shape);
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / std::sqrt(9.0 * d);
    while (true) {
      double xn, v;
      do {
        xn = normal();
        v = 1.0 + c * xn;
      } while (v <= 0.0);
      v = v * v * v;
      const double u = uniform();
      if (u < 1.0 - 0.0331 * xn * xn * xn * xn) return d * v;
      if (std::log(u) < 0.5 * xn * xn + d * (1.0 - v + std::log(v))) return d * v;
    }
  }

  double exponential(double mean) { return -mean * std::log(uniform()); }
};

struct ChannelGeometry {
  double m1, m2, V1, V2, sigma;
  explicit ChannelGeometry(const IftrParams& p) {
    p.validate();
    const AncillaryParams kk = ancillary(p);
    const double sig2 = p.gamma_bar / (2.0 * (1.0 + p.K));
    m1 = p.m1;
    m2 = p.m2;
    V1 = std::sqrt(2.0 * sig2 * kk.K1);
    V2 = std::sqrt(2.0 * sig2 * kk.K2);
    sigma = std::sqrt(sig2);
  }
};

ChannelDraw draw_one(const ChannelGeometry& g, RandomStream& rs) {
  ChannelDraw d;
  d.zeta1 = rs.gamma(g.m1) / g.m1;
  d.zeta2 = rs.gamma(g.m2) / g.m2;
  d.phi1 = kTwoPi * rs.uniform();
  d.phi2 = kTwoPi * rs.uniform();
  d.x = g.sigma * rs.normal();
  d.y = g.sigma * rs.normal();
  const double a1 = std::sqrt(d.zeta1) * g.V1;
  const double a2 = std::sqrt(d.zeta2) * g.V2;
  const double re = a1 * std::cos(d.phi1) + a2 * std::cos(d.phi2) + d.x;
  const double im = a1 * std::sin(d.phi1) + a2 * std::sin(d.phi2) + d.y;
  d.snr = re * re + im * im;
  return d;
}

double snr_one(const ChannelGeometry& g, RandomStream& rs) {
  const double z1 = rs.gamma(g.m1) / g.m1;
  const double z2 = rs.gamma(g.m2) / g.m2;
  const double p1 = kTwoPi * rs.uniform();
  const double p2 = kTwoPi * rs.uniform();
  const double a1 = std::sqrt(z1) * g.V1;
  const double a2 = std::sqrt(z2) * g.V2;
  const double re = a1 * std::cos(p1) + a2 * std::cos(p2) + g.sigma * rs.normal();
  const double im = a1 * std::sin(p1) + a2 * std::sin(p2) + g.sigma * rs.normal();
  return re * re + im * im;
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(chunk_index, begin, end, stream) over the chunked stream on a small
// thread pool. Chunk boundaries, and hence streams, do not depend on the
// thread count.
template <typename Fn>
void for_each_chunk(std::int64_t count, std::uint64_t seed, int threads, Fn fn) {
  const std::int64_t nchunks = (count + kChunk - 1) / kChunk;
  std::atomic<std::int64_t> next{0};
  auto worker = [&]() {
    while (true) {
      const std::int64_t c = next.fetch_add(1);
      if (c >= nchunks) return;
      RandomStream rs(seed, static_cast<std::uint64_t>(c));
      const std::int64_t b = c * kChunk;
      const std::int64_t e = std::min(count, b + kChunk);
      fn(c, b, e, rs);
    }
  };
  const int nt = std::min<std::int64_t>(resolve_threads(threads), nchunks);
  if (nt <= 1) {
    worker();
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(nt);
  for (int i = 0; i < nt; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
}

// Deterministic mean of per-chunk partial sums of h(snr).
template <typename H>
double chunked_mean(const IftrParams& p, const SimConfig& cfg, H h) {
  cfg.validate();
  const ChannelGeometry g(p);
  const std::int64_t n = cfg.num_samples;
  const std::int64_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(static_cast<size_t>(nchunks), 0.0);
  for_each_chunk(n, cfg.seed, cfg.num_threads,
                 [&](std::int64_t c, std::int64_t b, std::int64_t e, RandomStream& rs) {
                   double acc = 0.0;
                   for (std::int64_t i = b; i < e; ++i) acc += h(snr_one(g, rs));
                   partial[static_cast<size_t>(c)] = acc;
                 });
  double total = 0.0;
  for (double v : partial) total += v;  // fixed order: thread-count invariant
  return total / static_cast<double>(n);
}

}  // namespace

void SimConfig::validate() const {
  if (num_samples < 1) throw std::invalid_argument("SimConfig: num_samples must be >= 1");
  if (histogram_bins < 10) throw std::invalid_argument("SimConfig: at least 10 bins");
  if (x_max < 0.0) throw std::invalid_argument("SimConfig: x_max must be >= 0");
}

std::vector<double> sample_snr(const IftrParams& p, std::int64_t count,
                               std::uint64_t seed, int num_threads) {
  if (count < 1) throw std::invalid_argument("sample_snr: count must be >= 1");
  const ChannelGeometry g(p);
  std::vector<double> out(static_cast<size_t>(count));
  for_each_chunk(count, seed, num_threads,
                 [&](std::int64_t, std::int64_t b, std::int64_t e, RandomStream& rs) {
                   for (std::int64_t i = b; i < e; ++i) out[static_cast<size_t>(i)] = snr_one(g, rs);
                 });
  return out;
}

std::vector<ChannelDraw> sample_draws(const IftrParams& p, std::int64_t count,
                                      std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_draws: count must be >= 1");
  const ChannelGeometry g(p);
  std::vector<ChannelDraw> out(static_cast<size_t>(count));
  for_each_chunk(count, seed, 1,
                 [&](std::int64_t, std::int64_t b, std::int64_t e, RandomStream& rs) {
                   for (std::int64_t i = b; i < e; ++i) out[static_cast<size_t>(i)] = draw_one(g, rs);
                 });
  return out;
}

std::vector<double> empirical_cdf(std::span<const double> samples,
                                  std::span<const double> grid) {
  if (samples.empty()) throw std::invalid_argument("empirical_cdf: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> out;
  out.reserve(grid.size());
  const double n = static_cast<double>(sorted.size());
  for (double x : grid) {
    const auto it = std::upper_bound(sorted.begin(), sorted.end(), x);
    out.push_back(static_cast<double>(it - sorted.begin()) / n);
  }
  return out;
}

Histogram empirical_pdf(std::span<const double> samples, int bins, double x_max) {
  if (samples.empty()) throw std::invalid_argument("empirical_pdf: no samples");
  if (bins < 1) throw std::invalid_argument("empirical_pdf: bins must be >= 1");
  double hi = x_max;
  if (hi <= 0.0) {
    hi = *std::max_element(samples.begin(), samples.end());
    if (hi <= 0.0) hi = 1.0;
  }
  Histogram h;
  h.edges.resize(static_cast<size_t>(bins) + 1);
  for (int i = 0; i <= bins; ++i) h.edges[i] = hi * i / bins;
  h.density.assign(static_cast<size_t>(bins), 0.0);
  const double width = hi / bins;
  std::int64_t inside = 0;
  for (double x : samples) {
    if (x < 0.0 || x > hi) continue;
    int b = std::min(bins - 1, static_cast<int>(x / width));
    h.density[static_cast<size_t>(b)] += 1.0;
    ++inside;
  }
  // normalize to unit mass over the in-range samples
  const double norm = inside > 0 ? 1.0 / (static_cast<double>(inside) * width) : 0.0;
  for (double& d : h.density) d *= norm;
  return h;
}

double ks_empirical(std::span<const double> samples, const IftrParams& p, int J) {
  if (samples.empty()) throw std::invalid_argument("ks_empirical: no samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const GammaMixture m = build_mixture(p, J);
  const double n = static_cast<double>(sorted.size());
  double sup = 0.0;
  for (size_t i = 0; i < sorted.size(); ++i) {
    const double f = m.cdf(sorted[i]);
    sup = std::max(sup, std::max(f - static_cast<double>(i) / n,
                                 static_cast<double>(i + 1) / n - f));
  }
  return sup;
}

double simulate_outage_cci(const IftrParams& p, const CciScenario& sc,
                           const SimConfig& cfg) {
  sc.validate();
  cfg.validate();
  const ChannelGeometry g(p);
  const std::int64_t n = cfg.num_samples;
  const std::int64_t nchunks = (n + kChunk - 1) / kChunk;
  std::vector<double> partial(static_cast<size_t>(nchunks), 0.0);
  for_each_chunk(n, cfg.seed, cfg.num_threads,
                 [&](std::int64_t c, std::int64_t b, std::int64_t e, RandomStream& rs) {
                   double hits = 0.0;
                   for (std::int64_t i = b; i < e; ++i) {
                     double w = 0.0;
                     for (int a = 0; a < sc.antennas; ++a) w += snr_one(g, rs);
                     double itf = 0.0;
                     for (int l = 0; l < sc.interferers; ++l)
                       itf += rs.exponential(sc.interference_power);
                     if (w < sc.sir_threshold * itf) hits += 1.0;
                   }
                   partial[static_cast<size_t>(c)] = hits;
                 });
  double total = 0.0;
  for (double v : partial) total += v;
  return total / static_cast<double>(n);
}

double simulate_capacity(const IftrParams& p, const SimConfig& cfg) {
  return chunked_mean(p, cfg, [](double s) { return std::log2(1.0 + s); });
}

double simulate_ber(const IftrParams& p, const ModulationSpec& mod,
                    const SimConfig& cfg) {
  mod.validate();
  return chunked_mean(p, cfg, [&](double s) {
    double e = 0.0;
    for (const ModulationSpec::Term& t : mod.terms)
      e += t.alpha * 0.5 * std::erfc(std::sqrt(0.5 * t.beta * s));
    return e;
  });
}

double simulate_moment(const IftrParams& p, double n, const SimConfig& cfg) {
  if (!(n >= 0.0)) throw std::domain_error("simulate_moment: n must be >= 0");
  return chunked_mean(p, cfg, [n](double s) { return std::pow(s, n); });
}

double simulate_outage(const IftrParams& p, double gamma_th, const SimConfig& cfg) {
  if (!(gamma_th > 0.0)) throw std::domain_error("simulate_outage: gamma_th must be > 0");
  return chunked_mean(p, cfg, [gamma_th](double s) { return s < gamma_th ? 1.0 : 0.0; });
}

}  // namespace iftr::mc

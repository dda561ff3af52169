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

#ifndef IFTR_MONTECARLO_HPP
#define IFTR_MONTECARLO_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "iftr/metrics.hpp"
#include "iftr/model.hpp"

namespace iftr::mc {

/// Simulation controls.
///
/// Reproducibility contract: the sample stream is split into fixed-size
/// chunks, each driven by its own generator state derived deterministically
/// from (seed, chunk index). Results are therefore bit-identical for a given
/// (seed, count) regardless of num_threads.
struct SimConfig {
  std::int64_t num_samples = 1'000'000;
  std::uint64_t seed = 1;
  int histogram_bins = 100;
  double x_max = 0.0;   // 0 = derive from the samples
  int num_threads = 0;  // 0 = hardware concurrency

  void validate() const;
};

/// One channel realization with its latent variables kept around, so the
/// physical construction can be audited (snr reconstructs from the parts).
struct ChannelDraw {
  double snr;
  double zeta1, zeta2;  // specular power fluctuations, unit-mean Gamma
  double phi1, phi2;    // uniform phases
  double x, y;          // diffuse component
};

/// SNR samples from the physical channel construction; mean tends to
/// p.gamma_bar.
std::vector<double> sample_snr(const IftrParams& p, std::int64_t count,
                               std::uint64_t seed, int num_threads = 0);

/// Like sample_snr, retaining the latent variables.
std::vector<ChannelDraw> sample_draws(const IftrParams& p, std::int64_t count,
                                      std::uint64_t seed);

/// Right-continuous empirical CDF evaluated on a grid.
std::vector<double> empirical_cdf(std::span<const double> samples,
                                  std::span<const double> grid);

struct Histogram {
  std::vector<double> edges;    // bins+1 edges on [0, x_max]
  std::vector<double> density;  // normalized to unit mass
};
Histogram empirical_pdf(std::span<const double> samples, int bins,
                        double x_max = 0.0);

/// sup_x |empirical CDF - model CDF| over the sample points.
double ks_empirical(std::span<const double> samples, const IftrParams& p,
                    int J = kDefaultTruncation);

/// Empirical P(sum_i W_i / sum_l I_l < R_th) with W_i i.i.d. channel power
/// draws and I_l i.i.d. exponential interferers.
double simulate_outage_cci(const IftrParams& p, const CciScenario& sc,
                           const SimConfig& cfg);

double simulate_capacity(const IftrParams& p, const SimConfig& cfg);
double simulate_ber(const IftrParams& p, const ModulationSpec& mod,
                    const SimConfig& cfg);
double simulate_moment(const IftrParams& p, double n, const SimConfig& cfg);
double simulate_outage(const IftrParams& p, double gamma_th, const SimConfig& cfg);

}  // namespace iftr::mc

#endif  // IFTR_MONTECARLO_HPP

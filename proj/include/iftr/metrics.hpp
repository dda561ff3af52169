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

#ifndef IFTR_METRICS_HPP
#define IFTR_METRICS_HPP

#include <vector>

#include "iftr/model.hpp"

namespace iftr {

/// Conditional bit error probability of a coherent modulation in AWGN,
/// expressed as sum_r alpha_r Q(sqrt(beta_r x)).
struct ModulationSpec {
  struct Term {
    double alpha;
    double beta;
  };
  std::vector<Term> terms;

  static ModulationSpec bpsk() { return {{{1.0, 2.0}}}; }
  void validate() const;
};

/// Interference-limited MRC reception scenario: N receive antennas, L i.i.d.
/// Rayleigh interferers of average power P_I each, SIR threshold R_th.
struct CciScenario {
  int antennas = 1;
  int interferers = 1;
  double interference_power = 1.0;
  double sir_threshold = 1.0;

  void validate() const;
};

/// Ergodic capacity E[log2(1 + gamma)] in bits/s/Hz, closed form.
double avg_capacity(const IftrParams& p, int J = kDefaultTruncation);

/// P(gamma < gamma_th).
double outage(const IftrParams& p, double gamma_th, int J = kDefaultTruncation);

/// Outage probability of the desired user under co-channel interference with
/// MRC reception, negligible background noise. The desired user's per-branch
/// received power W_i follows the given parameters, with p.gamma_bar read as
/// the mean received power per branch (any common Es/N0 scaling cancels in
/// the power ratio W/I when both sides use consistent units).
double outage_cci(const IftrParams& p, const CciScenario& sc);

/// Average BER of a coherent modulation, closed form.
double avg_ber(const IftrParams& p, const ModulationSpec& mod,
               int J = kDefaultTruncation);

/// Leading-term BER approximation for the high-SNR regime.
double avg_ber_asymptotic(const IftrParams& p, const ModulationSpec& mod);

/// Classical Nakagami-m ergodic capacity (integer m), usable as a transfer
/// kernel for nakagami_transfer.
double nakagami_capacity(double mean_snr, int m);

/// Classical Nakagami-m average BER of a coherent modulation (integer m).
double nakagami_ber(double mean_snr, int m, const ModulationSpec& mod);

}  // namespace iftr

#endif  // IFTR_METRICS_HPP

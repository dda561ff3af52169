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

#ifndef IFTR_CLI_HPP
#define IFTR_CLI_HPP

#include <optional>
#include <string>
#include <vector>

#include "iftr/metrics.hpp"
#include "iftr/model.hpp"
#include "iftr/montecarlo.hpp"

namespace iftr::cli {

enum class Command {
  coeffs,
  pdf,
  cdf,
  gmgf,
  moments,
  aof,
  capacity,
  outage,
  outage_cci,
  ber,
  ks_table,
  simulate,
  figure,
};

enum class Format { csv, json };

struct Sweep {
  std::string var;  // gamma_bar | K | delta | m1 | m2 | gamma_th | R_th
  double start = 0.0;
  double stop = 0.0;
  int points = 2;
  bool db = false;

  std::vector<double> values() const;  // linear-scale values
};

struct RunSpec {
  Command command = Command::aof;
  IftrParams params;
  std::optional<Sweep> sweep;
  std::string out_path;  // empty -> stdout
  Format format = Format::csv;
  int J = kDefaultTruncation;
  int J_ref = kReferenceTruncation;

  double gamma_th = 1.0;
  CciScenario cci;
  ModulationSpec mod = ModulationSpec::bpsk();
  double gmgf_n = 0.0;
  double gmgf_s = 0.0;
  int moments_max = 4;
  double x_max = 0.0;  // 0 -> auto
  int points = 201;
  int figure_id = 0;
  std::string quantity = "mean";  // for `simulate`

  std::optional<mc::SimConfig> sim;  // present -> Monte Carlo columns / runs

  void validate() const;
};

/// Executes the request, writing the artifact to spec.out_path (or stdout).
/// Returns a process exit status: 0 ok, 2 validation, 3 numerical, 4 I/O.
int run(const RunSpec& spec);

/// Full command-line entry point (argument parsing + run).
int main_cli(int argc, const char* const* argv);

/// Round-trip support: rebuilds a RunSpec from the "inputs" block of a JSON
/// artifact produced by run().
RunSpec spec_from_json_artifact(const std::string& path);

}  // namespace iftr::cli

#endif  // IFTR_CLI_HPP

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

#include "iftr/cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "iftr/errors.hpp"
#include "json.hpp"

namespace iftr::cli {

namespace {

using nlohmann::json;

constexpr const char* kVersion = "0.1.0";

struct Column {
  std::string name;
  std::vector<double> values;
};

struct Artifact {
  std::vector<Column> columns;
  json inputs;
};

std::string fmt12(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double db_to_lin(double db) { return std::pow(10.0, db / 10.0); }

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> v(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    v[static_cast<size_t>(i)] = a + (b - a) * i / (n - 1);
  return v;
}

const std::map<std::string, Command>& command_names() {
  static const std::map<std::string, Command> m = {
      {"coeffs", Command::coeffs},     {"pdf", Command::pdf},
      {"cdf", Command::cdf},           {"gmgf", Command::gmgf},
      {"moments", Command::moments},   {"aof", Command::aof},
      {"capacity", Command::capacity}, {"outage", Command::outage},
      {"outage-cci", Command::outage_cci}, {"ber", Command::ber},
      {"ks-table", Command::ks_table}, {"simulate", Command::simulate},
      {"figure", Command::figure},
  };
  return m;
}

std::string command_name(Command c) {
  for (const auto& [k, v] : command_names())
    if (v == c) return k;
  return "?";
}

json spec_inputs_json(const RunSpec& s) {
  json j;
  j["command"] = command_name(s.command);
  j["gamma_bar"] = s.params.gamma_bar;
  j["m1"] = s.params.m1;
  j["m2"] = s.params.m2;
  j["K"] = s.params.K;
  j["delta"] = s.params.delta;
  j["J"] = s.J;
  j["J_ref"] = s.J_ref;
  j["gamma_th"] = s.gamma_th;
  j["cci"] = {{"antennas", s.cci.antennas},
              {"interferers", s.cci.interferers},
              {"interference_power", s.cci.interference_power},
              {"sir_threshold", s.cci.sir_threshold}};
  json terms = json::array();
  for (const auto& t : s.mod.terms) terms.push_back({{"alpha", t.alpha}, {"beta", t.beta}});
  j["modulation"] = terms;
  j["gmgf_n"] = s.gmgf_n;
  j["gmgf_s"] = s.gmgf_s;
  j["moments_max"] = s.moments_max;
  j["x_max"] = s.x_max;
  j["points"] = s.points;
  j["figure"] = s.figure_id;
  j["quantity"] = s.quantity;
  j["format"] = s.format == Format::csv ? "csv" : "json";
  if (s.sweep) {
    j["sweep"] = {{"var", s.sweep->var},
                  {"start", s.sweep->start},
                  {"stop", s.sweep->stop},
                  {"points", s.sweep->points},
                  {"db", s.sweep->db}};
  } else {
    j["sweep"] = nullptr;
  }
  if (s.sim) {
    j["sim"] = {{"num_samples", s.sim->num_samples},
                {"seed", s.sim->seed},
                {"histogram_bins", s.sim->histogram_bins},
                {"x_max", s.sim->x_max},
                {"num_threads", s.sim->num_threads}};
  } else {
    j["sim"] = nullptr;
  }
  j["version"] = kVersion;
  return j;
}

RunSpec spec_from_inputs_json(const json& j) {
  RunSpec s;
  s.command = command_names().at(j.at("command").get<std::string>());
  s.params.gamma_bar = j.at("gamma_bar").get<double>();
  s.params.m1 = j.at("m1").get<double>();
  s.params.m2 = j.at("m2").get<double>();
  s.params.K = j.at("K").get<double>();
  s.params.delta = j.at("delta").get<double>();
  s.J = j.at("J").get<int>();
  s.J_ref = j.at("J_ref").get<int>();
  s.gamma_th = j.at("gamma_th").get<double>();
  const json& c = j.at("cci");
  s.cci.antennas = c.at("antennas").get<int>();
  s.cci.interferers = c.at("interferers").get<int>();
  s.cci.interference_power = c.at("interference_power").get<double>();
  s.cci.sir_threshold = c.at("sir_threshold").get<double>();
  s.mod.terms.clear();
  for (const json& t : j.at("modulation"))
    s.mod.terms.push_back({t.at("alpha").get<double>(), t.at("beta").get<double>()});
  s.gmgf_n = j.at("gmgf_n").get<double>();
  s.gmgf_s = j.at("gmgf_s").get<double>();
  s.moments_max = j.at("moments_max").get<int>();
  s.x_max = j.at("x_max").get<double>();
  s.points = j.at("points").get<int>();
  s.figure_id = j.at("figure").get<int>();
  s.quantity = j.at("quantity").get<std::string>();
  s.format = j.at("format").get<std::string>() == "json" ? Format::json : Format::csv;
  if (!j.at("sweep").is_null()) {
    Sweep sw;
    sw.var = j["sweep"].at("var").get<std::string>();
    sw.start = j["sweep"].at("start").get<double>();
    sw.stop = j["sweep"].at("stop").get<double>();
    sw.points = j["sweep"].at("points").get<int>();
    sw.db = j["sweep"].at("db").get<bool>();
    s.sweep = sw;
  }
  if (!j.at("sim").is_null()) {
    mc::SimConfig cfg;
    cfg.num_samples = j["sim"].at("num_samples").get<std::int64_t>();
    cfg.seed = j["sim"].at("seed").get<std::uint64_t>();
    cfg.histogram_bins = j["sim"].at("histogram_bins").get<int>();
    cfg.x_max = j["sim"].at("x_max").get<double>();
    cfg.num_threads = j["sim"].at("num_threads").get<int>();
    s.sim = cfg;
  }
  return s;
}

void write_csv(std::ostream& os, const Artifact& a) {
  for (const auto& [key, val] : a.inputs.items())
    os << "# " << key << ": " << val.dump() << "\n";
  for (size_t i = 0; i < a.columns.size(); ++i)
    os << a.columns[i].name << (i + 1 < a.columns.size() ? "," : "\n");
  const size_t rows = a.columns.empty() ? 0 : a.columns.front().values.size();
  for (size_t r = 0; r < rows; ++r) {
    for (size_t i = 0; i < a.columns.size(); ++i)
      os << fmt12(a.columns[i].values[r]) << (i + 1 < a.columns.size() ? "," : "\n");
  }
}

void write_json_artifact(std::ostream& os, const Artifact& a) {
  json j;
  j["inputs"] = a.inputs;
  json cols = json::object();
  for (const Column& c : a.columns) cols[c.name] = c.values;
  j["columns"] = cols;
  os << j.dump(2) << "\n";
}

void set_sweep_var(RunSpec& s, const std::string& var, double v) {
  if (var == "gamma_bar") s.params.gamma_bar = v;
  else if (var == "K") s.params.K = v;
  else if (var == "delta") s.params.delta = v;
  else if (var == "m1") s.params.m1 = v;
  else if (var == "m2") s.params.m2 = v;
  else if (var == "gamma_th") s.gamma_th = v;
  else if (var == "R_th") s.cci.sir_threshold = v;
  else throw std::invalid_argument("unknown sweep variable: " + var);
}

double auto_xmax(const IftrParams& p, int J) {
  const GammaMixture m = build_mixture(p, J);
  double retained = 0.0;
  for (double w : m.weights) retained += w;
  double lo = 0.0, hi = 8.0 * p.gamma_bar;
  while (m.cdf(hi) <= 0.999 * retained) hi *= 2.0;
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    (m.cdf(mid) > 0.999 * retained ? hi : lo) = mid;
  }
  return hi;
}

mc::SimConfig sim_or_default(const RunSpec& s) {
  if (s.sim) return *s.sim;
  mc::SimConfig cfg;
  return cfg;
}

// Default sweep when the command naturally plots against mean SNR.
Sweep default_snr_sweep(double stop_db, int points) {
  Sweep sw;
  sw.var = "gamma_bar";
  sw.start = 0.0;
  sw.stop = stop_db;
  sw.points = points;
  sw.db = true;
  return sw;
}

Artifact sweep_table(const RunSpec& spec, const Sweep& sw,
                     const std::vector<std::pair<std::string, std::function<double(const RunSpec&)>>>& evals) {
  Artifact a;
  const std::vector<double> vals = sw.values();
  Column xcol{sw.db ? sw.var + "_db" : sw.var, {}};
  std::vector<Column> ycols;
  for (const auto& [name, _] : evals) ycols.push_back({name, {}});
  for (size_t i = 0; i < vals.size(); ++i) {
    RunSpec cur = spec;
    set_sweep_var(cur, sw.var, vals[i]);
    xcol.values.push_back(sw.db ? sw.start + (sw.stop - sw.start) * static_cast<double>(i) /
                                      (sw.points - 1)
                                : vals[i]);
    for (size_t e = 0; e < evals.size(); ++e)
      ycols[e].values.push_back(evals[e].second(cur));
  }
  a.columns.push_back(std::move(xcol));
  for (auto& c : ycols) a.columns.push_back(std::move(c));
  return a;
}

Artifact run_coeffs(const RunSpec& s) {
  Artifact a;
  const GammaMixture m = build_mixture(s.params, s.J);
  Column j{"j", {}}, w{"A_j", {}};
  for (int i = 0; i < m.truncation(); ++i) {
    j.values.push_back(i);
    w.values.push_back(m.weights[static_cast<size_t>(i)]);
  }
  a.columns = {std::move(j), std::move(w)};
  return a;
}

Artifact run_density(const RunSpec& s, bool want_pdf) {
  Artifact a;
  const double hi = s.x_max > 0.0 ? s.x_max : auto_xmax(s.params, s.J);
  const GammaMixture m = build_mixture(s.params, s.J);
  if (s.sim) {
    mc::SimConfig cfg = *s.sim;
    const std::vector<double> samples =
        mc::sample_snr(s.params, cfg.num_samples, cfg.seed, cfg.num_threads);
    if (want_pdf) {
      const int bins = s.points;
      const mc::Histogram h = mc::empirical_pdf(samples, bins, hi);
      Column x{"x", {}}, pa{"pdf_analytic", {}}, pm{"pdf_mc", {}};
      for (int b = 0; b < bins; ++b) {
        const double xc = 0.5 * (h.edges[b] + h.edges[b + 1]);
        x.values.push_back(xc);
        pa.values.push_back(m.pdf(xc));
        pm.values.push_back(h.density[static_cast<size_t>(b)]);
      }
      a.columns = {std::move(x), std::move(pa), std::move(pm)};
    } else {
      const std::vector<double> grid = linspace(0.0, hi, s.points);
      const std::vector<double> ec = mc::empirical_cdf(samples, grid);
      Column x{"x", {}}, ca{"cdf_analytic", {}}, cm{"cdf_mc", {}};
      for (int i = 0; i < s.points; ++i) {
        x.values.push_back(grid[static_cast<size_t>(i)]);
        ca.values.push_back(m.cdf(grid[static_cast<size_t>(i)]));
        cm.values.push_back(ec[static_cast<size_t>(i)]);
      }
      a.columns = {std::move(x), std::move(ca), std::move(cm)};
    }
    return a;
  }
  const std::vector<double> grid = linspace(0.0, hi, s.points);
  Column x{"x", {}}, y{want_pdf ? "pdf_analytic" : "cdf_analytic", {}};
  for (double xi : grid) {
    x.values.push_back(xi);
    y.values.push_back(want_pdf ? m.pdf(xi) : m.cdf(xi));
  }
  a.columns = {std::move(x), std::move(y)};
  return a;
}

Artifact run_gmgf(const RunSpec& s) {
  const bool integral = s.gmgf_n == std::floor(s.gmgf_n) && s.gmgf_n >= 0.0;
  std::vector<std::pair<std::string, std::function<double(const RunSpec&)>>> evals;
  evals.emplace_back("gmgf_real", [](const RunSpec& c) {
    return gmgf_real(c.params, c.gmgf_n, c.gmgf_s, c.J);
  });
  if (integral)
    evals.emplace_back("gmgf_int", [](const RunSpec& c) {
      return gmgf_int(c.params, static_cast<int>(c.gmgf_n), c.gmgf_s);
    });
  if (s.sweep) return sweep_table(s, *s.sweep, evals);
  Artifact a;
  a.columns.push_back({"n", {s.gmgf_n}});
  a.columns.push_back({"s", {s.gmgf_s}});
  for (auto& [name, fn] : evals) a.columns.push_back({name, {fn(s)}});
  return a;
}

Artifact run_moments(const RunSpec& s) {
  Artifact a;
  Column n{"n", {}}, mi{"moment_int", {}}, mr{"moment_real", {}};
  for (int i = 0; i <= s.moments_max; ++i) {
    n.values.push_back(i);
    mi.values.push_back(moment_int(s.params, i));
    mr.values.push_back(moment_real(s.params, i, s.J));
  }
  a.columns = {std::move(n), std::move(mi), std::move(mr)};
  return a;
}

Artifact run_scalar_metric(const RunSpec& s) {
  std::vector<std::pair<std::string, std::function<double(const RunSpec&)>>> evals;
  switch (s.command) {
    case Command::aof:
      evals.emplace_back("aof", [](const RunSpec& c) { return aof(c.params); });
      break;
    case Command::capacity:
      evals.emplace_back("capacity", [](const RunSpec& c) {
        return avg_capacity(c.params, c.J);
      });
      if (s.sim)
        evals.emplace_back("capacity_mc", [](const RunSpec& c) {
          return mc::simulate_capacity(c.params, *c.sim);
        });
      break;
    case Command::outage:
      evals.emplace_back("outage", [](const RunSpec& c) {
        return outage(c.params, c.gamma_th, c.J);
      });
      if (s.sim)
        evals.emplace_back("outage_mc", [](const RunSpec& c) {
          return mc::simulate_outage(c.params, c.gamma_th, *c.sim);
        });
      break;
    case Command::outage_cci:
      evals.emplace_back("outage_cci", [](const RunSpec& c) {
        return outage_cci(c.params, c.cci);
      });
      if (s.sim)
        evals.emplace_back("outage_cci_mc", [](const RunSpec& c) {
          return mc::simulate_outage_cci(c.params, c.cci, *c.sim);
        });
      break;
    case Command::ber:
      evals.emplace_back("ber", [](const RunSpec& c) {
        return avg_ber(c.params, c.mod, c.J);
      });
      evals.emplace_back("ber_asymptotic", [](const RunSpec& c) {
        return avg_ber_asymptotic(c.params, c.mod);
      });
      if (s.sim)
        evals.emplace_back("ber_mc", [](const RunSpec& c) {
          return mc::simulate_ber(c.params, c.mod, *c.sim);
        });
      break;
    default:
      throw std::logic_error("run_scalar_metric: unexpected command");
  }
  Sweep sw;
  if (s.sweep) {
    sw = *s.sweep;
  } else if (s.command == Command::aof) {
    Artifact a;
    for (auto& [name, fn] : evals) a.columns.push_back({name, {fn(s)}});
    return a;
  } else {
    sw = default_snr_sweep(s.command == Command::ber ? 50.0 : 30.0,
                           s.command == Command::ber ? 26 : 31);
  }
  return sweep_table(s, sw, evals);
}

Artifact run_ks_table(const RunSpec& s) {
  struct Row {
    double K, m1, m2, delta;
  };
  static constexpr Row kRows[] = {
      {10, 8, 5, 0.5}, {15, 8, 5, 0.5}, {10, 8, 5, 0.8},
      {10, 8, 5, 0.3}, {10, 15, 5, 0.5},
  };
  static constexpr int kJs[] = {20, 30, 40};
  Artifact a;
  Column ck{"K", {}}, cm1{"m1", {}}, cm2{"m2", {}}, cd{"delta", {}};
  std::vector<Column> cj;
  for (int J : kJs) cj.push_back({"ks_J" + std::to_string(J), {}});
  for (const Row& r : kRows) {
    IftrParams p{s.params.gamma_bar, r.m1, r.m2, r.K, r.delta};
    const std::vector<double> grid = ks_default_grid(p, s.J_ref);
    ck.values.push_back(r.K);
    cm1.values.push_back(r.m1);
    cm2.values.push_back(r.m2);
    cd.values.push_back(r.delta);
    for (size_t i = 0; i < std::size(kJs); ++i)
      cj[i].values.push_back(ks_truncation(p, kJs[i], s.J_ref, grid));
  }
  a.columns = {std::move(ck), std::move(cm1), std::move(cm2), std::move(cd)};
  for (auto& c : cj) a.columns.push_back(std::move(c));
  return a;
}

Artifact run_simulate(const RunSpec& s) {
  const mc::SimConfig cfg = sim_or_default(s);
  std::vector<std::pair<std::string, std::function<double(const RunSpec&)>>> evals;
  const std::string& q = s.quantity;
  if (q == "mean") {
    evals.emplace_back("mean_mc", [&](const RunSpec& c) {
      return mc::simulate_moment(c.params, 1.0, cfg);
    });
    evals.emplace_back("mean_analytic", [](const RunSpec& c) {
      return moment_int(c.params, 1);
    });
  } else if (q == "moment") {
    evals.emplace_back("moment_mc", [&](const RunSpec& c) {
      return mc::simulate_moment(c.params, c.gmgf_n, cfg);
    });
    evals.emplace_back("moment_analytic", [](const RunSpec& c) {
      return moment_real(c.params, c.gmgf_n, c.J);
    });
  } else if (q == "capacity") {
    evals.emplace_back("capacity_mc", [&](const RunSpec& c) {
      return mc::simulate_capacity(c.params, cfg);
    });
    evals.emplace_back("capacity_analytic", [](const RunSpec& c) {
      return avg_capacity(c.params, c.J);
    });
  } else if (q == "ber") {
    evals.emplace_back("ber_mc", [&](const RunSpec& c) {
      return mc::simulate_ber(c.params, c.mod, cfg);
    });
    evals.emplace_back("ber_analytic", [](const RunSpec& c) {
      return avg_ber(c.params, c.mod, c.J);
    });
  } else if (q == "outage") {
    evals.emplace_back("outage_mc", [&](const RunSpec& c) {
      return mc::simulate_outage(c.params, c.gamma_th, cfg);
    });
    evals.emplace_back("outage_analytic", [](const RunSpec& c) {
      return outage(c.params, c.gamma_th, c.J);
    });
  } else if (q == "outage-cci") {
    evals.emplace_back("outage_cci_mc", [&](const RunSpec& c) {
      return mc::simulate_outage_cci(c.params, c.cci, cfg);
    });
    evals.emplace_back("outage_cci_analytic", [](const RunSpec& c) {
      return outage_cci(c.params, c.cci);
    });
  } else if (q == "ks") {
    evals.emplace_back("ks_mc", [&](const RunSpec& c) {
      const std::vector<double> samples =
          mc::sample_snr(c.params, cfg.num_samples, cfg.seed, cfg.num_threads);
      return mc::ks_empirical(samples, c.params, c.J);
    });
    evals.emplace_back("ks_critical_1pct", [&](const RunSpec&) {
      return 1.63 / std::sqrt(static_cast<double>(cfg.num_samples));
    });
  } else {
    throw std::invalid_argument("simulate: unknown quantity '" + q + "'");
  }
  if (s.sweep) return sweep_table(s, *s.sweep, evals);
  Artifact a;
  for (auto& [name, fn] : evals) a.columns.push_back({name, {fn(s)}});
  return a;
}

struct FigureCurve {
  std::string label;
  IftrParams params;
  CciScenario cci;
};

Artifact run_figure(const RunSpec& s) {
  Artifact a;
  const double g = s.params.gamma_bar;
  auto lbl = [](const char* prefix, const IftrParams& p) {
    std::ostringstream os;
    os << prefix << "(m1=" << p.m1 << ";m2=" << p.m2 << ";K=" << p.K
       << ";delta=" << p.delta << ")";
    return os.str();
  };
  switch (s.figure_id) {
    case 1:
    case 2:
    case 3: {
      std::vector<IftrParams> ps;
      if (s.figure_id == 1)
        ps = {{g, 8, 5, 10, 0.1}, {g, 8, 5, 10, 0.9},
              {g, 15.7, 5.1, 10, 0.1}, {g, 15.7, 5.1, 10, 0.9}};
      else if (s.figure_id == 2)
        ps = {{g, 8, 5, 5, 0.5}, {g, 8, 5, 15, 0.5},
              {g, 15.7, 5.1, 5, 0.5}, {g, 15.7, 5.1, 15, 0.5}};
      else
        ps = {{g, 8, 5, 10, 0.5}, {g, 15, 7.5, 15, 0.5},
              {g, 8, 5, 5, 0.9}, {g, 8, 5, 10, 0.3}};
      const bool pdf_fig = s.figure_id != 3;
      double hi = s.x_max;
      if (hi <= 0.0)
        for (const auto& p : ps) hi = std::max(hi, auto_xmax(p, s.J));
      Column x{"x", linspace(0.0, hi, s.points)};
      a.columns.push_back(x);
      for (const auto& p : ps) {
        const GammaMixture m = build_mixture(p, s.J);
        Column c{lbl(pdf_fig ? "pdf" : "cdf", p), {}};
        for (double xi : x.values) c.values.push_back(pdf_fig ? m.pdf(xi) : m.cdf(xi));
        a.columns.push_back(std::move(c));
      }
      break;
    }
    case 4:
    case 5:
    case 6: {
      std::vector<IftrParams> ps;
      if (s.figure_id == 4)
        ps = {{g, 8, 5, 5, 0.1}, {g, 8, 5, 5, 0.9},
              {g, 8, 5, 15, 0.1}, {g, 8, 5, 15, 0.9}};
      else
        ps = {{g, 15, 7.5, 15, 0.5}, {g, 15, 7.5, 5, 0.5},
              {g, 15, 7.5, 5, 0.9}, {g, 5, 2.5, 15, 0.5}};
      Column x{"gamma_bar_db", linspace(0.0, 30.0, 31)};
      a.columns.push_back(x);
      for (const auto& p : ps) {
        const char* prefix = s.figure_id == 4   ? "capacity"
                             : s.figure_id == 5 ? "pout"
                                                : "pout_cci";
        Column c{lbl(prefix, p), {}};
        for (double xdb : x.values) {
          IftrParams cur = p;
          cur.gamma_bar = db_to_lin(xdb);
          if (s.figure_id == 4)
            c.values.push_back(avg_capacity(cur, s.J));
          else if (s.figure_id == 5)
            c.values.push_back(outage(cur, 1.0, s.J));
          else
            c.values.push_back(outage_cci(cur, CciScenario{2, 1, 1.0, 1.0}));
        }
        a.columns.push_back(std::move(c));
      }
      break;
    }
    case 7: {
      Column x{"R_th_db", linspace(-20.0, 20.0, 41)};
      a.columns.push_back(x);
      const IftrParams p{g, 3, 30, 5, 0.5};
      for (int N : {1, 2, 3}) {
        for (double pi_w : {1.0, 2.0}) {
          std::ostringstream os;
          os << "pout_cci(N=" << N << ";PI=" << pi_w << ")";
          Column c{os.str(), {}};
          for (double xdb : x.values)
            c.values.push_back(outage_cci(p, CciScenario{N, 1, pi_w, db_to_lin(xdb)}));
          a.columns.push_back(std::move(c));
        }
      }
      break;
    }
    case 8: {
      Column x{"gamma_bar_db", linspace(0.0, 50.0, 51)};
      a.columns.push_back(x);
      const ModulationSpec bpsk = ModulationSpec::bpsk();
      for (double delta : {0.1, 0.5, 0.9}) {
        IftrParams p{g, 15.7, 5.1, 10, delta};
        Column ce{lbl("ber", p), {}}, ca{lbl("ber_asymptotic", p), {}};
        for (double xdb : x.values) {
          IftrParams cur = p;
          cur.gamma_bar = db_to_lin(xdb);
          ce.values.push_back(avg_ber(cur, bpsk, s.J));
          ca.values.push_back(avg_ber_asymptotic(cur, bpsk));
        }
        a.columns.push_back(std::move(ce));
        a.columns.push_back(std::move(ca));
      }
      break;
    }
    default:
      throw std::invalid_argument("figure: expects a figure number in 1..8");
  }
  return a;
}

Artifact run_impl(const RunSpec& s) {
  switch (s.command) {
    case Command::coeffs:
      return run_coeffs(s);
    case Command::pdf:
      return run_density(s, true);
    case Command::cdf:
      return run_density(s, false);
    case Command::gmgf:
      return run_gmgf(s);
    case Command::moments:
      return run_moments(s);
    case Command::aof:
    case Command::capacity:
    case Command::outage:
    case Command::outage_cci:
    case Command::ber:
      return run_scalar_metric(s);
    case Command::ks_table:
      return run_ks_table(s);
    case Command::simulate:
      return run_simulate(s);
    case Command::figure:
      return run_figure(s);
  }
  throw std::logic_error("unreachable");
}

}  // namespace

std::vector<double> Sweep::values() const {
  if (points < 2) throw std::invalid_argument("sweep: points must be >= 2");
  std::vector<double> v = linspace(start, stop, points);
  if (db)
    for (double& x : v) x = db_to_lin(x);
  return v;
}

void RunSpec::validate() const {
  params.validate();
  if (J < 1) throw std::invalid_argument("J must be >= 1");
  if (points < 2) throw std::invalid_argument("points must be >= 2");
  if (sweep) {
    static const char* allowed[] = {"gamma_bar", "K", "delta", "m1",
                                    "m2", "gamma_th", "R_th"};
    bool ok = false;
    for (const char* v : allowed) ok = ok || sweep->var == v;
    if (!ok) throw std::invalid_argument("unknown sweep variable: " + sweep->var);
    if (sweep->points < 2) throw std::invalid_argument("sweep points must be >= 2");
  }
  if (command == Command::ks_table && J_ref <= 40)
    throw std::invalid_argument("ks-table: J_ref must exceed the tabulated depths");
  if (command == Command::figure && (figure_id < 1 || figure_id > 8))
    throw std::invalid_argument("figure: expects a figure number in 1..8");
  if (sim) sim->validate();
}

int run(const RunSpec& spec) {
  try {
    spec.validate();
    Artifact a = run_impl(spec);
    a.inputs = spec_inputs_json(spec);
    // residual mass of the expansion actually used, echoed with the inputs
    const GammaMixture m = build_mixture(spec.params, spec.J);
    a.inputs["residual_mass"] = m.residual_mass;

    std::ostringstream body;
    if (spec.format == Format::csv)
      write_csv(body, a);
    else
      write_json_artifact(body, a);

    if (spec.out_path.empty()) {
      std::cout << body.str();
      return std::cout ? 0 : 4;
    }
    std::ofstream f(spec.out_path, std::ios::binary);
    if (!f) {
      std::cerr << "error: cannot open output path: " << spec.out_path << "\n";
      return 4;
    }
    f << body.str();
    f.flush();
    if (!f) {
      std::cerr << "error: write failed: " << spec.out_path << "\n";
      return 4;
    }
    return 0;
  } catch (const truncation_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const divergence_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const internal_consistency_error& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "i/o error: " << e.what() << "\n";
    return 4;
  }
}

RunSpec spec_from_json_artifact(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::ios_base::failure("cannot open artifact: " + path);
  json j;
  f >> j;
  return spec_from_inputs_json(j.at("inputs"));
}

int main_cli(int argc, const char* const* argv) {
  CLI::App app{"analytics and Monte Carlo verification for two-ray fading channels"};
  app.require_subcommand(1);

  RunSpec spec;
  bool db_inputs = false;
  std::int64_t samples = 0;
  std::uint64_t seed = 1;
  int threads = 0;
  int bins = 100;
  std::string sweep_expr, format = "csv", mod_terms, replay_path;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--gamma-bar", spec.params.gamma_bar, "mean SNR (linear; dB with --db)");
    sub->add_option("--K", spec.params.K, "specular-to-diffuse power ratio");
    sub->add_option("--delta", spec.params.delta, "specular similarity in [0,1]");
    sub->add_option("--m1", spec.params.m1, "fading severity of specular 1");
    sub->add_option("--m2", spec.params.m2, "fading severity of specular 2");
    sub->add_option("--J", spec.J, "series truncation depth");
    sub->add_option("--J-ref", spec.J_ref, "reference truncation depth");
    sub->add_flag("--db", db_inputs, "interpret SNR-like inputs as dB");
    sub->add_option("--seed", seed, "RNG seed");
    sub->add_option("--samples", samples, "Monte Carlo sample count (enables MC columns)");
    sub->add_option("--threads", threads, "worker threads (0 = auto)");
    sub->add_option("--bins", bins, "histogram bins");
    sub->add_option("--out", spec.out_path, "output path (default stdout)");
    sub->add_option("--format", format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--sweep", sweep_expr, "var:start:stop:points[:db]");
    sub->add_option("--points", spec.points, "grid points / bins for pdf, cdf");
    sub->add_option("--x-max", spec.x_max, "upper end of the x grid (0 = auto)");
  };

  std::map<std::string, CLI::App*> subs;
  for (const auto& [name, cmd] : command_names()) {
    CLI::App* sub = app.add_subcommand(name, "");
    add_common(sub);
    subs[name] = sub;
  }
  subs["gmgf"]->add_option("--n", spec.gmgf_n, "derivative order");
  subs["gmgf"]->add_option("--s", spec.gmgf_s, "transform argument");
  subs["simulate"]->add_option("--n", spec.gmgf_n, "moment order");
  subs["moments"]->add_option("--max-n", spec.moments_max, "highest moment order");
  subs["outage"]->add_option("--gamma-th", spec.gamma_th, "SNR threshold (linear; dB with --db)");
  for (const char* c : {"outage-cci", "simulate"}) {
    subs[c]->add_option("--antennas,-N", spec.cci.antennas, "MRC branches");
    subs[c]->add_option("--interferers,-L", spec.cci.interferers, "Rayleigh interferers");
    subs[c]->add_option("--PI", spec.cci.interference_power, "average interference power");
    subs[c]->add_option("--Rth", spec.cci.sir_threshold, "SIR threshold (linear; dB with --db)");
  }
  subs["simulate"]
      ->add_option("--quantity", spec.quantity,
                   "mean|moment|capacity|ber|outage|outage-cci|ks")
      ->check(CLI::IsMember({"mean", "moment", "capacity", "ber", "outage",
                             "outage-cci", "ks"}));
  subs["simulate"]->add_option("--gamma-th", spec.gamma_th, "SNR threshold");
  for (const char* c : {"ber", "simulate"})
    subs[c]->add_option("--mod-terms", mod_terms,
                        "alpha:beta[,alpha:beta...] (default BPSK 1:2)");
  subs["figure"]->add_option("n", spec.figure_id, "figure number 1..8");

  CLI::App* replay = app.add_subcommand("replay", "re-run a JSON artifact's inputs");
  replay->add_option("artifact", replay_path, "JSON artifact path")->required();
  replay->add_option("--out", spec.out_path, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (replay->parsed()) {
    try {
      RunSpec rs = spec_from_json_artifact(replay_path);
      rs.out_path = spec.out_path;
      rs.format = Format::json;
      return iftr::cli::run(rs);
    } catch (const std::exception& e) {
      std::cerr << "replay failed: " << e.what() << "\n";
      return 4;
    }
  }

  for (const auto& [name, cmd] : command_names()) {
    if (subs[name]->parsed()) {
      spec.command = cmd;
      break;
    }
  }
  spec.format = (format == "json") ? Format::json : Format::csv;
  if (db_inputs) {
    spec.params.gamma_bar = db_to_lin(spec.params.gamma_bar);
    spec.gamma_th = db_to_lin(spec.gamma_th);
    spec.cci.sir_threshold = db_to_lin(spec.cci.sir_threshold);
  }
  if (!sweep_expr.empty()) {
    Sweep sw;
    std::stringstream ss(sweep_expr);
    std::string tok;
    std::vector<std::string> parts;
    while (std::getline(ss, tok, ':')) parts.push_back(tok);
    try {
      if (parts.size() < 4 || parts.size() > 5) throw std::invalid_argument("");
      sw.var = parts[0];
      sw.start = std::stod(parts[1]);
      sw.stop = std::stod(parts[2]);
      sw.points = std::stoi(parts[3]);
      sw.db = parts.size() == 5 && parts[4] == "db";
      if (parts.size() == 5 && parts[4] != "db") throw std::invalid_argument("");
    } catch (const std::exception&) {
      std::cerr << "invalid input: --sweep expects var:start:stop:points[:db]\n";
      return 2;
    }
    spec.sweep = sw;
  }
  if (!mod_terms.empty()) {
    ModulationSpec m;
    std::stringstream ss(mod_terms);
    std::string pair;
    while (std::getline(ss, pair, ',')) {
      const size_t colon = pair.find(':');
      if (colon == std::string::npos) {
        std::cerr << "invalid input: --mod-terms expects alpha:beta[,alpha:beta...]\n";
        return 2;
      }
      try {
        m.terms.push_back({std::stod(pair.substr(0, colon)), std::stod(pair.substr(colon + 1))});
      } catch (const std::exception&) {
        std::cerr << "invalid input: --mod-terms expects numeric alpha:beta pairs\n";
        return 2;
      }
    }
    spec.mod = m;
  }
  if (samples > 0 || spec.command == Command::simulate) {
    mc::SimConfig cfg;
    cfg.num_samples = samples > 0 ? samples : cfg.num_samples;
    cfg.seed = seed;
    cfg.num_threads = threads;
    cfg.histogram_bins = bins;
    spec.sim = cfg;
  }
  return iftr::cli::run(spec);
}

}  // namespace iftr::cli

// SPDX-License-Identifier: Apache-2.0
//
// isacbf - hybrid transmit beamforming for mmWave integrated sensing and communication
// Copyright (C) 2026 The isacbf authors
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

#include "isacbf/isacbf.h"

#include <CLI11.hpp>

#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace {

struct Options {
  std::string config;
  std::string out;
  int trials = 0;
  uint64_t seed = 1;
  bool paper_scale = false;
  int threads = 0;
  std::vector<double> p_tx_dbm;
  std::vector<double> sinr_db;
  std::vector<int> n_beams;
};

struct ScenarioDeleter {
  void operator()(isacbf_scenario* s) const { isacbf_scenario_destroy(s); }
};
using ScenarioPtr = std::unique_ptr<isacbf_scenario, ScenarioDeleter>;

int report(isacbf_status st, const char* what) {
  std::fprintf(stderr, "isacbf: %s failed: %s\n", what, isacbf_last_error());
  return static_cast<int>(st);
}

bool scalar_only(const std::vector<double>& v, const char* flag) {
  if (v.size() <= 1) return true;
  std::fprintf(stderr, "isacbf: %s takes a single value for this experiment\n", flag);
  return false;
}

int run(isacbf_experiment kind, const Options& o) {
  isacbf_scenario* raw = nullptr;
  isacbf_status st;
  if (!o.config.empty())
    st = isacbf_scenario_load(o.config.c_str(), &raw);
  else if (o.paper_scale)
    st = isacbf_scenario_create_default(&raw);
  else
    st = isacbf_scenario_create_desk(&raw);
  if (st != ISACBF_OK) return report(st, "loading scenario");
  ScenarioPtr scenario(raw);

  isacbf_experiment_options opts;
  isacbf_experiment_options_init(&opts, kind);
  opts.trials = o.trials;
  opts.seed = o.seed;
  opts.paper_scale = o.paper_scale ? 1 : 0;
  opts.threads = o.threads;

  // Overrides either replace the swept axis or fix a scenario field.
  const std::vector<double>* sweep = nullptr;
  if (kind == ISACBF_POWER_SWEEP) {
    sweep = o.p_tx_dbm.empty() ? nullptr : &o.p_tx_dbm;
    opts.sinr_series_db = o.sinr_db.empty() ? nullptr : o.sinr_db.data();
    opts.n_sinr_series = o.sinr_db.size();
  } else {
    if (!scalar_only(o.p_tx_dbm, "--p-tx-dbm")) return 2;
    if (!o.p_tx_dbm.empty() && (st = isacbf_scenario_set_p_tx_dbm(scenario.get(), o.p_tx_dbm[0])) != ISACBF_OK)
      return report(st, "setting transmit power");
    if (kind == ISACBF_BEAMPATTERN) {
      if (!scalar_only(o.sinr_db, "--sinr-db")) return 2;
      if (!o.sinr_db.empty() &&
          (st = isacbf_scenario_set_sinr_threshold_db(scenario.get(), o.sinr_db[0])) != ISACBF_OK)
        return report(st, "setting SINR threshold");
    } else {
      sweep = o.sinr_db.empty() ? nullptr : &o.sinr_db;
    }
  }
  std::vector<double> beams_as_values(o.n_beams.begin(), o.n_beams.end());
  if (kind == ISACBF_BEAMPATTERN) {
    if (!beams_as_values.empty()) sweep = &beams_as_values;
  } else if (!o.n_beams.empty()) {
    opts.beam_series = o.n_beams.data();
    opts.n_beam_series = o.n_beams.size();
  }
  if (sweep) {
    opts.values = sweep->data();
    opts.n_values = sweep->size();
  }

  char* summary = nullptr;
  st = isacbf_run_experiment(scenario.get(), &opts, o.out.c_str(), &summary);
  if (st != ISACBF_OK) return report(st, "experiment");
  std::fputs(summary, stdout);
  isacbf_string_free(summary);
  std::fprintf(stderr, "isacbf: wrote %s and %s.json\n", o.out.c_str(), o.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid transmit beamforming for mmWave sensing and communication"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(isacbf_version()));

  struct Entry {
    const char* name;
    const char* help;
    isacbf_experiment kind;
  };
  const Entry entries[] = {
      {"power-sweep", "SBP versus transmit power, proposed and radar-only", ISACBF_POWER_SWEEP},
      {"tradeoff", "Sum rate and SBP versus the SINR threshold", ISACBF_TRADEOFF},
      {"beampattern", "Beampattern of one channel realization", ISACBF_BEAMPATTERN},
      {"imsr", "Integrated mainlobe-to-sidelobe ratio versus the SINR threshold", ISACBF_IMSR},
  };

  Options o;
  std::optional<isacbf_experiment> chosen;
  for (const auto& e : entries) {
    auto* sub = app.add_subcommand(e.name, e.help);
    sub->add_option("--config", o.config, "Scenario JSON (fields not given keep their defaults)")
        ->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "Output CSV; metadata goes to <out>.json")->required();
    sub->add_option("--trials", o.trials, "Monte Carlo trials per point")->check(CLI::PositiveNumber);
    sub->add_option("--seed", o.seed, "Root seed");
    sub->add_flag("--paper-scale", o.paper_scale, "64 antennas, 3 CUs, 500 trials");
    sub->add_option("--threads", o.threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
    sub->add_option("--p-tx-dbm", o.p_tx_dbm, "Transmit power(s) in dBm");
    sub->add_option("--sinr-db", o.sinr_db, "SINR threshold(s) in dB");
    sub->add_option("--n-beams", o.n_beams, "Number of sensing beams")->check(CLI::PositiveNumber);
    const auto kind = e.kind;
    sub->callback([&chosen, kind] { chosen = kind; });
  }
  CLI11_PARSE(app, argc, argv);
  return chosen ? run(*chosen, o) : 1;
}

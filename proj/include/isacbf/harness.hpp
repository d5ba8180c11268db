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

#pragma once

#include "isacbf/io.hpp"
#include "isacbf/optimizer.hpp"
#include "isacbf/scenario.hpp"

#include <map>
#include <string>
#include <vector>

namespace isacbf {

enum class ExperimentKind { PowerSweep, Tradeoff, Beampattern, Imsr };
enum class SweepVariable { PTxDbm, SinrThresholdDb, NBeams };

std::string kind_name(ExperimentKind kind);
ExperimentKind kind_from_name(const std::string& name);
std::string sweep_name(SweepVariable v);

struct ExperimentSpec {
  ScenarioConfig base;
  ExperimentKind kind = ExperimentKind::PowerSweep;
  SweepVariable sweep = SweepVariable::PTxDbm;
  std::vector<double> values;
  // Secondary series: one curve per SINR threshold (power sweep only) and
  // per beam count.
  std::vector<double> sinr_series_db;
  std::vector<int> beam_series;
  int trials = 50;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: hardware concurrency
  double imsr_theta0_deg = 40.0;
  double imsr_delta_deg = 20.0;
  int imsr_grid = 2048;
  std::string output_path;
};

// Desk-scale (16 antennas, 50 trials) or full-scale (64 antennas, 500
// trials) defaults reproducing each study.
ExperimentSpec default_spec(ExperimentKind kind, bool paper_scale = false);
void validate(const ExperimentSpec& spec);

struct MetricStat {
  double mean = 0.0;
  double stderr_ = 0.0;
  int count = 0;
};

// Aggregated over the successful trials of one sweep point.
struct SweepPoint {
  std::string scheme;  // "proposed", "radar_only", "comm_only"
  int n_beams = 0;
  double p_tx_dbm = 0.0;
  double sinr_threshold_db = 0.0;  // NaN when the scheme ignores it
  int trials = 0;
  int failures = 0;
  std::string config_hash;
  std::map<std::string, MetricStat> metrics;
};

struct BeampatternChecks {
  std::vector<double> cu_angles_deg;
  std::vector<bool> cu_peak_found;  // local maximum within +-3 degrees
  double sector_mean = 0.0;
  double sidelobe_mean = 0.0;
  bool all_peaks() const;
  bool sector_above_sidelobes() const { return sector_mean > sidelobe_mean; }
};

// Examines chi on a 0.1 degree grid over [-90, 90].
BeampatternChecks analyze_beampattern(const HybridPrecoder& p, const std::vector<double>& cu_angles_deg,
                                      std::pair<double, double> sector_deg, double peak_window_deg = 3.0);

struct BeampatternSeries {
  std::string scheme;
  int n_beams = 0;
  std::vector<BeampatternPoint> sweep;
};

struct ExperimentResult {
  ExperimentKind kind = ExperimentKind::PowerSweep;
  std::vector<SweepPoint> points;
  std::vector<BeampatternSeries> patterns;
  std::vector<std::string> warnings;
  std::vector<std::string> failure_messages;
  std::uint64_t seed = 0;
  int trials = 0;
  std::string config_hash;
  json metadata;

  // First point matching the labels (NaN sinr matches NaN).
  const SweepPoint* find(const std::string& scheme, int n_beams, double p_tx_dbm, double sinr_db) const;
};

ExperimentResult run_power_sweep(const ExperimentSpec& spec);
ExperimentResult run_tradeoff(const ExperimentSpec& spec);
ExperimentResult run_beampattern(const ExperimentSpec& spec);
ExperimentResult run_imsr(const ExperimentSpec& spec);
ExperimentResult run_experiment(const ExperimentSpec& spec);

// Sweep tables: one row per point with metric means and standard errors and
// the reproducibility columns. Beampattern tables: scheme,n_beams,angle_deg,
// gain_db. Warnings follow as '# warning:' lines.
std::string to_csv(const ExperimentResult& result);
json metadata_json(const ExperimentResult& result, const ExperimentSpec& spec);

// Writes the CSV to spec.output_path and the metadata to <output_path>.json.
void write_outputs(const ExperimentResult& result, const ExperimentSpec& spec);

}  // namespace isacbf

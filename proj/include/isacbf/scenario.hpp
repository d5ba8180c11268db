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

#include "isacbf/types.hpp"

#include <cmath>
#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace isacbf {

struct PathlossParams {
  double epsilon_db = 61.4;
  double exponent = 2.0;
  double shadow_sigma_db = 5.8;
  bool operator==(const PathlossParams&) const = default;
};

// How the baseband precoder block is updated inside the alternation.
enum class BbUpdateMode {
  // Exact minimizer of the block subproblem under the transmit-power budget
  // (trust-region style multiplier on the power constraint).
  PowerConstrained,
  // Unconstrained stationarity solve with a ridge added whenever the
  // stationarity matrix is not safely positive definite.
  Ridge,
  // Stationarity matrix alpha * sum h h^H - 2 I, as printed in the original
  // closed form. Kept for comparison only.
  PaperLiteral,
};

// All physical and algorithmic parameters of one experiment. Angles are in
// degrees and powers in dBm / dB at this boundary; everything downstream is
// radians and linear units.
struct ScenarioConfig {
  int n_tx = 64;
  int n_rf = 6;
  int n_cu = 3;
  int n_beams = 3;
  std::vector<double> cu_angles_deg{-60.0, -40.0, -20.0};
  std::vector<double> cu_distances_m{20.0, 20.0, 20.0};
  std::pair<double, double> object_sector_deg{30.0, 50.0};
  double p_tx_dbm = 10.0;
  double noise_power_dbm = -91.0;
  // Optional per-CU override of noise_power_dbm.
  std::vector<double> noise_power_dbm_per_cu;
  std::vector<double> sinr_thresholds_db{0.0, 0.0, 0.0};
  int n_paths = 10;
  double angular_spread_rad = kPi / 128.0;
  // Half-width of the truncated Laplacian, in multiples of the spread.
  double laplacian_truncation = 2.0;
  PathlossParams pathloss{};

  // Penalty weights and residuals live in normalized units: unit power
  // budget and unit noise at every CU. Smaller initial weights let the RF
  // columns collapse onto the sensing beams before the CU terms matter.
  double penalty_init = 1.0;
  double penalty_shrink = 0.5;
  double tol_inner = 1e-3;
  double tol_outer = 1e-4;
  double tol_linesearch = 1e-6;
  int max_outer = 30;
  int max_inner = 20;
  int max_rcg_iters = 100;
  BbUpdateMode bb_update = BbUpdateMode::PowerConstrained;
  // Re-evaluate the beam weights from the current pattern after every outer
  // iteration instead of holding them uniform.
  bool reweight_outer = false;

  std::uint64_t seed = 1;

  bool operator==(const ScenarioConfig&) const = default;
};

// Returns `config` unchanged if every invariant holds, otherwise throws
// ValidationError naming the first violated invariant.
ScenarioConfig validate(const ScenarioConfig& config);

// Simulation setup of the reference study: 64 antennas, 6 RF chains, three
// CUs at -60/-40/-20 degrees, a [30, 50] degree object and three beams.
ScenarioConfig full_scale_scenario();

// Reduced setup used for quick experiments: 16 antennas, two CUs at -60 and
// -20 degrees, three object beams (5 RF chains).
ScenarioConfig desk_scenario();

// Object beam directions in radians: centers of n_beams equal sub-sectors of
// the object sector.
std::vector<double> beam_angles_rad(const ScenarioConfig& config);
std::vector<double> beam_angles_rad(std::pair<double, double> sector_deg, int n_beams);

std::vector<double> cu_angles_rad(const ScenarioConfig& config);

// Per-CU noise power in mW.
std::vector<double> noise_powers_mw(const ScenarioConfig& config);

// Sets n_beams and keeps n_rf = n_cu + n_beams.
ScenarioConfig with_beams(ScenarioConfig config, int n_beams);
// Uniform SINR threshold for every CU.
ScenarioConfig with_sinr_threshold(ScenarioConfig config, double sinr_db);

inline double db_to_linear(double db) { return std::pow(10.0, 0.1 * db); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_mw(double dbm) { return db_to_linear(dbm); }

// Deterministic per-trial sub-seed. `stream` separates independent uses
// (channels, initial phases, ...) within one trial.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t counter, std::uint64_t stream = 0);

}  // namespace isacbf

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

#include "isacbf/scenario.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace isacbf {

namespace {

[[noreturn]] void fail(const std::string& what) { throw ValidationError("invalid scenario: " + what); }

bool finite(double v) { return std::isfinite(v); }

}  // namespace

ScenarioConfig validate(const ScenarioConfig& c) {
  if (c.n_tx < 1) fail("n_tx must be positive");
  if (c.n_rf < 1) fail("n_rf must be positive");
  if (c.n_cu < 1) fail("n_cu must be positive");
  if (c.n_beams < 1) fail("n_beams must be positive");
  if (c.n_rf != c.n_cu + c.n_beams) {
    std::ostringstream os;
    os << "n_rf (" << c.n_rf << ") must equal n_cu + n_beams (" << c.n_cu + c.n_beams << ")";
    fail(os.str());
  }
  if (c.n_rf > c.n_tx) fail("n_rf must not exceed n_tx");
  const auto n = static_cast<std::size_t>(c.n_cu);
  if (c.cu_angles_deg.size() != n) fail("cu_angles_deg must have n_cu entries");
  if (c.cu_distances_m.size() != n) fail("cu_distances_m must have n_cu entries");
  if (c.sinr_thresholds_db.size() != n) fail("sinr_thresholds_db must have n_cu entries");
  if (!c.noise_power_dbm_per_cu.empty() && c.noise_power_dbm_per_cu.size() != n)
    fail("noise_power_dbm_per_cu must be empty or have n_cu entries");
  for (double a : c.cu_angles_deg)
    if (!finite(a)) fail("cu_angles_deg must be finite");
  for (double d : c.cu_distances_m)
    if (!(d > 0.0) || !finite(d)) fail("cu_distances_m must be positive");
  for (double g : c.sinr_thresholds_db)
    if (!finite(g)) fail("sinr_thresholds_db must be finite");
  if (!(c.object_sector_deg.first < c.object_sector_deg.second))
    fail("object_sector_deg lower bound must be below the upper bound");
  if (!finite(c.p_tx_dbm) || !finite(c.noise_power_dbm)) fail("powers must be finite");
  if (c.n_paths < 1) fail("n_paths must be positive");
  if (!(c.angular_spread_rad > 0.0)) fail("angular_spread_rad must be positive");
  if (!(c.laplacian_truncation > 0.0)) fail("laplacian_truncation must be positive");
  if (!(c.pathloss.shadow_sigma_db >= 0.0)) fail("pathloss.shadow_sigma_db must be non-negative");
  if (!(c.penalty_init > 0.0)) fail("penalty_init must be positive");
  if (!(c.penalty_shrink > 0.0 && c.penalty_shrink < 1.0)) fail("penalty_shrink must lie in (0, 1)");
  if (!(c.tol_inner > 0.0) || !(c.tol_outer > 0.0) || !(c.tol_linesearch > 0.0))
    fail("tolerances must be positive");
  if (c.max_outer < 1 || c.max_inner < 1 || c.max_rcg_iters < 1) fail("iteration limits must be positive");
  return c;
}

ScenarioConfig full_scale_scenario() { return ScenarioConfig{}; }

ScenarioConfig desk_scenario() {
  ScenarioConfig c;
  c.n_tx = 16;
  c.n_cu = 2;
  c.n_beams = 3;
  c.n_rf = 5;
  c.cu_angles_deg = {-60.0, -20.0};
  c.cu_distances_m = {20.0, 20.0};
  c.sinr_thresholds_db = {0.0, 0.0};
  c.angular_spread_rad = kPi / (2.0 * c.n_tx);
  return c;
}

std::vector<double> beam_angles_rad(std::pair<double, double> sector_deg, int n_beams) {
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n_beams));
  const double span = sector_deg.second - sector_deg.first;
  for (int l = 0; l < n_beams; ++l)
    out.push_back(deg_to_rad(sector_deg.first + (l + 0.5) * span / n_beams));
  return out;
}

std::vector<double> beam_angles_rad(const ScenarioConfig& config) {
  return beam_angles_rad(config.object_sector_deg, config.n_beams);
}

std::vector<double> cu_angles_rad(const ScenarioConfig& config) {
  std::vector<double> out;
  for (double a : config.cu_angles_deg) out.push_back(deg_to_rad(a));
  return out;
}

std::vector<double> noise_powers_mw(const ScenarioConfig& config) {
  std::vector<double> out;
  for (int m = 0; m < config.n_cu; ++m) {
    const double dbm = config.noise_power_dbm_per_cu.empty()
                           ? config.noise_power_dbm
                           : config.noise_power_dbm_per_cu[static_cast<std::size_t>(m)];
    out.push_back(dbm_to_mw(dbm));
  }
  return out;
}

ScenarioConfig with_beams(ScenarioConfig config, int n_beams) {
  config.n_beams = n_beams;
  config.n_rf = config.n_cu + n_beams;
  return config;
}

ScenarioConfig with_sinr_threshold(ScenarioConfig config, double sinr_db) {
  config.sinr_thresholds_db.assign(static_cast<std::size_t>(config.n_cu), sinr_db);
  return config;
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t counter, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(root), static_cast<std::uint32_t>(root >> 32),
                    static_cast<std::uint32_t>(counter), static_cast<std::uint32_t>(counter >> 32),
                    static_cast<std::uint32_t>(stream)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

}  // namespace isacbf

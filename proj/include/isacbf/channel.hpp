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

#include "isacbf/scenario.hpp"
#include "isacbf/types.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace isacbf {

// Uniform linear array response with half-wavelength spacing,
// entry k = exp(j*pi*k*cos(angle)) / sqrt(n).
struct SteeringVector {
  CVec entries;
  double angle_rad = 0.0;
};

SteeringVector steering_vector(int n, double angle_rad);

// Columns are steering vectors for each angle.
CMat steering_matrix(int n, std::span<const double> angles_rad);

// Log-distance pathloss in dB. Shadowing is drawn by the caller.
double pathloss_db(double distance_m, const PathlossParams& params, double shadow_db);

struct PathComponent {
  double angle_rad = 0.0;
  cd gain{};
};

struct UserChannel {
  // h such that h^H = sum_i gain_i * a^H(angle_i).
  CVec h;
  std::vector<PathComponent> paths;
  double pathloss_db = 0.0;
  double shadow_db = 0.0;
  double noise_power_mw = 0.0;
};

struct ChannelSet {
  int n_tx = 0;
  std::uint64_t seed = 0;
  std::vector<UserChannel> users;

  // n_tx x n_cu matrix with h_m as columns.
  CMat matrix() const;
};

// h = sum_i conj(gain_i) * a(angle_i).
CVec assemble_channel(int n_tx, std::span<const PathComponent> paths);

// Inverse-CDF draw from a Laplacian(mean, scale) truncated to
// [mean - half_width, mean + half_width].
double sample_truncated_laplacian(std::mt19937_64& rng, double mean, double scale, double half_width);

// Draws one geometric multipath channel per CU. The mean departure angle of
// each CU is its configured angle; path angles scatter around it with a
// truncated Laplacian whose standard deviation is the configured angular
// spread. One shadowing value is drawn per CU and shared by its paths.
ChannelSet sample_channels(const ScenarioConfig& config, std::mt19937_64& rng);
ChannelSet sample_channels(const ScenarioConfig& config, std::uint64_t seed);

}  // namespace isacbf

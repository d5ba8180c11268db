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

#include "isacbf/channel.hpp"

#include <cmath>

namespace isacbf {

SteeringVector steering_vector(int n, double angle_rad) {
  SteeringVector sv;
  sv.angle_rad = angle_rad;
  sv.entries.resize(n);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n));
  const double c = std::cos(angle_rad);
  sv.entries(0) = cd(scale, 0.0);
  for (int k = 1; k < n; ++k) sv.entries(k) = std::polar(scale, kPi * k * c);
  return sv;
}

CMat steering_matrix(int n, std::span<const double> angles_rad) {
  CMat out(n, static_cast<Index>(angles_rad.size()));
  for (std::size_t l = 0; l < angles_rad.size(); ++l)
    out.col(static_cast<Index>(l)) = steering_vector(n, angles_rad[l]).entries;
  return out;
}

double pathloss_db(double distance_m, const PathlossParams& params, double shadow_db) {
  return params.epsilon_db + 10.0 * params.exponent * std::log10(distance_m) + shadow_db;
}

CMat ChannelSet::matrix() const {
  CMat out(n_tx, static_cast<Index>(users.size()));
  for (std::size_t m = 0; m < users.size(); ++m) out.col(static_cast<Index>(m)) = users[m].h;
  return out;
}

CVec assemble_channel(int n_tx, std::span<const PathComponent> paths) {
  CVec h = CVec::Zero(n_tx);
  for (const auto& p : paths) h += std::conj(p.gain) * steering_vector(n_tx, p.angle_rad).entries;
  return h;
}

double sample_truncated_laplacian(std::mt19937_64& rng, double mean, double scale, double half_width) {
  // CDF of the centred Laplacian at x: 0.5*exp(x/b) for x<0, 1-0.5*exp(-x/b) otherwise.
  const auto cdf = [scale](double x) {
    return x < 0.0 ? 0.5 * std::exp(x / scale) : 1.0 - 0.5 * std::exp(-x / scale);
  };
  const double lo = cdf(-half_width);
  const double hi = cdf(half_width);
  std::uniform_real_distribution<double> unif(lo, hi);
  const double u = unif(rng);
  const double x = u < 0.5 ? scale * std::log(2.0 * u) : -scale * std::log(2.0 * (1.0 - u));
  return mean + x;
}

ChannelSet sample_channels(const ScenarioConfig& config, std::mt19937_64& rng) {
  ChannelSet set;
  set.n_tx = config.n_tx;
  const auto noise = noise_powers_mw(config);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double laplace_scale = config.angular_spread_rad / std::sqrt(2.0);
  const double half_width = config.laplacian_truncation * config.angular_spread_rad;
  const double gamma2 = static_cast<double>(config.n_tx) / config.n_paths;

  for (int m = 0; m < config.n_cu; ++m) {
    const auto mi = static_cast<std::size_t>(m);
    UserChannel user;
    user.noise_power_mw = noise[mi];
    user.shadow_db = config.pathloss.shadow_sigma_db * normal(rng);
    user.pathloss_db = pathloss_db(config.cu_distances_m[mi], config.pathloss, user.shadow_db);
    const double variance = gamma2 * std::pow(10.0, -0.1 * user.pathloss_db);
    const double sd = std::sqrt(variance / 2.0);
    const double mean_angle = deg_to_rad(config.cu_angles_deg[mi]);
    for (int i = 0; i < config.n_paths; ++i) {
      PathComponent p;
      p.angle_rad = sample_truncated_laplacian(rng, mean_angle, laplace_scale, half_width);
      const double re = normal(rng);
      const double im = normal(rng);
      p.gain = cd(sd * re, sd * im);
      user.paths.push_back(p);
    }
    user.h = assemble_channel(config.n_tx, user.paths);
    set.users.push_back(std::move(user));
  }
  return set;
}

ChannelSet sample_channels(const ScenarioConfig& config, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto set = sample_channels(config, rng);
  set.seed = seed;
  return set;
}

}  // namespace isacbf

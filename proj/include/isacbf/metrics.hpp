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

#include "isacbf/channel.hpp"
#include "isacbf/types.hpp"

#include <functional>
#include <span>
#include <vector>

namespace isacbf {

// Fully connected hybrid precoder: x = rf * bb * s.
struct HybridPrecoder {
  CMat rf;  // n_tx x n_rf, unit-modulus entries
  CMat bb;  // n_rf x n_streams

  CMat combined() const { return rf * bb; }
  double power() const { return combined().squaredNorm(); }
};

// Simplex weights of the object beams.
struct BeamWeights {
  RVec w;
};

// chi(theta) = sum over streams |a^H(theta) F_RF f_BB,k|^2.
double beampattern_gain(const HybridPrecoder& p, double angle_rad);
// Same, for a precomputed F_RF * F_BB.
double beampattern_gain_combined(const CMat& combined, double angle_rad);

// Sum over beams of w_l * chi(theta_l)^2.
double sbp_gain(const BeamWeights& weights, const HybridPrecoder& p, std::span<const double> beam_angles_rad);

// Mean of chi over the beam angles (the uniformly weighted linear SBP that
// the optimizer maximizes).
double sbp_linear(const HybridPrecoder& p, std::span<const double> beam_angles_rad);

// SINR of CU `m` (0-based). Every stream other than m interferes.
double sinr(const CVec& h, double noise_power, const HybridPrecoder& p, Index m);
double sinr(const ChannelSet& ch, const HybridPrecoder& p, Index m);
std::vector<double> sinrs(const ChannelSet& ch, const HybridPrecoder& p);

double sum_rate(const ChannelSet& ch, const HybridPrecoder& p);
double sum_rate_from_sinr(std::span<const double> sinr_values);

// Integrated mainlobe-to-sidelobe ratio of a pattern sampled on a uniform
// grid of `grid_size` points over [-pi/2, pi/2]. Integration uses the exact
// integral of the piecewise-linear interpolant, so region boundaries need
// not align with the grid. Throws NumericalError if the sidelobe integral is
// zero and ValidationError for a mainlobe outside (-pi/2, pi/2).
double imsr(const std::function<double(double)>& pattern, double theta0_rad, double delta_rad, int grid_size);
double imsr(const HybridPrecoder& p, double theta0_rad, double delta_rad, int grid_size = 2048);

// MSE-optimal weights from the per-beam gains chi(theta_l). Throws
// ValidationError if any gain is zero.
BeamWeights beam_weights_from_gains(std::span<const double> chi);
BeamWeights beam_weights(const HybridPrecoder& p, std::span<const double> beam_angles_rad);

struct BeampatternPoint {
  double angle_deg;
  double gain;
};

// chi over [start_deg, stop_deg] with the given spacing (default 1 degree
// over [-90, 90]).
std::vector<BeampatternPoint> beampattern_sweep(const HybridPrecoder& p, double start_deg = -90.0,
                                                double stop_deg = 90.0, double step_deg = 1.0);

}  // namespace isacbf

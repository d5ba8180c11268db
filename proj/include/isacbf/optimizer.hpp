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
#include "isacbf/metrics.hpp"
#include "isacbf/scenario.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace isacbf {

// One full F_RF -> F_BB -> zeta pass. Values are in the optimizer's
// normalized units (unit transmit power, unit noise power per CU).
struct InnerRecord {
  int outer = 0;
  int inner = 0;
  double penalty = 0.0;
  double objective = 0.0;  // penalized objective after the pass
  double sbp = 0.0;        // weighted linear SBP term
  double residual = 0.0;   // max_{m,n} |h_m^H F_RF f_n - zeta_{m,n}|^2
  int rcg_iterations = 0;
  bool ridge = false;
  bool monotone = true;    // objective did not increase during the pass
};

struct OuterRecord {
  int outer = 0;
  double penalty = 0.0;
  double residual = 0.0;
  int inner_passes = 0;
  int ridge_events = 0;
};

struct RunDiagnostics {
  std::vector<InnerRecord> inner;
  std::vector<OuterRecord> outer;
  std::vector<double> sinr;  // final, linear
  double power_mw = 0.0;
  double final_residual = 0.0;
  bool converged = false;    // residual below tol_outer before max_outer
  int monotonicity_violations = 0;
  std::vector<std::string> warnings;
  double wall_seconds = 0.0;  // excluded from equality

  bool same_trace(const RunDiagnostics& other) const;
};

struct OptimizeResult {
  HybridPrecoder precoder;  // physical units, ||F_RF F_BB||_F^2 = P_t [mW]
  BeamWeights weights;      // MSE-optimal weights of the final pattern
  std::vector<double> beam_angles_rad;
  RunDiagnostics diagnostics;
};

using TraceSink = std::function<void(const InnerRecord&)>;

// Penalty-based triple alternation: outer loop on the penalty, inner
// alternation over F_RF (Riemannian CG), F_BB (block solve) and zeta (cone
// projection), then a final power normalization and weight evaluation.
OptimizeResult optimize(const ScenarioConfig& config, const ChannelSet& ch, const TraceSink& sink = {});

// Sensing-only benchmark: same hardware and power, no CU constraints.
OptimizeResult radar_only(const ScenarioConfig& config, std::span<const double> beam_angles_rad,
                          const TraceSink& sink = {});

// Communication-only benchmark: phase-matched RF columns and regularized
// zero forcing over the effective channel; sensing columns of F_BB are zero.
HybridPrecoder comm_only(const ScenarioConfig& config, const ChannelSet& ch);

// Unit-modulus matrix with i.i.d. uniform phases.
CMat random_phase_matrix(Index rows, Index cols, std::uint64_t seed);

}  // namespace isacbf

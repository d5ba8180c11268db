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

#include <limits>

namespace isacbf {

// Baseband block subproblem for fixed F_RF and zeta:
//   min  -sum_l w_l sum_k |a~_l^H f_k|^2 + penalty/2 sum_n sum_k |h~_n^H f_k - zeta_{n,k}|^2
// with h~ = F_RF^H h and a~ = F_RF^H a.
struct BbSystem {
  CMat eff_channels;  // n_rf x n_cu
  CMat eff_beams;     // n_rf x n_beams
  RVec beam_weights;  // n_beams
  double penalty = 0.0;
  CMat aux;       // n_cu x n_streams
  CMat rf_gram;   // F_RF^H F_RF, metric of the power constraint
  double power_budget = std::numeric_limits<double>::infinity();
  BbUpdateMode mode = BbUpdateMode::PowerConstrained;
  // Column that receives power along the dominant sensing direction when the
  // power budget is not exhausted by the data columns (radar-only case).
  Index fill_column = 0;
};

struct BbUpdate {
  CMat bb;
  double min_eigenvalue = 0.0;  // of the (metric-whitened) stationarity matrix
  double multiplier = 0.0;      // power-constraint multiplier or ridge shift
  bool ridge_applied = false;
  bool hard_case = false;
};

BbSystem make_bb_system(const CMat& rf, const CMat& channels, const CMat& beams, const RVec& beam_weights,
                        double penalty, const CMat& aux, double power_budget, BbUpdateMode mode,
                        Index fill_column = 0);

// A = penalty * sum_n h~_n h~_n^H - 2 sum_l w_l a~_l a~_l^H.
CMat stationarity_matrix(const BbSystem& sys);
// Column k: penalty * sum_n h~_n zeta_{n,k}.
CMat stationarity_rhs(const BbSystem& sys);

double bb_objective(const BbSystem& sys, const CMat& bb);
// 2 * dObjective/dconj(F_BB), assembled term by term from the objective.
CMat bb_gradient(const BbSystem& sys, const CMat& bb);

// Power-constrained mode: global minimizer subject to
// tr(F_BB^H G F_BB) <= power_budget, G = rf_gram. With an infinite budget the
// stationary point A F = R is returned and A must be positive definite.
// Ridge mode: solves (A + s I) F = R where s lifts the smallest eigenvalue to
// 1e-6 ||A|| when needed. PaperLiteral: replaces A by penalty sum h~h~^H - 2 I.
// Throws NumericalError carrying the minimum eigenvalue when the system is
// singular or indefinite after conditioning.
BbUpdate update_bb(const BbSystem& sys);

}  // namespace isacbf

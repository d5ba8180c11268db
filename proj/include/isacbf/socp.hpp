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

#include "isacbf/metrics.hpp"
#include "isacbf/types.hpp"

namespace isacbf {

// Auxiliary SINR variables: z(m, n) stands for h_m^H F_RF f_BB,n.
struct AuxMatrix {
  CMat z;             // n_cu x n_streams
  RVec noise_std;     // sigma_m
  RVec thresholds;    // Gamma_m, linear
};

// Slack of the row-m cone constraint
//   sqrt(1 + 1/gamma) |z(m)| >= || [z; sigma] ||,
// positive when strictly feasible.
double row_slack(const CVec& z, Index m, double gamma, double sigma);

// Euclidean projection of `b` onto { z : |z(m)|^2 >= gamma (sum_{n!=m} |z(n)|^2 + sigma^2) }.
// The diagonal keeps the phase of b(m); the off-diagonal block is shrunk
// radially. The remaining two-dimensional convex problem is solved by
// bisection on the KKT multiplier. Throws NumericalError if the multiplier
// search does not converge within 200 iterations.
CVec project_row(const CVec& b, Index m, double gamma, double sigma);

// z = projection of each row of H^H F_RF F_BB (channels in the units of
// noise_std). Rows are independent.
AuxMatrix update_aux(const CMat& channels, const HybridPrecoder& p, const RVec& thresholds, const RVec& noise_std);
AuxMatrix update_aux(const CMat& effective, const RVec& thresholds, const RVec& noise_std);

// sum_{m,n} |h_m^H F_RF f_n - z(m,n)|^2
double aux_objective(const CMat& effective, const CMat& z);

}  // namespace isacbf

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

#include <functional>

namespace isacbf {

// Column-stacked RF precoder, w = [f_RF,1; f_RF,2; ...], with |w(j)| = 1.
class PhaseVector {
 public:
  // Throws ValidationError if some |w(j)| differs from 1 by more than `tol`.
  static PhaseVector from_values(CVec values, double tol = 1e-9);
  static PhaseVector lift(const CMat& rf, double tol = 1e-9);

  CMat unlift(Index n_tx) const;
  const CVec& values() const { return w_; }
  Index size() const { return w_.size(); }

 private:
  explicit PhaseVector(CVec w) : w_(std::move(w)) {}
  CVec w_;
};

// Everything the RF block needs besides the phases themselves. Channels and
// auxiliary values are in the optimizer's normalized units.
struct RfSubproblemData {
  CMat channels;      // n_tx x n_cu, CU channels h_m as columns
  CMat bb;            // n_rf x n_streams
  CMat aux;           // n_cu x n_streams, zeta
  CMat beams;         // n_tx x n_beams, steering vectors a(theta_l)
  RVec beam_weights;  // n_beams
  double penalty = 0.0;
};

// f(w) = -sum_l w_l sum_k |a_l^H F_RF f_k|^2
//        + penalty/2 * sum_m sum_k |h_m^H F_RF f_k - zeta_{m,k}|^2.
// The product F_RF f_k is formed directly; the lifted operators are never
// materialized.
double rf_objective(const CMat& rf, const RfSubproblemData& d);
double rf_objective(const PhaseVector& w, const RfSubproblemData& d);

// Gradient with respect to the conjugate coordinates (scaled by 2), so that
// f(w + dw) ~ f(w) + Re<grad, dw>.
CVec euclidean_gradient(const PhaseVector& w, const RfSubproblemData& d);
CVec euclidean_gradient(const CMat& rf, const RfSubproblemData& d);

// Componentwise tangent projection: eg - Re{eg .* conj(w)} .* w.
CVec riemannian_gradient(const CVec& eg, const CVec& w);
CVec tangent_projection(const CVec& v, const CVec& w);
CVec retract(const CVec& v);

// Upper bound on the Lipschitz constant of the Euclidean gradient.
double gradient_lipschitz_bound(const RfSubproblemData& d);

struct RcgIterate {
  int iteration;
  double objective;
  double grad_norm;
  double step;
  const CVec& w;
  const CVec& grad;
  const CVec& direction;
};

struct RcgOptions {
  int max_iters = 100;
  // Stop once ||grad|| <= grad_tol * ||grad at w0||.
  double grad_tol = 1e-6;
  double armijo = 1e-4;
  double backtrack = 0.5;
  int max_backtracks = 60;
  std::function<void(const RcgIterate&)> on_iterate;
};

struct RcgResult {
  PhaseVector w;
  int iterations = 0;
  double initial_objective = 0.0;
  double objective = 0.0;
  double grad_norm = 0.0;
  bool converged = false;
};

// Riemannian conjugate gradient (Polak-Ribiere+, projection transport,
// Armijo backtracking, entrywise normalization retraction). The returned
// objective never exceeds the initial one. Throws NumericalError carrying the
// iteration index on a non-finite objective.
RcgResult rcg_minimize(const PhaseVector& w0, const RfSubproblemData& d, const RcgOptions& opts = {});

}  // namespace isacbf

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

#include "isacbf/manifold.hpp"

#include <cmath>
#include <sstream>

namespace isacbf {

PhaseVector PhaseVector::from_values(CVec values, double tol) {
  for (Index j = 0; j < values.size(); ++j) {
    if (!(std::abs(std::abs(values(j)) - 1.0) <= tol)) {
      std::ostringstream os;
      os << "phase vector entry " << j << " has modulus " << std::abs(values(j));
      throw ValidationError(os.str());
    }
  }
  return PhaseVector(std::move(values));
}

PhaseVector PhaseVector::lift(const CMat& rf, double tol) {
  return from_values(Eigen::Map<const CVec>(rf.data(), rf.size()), tol);
}

CMat PhaseVector::unlift(Index n_tx) const {
  if (n_tx <= 0 || w_.size() % n_tx != 0) throw ValidationError("unlift: length is not a multiple of n_tx");
  return Eigen::Map<const CMat>(w_.data(), n_tx, w_.size() / n_tx);
}

namespace {

CMat as_matrix(const CVec& w, Index n_tx) { return Eigen::Map<const CMat>(w.data(), n_tx, w.size() / n_tx); }

}  // namespace

double rf_objective(const CMat& rf, const RfSubproblemData& d) {
  const CMat x = rf * d.bb;
  double sbp = 0.0;
  for (Index l = 0; l < d.beams.cols(); ++l)
    sbp += d.beam_weights(l) * (d.beams.col(l).adjoint() * x).squaredNorm();
  double pen = 0.0;
  if (d.channels.cols() > 0) pen = (d.channels.adjoint() * x - d.aux).squaredNorm();
  return -sbp + 0.5 * d.penalty * pen;
}

double rf_objective(const PhaseVector& w, const RfSubproblemData& d) {
  return rf_objective(as_matrix(w.values(), d.beams.rows()), d);
}

CVec euclidean_gradient(const CMat& rf, const RfSubproblemData& d) {
  const CMat x = rf * d.bb;
  // v_k = penalty * sum_m h_m (h_m^H x_k - zeta_{m,k}) - 2 sum_l w_l a_l a_l^H x_k
  CMat v = CMat::Zero(x.rows(), x.cols());
  if (d.channels.cols() > 0) v = d.penalty * (d.channels * (d.channels.adjoint() * x - d.aux));
  if (d.beams.cols() > 0) {
    const CMat weighted = d.beams * d.beam_weights.cast<cd>().asDiagonal();
    v -= 2.0 * weighted * (d.beams.adjoint() * x);
  }
  // sum_k X_k^H v_k, block j = sum_k conj(bb(j,k)) v_k.
  const CMat g = v * d.bb.adjoint();
  return Eigen::Map<const CVec>(g.data(), g.size());
}

CVec euclidean_gradient(const PhaseVector& w, const RfSubproblemData& d) {
  return euclidean_gradient(as_matrix(w.values(), d.beams.rows()), d);
}

CVec tangent_projection(const CVec& v, const CVec& w) {
  CVec out(v.size());
  for (Index j = 0; j < v.size(); ++j) out(j) = v(j) - std::real(v(j) * std::conj(w(j))) * w(j);
  return out;
}

CVec riemannian_gradient(const CVec& eg, const CVec& w) { return tangent_projection(eg, w); }

CVec retract(const CVec& v) {
  CVec out(v.size());
  for (Index j = 0; j < v.size(); ++j) {
    const double r = std::abs(v(j));
    out(j) = r > 0.0 ? v(j) / r : cd(1.0, 0.0);
  }
  return out;
}

double gradient_lipschitz_bound(const RfSubproblemData& d) {
  // ||X_k|| = ||f_k||, so the Hessian norm is bounded by
  // ||F_BB||_F^2 (penalty sum ||h_m||^2 + 2 sum w_l ||a_l||^2).
  double inner = 0.0;
  if (d.channels.cols() > 0) inner += d.penalty * d.channels.squaredNorm();
  for (Index l = 0; l < d.beams.cols(); ++l) inner += 2.0 * std::abs(d.beam_weights(l)) * d.beams.col(l).squaredNorm();
  return d.bb.squaredNorm() * inner;
}

RcgResult rcg_minimize(const PhaseVector& w0, const RfSubproblemData& d, const RcgOptions& opts) {
  const Index n_tx = d.beams.rows();
  const auto check = [](double f, int it) {
    if (!std::isfinite(f)) {
      std::ostringstream os;
      os << "rcg_minimize: non-finite objective at iteration " << it;
      throw NumericalError(os.str());
    }
  };

  CVec w = w0.values();
  double f = rf_objective(as_matrix(w, n_tx), d);
  check(f, 0);
  CVec grad = riemannian_gradient(euclidean_gradient(as_matrix(w, n_tx), d), w);
  CVec eta = -grad;
  double gnorm = grad.norm();
  const double stop = opts.grad_tol * gnorm;

  RcgResult res{w0, 0, f, f, gnorm, gnorm == 0.0};
  const double lip = gradient_lipschitz_bound(d);
  if (gnorm == 0.0 || !(lip > 0.0)) {
    res.converged = true;
    return res;
  }
  double step = 1.0 / lip;

  int it = 0;
  for (; it < opts.max_iters; ++it) {
    if (gnorm <= stop) {
      res.converged = true;
      break;
    }
    double slope = std::real(grad.dot(eta));  // Re<grad, eta>
    if (!(slope < 0.0)) {
      eta = -grad;
      slope = -gnorm * gnorm;
    }
    double t = std::max(1.0 / lip, 2.0 * step);
    bool accepted = false;
    CVec w_new;
    double f_new = f;
    for (int bt = 0; bt < opts.max_backtracks; ++bt) {
      w_new = retract(w + t * eta);
      f_new = rf_objective(as_matrix(w_new, n_tx), d);
      check(f_new, it + 1);
      if (f_new <= f + opts.armijo * t * slope) {
        accepted = true;
        break;
      }
      t *= opts.backtrack;
    }
    if (!accepted) break;
    step = t;

    const CVec grad_new = riemannian_gradient(euclidean_gradient(as_matrix(w_new, n_tx), d), w_new);
    const CVec moved_eta = tangent_projection(eta, w_new);
    const CVec moved_grad = tangent_projection(grad, w_new);
    const double beta = std::max(0.0, std::real(grad_new.dot(grad_new - moved_grad)) / (gnorm * gnorm));
    eta = -grad_new + beta * moved_eta;

    w = std::move(w_new);
    f = f_new;
    grad = grad_new;
    gnorm = grad.norm();
    if (opts.on_iterate) opts.on_iterate(RcgIterate{it + 1, f, gnorm, t, w, grad, eta});
  }

  res.w = PhaseVector::from_values(std::move(w), 1e-9);
  res.iterations = it;
  res.objective = f;
  res.grad_norm = gnorm;
  if (gnorm <= stop) res.converged = true;
  return res;
}

}  // namespace isacbf

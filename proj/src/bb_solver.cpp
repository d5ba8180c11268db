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

#include "isacbf/bb_solver.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace isacbf {

namespace {

[[noreturn]] void fail_eig(const char* what, double min_eig) {
  std::ostringstream os;
  os << "update_bb: " << what << " (minimum eigenvalue " << min_eig << ")";
  throw NumericalError(os.str());
}

CMat hermitian_part(const CMat& a) { return 0.5 * (a + a.adjoint()); }

BbUpdate solve_power_constrained(const BbSystem& sys, const CMat& a, const CMat& r) {
  // The objective depends on F_BB only through F_RF F_BB, so directions in
  // the null space of the Gram matrix are dropped (columns of F_RF may
  // become collinear during the RF step).
  Eigen::SelfAdjointEigenSolver<CMat> gram_es(hermitian_part(sys.rf_gram));
  const RVec gd = gram_es.eigenvalues();
  const double gmax = gd.maxCoeff();
  if (!(gmax > 0.0)) fail_eig("RF precoder Gram matrix is zero", gmax);
  Index first = 0;
  while (first < gd.size() && gd(first) <= 1e-10 * gmax) ++first;
  const Index n = gd.size() - first;
  const CMat whiten = gram_es.eigenvectors().rightCols(n) *
                      gd.tail(n).cwiseInverse().cwiseSqrt().cast<cd>().asDiagonal();

  Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(whiten.adjoint() * a * whiten));
  const RVec lam = es.eigenvalues();
  const CMat& q = es.eigenvectors();
  const CMat c = q.adjoint() * (whiten.adjoint() * r);
  const RVec c2 = c.rowwise().squaredNorm();
  const double total = c2.sum();
  const double scale = std::max(lam.cwiseAbs().maxCoeff(), 1e-300);
  const double lam_min = lam(0);

  BbUpdate out;
  out.min_eigenvalue = lam_min;
  const double budget = sys.power_budget;

  const auto power_at = [&](double mu) {
    double p = 0.0;
    for (Index i = 0; i < n; ++i) p += c2(i) / ((lam(i) + mu) * (lam(i) + mu));
    return p;
  };
  const auto assemble = [&](double mu, Index skip_upto) {
    CMat u = CMat::Zero(n, c.cols());
    for (Index i = skip_upto; i < n; ++i) u.row(i) = c.row(i) / (lam(i) + mu);
    return u;
  };

  CMat u;
  if (!std::isfinite(budget)) {
    if (!(lam_min > 1e-10 * scale)) fail_eig("stationarity matrix is not positive definite", lam_min);
    u = assemble(0.0, 0);
  } else if (lam_min > 1e-12 * scale && power_at(0.0) <= budget) {
    u = assemble(0.0, 0);
  } else {
    const double mu_low = std::max(0.0, -lam_min);
    Index n_min = 0;
    double c_min = 0.0;
    while (n_min < n && lam(n_min) <= lam_min + 1e-10 * scale) c_min += c2(n_min++);

    double rest = 0.0;
    for (Index i = n_min; i < n; ++i) rest += c2(i) / ((lam(i) + mu_low) * (lam(i) + mu_low));
    const bool degenerate = c_min <= 1e-24 * std::max(total, 1e-300) || total == 0.0;
    if (degenerate && lam_min < 0.0 && rest <= budget) {
      // Hard case: the data columns cannot use the budget, the remainder goes
      // along the most negative curvature direction.
      u = assemble(mu_low, n_min);
      const Index col = std::clamp<Index>(sys.fill_column, 0, c.cols() - 1);
      u(0, col) += std::sqrt(budget - rest);
      out.hard_case = true;
      out.multiplier = mu_low;
    } else if (degenerate && lam_min >= 0.0 && rest <= budget) {
      u = assemble(mu_low, n_min);
      out.multiplier = mu_low;
    } else {
      double lo = mu_low;
      double hi = mu_low + std::sqrt(total / budget);
      for (int iter = 0; iter < 400 && hi - lo > 4e-16 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (power_at(mid) > budget)
          lo = mid;
        else
          hi = mid;
      }
      u = assemble(hi, 0);
      out.multiplier = hi;
    }
  }
  out.bb = whiten * (q * u);
  return out;
}

}  // namespace

BbSystem make_bb_system(const CMat& rf, const CMat& channels, const CMat& beams, const RVec& beam_weights,
                        double penalty, const CMat& aux, double power_budget, BbUpdateMode mode, Index fill_column) {
  BbSystem sys;
  sys.eff_channels = rf.adjoint() * channels;
  sys.eff_beams = rf.adjoint() * beams;
  sys.beam_weights = beam_weights;
  sys.penalty = penalty;
  sys.aux = aux;
  sys.rf_gram = rf.adjoint() * rf;
  sys.power_budget = power_budget;
  sys.mode = mode;
  sys.fill_column = fill_column;
  return sys;
}

CMat stationarity_matrix(const BbSystem& sys) {
  const Index n = sys.rf_gram.rows();
  CMat a = CMat::Zero(n, n);
  if (sys.eff_channels.cols() > 0) a += sys.penalty * sys.eff_channels * sys.eff_channels.adjoint();
  if (sys.eff_beams.cols() > 0)
    a -= 2.0 * sys.eff_beams * sys.beam_weights.cast<cd>().asDiagonal() * sys.eff_beams.adjoint();
  return hermitian_part(a);
}

CMat stationarity_rhs(const BbSystem& sys) {
  const Index n = sys.rf_gram.rows();
  if (sys.eff_channels.cols() == 0) return CMat::Zero(n, sys.aux.cols());
  return sys.penalty * sys.eff_channels * sys.aux;
}

double bb_objective(const BbSystem& sys, const CMat& bb) {
  double sbp = 0.0;
  for (Index l = 0; l < sys.eff_beams.cols(); ++l)
    sbp += sys.beam_weights(l) * (sys.eff_beams.col(l).adjoint() * bb).squaredNorm();
  double pen = 0.0;
  for (Index m = 0; m < sys.eff_channels.cols(); ++m)
    for (Index k = 0; k < bb.cols(); ++k)
      pen += std::norm(sys.eff_channels.col(m).dot(bb.col(k)) - sys.aux(m, k));
  return -sbp + 0.5 * sys.penalty * pen;
}

CMat bb_gradient(const BbSystem& sys, const CMat& bb) {
  CMat g = CMat::Zero(bb.rows(), bb.cols());
  for (Index k = 0; k < bb.cols(); ++k) {
    for (Index l = 0; l < sys.eff_beams.cols(); ++l) {
      const auto& a = sys.eff_beams.col(l);
      g.col(k) -= 2.0 * sys.beam_weights(l) * a * a.dot(bb.col(k));
    }
    for (Index m = 0; m < sys.eff_channels.cols(); ++m) {
      const auto& h = sys.eff_channels.col(m);
      g.col(k) += sys.penalty * h * (h.dot(bb.col(k)) - sys.aux(m, k));
    }
  }
  return g;
}

BbUpdate update_bb(const BbSystem& sys) {
  const CMat r = stationarity_rhs(sys);
  switch (sys.mode) {
    case BbUpdateMode::PowerConstrained:
      return solve_power_constrained(sys, stationarity_matrix(sys), r);
    case BbUpdateMode::Ridge: {
      CMat a = stationarity_matrix(sys);
      Eigen::SelfAdjointEigenSolver<CMat> es(a, Eigen::EigenvaluesOnly);
      const double lam_min = es.eigenvalues()(0);
      const double norm = es.eigenvalues().cwiseAbs().maxCoeff();
      if (!(norm > 0.0)) fail_eig("stationarity matrix is zero", lam_min);
      BbUpdate out;
      out.min_eigenvalue = lam_min;
      const double delta = 1e-6 * norm;
      if (lam_min < delta) {
        out.multiplier = delta - lam_min;
        out.ridge_applied = true;
        a.diagonal().array() += out.multiplier;
      }
      Eigen::LLT<CMat> llt(a);
      if (llt.info() != Eigen::Success) fail_eig("conditioned stationarity matrix is not positive definite", lam_min);
      out.bb = llt.solve(r);
      return out;
    }
    case BbUpdateMode::PaperLiteral: {
      const Index n = sys.rf_gram.rows();
      CMat y = -2.0 * CMat::Identity(n, n);
      if (sys.eff_channels.cols() > 0) y += sys.penalty * sys.eff_channels * sys.eff_channels.adjoint();
      Eigen::SelfAdjointEigenSolver<CMat> es(hermitian_part(y), Eigen::EigenvaluesOnly);
      const double smallest = es.eigenvalues().cwiseAbs().minCoeff();
      if (!(smallest > 1e-12 * es.eigenvalues().cwiseAbs().maxCoeff()))
        fail_eig("literal stationarity matrix is singular", es.eigenvalues()(0));
      BbUpdate out;
      out.min_eigenvalue = es.eigenvalues()(0);
      out.bb = Eigen::PartialPivLU<CMat>(y).solve(r);
      return out;
    }
  }
  throw Error("update_bb: unknown mode");
}

}  // namespace isacbf

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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "isacbf/bb_solver.hpp"
#include "oracles.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

using namespace isacbf;

namespace {

struct Instance {
  CMat rf, h, beams, aux;
  RVec w;
  double penalty;
};

Instance make_instance(std::mt19937_64& rng, int n_tx, int n_rf, int n_cu, int n_beams, double penalty) {
  Instance in;
  in.rf = oracle::random_phases(rng, n_tx * n_rf).reshaped(n_tx, n_rf);
  in.h = oracle::random_cmat(rng, n_tx, n_cu, 0.5);
  in.beams.resize(n_tx, n_beams);
  std::uniform_real_distribution<double> ang(0.5, 0.9);
  for (int l = 0; l < n_beams; ++l) in.beams.col(l) = oracle::steering(n_tx, ang(rng));
  in.w = RVec::Constant(n_beams, 1.0 / n_beams);
  in.aux = oracle::random_cmat(rng, n_cu, n_rf);
  in.penalty = penalty;
  return in;
}

BbSystem system_of(const Instance& in, double budget, BbUpdateMode mode = BbUpdateMode::PowerConstrained,
                   Index fill = 0) {
  return make_bb_system(in.rf, in.h, in.beams, in.w, in.penalty, in.aux, budget, mode, fill);
}

// 2 d/dF* of -sum w |a~^H f|^2 + penalty/2 sum |h~^H f - zeta|^2, column by column.
CMat gradient_oracle(const Instance& in, const CMat& bb) {
  const CMat ht = in.rf.adjoint() * in.h;
  const CMat at = in.rf.adjoint() * in.beams;
  CMat g = CMat::Zero(bb.rows(), bb.cols());
  for (Index k = 0; k < bb.cols(); ++k) {
    for (Index l = 0; l < at.cols(); ++l) {
      cd s = 0.0;
      for (Index i = 0; i < bb.rows(); ++i) s += std::conj(at(i, l)) * bb(i, k);
      for (Index i = 0; i < bb.rows(); ++i) g(i, k) -= 2.0 * in.w(l) * at(i, l) * s;
    }
    for (Index m = 0; m < ht.cols(); ++m) {
      cd s = -in.aux(m, k);
      for (Index i = 0; i < bb.rows(); ++i) s += std::conj(ht(i, m)) * bb(i, k);
      for (Index i = 0; i < bb.rows(); ++i) g(i, k) += in.penalty * ht(i, m) * s;
    }
  }
  return g;
}

double objective_oracle(const Instance& in, const CMat& bb) {
  return oracle::penalized(in.rf, bb, in.h, in.aux, in.beams, in.w, in.penalty);
}

double power(const Instance& in, const CMat& bb) { return (in.rf * bb).squaredNorm(); }

RVec realify(const CMat& m) {
  RVec v(2 * m.size());
  for (Index i = 0; i < m.size(); ++i) {
    v(2 * i) = m.data()[i].real();
    v(2 * i + 1) = m.data()[i].imag();
  }
  return v;
}

bool positive_definite(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0) > 1e-6 * es.eigenvalues().cwiseAbs().maxCoeff();
}

}  // namespace

TEST_CASE("objective and gradient routes agree") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 20; ++t) {
    const auto in = make_instance(rng, 8, 4, 2, 2, 0.9);
    const auto sys = system_of(in, 1.0);
    const CMat bb = oracle::random_cmat(rng, 4, 4);
    CHECK(bb_objective(sys, bb) == doctest::Approx(objective_oracle(in, bb)).epsilon(1e-12));
    CHECK((bb_gradient(sys, bb) - gradient_oracle(in, bb)).norm() <= 1e-11 * (1.0 + bb.norm()));
    // The stationarity pair expresses the same affine gradient.
    const CMat affine = stationarity_matrix(sys) * bb - stationarity_rhs(sys);
    CHECK((affine - gradient_oracle(in, bb)).norm() <= 1e-11 * (1.0 + bb.norm()));
  }
}

TEST_CASE("unconstrained update matches a dense real solve") {
  // Probe the affine gradient map with unit perturbations and solve the
  // resulting real system by full-pivot LU.
  std::mt19937_64 rng(2);
  int done = 0;
  while (done < 10) {
    const auto in = make_instance(rng, 8, 3, 4, 2, 50.0);
    const auto sys = system_of(in, std::numeric_limits<double>::infinity());
    if (!positive_definite(stationarity_matrix(sys))) continue;
    const Index rows = 3, cols = 3, n = 2 * rows * cols;
    const RVec g0 = realify(gradient_oracle(in, CMat::Zero(rows, cols)));
    Eigen::MatrixXd jac(n, n);
    for (Index j = 0; j < n; ++j) {
      CMat e = CMat::Zero(rows, cols);
      e.data()[j / 2] = (j % 2 == 0) ? cd(1.0, 0.0) : cd(0.0, 1.0);
      jac.col(j) = realify(gradient_oracle(in, e)) - g0;
    }
    const RVec x = Eigen::FullPivLU<Eigen::MatrixXd>(jac).solve(-g0);
    CMat ref(rows, cols);
    for (Index i = 0; i < rows * cols; ++i) ref.data()[i] = cd(x(2 * i), x(2 * i + 1));
    const auto upd = update_bb(sys);
    CHECK((upd.bb - ref).norm() <= 1e-8 * (1.0 + ref.norm()));
    CHECK(upd.multiplier == 0.0);
    ++done;
  }
}

TEST_CASE("stationarity on positive definite instances") {
  std::mt19937_64 rng(3);
  int done = 0;
  while (done < 100) {
    const auto in = make_instance(rng, 8, 3, 4, 2, 10.0 + done);
    const auto sys = system_of(in, std::numeric_limits<double>::infinity());
    if (!positive_definite(stationarity_matrix(sys))) continue;
    const auto upd = update_bb(sys);
    CHECK(gradient_oracle(in, upd.bb).norm() < 1e-8 * (1.0 + upd.bb.norm()));
    ++done;
  }
}

TEST_CASE("power-constrained update") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 40; ++t) {
    // n_cu < n_rf leaves the stationarity matrix indefinite.
    const auto in = make_instance(rng, 8, 4, 2, 2, 0.5 + t * 0.2);
    const double budget = 0.5 + 0.05 * t;
    const auto sys = system_of(in, budget, BbUpdateMode::PowerConstrained, 2);
    const auto upd = update_bb(sys);
    const double p = power(in, upd.bb);
    CHECK(p <= budget * (1.0 + 1e-9));
    CHECK(upd.multiplier >= 0.0);
    // KKT: gradient + mu G F = 0 with G = F_RF^H F_RF.
    const CMat kkt = gradient_oracle(in, upd.bb) + upd.multiplier * (in.rf.adjoint() * in.rf) * upd.bb;
    CHECK(kkt.norm() <= 1e-7 * (1.0 + gradient_oracle(in, upd.bb).norm()));
    if (upd.multiplier > 0.0) CHECK(p == doctest::Approx(budget).epsilon(1e-8));

    // No random feasible point does better.
    const double best = objective_oracle(in, upd.bb);
    for (int s = 0; s < 300; ++s) {
      CMat cand = oracle::random_cmat(rng, 4, 4);
      const double shrink = s % 2 == 0 ? 1.0 : std::uniform_real_distribution<double>(0.0, 1.0)(rng);
      cand *= shrink * std::sqrt(budget / power(in, cand));
      CHECK(objective_oracle(in, cand) >= best - 1e-9 * (1.0 + std::abs(best)));
      // Nearby feasible points as well.
      CMat near = upd.bb + 1e-3 * oracle::random_cmat(rng, 4, 4);
      if (power(in, near) > budget) near *= std::sqrt(budget / power(in, near));
      CHECK(objective_oracle(in, near) >= best - 1e-9 * (1.0 + std::abs(best)));
    }
  }
}

TEST_CASE("radar-only block solves the generalized eigenproblem") {
  // Without CUs: minimize -tr(F^H S F) subject to tr(F^H G F) <= P, whose
  // value is -P times the largest generalized eigenvalue of (S, G).
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    auto in = make_instance(rng, 16, 3, 0, 3, 0.0);
    in.aux = CMat(0, 3);
    const double budget = 2.0;
    const auto upd = update_bb(system_of(in, budget, BbUpdateMode::PowerConstrained, 1));
    CHECK(upd.hard_case);
    const CMat at = in.rf.adjoint() * in.beams;
    const CMat s = at * in.w.cast<cd>().asDiagonal() * at.adjoint();
    Eigen::GeneralizedSelfAdjointEigenSolver<CMat> ges(s, in.rf.adjoint() * in.rf);
    const double expected = -budget * ges.eigenvalues().maxCoeff();
    CHECK(objective_oracle(in, upd.bb) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(power(in, upd.bb) == doctest::Approx(budget).epsilon(1e-10));
    CHECK(upd.bb.col(0).norm() == 0.0);
    CHECK(upd.bb.col(1).norm() > 0.0);
  }
}

TEST_CASE("rank-deficient RF precoder") {
  std::mt19937_64 rng(6);
  auto in = make_instance(rng, 8, 4, 2, 2, 3.0);
  const auto reference = update_bb(system_of(in, 1.0));
  in.rf.col(3) = in.rf.col(1);  // two identical analog beams
  const auto upd = update_bb(system_of(in, 1.0));
  CHECK(upd.bb.allFinite());
  CHECK(power(in, upd.bb) <= 1.0 + 1e-9);
  CHECK(std::isfinite(reference.bb.norm()));
  // Dropping the duplicate column spans the same space: same optimum.
  Instance reduced = in;
  reduced.rf = in.rf.leftCols(3);
  const auto red = update_bb(system_of(reduced, 1.0));
  CHECK(objective_oracle(in, upd.bb) == doctest::Approx(objective_oracle(reduced, red.bb)).epsilon(1e-8));
}

TEST_CASE("ridge and literal modes") {
  std::mt19937_64 rng(7);
  const auto in = make_instance(rng, 8, 4, 2, 2, 1.0);
  const auto sys = system_of(in, std::numeric_limits<double>::infinity(), BbUpdateMode::Ridge);
  const auto upd = update_bb(sys);
  CHECK(upd.ridge_applied);
  CHECK(upd.min_eigenvalue < 0.0);
  const CMat a = stationarity_matrix(sys) + upd.multiplier * CMat::Identity(4, 4);
  CHECK((a * upd.bb - stationarity_rhs(sys)).norm() <= 1e-9 * (1.0 + stationarity_rhs(sys).norm()));

  // Indefinite matrix with no power budget has no minimizer.
  CHECK_THROWS_AS(update_bb(system_of(in, std::numeric_limits<double>::infinity())), NumericalError);

  const auto lit = update_bb(system_of(in, 1.0, BbUpdateMode::PaperLiteral));
  const CMat ht = in.rf.adjoint() * in.h;
  const CMat y = in.penalty * ht * ht.adjoint() - 2.0 * CMat::Identity(4, 4);
  CHECK((y * lit.bb - in.penalty * ht * in.aux).norm() <= 1e-9 * (1.0 + lit.bb.norm()));
}

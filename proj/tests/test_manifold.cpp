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

#include "isacbf/manifold.hpp"
#include "oracles.hpp"

using namespace isacbf;

namespace {

RfSubproblemData random_problem(std::mt19937_64& rng, int n_tx, int n_rf, int n_cu, int n_beams, double penalty) {
  RfSubproblemData d;
  d.channels = oracle::random_cmat(rng, n_tx, n_cu);
  d.bb = oracle::random_cmat(rng, n_rf, n_rf, 0.3);
  d.aux = oracle::random_cmat(rng, n_cu, n_rf);
  std::uniform_real_distribution<double> ang(0.5, 0.9);
  d.beams.resize(n_tx, n_beams);
  for (int l = 0; l < n_beams; ++l) d.beams.col(l) = oracle::steering(n_tx, ang(rng));
  d.beam_weights = RVec::Constant(n_beams, 1.0 / n_beams);
  d.penalty = penalty;
  return d;
}

CMat as_rf(const CVec& w, Index n_tx) { return w.reshaped(n_tx, w.size() / n_tx); }

}  // namespace

TEST_CASE("objective matches the entrywise formula") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const auto d = random_problem(rng, 8, 3, 2, 2, 0.7);
    const CMat rf = as_rf(oracle::random_phases(rng, 24), 8);
    CHECK(rf_objective(rf, d) ==
          doctest::Approx(oracle::penalized(rf, d.bb, d.channels, d.aux, d.beams, d.beam_weights, d.penalty))
              .epsilon(1e-12));
  }
}

TEST_CASE("Euclidean gradient against central differences") {
  std::mt19937_64 rng(2);
  const auto d = random_problem(rng, 8, 3, 2, 2, 1.3);
  const CVec w = oracle::random_phases(rng, 24);
  const CVec g = euclidean_gradient(as_rf(w, 8), d);
  for (int k = 0; k < 20; ++k) {
    CVec dir = oracle::random_cmat(rng, 24, 1);
    dir /= dir.norm();
    const double h = 1e-5;
    const auto f = [&](double s) {
      return oracle::penalized(as_rf(w + s * dir, 8), d.bb, d.channels, d.aux, d.beams, d.beam_weights, d.penalty);
    };
    const double fd = (f(h) - f(-h)) / (2.0 * h);
    const double an = std::real(g.dot(dir));
    CHECK(std::abs(fd - an) <= 1e-6 * std::max(1.0, std::abs(an)));
  }
}

TEST_CASE("Euclidean gradient entry by entry") {
  // g_j = df/dRe(w_j) + i df/dIm(w_j), each partial by central differences.
  std::mt19937_64 rng(3);
  const auto d = random_problem(rng, 4, 2, 1, 2, 2.0);
  const CVec w = oracle::random_phases(rng, 8);
  const CVec g = euclidean_gradient(PhaseVector::from_values(w), d);
  const auto f = [&](const CVec& v) {
    return oracle::penalized(as_rf(v, 4), d.bb, d.channels, d.aux, d.beams, d.beam_weights, d.penalty);
  };
  const double h = 1e-6;
  for (Index j = 0; j < 8; ++j) {
    CVec p = w, m = w;
    p(j) += h;
    m(j) -= h;
    const double re = (f(p) - f(m)) / (2.0 * h);
    p = w;
    m = w;
    p(j) += cd(0.0, h);
    m(j) -= cd(0.0, h);
    const double im = (f(p) - f(m)) / (2.0 * h);
    CHECK(std::abs(g(j) - cd(re, im)) < 1e-7);
  }
}

TEST_CASE("tangent projection and retraction") {
  std::mt19937_64 rng(4);
  const CVec w = oracle::random_phases(rng, 30);
  const CVec v = oracle::random_cmat(rng, 30, 1);
  const CVec t = tangent_projection(v, w);
  for (Index j = 0; j < 30; ++j) CHECK(std::abs(std::real(std::conj(w(j)) * t(j))) < 1e-14);
  CHECK((tangent_projection(t, w) - t).norm() < 1e-14);
  CHECK((riemannian_gradient(v, w) - t).norm() == 0.0);
  const CVec r = retract(w + 0.3 * t);
  CHECK(oracle::unit_modulus(r, 1e-15));
  CVec z = CVec::Zero(2);
  CHECK(retract(z)(0) == cd(1.0, 0.0));
}

TEST_CASE("phase vector checks the modulus") {
  CVec bad = CVec::Ones(3);
  bad(1) = 1.1;
  CHECK_THROWS_AS(PhaseVector::from_values(bad), ValidationError);
  std::mt19937_64 rng(5);
  const CMat rf = as_rf(oracle::random_phases(rng, 12), 4);
  CHECK(PhaseVector::lift(rf).unlift(4) == rf);
  CHECK_THROWS_AS(PhaseVector::lift(rf).unlift(5), ValidationError);
}

TEST_CASE("Lipschitz bound dominates gradient differences") {
  std::mt19937_64 rng(6);
  for (int t = 0; t < 50; ++t) {
    const auto d = random_problem(rng, 8, 3, 2, 2, 0.5 + t);
    const double lip = gradient_lipschitz_bound(d);
    const CMat a = oracle::random_cmat(rng, 8, 3);
    const CMat b = oracle::random_cmat(rng, 8, 3);
    const double lhs = (euclidean_gradient(a, d) - euclidean_gradient(b, d)).norm();
    CHECK(lhs <= lip * (a - b).norm() * (1.0 + 1e-12));
  }
}

TEST_CASE("RCG iterates stay on the manifold and descend") {
  std::mt19937_64 rng(7);
  for (int run = 0; run < 10; ++run) {
    const auto d = random_problem(rng, 8, 3, 2, 2, 1.0);
    const auto w0 = PhaseVector::from_values(oracle::random_phases(rng, 24));
    double last = rf_objective(w0, d);
    bool descending = true;
    bool on_manifold = true;
    bool tangent = true;
    RcgOptions opts;
    opts.on_iterate = [&](const RcgIterate& it) {
      descending = descending && it.objective <= last;
      last = it.objective;
      on_manifold = on_manifold && oracle::unit_modulus(it.w, 1e-12);
      for (Index j = 0; j < it.w.size(); ++j)
        tangent = tangent && std::abs(std::real(std::conj(it.w(j)) * it.grad(j))) <= 1e-9;
    };
    const auto res = rcg_minimize(w0, d, opts);
    CHECK(descending);
    CHECK(on_manifold);
    CHECK(tangent);
    CHECK(res.objective <= res.initial_objective);
    CHECK(res.objective == doctest::Approx(rf_objective(res.w, d)));
  }
}

TEST_CASE("RCG reaches a stationary point") {
  std::mt19937_64 rng(8);
  const auto d = random_problem(rng, 8, 3, 2, 2, 1.0);
  RcgOptions opts;
  opts.max_iters = 5000;
  opts.grad_tol = 1e-8;
  const auto w0 = PhaseVector::from_values(oracle::random_phases(rng, 24));
  const double g0 = riemannian_gradient(euclidean_gradient(w0, d), w0.values()).norm();
  const auto res = rcg_minimize(w0, d, opts);
  CHECK(res.converged);
  const CVec g = riemannian_gradient(euclidean_gradient(res.w, d), res.w.values());
  CHECK(g.norm() <= 1e-8 * g0 * (1.0 + 1e-9));
}

TEST_CASE("RCG beats random search on a small instance") {
  std::mt19937_64 rng(9);
  const auto d = random_problem(rng, 4, 2, 1, 2, 0.8);
  double best_random = std::numeric_limits<double>::infinity();
  for (int s = 0; s < 50000; ++s)
    best_random = std::min(best_random, oracle::penalized(as_rf(oracle::random_phases(rng, 8), 4), d.bb, d.channels,
                                                          d.aux, d.beams, d.beam_weights, d.penalty));
  double best_rcg = std::numeric_limits<double>::infinity();
  RcgOptions opts;
  opts.max_iters = 500;
  for (int s = 0; s < 20; ++s)
    best_rcg = std::min(best_rcg, rcg_minimize(PhaseVector::from_values(oracle::random_phases(rng, 8)), d, opts).objective);
  CHECK(best_rcg <= best_random + 1e-9 * std::abs(best_random));
}

TEST_CASE("zero gradient returns immediately") {
  RfSubproblemData d;
  d.channels = CMat(4, 0);
  d.bb = CMat::Zero(2, 2);
  d.aux = CMat(0, 2);
  d.beams = oracle::steering(4, 0.5);
  d.beam_weights = RVec::Ones(1);
  std::mt19937_64 rng(1);
  const auto res = rcg_minimize(PhaseVector::from_values(oracle::random_phases(rng, 8)), d);
  CHECK(res.converged);
  CHECK(res.iterations == 0);
}

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

#include "isacbf/socp.hpp"
#include "oracles.hpp"

using namespace isacbf;

namespace {

struct Row {
  CVec b;
  Index m;
  double gamma;
  double sigma;
};

Row random_row(std::mt19937_64& rng, Index len) {
  std::uniform_real_distribution<double> g(0.1, 10.0);
  std::uniform_real_distribution<double> s(0.1, 2.0);
  const CVec b = oracle::random_cmat(rng, len, 1);
  return {b, std::uniform_int_distribution<Index>(0, len - 1)(rng), g(rng), s(rng)};
}

// |z_m|^2 >= gamma (sum_{k != m} |z_k|^2 + sigma^2), in SINR form.
double sinr_of(const CVec& z, Index m, double sigma) {
  double other = sigma * sigma;
  for (Index k = 0; k < z.size(); ++k)
    if (k != m) other += std::norm(z(k));
  return std::norm(z(m)) / other;
}

// Two-entry rows: scan the off-diagonal radius on a 1e-3 grid and take the
// smallest feasible diagonal radius for each; phases are kept.
CVec grid_projection(const CVec& b, Index m, double gamma, double sigma) {
  const Index o = 1 - m;
  const double x0 = std::abs(b(m));
  const double y0 = std::abs(b(o));
  double best = std::numeric_limits<double>::infinity();
  double bx = x0, by = y0;
  for (double y = 0.0; y <= y0 + 1e-3; y += 1e-3) {
    const double yy = std::min(y, y0);
    const double x = std::max(x0, std::sqrt(gamma * (yy * yy + sigma * sigma)));
    const double d = (x - x0) * (x - x0) + (yy - y0) * (yy - y0);
    if (d < best) {
      best = d;
      bx = x;
      by = yy;
    }
  }
  CVec z(2);
  z(m) = x0 > 0 ? b(m) / x0 * bx : cd(bx, 0.0);
  z(o) = y0 > 0 ? b(o) / y0 * by : cd(0.0, 0.0);
  return z;
}

}  // namespace

TEST_CASE("projection is feasible and idempotent") {
  std::mt19937_64 rng(1);
  for (int t = 0; t < 500; ++t) {
    const auto r = random_row(rng, 2 + t % 2);
    const CVec z = project_row(r.b, r.m, r.gamma, r.sigma);
    CHECK(row_slack(z, r.m, r.gamma, r.sigma) >= -1e-7);
    CHECK(sinr_of(z, r.m, r.sigma) >= r.gamma * (1.0 - 1e-7));
    CHECK((project_row(z, r.m, r.gamma, r.sigma) - z).norm() <= 1e-9 * (1.0 + z.norm()));
  }
}

TEST_CASE("projection agrees with a grid search") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 500; ++t) {
    const auto r = random_row(rng, 2);
    const CVec z = project_row(r.b, r.m, r.gamma, r.sigma);
    const CVec g = grid_projection(r.b, r.m, r.gamma, r.sigma);
    CHECK((z - g).norm() <= 2e-3);
    CHECK((r.b - z).norm() <= (r.b - g).norm() + 1e-12);
  }
}

TEST_CASE("feasible rows are returned unchanged") {
  CVec b(3);
  b << cd(5.0, 1.0), cd(0.1, 0.0), cd(0.0, -0.2);
  CHECK(project_row(b, 0, 1.0, 1.0) == b);
  CHECK(row_slack(b, 0, 1.0, 1.0) > 0.0);
}

TEST_CASE("distance grows with the threshold") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    const auto r = random_row(rng, 3);
    double last = 0.0;
    for (double gamma : {0.1, 0.5, 1.0, 3.0, 10.0, 30.0}) {
      const double d = (project_row(r.b, r.m, gamma, r.sigma) - r.b).norm();
      CHECK(d >= last - 1e-12);
      last = d;
    }
  }
}

TEST_CASE("projection keeps phases and shrinks interference") {
  std::mt19937_64 rng(4);
  for (int t = 0; t < 100; ++t) {
    const auto r = random_row(rng, 3);
    const CVec z = project_row(r.b, r.m, r.gamma, r.sigma);
    CHECK(std::abs(z(r.m)) >= std::abs(r.b(r.m)) - 1e-12);
    for (Index k = 0; k < 3; ++k) {
      if (std::abs(r.b(k)) > 0.0 && std::abs(z(k)) > 1e-12)
        CHECK(std::abs(std::arg(z(k) / r.b(k))) < 1e-9);
      if (k != r.m) CHECK(std::abs(z(k)) <= std::abs(r.b(k)) + 1e-12);
    }
  }
  // Zero diagonal entry: the projection picks a real positive value.
  CVec b = CVec::Zero(2);
  b(1) = cd(1.0, 1.0);
  const CVec z = project_row(b, 0, 2.0, 0.5);
  CHECK(z(0).real() > 0.0);
  CHECK(sinr_of(z, 0, 0.5) >= 2.0 * (1.0 - 1e-7));
}

TEST_CASE("matrix update projects every row") {
  std::mt19937_64 rng(5);
  const CMat h = oracle::random_cmat(rng, 8, 2);
  const HybridPrecoder p{oracle::random_phases(rng, 32).reshaped(8, 4), oracle::random_cmat(rng, 4, 4, 0.1)};
  const RVec gamma = (RVec(2) << 2.0, 5.0).finished();
  const RVec sigma = (RVec(2) << 0.3, 0.7).finished();
  const auto aux = update_aux(h, p, gamma, sigma);
  const CMat eff = h.adjoint() * p.rf * p.bb;
  for (Index m = 0; m < 2; ++m) {
    const CVec row = eff.row(m).transpose();
    CHECK((aux.z.row(m).transpose() - project_row(row, m, gamma(m), sigma(m))).norm() < 1e-14);
  }
  CHECK(aux_objective(eff, aux.z) == doctest::Approx((eff - aux.z).squaredNorm()));
  CHECK_THROWS_AS(update_aux(eff, RVec::Ones(3), sigma), ValidationError);
  CHECK_THROWS_AS(project_row(CVec::Ones(2), 0, 0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(project_row(CVec::Ones(2), 2, 1.0, 1.0), ValidationError);
}

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
#include "isacbf/optimizer.hpp"
#include "oracles.hpp"

using namespace isacbf;

namespace {

ScenarioConfig small_config(std::uint64_t seed) {
  auto c = with_beams(desk_scenario(), 2);
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("proposed design meets power and SINR targets") {
  int met = 0;
  for (std::uint64_t t = 0; t < 8; ++t) {
    const auto cfg = small_config(derive_seed(21, t, 1));
    const auto ch = sample_channels(cfg, derive_seed(21, t, 0));
    const auto res = optimize(cfg, ch);
    const double p = dbm_to_mw(cfg.p_tx_dbm);
    CHECK(res.precoder.power() == doctest::Approx(p).epsilon(1e-9));
    CHECK(oracle::unit_modulus(PhaseVector::lift(res.precoder.rf).values(), 1e-12));
    CHECK(res.precoder.rf.cols() == cfg.n_rf);
    CHECK(res.precoder.bb.cols() == cfg.n_rf);
    REQUIRE(res.diagnostics.sinr.size() == 2);
    bool ok = res.diagnostics.final_residual < cfg.tol_outer;
    for (Index m = 0; m < 2; ++m) {
      const auto& u = ch.users[static_cast<std::size_t>(m)];
      const double s = oracle::sinr(u.h, u.noise_power_mw, res.precoder.combined(), m);
      CHECK(res.diagnostics.sinr[static_cast<std::size_t>(m)] == doctest::Approx(s).epsilon(1e-10));
      ok = ok && s >= 0.95;
    }
    met += ok;
    CHECK(res.weights.w.sum() == doctest::Approx(1.0));
    CHECK(res.diagnostics.outer.size() >= 1);
    CHECK(res.diagnostics.inner.size() >= res.diagnostics.outer.size());
  }
  CHECK(met >= 7);
}

TEST_CASE("trace sink sees every inner pass") {
  const auto cfg = small_config(5);
  const auto ch = sample_channels(cfg, 6);
  std::vector<InnerRecord> seen;
  const auto res = optimize(cfg, ch, [&](const InnerRecord& r) { seen.push_back(r); });
  REQUIRE(seen.size() == res.diagnostics.inner.size());
  double alpha = cfg.penalty_init;
  int outer = 0;
  for (const auto& r : seen) {
    if (r.outer != outer) {
      alpha /= cfg.penalty_shrink;
      outer = r.outer;
    }
    CHECK(r.penalty == doctest::Approx(alpha));
    CHECK(r.rcg_iterations <= cfg.max_rcg_iters);
  }
}

TEST_CASE("runs are reproducible") {
  const auto cfg = small_config(9);
  const auto ch = sample_channels(cfg, 10);
  const auto a = optimize(cfg, ch);
  const auto b = optimize(cfg, ch);
  CHECK(a.precoder.rf == b.precoder.rf);
  CHECK(a.precoder.bb == b.precoder.bb);
  CHECK(a.diagnostics.same_trace(b.diagnostics));
  auto other = cfg;
  other.seed = 10;
  CHECK(optimize(other, ch).precoder.rf != a.precoder.rf);
}

TEST_CASE("radar-only and communication-only baselines") {
  double radar = 0.0, proposed = 0.0, rate_comm = 0.0, rate_prop = 0.0;
  for (std::uint64_t t = 0; t < 5; ++t) {
    const auto cfg = small_config(derive_seed(3, t, 1));
    const auto ch = sample_channels(cfg, derive_seed(3, t, 0));
    const auto angles = beam_angles_rad(cfg);
    const auto r = radar_only(cfg, angles);
    CHECK(r.precoder.power() == doctest::Approx(dbm_to_mw(cfg.p_tx_dbm)).epsilon(1e-9));
    CHECK(r.diagnostics.sinr.empty());
    const auto p = optimize(cfg, ch);
    const auto c = comm_only(cfg, ch);
    CHECK(c.power() == doctest::Approx(dbm_to_mw(cfg.p_tx_dbm)).epsilon(1e-9));
    CHECK(oracle::unit_modulus(PhaseVector::lift(c.rf).values(), 1e-12));
    radar += sbp_linear(r.precoder, angles);
    proposed += sbp_linear(p.precoder, angles);
    rate_comm += sum_rate(ch, c);
    rate_prop += sum_rate(ch, p.precoder);
  }
  CHECK(radar >= proposed);
  CHECK(rate_comm >= rate_prop);
}

TEST_CASE("input checks") {
  const auto cfg = small_config(1);
  auto other = desk_scenario();
  other.n_tx = 8;
  const auto ch = sample_channels(other, 1);
  CHECK_THROWS_AS(optimize(cfg, ch), ValidationError);
  auto bad = cfg;
  bad.n_rf = 9;
  CHECK_THROWS_AS(optimize(bad, sample_channels(cfg, 1)), ValidationError);
  CHECK_THROWS_AS(radar_only(cfg, std::vector<double>{}), ValidationError);
}

TEST_CASE("random analog initialization") {
  const CMat a = random_phase_matrix(16, 4, 3);
  CHECK(a == random_phase_matrix(16, 4, 3));
  CHECK(a != random_phase_matrix(16, 4, 4));
  CHECK(oracle::unit_modulus(PhaseVector::lift(a).values(), 1e-15));
}

TEST_CASE("alternative baseband updates") {
  auto cfg = small_config(2);
  cfg.bb_update = BbUpdateMode::Ridge;
  cfg.max_outer = 5;
  const auto ch = sample_channels(cfg, 3);
  // Either a finite design or a reported numerical failure; never NaN.
  try {
    const auto res = optimize(cfg, ch);
    CHECK(res.precoder.bb.allFinite());
    CHECK(res.precoder.power() == doctest::Approx(dbm_to_mw(cfg.p_tx_dbm)).epsilon(1e-9));
  } catch (const NumericalError& e) {
    CHECK(std::string(e.what()).size() > 0);
  }
}

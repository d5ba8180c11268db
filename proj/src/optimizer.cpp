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

#include "isacbf/optimizer.hpp"

#include "isacbf/bb_solver.hpp"
#include "isacbf/manifold.hpp"
#include "isacbf/socp.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace isacbf {

bool RunDiagnostics::same_trace(const RunDiagnostics& o) const {
  if (inner.size() != o.inner.size() || outer.size() != o.outer.size()) return false;
  for (std::size_t i = 0; i < inner.size(); ++i) {
    const auto& a = inner[i];
    const auto& b = o.inner[i];
    if (a.outer != b.outer || a.inner != b.inner || a.penalty != b.penalty || a.objective != b.objective ||
        a.sbp != b.sbp || a.residual != b.residual || a.rcg_iterations != b.rcg_iterations)
      return false;
  }
  for (std::size_t i = 0; i < outer.size(); ++i)
    if (outer[i].penalty != o.outer[i].penalty || outer[i].residual != o.outer[i].residual) return false;
  return sinr == o.sinr && power_mw == o.power_mw && final_residual == o.final_residual;
}

CMat random_phase_matrix(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * kPi);
  CMat out(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) out(i, j) = std::polar(1.0, phase(rng));
  return out;
}

namespace {

// Problem in normalized units: unit power budget, channels scaled by
// sqrt(P_t) / sigma_m so every CU sees unit noise.
struct Problem {
  int n_tx = 0;
  int n_rf = 0;
  CMat channels;  // n_tx x n_cu
  CMat beams;     // n_tx x n_beams
  RVec weights;
  RVec thresholds;
  std::vector<double> beam_angles;
};

double max_residual(const CMat& effective, const CMat& z) {
  if (effective.size() == 0) return 0.0;
  return (effective - z).cwiseAbs2().maxCoeff();
}

struct Alternation {
  CMat rf;
  CMat bb;
  RunDiagnostics diag;
};

Alternation run_alternation(const Problem& prob, const ScenarioConfig& cfg, std::uint64_t init_seed,
                            const TraceSink& sink) {
  const Index n_cu = prob.channels.cols();
  const Index n_streams = prob.n_rf;
  const bool has_users = n_cu > 0;
  const RVec unit_noise = RVec::Ones(n_cu);

  Alternation st;
  st.rf = random_phase_matrix(prob.n_tx, prob.n_rf, init_seed);
  st.bb = CMat::Identity(prob.n_rf, n_streams);
  st.bb /= (st.rf * st.bb).norm();
  CMat z(n_cu, n_streams);
  if (has_users) z = update_aux(CMat(prob.channels.adjoint() * st.rf * st.bb), prob.thresholds, unit_noise).z;

  RfSubproblemData data{prob.channels, st.bb, z, prob.beams, prob.weights, cfg.penalty_init};
  RcgOptions rcg_opts;
  rcg_opts.max_iters = cfg.max_rcg_iters;
  rcg_opts.grad_tol = cfg.tol_linesearch;
  const Index fill = n_cu < n_streams ? n_cu : 0;

  double alpha = cfg.penalty_init;
  int rising = 0;
  double last_outer_residual = std::numeric_limits<double>::infinity();
  for (int outer = 0; outer < cfg.max_outer; ++outer) {
    data.penalty = alpha;
    OuterRecord orec{outer, alpha, 0.0, 0, 0};
    double prev = rf_objective(st.rf, data);
    for (int inner = 0; inner < cfg.max_inner; ++inner) {
      const double before = prev;
      auto rcg = rcg_minimize(PhaseVector::lift(st.rf), data, rcg_opts);
      st.rf = rcg.w.unlift(prob.n_tx);

      const auto sys = make_bb_system(st.rf, prob.channels, prob.beams, data.beam_weights, alpha, data.aux, 1.0,
                                      cfg.bb_update, fill);
      const auto upd = update_bb(sys);
      st.bb = upd.bb;
      data.bb = st.bb;

      const CMat effective = prob.channels.adjoint() * st.rf * st.bb;
      if (has_users) data.aux = update_aux(effective, prob.thresholds, unit_noise).z;

      InnerRecord rec;
      rec.outer = outer;
      rec.inner = inner;
      rec.penalty = alpha;
      rec.objective = rf_objective(st.rf, data);
      rec.sbp = -rf_objective(st.rf, RfSubproblemData{CMat(prob.n_tx, 0), st.bb, CMat(0, n_streams), prob.beams,
                                                      data.beam_weights, 0.0});
      rec.residual = max_residual(effective, data.aux);
      rec.rcg_iterations = rcg.iterations;
      rec.ridge = upd.ridge_applied;
      rec.monotone = rec.objective <= before + 1e-12 * std::max(1.0, std::abs(before));
      if (!std::isfinite(rec.objective)) {
        std::ostringstream os;
        os << "optimize: non-finite objective at outer " << outer << ", inner " << inner;
        throw NumericalError(os.str());
      }
      if (!rec.monotone && !rec.ridge) ++st.diag.monotonicity_violations;
      if (rec.ridge) ++orec.ridge_events;
      st.diag.inner.push_back(rec);
      if (sink) sink(rec);
      ++orec.inner_passes;

      const bool saturated = std::abs(rec.objective - prev) <= cfg.tol_inner * std::max(std::abs(prev), 1e-12);
      prev = rec.objective;
      if (saturated) break;
    }
    orec.residual = st.diag.inner.back().residual;
    st.diag.outer.push_back(orec);
    st.diag.final_residual = orec.residual;
    if (orec.residual < cfg.tol_outer) {
      st.diag.converged = true;
      break;
    }
    rising = orec.residual >= last_outer_residual ? rising + 1 : 0;
    if (rising == 3) {
      std::ostringstream os;
      os << "penalty residual did not decrease for 3 consecutive outer iterations (outer " << outer << ")";
      st.diag.warnings.push_back(os.str());
    }
    last_outer_residual = orec.residual;
    alpha /= cfg.penalty_shrink;
    if (cfg.reweight_outer && prob.beam_angles.size() > 1) {
      try {
        data.beam_weights = beam_weights(HybridPrecoder{st.rf, st.bb}, prob.beam_angles).w;
      } catch (const ValidationError&) {
        // keep the previous weights while some beam still has zero gain
      }
    }
  }
  if (!st.diag.converged) st.diag.warnings.push_back("max_outer reached before the penalty residual fell below tol_outer");
  return st;
}

OptimizeResult finish(Alternation st, const Problem& prob, const ScenarioConfig& cfg, const ChannelSet* ch,
                      std::chrono::steady_clock::time_point t0) {
  const double norm = (st.rf * st.bb).norm();
  if (!(norm > 0.0) || !std::isfinite(norm)) throw NumericalError("optimize: precoder vanished before normalization");
  const double p_tx = dbm_to_mw(cfg.p_tx_dbm);
  OptimizeResult out;
  out.precoder = HybridPrecoder{st.rf, st.bb * (std::sqrt(p_tx) / norm)};
  out.beam_angles_rad = prob.beam_angles;
  try {
    out.weights = beam_weights(out.precoder, prob.beam_angles);
  } catch (const ValidationError&) {
    out.weights.w = RVec::Constant(static_cast<Index>(prob.beam_angles.size()), 1.0 / prob.beam_angles.size());
    st.diag.warnings.push_back("a beam has zero gain; reporting uniform weights");
  }
  out.diagnostics = std::move(st.diag);
  out.diagnostics.power_mw = out.precoder.power();
  if (ch) out.diagnostics.sinr = sinrs(*ch, out.precoder);
  for (std::size_t m = 0; m < out.diagnostics.sinr.size(); ++m) {
    if (out.diagnostics.sinr[m] < prob.thresholds(static_cast<Index>(m)) * (1.0 - 1e-9)) {
      std::ostringstream os;
      os << "CU " << m << " final SINR " << linear_to_db(out.diagnostics.sinr[m]) << " dB below threshold";
      out.diagnostics.warnings.push_back(os.str());
    }
  }
  out.diagnostics.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

Problem make_problem(const ScenarioConfig& cfg, std::span<const double> beam_angles) {
  Problem prob;
  prob.n_tx = cfg.n_tx;
  prob.n_rf = cfg.n_rf;
  prob.beam_angles.assign(beam_angles.begin(), beam_angles.end());
  prob.beams = steering_matrix(cfg.n_tx, beam_angles);
  prob.weights = RVec::Constant(static_cast<Index>(beam_angles.size()), 1.0 / beam_angles.size());
  return prob;
}

}  // namespace

OptimizeResult optimize(const ScenarioConfig& config, const ChannelSet& ch, const TraceSink& sink) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = validate(config);
  if (ch.n_tx != cfg.n_tx || static_cast<int>(ch.users.size()) != cfg.n_cu)
    throw ValidationError("optimize: channel set does not match the scenario");
  const auto angles = beam_angles_rad(cfg);
  Problem prob = make_problem(cfg, angles);
  const double p_tx = dbm_to_mw(cfg.p_tx_dbm);
  prob.channels.resize(cfg.n_tx, cfg.n_cu);
  prob.thresholds.resize(cfg.n_cu);
  for (int m = 0; m < cfg.n_cu; ++m) {
    const auto& u = ch.users[static_cast<std::size_t>(m)];
    prob.channels.col(m) = u.h * std::sqrt(p_tx / u.noise_power_mw);
    prob.thresholds(m) = db_to_linear(cfg.sinr_thresholds_db[static_cast<std::size_t>(m)]);
  }
  auto st = run_alternation(prob, cfg, derive_seed(cfg.seed, 0, 1), sink);
  return finish(std::move(st), prob, cfg, &ch, t0);
}

OptimizeResult radar_only(const ScenarioConfig& config, std::span<const double> beam_angles_rad,
                          const TraceSink& sink) {
  const auto t0 = std::chrono::steady_clock::now();
  if (config.n_rf < 1 || config.n_rf > config.n_tx) throw ValidationError("radar_only: need 1 <= n_rf <= n_tx");
  if (beam_angles_rad.empty()) throw ValidationError("radar_only: at least one beam angle is required");
  Problem prob = make_problem(config, beam_angles_rad);
  prob.channels.resize(config.n_tx, 0);
  prob.thresholds.resize(0);
  auto st = run_alternation(prob, config, derive_seed(config.seed, 0, 1), sink);
  return finish(std::move(st), prob, config, nullptr, t0);
}

HybridPrecoder comm_only(const ScenarioConfig& config, const ChannelSet& ch) {
  const auto cfg = validate(config);
  if (ch.n_tx != cfg.n_tx || static_cast<int>(ch.users.size()) != cfg.n_cu)
    throw ValidationError("comm_only: channel set does not match the scenario");
  const double p_tx = dbm_to_mw(cfg.p_tx_dbm);
  CMat rf = random_phase_matrix(cfg.n_tx, cfg.n_rf, derive_seed(cfg.seed, 0, 2));
  double noise_sum = 0.0;
  for (int m = 0; m < cfg.n_cu; ++m) {
    const auto& u = ch.users[static_cast<std::size_t>(m)];
    for (Index i = 0; i < cfg.n_tx; ++i) rf(i, m) = u.h(i) == cd(0.0) ? cd(1.0) : u.h(i) / std::abs(u.h(i));
    noise_sum += u.noise_power_mw;
  }
  const CMat h = ch.matrix();
  const CMat eff = rf.adjoint() * h;  // n_rf x n_cu
  const CMat gram = rf.adjoint() * rf;
  const CMat gi_eff = gram.ldlt().solve(eff);
  CMat inner = eff.adjoint() * gi_eff;
  inner.diagonal().array() += noise_sum / p_tx;
  const CMat cu_cols = gi_eff * inner.ldlt().solve(CMat::Identity(cfg.n_cu, cfg.n_cu));

  HybridPrecoder p{rf, CMat::Zero(cfg.n_rf, cfg.n_rf)};
  p.bb.leftCols(cfg.n_cu) = cu_cols;
  const double norm = (rf * p.bb).norm();
  if (!(norm > 0.0)) throw NumericalError("comm_only: precoder vanished");
  p.bb *= std::sqrt(p_tx) / norm;
  return p;
}

}  // namespace isacbf

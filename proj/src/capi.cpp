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

#include "isacbf/isacbf.h"

#include "isacbf/harness.hpp"
#include "isacbf/io.hpp"
#include "isacbf/optimizer.hpp"

#include <cmath>
#include <cstring>
#include <exception>
#include <limits>
#include <string>

struct isacbf_scenario {
  isacbf::ScenarioConfig config;
};

struct isacbf_channels {
  isacbf::ChannelSet set;
};

struct isacbf_result {
  isacbf::OptimizeResult result;
  std::vector<double> beam_angles_rad;
};

namespace {

thread_local std::string g_last_error;

isacbf_status fail(isacbf_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

template <typename Fn>
isacbf_status guarded(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    return ISACBF_OK;
  } catch (const isacbf::ValidationError& e) {
    return fail(ISACBF_VALIDATION, e.what());
  } catch (const isacbf::NumericalError& e) {
    return fail(ISACBF_NUMERICAL, e.what());
  } catch (const isacbf::IoError& e) {
    return fail(ISACBF_IO, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(ISACBF_VALIDATION, std::string("invalid json: ") + e.what());
  } catch (const std::exception& e) {
    return fail(ISACBF_INTERNAL, e.what());
  } catch (...) {
    return fail(ISACBF_INTERNAL, "unknown error");
  }
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define ISACBF_REQUIRE(cond, msg) \
  do {                            \
    if (!(cond)) return fail(ISACBF_INVALID_ARGUMENT, msg); \
  } while (0)

isacbf_status copy_values(const std::vector<double>& src, double* dst, size_t n, size_t* count) {
  if (count) *count = src.size();
  ISACBF_REQUIRE(dst || n == 0, "null output buffer");
  for (size_t i = 0; i < n && i < src.size(); ++i) dst[i] = src[i];
  return ISACBF_OK;
}

isacbf_status make_result(isacbf::OptimizeResult r, isacbf_result** out) {
  auto* h = new isacbf_result{};
  h->beam_angles_rad = r.beam_angles_rad;
  h->result = std::move(r);
  *out = h;
  return ISACBF_OK;
}

}  // namespace

extern "C" {

const char* isacbf_last_error(void) { return g_last_error.c_str(); }

const char* isacbf_version(void) { return "0.1.0"; }

void isacbf_string_free(char* s) { delete[] s; }

isacbf_status isacbf_scenario_create_default(isacbf_scenario** out) {
  ISACBF_REQUIRE(out, "null output handle");
  return guarded([&] { *out = new isacbf_scenario{isacbf::full_scale_scenario()}; });
}

isacbf_status isacbf_scenario_create_desk(isacbf_scenario** out) {
  ISACBF_REQUIRE(out, "null output handle");
  return guarded([&] { *out = new isacbf_scenario{isacbf::desk_scenario()}; });
}

isacbf_status isacbf_scenario_from_json(const char* text, isacbf_scenario** out) {
  ISACBF_REQUIRE(text && out, "null argument");
  return guarded([&] {
    auto cfg = isacbf::config_from_json(isacbf::json::parse(text));
    *out = new isacbf_scenario{std::move(cfg)};
  });
}

isacbf_status isacbf_scenario_load(const char* path, isacbf_scenario** out) {
  ISACBF_REQUIRE(path && out, "null argument");
  return guarded([&] { *out = new isacbf_scenario{isacbf::load_config(path)}; });
}

isacbf_status isacbf_scenario_to_json(const isacbf_scenario* s, char** out) {
  ISACBF_REQUIRE(s && out, "null argument");
  return guarded([&] { *out = dup_string(isacbf::config_to_json(s->config).dump(2)); });
}

isacbf_status isacbf_scenario_set_p_tx_dbm(isacbf_scenario* s, double p_tx_dbm) {
  ISACBF_REQUIRE(s, "null scenario");
  ISACBF_REQUIRE(std::isfinite(p_tx_dbm), "transmit power must be finite");
  s->config.p_tx_dbm = p_tx_dbm;
  return ISACBF_OK;
}

isacbf_status isacbf_scenario_set_sinr_threshold_db(isacbf_scenario* s, double sinr_db) {
  ISACBF_REQUIRE(s, "null scenario");
  ISACBF_REQUIRE(std::isfinite(sinr_db), "SINR threshold must be finite");
  return guarded([&] { s->config = isacbf::with_sinr_threshold(s->config, sinr_db); });
}

isacbf_status isacbf_scenario_set_sinr_thresholds_db(isacbf_scenario* s, const double* sinr_db, size_t n) {
  ISACBF_REQUIRE(s && (sinr_db || n == 0), "null argument");
  ISACBF_REQUIRE(n == static_cast<size_t>(s->config.n_cu), "one threshold per CU required");
  s->config.sinr_thresholds_db.assign(sinr_db, sinr_db + n);
  return ISACBF_OK;
}

isacbf_status isacbf_scenario_set_n_beams(isacbf_scenario* s, int n_beams) {
  ISACBF_REQUIRE(s, "null scenario");
  return guarded([&] {
    auto cfg = isacbf::with_beams(s->config, n_beams);
    isacbf::validate(cfg);
    s->config = std::move(cfg);
  });
}

isacbf_status isacbf_scenario_set_seed(isacbf_scenario* s, uint64_t seed) {
  ISACBF_REQUIRE(s, "null scenario");
  s->config.seed = seed;
  return ISACBF_OK;
}

isacbf_status isacbf_scenario_dims(const isacbf_scenario* s, int* n_tx, int* n_rf, int* n_cu, int* n_beams) {
  ISACBF_REQUIRE(s, "null scenario");
  if (n_tx) *n_tx = s->config.n_tx;
  if (n_rf) *n_rf = s->config.n_rf;
  if (n_cu) *n_cu = s->config.n_cu;
  if (n_beams) *n_beams = s->config.n_beams;
  return ISACBF_OK;
}

isacbf_status isacbf_scenario_validate(const isacbf_scenario* s) {
  ISACBF_REQUIRE(s, "null scenario");
  return guarded([&] { isacbf::validate(s->config); });
}

void isacbf_scenario_destroy(isacbf_scenario* s) { delete s; }

isacbf_status isacbf_channels_sample(const isacbf_scenario* s, uint64_t seed, isacbf_channels** out) {
  ISACBF_REQUIRE(s && out, "null argument");
  return guarded([&] {
    isacbf::validate(s->config);
    *out = new isacbf_channels{isacbf::sample_channels(s->config, seed)};
  });
}

isacbf_status isacbf_channels_from_json(const char* text, isacbf_channels** out) {
  ISACBF_REQUIRE(text && out, "null argument");
  return guarded([&] { *out = new isacbf_channels{isacbf::channels_from_json(isacbf::json::parse(text))}; });
}

isacbf_status isacbf_channels_to_json(const isacbf_channels* c, char** out) {
  ISACBF_REQUIRE(c && out, "null argument");
  return guarded([&] { *out = dup_string(isacbf::channels_to_json(c->set).dump()); });
}

void isacbf_channels_destroy(isacbf_channels* c) { delete c; }

isacbf_status isacbf_optimize(const isacbf_scenario* s, const isacbf_channels* c, isacbf_trace_fn trace, void* user,
                              isacbf_result** out) {
  ISACBF_REQUIRE(s && c && out, "null argument");
  return guarded([&] {
    isacbf::TraceSink sink;
    if (trace)
      sink = [trace, user](const isacbf::InnerRecord& r) {
        trace(r.outer, r.inner, r.penalty, r.objective, r.residual, user);
      };
    make_result(isacbf::optimize(s->config, c->set, sink), out);
  });
}

isacbf_status isacbf_radar_only(const isacbf_scenario* s, isacbf_result** out) {
  ISACBF_REQUIRE(s && out, "null argument");
  return guarded([&] {
    isacbf::validate(s->config);
    make_result(isacbf::radar_only(s->config, isacbf::beam_angles_rad(s->config)), out);
  });
}

isacbf_status isacbf_comm_only(const isacbf_scenario* s, const isacbf_channels* c, isacbf_result** out) {
  ISACBF_REQUIRE(s && c && out, "null argument");
  return guarded([&] {
    isacbf::OptimizeResult r;
    r.precoder = isacbf::comm_only(s->config, c->set);
    r.beam_angles_rad = isacbf::beam_angles_rad(s->config);
    r.weights = isacbf::beam_weights(r.precoder, r.beam_angles_rad);
    r.diagnostics.sinr = isacbf::sinrs(c->set, r.precoder);
    r.diagnostics.power_mw = r.precoder.power();
    make_result(std::move(r), out);
  });
}

isacbf_status isacbf_result_metrics(const isacbf_result* r, isacbf_metrics* out) {
  ISACBF_REQUIRE(r && out, "null argument");
  return guarded([&] {
    const auto& res = r->result;
    const auto& d = res.diagnostics;
    out->sbp_linear = isacbf::sbp_linear(res.precoder, r->beam_angles_rad);
    out->sbp_weighted = isacbf::sbp_gain(res.weights, res.precoder, r->beam_angles_rad);
    out->sum_rate = isacbf::sum_rate_from_sinr(d.sinr);
    out->power_mw = res.precoder.power();
    out->final_residual = d.final_residual;
    try {
      out->imsr = isacbf::imsr(res.precoder, isacbf::deg_to_rad(40.0), isacbf::deg_to_rad(20.0));
    } catch (const isacbf::NumericalError&) {
      out->imsr = std::numeric_limits<double>::infinity();
    }
    out->converged = d.converged ? 1 : 0;
    out->outer_iterations = static_cast<int>(d.outer.size());
    out->monotonicity_violations = d.monotonicity_violations;
  });
}

isacbf_status isacbf_result_sinr(const isacbf_result* r, double* sinr, size_t n, size_t* count) {
  ISACBF_REQUIRE(r, "null result");
  return copy_values(r->result.diagnostics.sinr, sinr, n, count);
}

isacbf_status isacbf_result_beam_weights(const isacbf_result* r, double* w, size_t n, size_t* count) {
  ISACBF_REQUIRE(r, "null result");
  const auto& v = r->result.weights.w;
  return copy_values(std::vector<double>(v.data(), v.data() + v.size()), w, n, count);
}

isacbf_status isacbf_result_beampattern(const isacbf_result* r, const double* angles_deg, size_t n, double* gain) {
  ISACBF_REQUIRE(r && (n == 0 || (angles_deg && gain)), "null argument");
  return guarded([&] {
    const isacbf::CMat x = r->result.precoder.combined();
    for (size_t i = 0; i < n; ++i) gain[i] = isacbf::beampattern_gain_combined(x, isacbf::deg_to_rad(angles_deg[i]));
  });
}

isacbf_status isacbf_result_diagnostics_json(const isacbf_result* r, char** out) {
  ISACBF_REQUIRE(r && out, "null argument");
  return guarded([&] { *out = dup_string(isacbf::diagnostics_to_json(r->result.diagnostics).dump(2)); });
}

isacbf_status isacbf_result_precoder_json(const isacbf_result* r, char** out) {
  ISACBF_REQUIRE(r && out, "null argument");
  return guarded([&] { *out = dup_string(isacbf::precoder_to_json(r->result.precoder).dump()); });
}

void isacbf_result_destroy(isacbf_result* r) { delete r; }

void isacbf_experiment_options_init(isacbf_experiment_options* opts, isacbf_experiment kind) {
  if (!opts) return;
  *opts = isacbf_experiment_options{};
  opts->kind = kind;
  opts->seed = 1;
}

isacbf_status isacbf_run_experiment(const isacbf_scenario* base, const isacbf_experiment_options* opts,
                                    const char* out_path, char** summary) {
  ISACBF_REQUIRE(opts, "null options");
  ISACBF_REQUIRE(opts->kind >= ISACBF_POWER_SWEEP && opts->kind <= ISACBF_IMSR, "unknown experiment kind");
  return guarded([&] {
    auto spec = isacbf::default_spec(static_cast<isacbf::ExperimentKind>(opts->kind), opts->paper_scale != 0);
    if (base) spec.base = base->config;
    if (opts->trials > 0) spec.trials = opts->trials;
    spec.seed = opts->seed;
    spec.threads = opts->threads;
    if (opts->values && opts->n_values) spec.values.assign(opts->values, opts->values + opts->n_values);
    if (opts->sinr_series_db && opts->n_sinr_series)
      spec.sinr_series_db.assign(opts->sinr_series_db, opts->sinr_series_db + opts->n_sinr_series);
    if (opts->beam_series && opts->n_beam_series)
      spec.beam_series.assign(opts->beam_series, opts->beam_series + opts->n_beam_series);
    if (out_path) spec.output_path = out_path;
    const auto result = isacbf::run_experiment(spec);
    if (!spec.output_path.empty()) isacbf::write_outputs(result, spec);
    if (summary) *summary = dup_string(isacbf::to_csv(result));
  });
}

}  // extern "C"

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

#include "isacbf/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

namespace isacbf {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// SINR slack when counting a trial as meeting its QoS after the final power
// normalization.
constexpr double kQosSlack = 0.95;

const std::vector<std::string> kMetricNames{"sbp_linear", "sbp_eq3", "sum_rate", "min_sinr_db",
                                            "qos_met",    "imsr",    "residual", "converged"};

using TrialMetrics = std::map<std::string, double>;

struct PointSpec {
  std::string scheme;
  int n_beams = 0;
  double p_tx_dbm = 0.0;
  double sinr_db = kNaN;
  ScenarioConfig cfg;
};

struct Task {
  std::size_t point;
  int trial;
};

struct TaskOutcome {
  bool ok = false;
  TrialMetrics metrics;
  std::string error;
};

ScenarioConfig point_config(const ExperimentSpec& spec, int n_beams, double p_tx_dbm, double sinr_db) {
  ScenarioConfig cfg = with_beams(spec.base, n_beams);
  cfg.p_tx_dbm = p_tx_dbm;
  if (!std::isnan(sinr_db)) cfg = with_sinr_threshold(cfg, sinr_db);
  return cfg;
}

TrialMetrics evaluate(const PointSpec& pt, int trial, const ExperimentSpec& spec) {
  ScenarioConfig cfg = pt.cfg;
  cfg.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(trial), 1);
  const auto beams = beam_angles_rad(cfg);
  const double theta0 = deg_to_rad(spec.imsr_theta0_deg);
  const double delta = deg_to_rad(spec.imsr_delta_deg);

  TrialMetrics m;
  for (const auto& name : kMetricNames) m[name] = kNaN;
  HybridPrecoder p;
  if (pt.scheme == "radar_only") {
    auto res = radar_only(cfg, beams);
    p = res.precoder;
    m["sbp_eq3"] = sbp_gain(res.weights, p, beams);
  } else {
    const ChannelSet ch = sample_channels(cfg, derive_seed(spec.seed, static_cast<std::uint64_t>(trial), 0));
    std::vector<double> s;
    if (pt.scheme == "proposed") {
      auto res = optimize(cfg, ch);
      p = res.precoder;
      s = res.diagnostics.sinr;
      m["sbp_eq3"] = sbp_gain(res.weights, p, beams);
      m["residual"] = res.diagnostics.final_residual;
      m["converged"] = res.diagnostics.converged ? 1.0 : 0.0;
    } else {
      p = comm_only(cfg, ch);
      s = sinrs(ch, p);
    }
    m["sum_rate"] = sum_rate_from_sinr(s);
    double min_db = std::numeric_limits<double>::infinity();
    bool ok = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
      min_db = std::min(min_db, linear_to_db(s[i]));
      if (s[i] < kQosSlack * db_to_linear(cfg.sinr_thresholds_db[i])) ok = false;
    }
    m["min_sinr_db"] = min_db;
    m["qos_met"] = ok ? 1.0 : 0.0;
  }
  m["sbp_linear"] = sbp_linear(p, beams);
  try {
    m["imsr"] = imsr(p, theta0, delta, spec.imsr_grid);
  } catch (const NumericalError&) {
    m["imsr"] = std::numeric_limits<double>::infinity();
  }
  return m;
}

int worker_count(const ExperimentSpec& spec, std::size_t tasks) {
  int n = spec.threads > 0 ? spec.threads : static_cast<int>(std::thread::hardware_concurrency());
  n = std::max(1, n);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(n), std::max<std::size_t>(1, tasks)));
}

template <typename Fn>
void parallel_for(std::size_t count, int workers, Fn&& fn) {
  std::atomic<std::size_t> next{0};
  const auto loop = [&] {
    for (std::size_t i = next++; i < count; i = next++) fn(i);
  };
  if (workers <= 1) {
    loop();
    return;
  }
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w) pool.emplace_back(loop);
  for (auto& t : pool) t.join();
}

ExperimentResult run_points(const ExperimentSpec& spec, const std::vector<PointSpec>& points) {
  std::vector<Task> tasks;
  for (std::size_t p = 0; p < points.size(); ++p)
    for (int t = 0; t < spec.trials; ++t) tasks.push_back({p, t});
  std::vector<TaskOutcome> outcomes(tasks.size());
  parallel_for(tasks.size(), worker_count(spec, tasks.size()), [&](std::size_t i) {
    try {
      outcomes[i].metrics = evaluate(points[tasks[i].point], tasks[i].trial, spec);
      outcomes[i].ok = true;
    } catch (const std::exception& e) {
      outcomes[i].error = e.what();
    }
  });

  ExperimentResult out;
  out.kind = spec.kind;
  out.seed = spec.seed;
  out.trials = spec.trials;
  out.config_hash = config_hash(spec.base);
  // Fixed reduction order: point-major, trial-minor.
  for (std::size_t p = 0; p < points.size(); ++p) {
    SweepPoint sp;
    sp.scheme = points[p].scheme;
    sp.n_beams = points[p].n_beams;
    sp.p_tx_dbm = points[p].p_tx_dbm;
    sp.sinr_threshold_db = points[p].sinr_db;
    sp.trials = spec.trials;
    sp.config_hash = config_hash(points[p].cfg);
    std::map<std::string, std::vector<double>> samples;
    for (std::size_t i = 0; i < tasks.size(); ++i) {
      if (tasks[i].point != p) continue;
      if (!outcomes[i].ok) {
        ++sp.failures;
        std::ostringstream os;
        os << sp.scheme << " L=" << sp.n_beams << " P=" << sp.p_tx_dbm << " trial " << tasks[i].trial << ": "
           << outcomes[i].error;
        out.failure_messages.push_back(os.str());
        continue;
      }
      for (const auto& [name, v] : outcomes[i].metrics)
        if (std::isfinite(v)) samples[name].push_back(v);
    }
    for (const auto& name : kMetricNames) {
      MetricStat st;
      const auto& xs = samples[name];
      st.count = static_cast<int>(xs.size());
      if (xs.empty()) {
        st.mean = kNaN;
        st.stderr_ = kNaN;
      } else {
        double sum = 0.0;
        for (double x : xs) sum += x;
        st.mean = sum / xs.size();
        double ss = 0.0;
        for (double x : xs) ss += (x - st.mean) * (x - st.mean);
        st.stderr_ = xs.size() > 1 ? std::sqrt(ss / (xs.size() - 1) / xs.size()) : 0.0;
      }
      sp.metrics[name] = st;
    }
    out.points.push_back(std::move(sp));
  }
  return out;
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void check_points(const ExperimentResult& r, std::vector<std::string>& warnings) {
  for (const auto& p : r.points)
    if (p.failures > 0) {
      std::ostringstream os;
      os << p.failures << " failed trial(s) at " << p.scheme << " L=" << p.n_beams << " P=" << p.p_tx_dbm;
      warnings.push_back(os.str());
    }
}

}  // namespace

std::string kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::PowerSweep: return "power-sweep";
    case ExperimentKind::Tradeoff: return "tradeoff";
    case ExperimentKind::Beampattern: return "beampattern";
    case ExperimentKind::Imsr: return "imsr";
  }
  return "power-sweep";
}

ExperimentKind kind_from_name(const std::string& name) {
  if (name == "power-sweep") return ExperimentKind::PowerSweep;
  if (name == "tradeoff") return ExperimentKind::Tradeoff;
  if (name == "beampattern") return ExperimentKind::Beampattern;
  if (name == "imsr") return ExperimentKind::Imsr;
  throw ValidationError("unknown experiment '" + name + "'");
}

std::string sweep_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::PTxDbm: return "p_tx_dbm";
    case SweepVariable::SinrThresholdDb: return "sinr_threshold_db";
    case SweepVariable::NBeams: return "n_beams";
  }
  return "p_tx_dbm";
}

ExperimentSpec default_spec(ExperimentKind kind, bool paper_scale) {
  ExperimentSpec s;
  s.base = paper_scale ? full_scale_scenario() : desk_scenario();
  s.trials = paper_scale ? 500 : 50;
  s.kind = kind;
  s.beam_series = {2, 3};
  s.base.p_tx_dbm = 10.0;
  s.base = with_sinr_threshold(s.base, 0.0);
  switch (kind) {
    case ExperimentKind::PowerSweep:
      s.sweep = SweepVariable::PTxDbm;
      s.values = {0.0, 5.0, 10.0, 15.0, 20.0};
      s.sinr_series_db = {0.0, 10.0};
      break;
    case ExperimentKind::Tradeoff:
      s.sweep = SweepVariable::SinrThresholdDb;
      s.values = {-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0};
      break;
    case ExperimentKind::Beampattern:
      s.sweep = SweepVariable::NBeams;
      s.values = {2.0, 3.0};
      s.trials = 1;
      break;
    case ExperimentKind::Imsr:
      s.sweep = SweepVariable::SinrThresholdDb;
      s.values = {0.0, 4.0, 8.0, 12.0, 16.0};
      break;
  }
  return s;
}

void validate(const ExperimentSpec& spec) {
  validate(spec.base);
  if (spec.trials < 1) throw ValidationError("experiment: trials must be at least 1");
  if (spec.values.empty()) throw ValidationError("experiment: sweep values must not be empty");
  const bool sweep_ok = (spec.kind == ExperimentKind::PowerSweep && spec.sweep == SweepVariable::PTxDbm) ||
                        ((spec.kind == ExperimentKind::Tradeoff || spec.kind == ExperimentKind::Imsr) &&
                         spec.sweep == SweepVariable::SinrThresholdDb) ||
                        (spec.kind == ExperimentKind::Beampattern && spec.sweep == SweepVariable::NBeams);
  if (!sweep_ok) throw ValidationError("experiment: sweep variable does not match the experiment");
  if (spec.kind != ExperimentKind::Beampattern && spec.beam_series.empty())
    throw ValidationError("experiment: beam series must not be empty");
  for (int l : spec.beam_series)
    if (l < 1 || spec.base.n_cu + l > spec.base.n_tx) throw ValidationError("experiment: invalid beam count");
}

bool BeampatternChecks::all_peaks() const {
  for (bool b : cu_peak_found)
    if (!b) return false;
  return true;
}

BeampatternChecks analyze_beampattern(const HybridPrecoder& p, const std::vector<double>& cu_angles_deg,
                                      std::pair<double, double> sector_deg, double peak_window_deg) {
  const auto sweep = beampattern_sweep(p, -90.0, 90.0, 0.1);
  BeampatternChecks out;
  out.cu_angles_deg = cu_angles_deg;
  for (double cu : cu_angles_deg) {
    bool found = false;
    for (std::size_t i = 1; i + 1 < sweep.size() && !found; ++i) {
      if (std::abs(sweep[i].angle_deg - cu) > peak_window_deg + 1e-9) continue;
      const double g = sweep[i].gain;
      found = g >= sweep[i - 1].gain && g >= sweep[i + 1].gain && (g > sweep[i - 1].gain || g > sweep[i + 1].gain);
    }
    out.cu_peak_found.push_back(found);
  }
  double in_sum = 0.0;
  double out_sum = 0.0;
  int n_in = 0;
  int n_out = 0;
  for (const auto& pt : sweep) {
    if (pt.angle_deg >= sector_deg.first && pt.angle_deg <= sector_deg.second) {
      in_sum += pt.gain;
      ++n_in;
    } else {
      out_sum += pt.gain;
      ++n_out;
    }
  }
  out.sector_mean = n_in ? in_sum / n_in : 0.0;
  out.sidelobe_mean = n_out ? out_sum / n_out : 0.0;
  return out;
}

const SweepPoint* ExperimentResult::find(const std::string& scheme, int n_beams, double p_tx_dbm,
                                         double sinr_db) const {
  for (const auto& p : points) {
    const bool sinr_match = (std::isnan(sinr_db) && std::isnan(p.sinr_threshold_db)) || p.sinr_threshold_db == sinr_db;
    if (p.scheme == scheme && p.n_beams == n_beams && p.p_tx_dbm == p_tx_dbm && sinr_match) return &p;
  }
  return nullptr;
}

ExperimentResult run_power_sweep(const ExperimentSpec& spec) {
  validate(spec);
  if (spec.kind != ExperimentKind::PowerSweep) throw ValidationError("run_power_sweep: wrong experiment kind");
  std::vector<PointSpec> points;
  const auto series = spec.sinr_series_db.empty() ? spec.base.sinr_thresholds_db : spec.sinr_series_db;
  for (int l : spec.beam_series) {
    for (double g : series)
      for (double p : spec.values) points.push_back({"proposed", l, p, g, point_config(spec, l, p, g)});
    for (double p : spec.values) points.push_back({"radar_only", l, p, kNaN, point_config(spec, l, p, kNaN)});
  }
  auto out = run_points(spec, points);
  check_points(out, out.warnings);
  return out;
}

ExperimentResult run_tradeoff(const ExperimentSpec& spec) {
  validate(spec);
  if (spec.kind != ExperimentKind::Tradeoff) throw ValidationError("run_tradeoff: wrong experiment kind");
  std::vector<PointSpec> points;
  const double p = spec.base.p_tx_dbm;
  for (int l : spec.beam_series)
    for (double g : spec.values) points.push_back({"proposed", l, p, g, point_config(spec, l, p, g)});
  const int l0 = spec.beam_series.front();
  points.push_back({"comm_only", l0, p, kNaN, point_config(spec, l0, p, kNaN)});
  auto out = run_points(spec, points);
  check_points(out, out.warnings);
  // The communication-only endpoint should carry the largest sum rate.
  const auto* comm = out.find("comm_only", l0, p, kNaN);
  if (comm) {
    for (const auto& pt : out.points)
      if (pt.scheme == "proposed" && pt.metrics.at("sum_rate").mean > comm->metrics.at("sum_rate").mean) {
        std::ostringstream os;
        os << "proposed L=" << pt.n_beams << " Gamma=" << pt.sinr_threshold_db
           << " dB exceeds the communication-only sum rate";
        out.warnings.push_back(os.str());
      }
  }
  return out;
}

ExperimentResult run_imsr(const ExperimentSpec& spec) {
  validate(spec);
  if (spec.kind != ExperimentKind::Imsr) throw ValidationError("run_imsr: wrong experiment kind");
  std::vector<PointSpec> points;
  const double p = spec.base.p_tx_dbm;
  for (int l : spec.beam_series) {
    for (double g : spec.values) points.push_back({"proposed", l, p, g, point_config(spec, l, p, g)});
    points.push_back({"radar_only", l, p, kNaN, point_config(spec, l, p, kNaN)});
  }
  auto out = run_points(spec, points);
  check_points(out, out.warnings);
  return out;
}

ExperimentResult run_beampattern(const ExperimentSpec& spec) {
  validate(spec);
  if (spec.kind != ExperimentKind::Beampattern) throw ValidationError("run_beampattern: wrong experiment kind");
  ExperimentResult out;
  out.kind = spec.kind;
  out.seed = spec.seed;
  out.trials = 1;
  out.config_hash = config_hash(spec.base);
  const double p = spec.base.p_tx_dbm;
  json checks = json::array();

  struct Job {
    std::string scheme;
    int n_beams;
  };
  std::vector<Job> jobs;
  for (double v : spec.values) {
    jobs.push_back({"proposed", static_cast<int>(v)});
    jobs.push_back({"radar_only", static_cast<int>(v)});
  }
  jobs.push_back({"comm_only", static_cast<int>(spec.values.front())});

  std::vector<HybridPrecoder> precoders(jobs.size());
  std::vector<std::string> errors(jobs.size());
  parallel_for(jobs.size(), worker_count(spec, jobs.size()), [&](std::size_t i) {
    try {
      ScenarioConfig cfg = point_config(spec, jobs[i].n_beams, p, kNaN);
      cfg.seed = derive_seed(spec.seed, 0, 1);
      const auto ch = sample_channels(cfg, derive_seed(spec.seed, 0, 0));
      if (jobs[i].scheme == "proposed")
        precoders[i] = optimize(cfg, ch).precoder;
      else if (jobs[i].scheme == "radar_only")
        precoders[i] = radar_only(cfg, beam_angles_rad(cfg)).precoder;
      else
        precoders[i] = comm_only(cfg, ch);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  std::map<int, double> radar_sector;
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!errors[i].empty()) {
      out.failure_messages.push_back(jobs[i].scheme + ": " + errors[i]);
      out.warnings.push_back(jobs[i].scheme + " L=" + std::to_string(jobs[i].n_beams) + " failed: " + errors[i]);
      continue;
    }
    out.patterns.push_back({jobs[i].scheme, jobs[i].n_beams, beampattern_sweep(precoders[i])});
    const auto c = analyze_beampattern(precoders[i], spec.base.cu_angles_deg, spec.base.object_sector_deg);
    checks.push_back({{"scheme", jobs[i].scheme},
                      {"n_beams", jobs[i].n_beams},
                      {"cu_peak_found", c.cu_peak_found},
                      {"sector_mean", c.sector_mean},
                      {"sidelobe_mean", c.sidelobe_mean}});
    if (jobs[i].scheme == "radar_only") radar_sector[jobs[i].n_beams] = c.sector_mean;
    if (jobs[i].scheme == "proposed") {
      for (std::size_t k = 0; k < c.cu_peak_found.size(); ++k)
        if (!c.cu_peak_found[k])
          out.warnings.push_back("proposed L=" + std::to_string(jobs[i].n_beams) + ": no local maximum within 3 deg of CU at " +
                                 fmt(c.cu_angles_deg[k]) + " deg");
      if (!c.sector_above_sidelobes())
        out.warnings.push_back("proposed L=" + std::to_string(jobs[i].n_beams) +
                               ": object-sector mean gain does not exceed the sidelobe mean");
    }
  }
  for (const auto& pat : out.patterns) {
    if (pat.scheme != "proposed" || !radar_sector.count(pat.n_beams)) continue;
    double in_sum = 0.0;
    int n = 0;
    for (const auto& c : checks)
      if (c["scheme"] == "proposed" && c["n_beams"] == pat.n_beams) {
        in_sum = c["sector_mean"].get<double>();
        n = 1;
      }
    if (n && in_sum > radar_sector[pat.n_beams])
      out.warnings.push_back("proposed L=" + std::to_string(pat.n_beams) + " object-sector mean exceeds radar-only");
  }
  out.metadata["checks"] = checks;
  return out;
}

ExperimentResult run_experiment(const ExperimentSpec& spec) {
  switch (spec.kind) {
    case ExperimentKind::PowerSweep: return run_power_sweep(spec);
    case ExperimentKind::Tradeoff: return run_tradeoff(spec);
    case ExperimentKind::Beampattern: return run_beampattern(spec);
    case ExperimentKind::Imsr: return run_imsr(spec);
  }
  throw ValidationError("unknown experiment");
}

std::string to_csv(const ExperimentResult& r) {
  std::ostringstream os;
  if (r.kind == ExperimentKind::Beampattern) {
    os << "scheme,n_beams,angle_deg,gain_db,seed,config_hash\n";
    for (const auto& pat : r.patterns)
      for (const auto& pt : pat.sweep) {
        const double db = pt.gain > 0.0 ? 10.0 * std::log10(pt.gain) : -300.0;
        os << pat.scheme << ',' << pat.n_beams << ',' << fmt(pt.angle_deg) << ',' << fmt(db) << ',' << r.seed << ','
           << r.config_hash << '\n';
      }
  } else {
    os << "scheme,n_beams,p_tx_dbm,sinr_threshold_db";
    for (const auto& name : kMetricNames) os << ',' << name << "_mean," << name << "_stderr";
    os << ",sbp_linear_mean_db,trials,failures,seed,config_hash\n";
    for (const auto& p : r.points) {
      os << p.scheme << ',' << p.n_beams << ',' << fmt(p.p_tx_dbm) << ',' << fmt(p.sinr_threshold_db);
      for (const auto& name : kMetricNames) {
        const auto& st = p.metrics.at(name);
        os << ',' << fmt(st.mean) << ',' << fmt(st.stderr_);
      }
      const double sbp = p.metrics.at("sbp_linear").mean;
      os << ',' << fmt(sbp > 0.0 ? 10.0 * std::log10(sbp) : kNaN) << ',' << p.trials << ',' << p.failures << ','
         << r.seed << ',' << p.config_hash << '\n';
    }
  }
  for (const auto& w : r.warnings) os << "# warning: " << w << '\n';
  return os.str();
}

json metadata_json(const ExperimentResult& r, const ExperimentSpec& spec) {
  json j = r.metadata.is_object() ? r.metadata : json::object();
  j["experiment"] = kind_name(r.kind);
  j["seed"] = r.seed;
  j["trials"] = r.trials;
  j["config_hash"] = r.config_hash;
  j["base_config"] = config_to_json(spec.base);
  j["sweep_variable"] = sweep_name(spec.sweep);
  j["sweep_values"] = spec.values;
  j["sinr_series_db"] = spec.sinr_series_db;
  j["beam_series"] = spec.beam_series;
  j["imsr"] = {{"theta0_deg", spec.imsr_theta0_deg}, {"delta_deg", spec.imsr_delta_deg}, {"grid", spec.imsr_grid}};
  j["warnings"] = r.warnings;
  j["failures"] = r.failure_messages;
  int failures = 0;
  for (const auto& p : r.points) failures += p.failures;
  j["failure_count"] = failures;
  return j;
}

void write_outputs(const ExperimentResult& result, const ExperimentSpec& spec) {
  if (spec.output_path.empty()) throw ValidationError("experiment: output path is empty");
  write_file(spec.output_path, to_csv(result));
  write_file(spec.output_path + ".json", metadata_json(result, spec).dump(2) + "\n");
}

}  // namespace isacbf

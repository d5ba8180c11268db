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

#include "isacbf/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace isacbf {

std::string bb_mode_name(BbUpdateMode mode) {
  switch (mode) {
    case BbUpdateMode::PowerConstrained: return "power_constrained";
    case BbUpdateMode::Ridge: return "ridge";
    case BbUpdateMode::PaperLiteral: return "literal";
  }
  return "power_constrained";
}

BbUpdateMode bb_mode_from_name(const std::string& name) {
  if (name == "power_constrained") return BbUpdateMode::PowerConstrained;
  if (name == "ridge") return BbUpdateMode::Ridge;
  if (name == "literal") return BbUpdateMode::PaperLiteral;
  throw ValidationError("unknown bb_update mode '" + name + "'");
}

json config_to_json(const ScenarioConfig& c) {
  json j;
  j["n_tx"] = c.n_tx;
  j["n_rf"] = c.n_rf;
  j["n_cu"] = c.n_cu;
  j["n_beams"] = c.n_beams;
  j["cu_angles_deg"] = c.cu_angles_deg;
  j["cu_distances_m"] = c.cu_distances_m;
  j["object_sector_deg"] = {c.object_sector_deg.first, c.object_sector_deg.second};
  j["p_tx_dbm"] = c.p_tx_dbm;
  j["noise_power_dbm"] = c.noise_power_dbm;
  j["noise_power_dbm_per_cu"] = c.noise_power_dbm_per_cu;
  j["sinr_thresholds_db"] = c.sinr_thresholds_db;
  j["n_paths"] = c.n_paths;
  j["angular_spread_rad"] = c.angular_spread_rad;
  j["laplacian_truncation"] = c.laplacian_truncation;
  j["pathloss"] = {{"epsilon_db", c.pathloss.epsilon_db},
                   {"exponent", c.pathloss.exponent},
                   {"shadow_sigma_db", c.pathloss.shadow_sigma_db}};
  j["penalty_init"] = c.penalty_init;
  j["penalty_shrink"] = c.penalty_shrink;
  j["tol_inner"] = c.tol_inner;
  j["tol_outer"] = c.tol_outer;
  j["tol_linesearch"] = c.tol_linesearch;
  j["max_outer"] = c.max_outer;
  j["max_inner"] = c.max_inner;
  j["max_rcg_iters"] = c.max_rcg_iters;
  j["bb_update"] = bb_mode_name(c.bb_update);
  j["reweight_outer"] = c.reweight_outer;
  j["seed"] = c.seed;
  return j;
}

namespace {

template <typename T>
void take(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

}  // namespace

ScenarioConfig config_from_json(const json& j, const ScenarioConfig& base) {
  if (!j.is_object()) throw ValidationError("scenario JSON must be an object");
  static const std::set<std::string> known{
      "n_tx", "n_rf", "n_cu", "n_beams", "cu_angles_deg", "cu_distances_m", "object_sector_deg", "p_tx_dbm",
      "noise_power_dbm", "noise_power_dbm_per_cu", "sinr_thresholds_db", "n_paths", "angular_spread_rad",
      "laplacian_truncation", "pathloss", "penalty_init", "penalty_shrink", "tol_inner", "tol_outer",
      "tol_linesearch", "max_outer", "max_inner", "max_rcg_iters", "bb_update", "reweight_outer", "seed"};
  for (const auto& [key, _] : j.items())
    if (!known.count(key)) throw ValidationError("unknown scenario key '" + key + "'");

  ScenarioConfig c = base;
  try {
    take(j, "n_tx", c.n_tx);
    take(j, "n_rf", c.n_rf);
    take(j, "n_cu", c.n_cu);
    take(j, "n_beams", c.n_beams);
    take(j, "cu_angles_deg", c.cu_angles_deg);
    take(j, "cu_distances_m", c.cu_distances_m);
    if (j.contains("object_sector_deg")) {
      const auto& s = j.at("object_sector_deg");
      if (!s.is_array() || s.size() != 2) throw ValidationError("object_sector_deg must be [lower, upper]");
      c.object_sector_deg = {s[0].get<double>(), s[1].get<double>()};
    }
    take(j, "p_tx_dbm", c.p_tx_dbm);
    take(j, "noise_power_dbm", c.noise_power_dbm);
    take(j, "noise_power_dbm_per_cu", c.noise_power_dbm_per_cu);
    take(j, "sinr_thresholds_db", c.sinr_thresholds_db);
    take(j, "n_paths", c.n_paths);
    take(j, "angular_spread_rad", c.angular_spread_rad);
    take(j, "laplacian_truncation", c.laplacian_truncation);
    if (j.contains("pathloss")) {
      const auto& p = j.at("pathloss");
      take(p, "epsilon_db", c.pathloss.epsilon_db);
      take(p, "exponent", c.pathloss.exponent);
      take(p, "shadow_sigma_db", c.pathloss.shadow_sigma_db);
    }
    take(j, "penalty_init", c.penalty_init);
    take(j, "penalty_shrink", c.penalty_shrink);
    take(j, "tol_inner", c.tol_inner);
    take(j, "tol_outer", c.tol_outer);
    take(j, "tol_linesearch", c.tol_linesearch);
    take(j, "max_outer", c.max_outer);
    take(j, "max_inner", c.max_inner);
    take(j, "max_rcg_iters", c.max_rcg_iters);
    if (j.contains("bb_update")) c.bb_update = bb_mode_from_name(j.at("bb_update").get<std::string>());
    take(j, "reweight_outer", c.reweight_outer);
    take(j, "seed", c.seed);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scenario JSON: ") + e.what());
  }
  return c;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << contents;
  if (!out) throw IoError("write to '" + path + "' failed");
}

ScenarioConfig load_config(const std::string& path, const ScenarioConfig& base) {
  json j;
  try {
    j = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ValidationError("'" + path + "': " + e.what());
  }
  return config_from_json(j, base);
}

std::string config_hash(const ScenarioConfig& config) {
  const std::string s = config_to_json(config).dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json channels_to_json(const ChannelSet& ch) {
  json users = json::array();
  for (const auto& u : ch.users) {
    json paths = json::array();
    for (const auto& p : u.paths) paths.push_back({{"angle_rad", p.angle_rad}, {"gain", {p.gain.real(), p.gain.imag()}}});
    json h = json::array();
    for (Index i = 0; i < u.h.size(); ++i) h.push_back({u.h(i).real(), u.h(i).imag()});
    users.push_back({{"pathloss_db", u.pathloss_db},
                     {"shadow_db", u.shadow_db},
                     {"noise_power_mw", u.noise_power_mw},
                     {"paths", paths},
                     {"h", h}});
  }
  return {{"n_tx", ch.n_tx}, {"seed", ch.seed}, {"users", users}};
}

ChannelSet channels_from_json(const json& j) {
  ChannelSet ch;
  try {
    ch.n_tx = j.at("n_tx").get<int>();
    ch.seed = j.value("seed", std::uint64_t{0});
    if (ch.n_tx < 1) throw ValidationError("channel JSON: n_tx must be positive");
    for (const auto& ju : j.at("users")) {
      UserChannel u;
      u.pathloss_db = ju.at("pathloss_db").get<double>();
      u.shadow_db = ju.value("shadow_db", 0.0);
      u.noise_power_mw = ju.at("noise_power_mw").get<double>();
      for (const auto& jp : ju.at("paths")) {
        const auto& g = jp.at("gain");
        u.paths.push_back({jp.at("angle_rad").get<double>(), cd(g.at(0).get<double>(), g.at(1).get<double>())});
      }
      u.h = assemble_channel(ch.n_tx, u.paths);
      if (ju.contains("h")) {
        const auto& jh = ju.at("h");
        if (static_cast<int>(jh.size()) != ch.n_tx) throw ValidationError("channel JSON: h has the wrong length");
        CVec stored(ch.n_tx);
        for (int i = 0; i < ch.n_tx; ++i) stored(i) = cd(jh[static_cast<std::size_t>(i)].at(0).get<double>(),
                                                          jh[static_cast<std::size_t>(i)].at(1).get<double>());
        if ((stored - u.h).norm() > 1e-12 * std::max(1e-300, stored.norm()))
          throw ValidationError("channel JSON: stored h does not match its paths");
      }
      ch.users.push_back(std::move(u));
    }
  } catch (const json::exception& e) {
    throw ValidationError(std::string("channel JSON: ") + e.what());
  }
  return ch;
}

json diagnostics_to_json(const RunDiagnostics& d) {
  json inner = json::array();
  for (const auto& r : d.inner)
    inner.push_back({{"outer", r.outer},
                     {"inner", r.inner},
                     {"penalty", r.penalty},
                     {"objective", r.objective},
                     {"sbp", r.sbp},
                     {"residual", r.residual},
                     {"rcg_iterations", r.rcg_iterations},
                     {"ridge", r.ridge},
                     {"monotone", r.monotone}});
  json outer = json::array();
  for (const auto& r : d.outer)
    outer.push_back({{"outer", r.outer},
                     {"penalty", r.penalty},
                     {"residual", r.residual},
                     {"inner_passes", r.inner_passes},
                     {"ridge_events", r.ridge_events}});
  return {{"inner", inner},
          {"outer", outer},
          {"sinr", d.sinr},
          {"power_mw", d.power_mw},
          {"final_residual", d.final_residual},
          {"converged", d.converged},
          {"monotonicity_violations", d.monotonicity_violations},
          {"warnings", d.warnings},
          {"wall_seconds", d.wall_seconds}};
}

json precoder_to_json(const HybridPrecoder& p) {
  const auto mat = [](const CMat& m) {
    json rows = json::array();
    for (Index i = 0; i < m.rows(); ++i) {
      json row = json::array();
      for (Index k = 0; k < m.cols(); ++k) row.push_back({m(i, k).real(), m(i, k).imag()});
      rows.push_back(row);
    }
    return rows;
  };
  return {{"rf", mat(p.rf)}, {"bb", mat(p.bb)}};
}

std::string beampattern_csv(const std::vector<BeampatternPoint>& sweep) {
  std::ostringstream os;
  os << "angle_deg,gain_db\n";
  char buf[64];
  for (const auto& pt : sweep) {
    const double db = pt.gain > 0.0 ? 10.0 * std::log10(pt.gain) : -300.0;
    std::snprintf(buf, sizeof buf, "%.6g,%.17g\n", pt.angle_deg, db);
    os << buf;
  }
  return os.str();
}

}  // namespace isacbf

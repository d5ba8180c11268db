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

#pragma once

#include "isacbf/channel.hpp"
#include "isacbf/metrics.hpp"
#include "isacbf/optimizer.hpp"
#include "isacbf/scenario.hpp"

#include <json.hpp>

#include <string>

namespace isacbf {

using json = nlohmann::json;

// Scenario files are JSON objects whose keys mirror ScenarioConfig. Missing
// keys keep the value of `base`; unknown keys are rejected.
json config_to_json(const ScenarioConfig& config);
ScenarioConfig config_from_json(const json& j, const ScenarioConfig& base = full_scale_scenario());
ScenarioConfig load_config(const std::string& path, const ScenarioConfig& base = full_scale_scenario());

// Stable 64-bit FNV-1a hash of the canonical JSON dump, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

// Channel replay schema:
// { "n_tx": N, "seed": s,
//   "users": [ { "pathloss_db": x, "shadow_db": x, "noise_power_mw": x,
//                "paths": [ {"angle_rad": x, "gain": [re, im]} ... ],
//                "h": [[re, im], ...] } ... ] }
// On load the channel vector is rebuilt from the paths and must match "h"
// when present.
json channels_to_json(const ChannelSet& ch);
ChannelSet channels_from_json(const json& j);

json diagnostics_to_json(const RunDiagnostics& d);
json precoder_to_json(const HybridPrecoder& p);

// "angle_deg,gain_db" rows.
std::string beampattern_csv(const std::vector<BeampatternPoint>& sweep);

std::string bb_mode_name(BbUpdateMode mode);
BbUpdateMode bb_mode_from_name(const std::string& name);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

}  // namespace isacbf

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

#include "isacbf/metrics.hpp"

#include <cmath>
#include <sstream>

namespace isacbf {

double beampattern_gain_combined(const CMat& combined, double angle_rad) {
  const auto a = steering_vector(static_cast<int>(combined.rows()), angle_rad);
  return (a.entries.adjoint() * combined).squaredNorm();
}

double beampattern_gain(const HybridPrecoder& p, double angle_rad) {
  return beampattern_gain_combined(p.combined(), angle_rad);
}

double sbp_gain(const BeamWeights& weights, const HybridPrecoder& p, std::span<const double> beam_angles_rad) {
  if (static_cast<Index>(beam_angles_rad.size()) != weights.w.size())
    throw ValidationError("sbp_gain: one weight per beam angle is required");
  const CMat x = p.combined();
  double total = 0.0;
  for (std::size_t l = 0; l < beam_angles_rad.size(); ++l) {
    const double chi = beampattern_gain_combined(x, beam_angles_rad[l]);
    total += weights.w(static_cast<Index>(l)) * chi * chi;
  }
  return total;
}

double sbp_linear(const HybridPrecoder& p, std::span<const double> beam_angles_rad) {
  if (beam_angles_rad.empty()) return 0.0;
  const CMat x = p.combined();
  double total = 0.0;
  for (double th : beam_angles_rad) total += beampattern_gain_combined(x, th);
  return total / static_cast<double>(beam_angles_rad.size());
}

double sinr(const CVec& h, double noise_power, const HybridPrecoder& p, Index m) {
  if (m < 0 || m >= p.bb.cols()) throw ValidationError("sinr: stream index out of range");
  const auto gains = (h.adjoint() * p.rf * p.bb).eval();
  const double desired = std::norm(gains(0, m));
  const double interference = gains.squaredNorm() - desired;
  return desired / (interference + noise_power);
}

double sinr(const ChannelSet& ch, const HybridPrecoder& p, Index m) {
  if (m < 0 || m >= static_cast<Index>(ch.users.size())) throw ValidationError("sinr: CU index out of range");
  const auto& u = ch.users[static_cast<std::size_t>(m)];
  return sinr(u.h, u.noise_power_mw, p, m);
}

std::vector<double> sinrs(const ChannelSet& ch, const HybridPrecoder& p) {
  std::vector<double> out;
  for (std::size_t m = 0; m < ch.users.size(); ++m) out.push_back(sinr(ch, p, static_cast<Index>(m)));
  return out;
}

double sum_rate_from_sinr(std::span<const double> sinr_values) {
  double r = 0.0;
  for (double s : sinr_values) r += std::log2(1.0 + s);
  return r;
}

double sum_rate(const ChannelSet& ch, const HybridPrecoder& p) { return sum_rate_from_sinr(sinrs(ch, p)); }

namespace {

// Exact integral of the linear interpolant through (x[i], y[i]) over [a, b].
double integrate_linear(const std::vector<double>& x, const std::vector<double>& y, double a, double b) {
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double lo = std::max(a, x[i]);
    const double hi = std::min(b, x[i + 1]);
    if (hi <= lo) continue;
    const double h = x[i + 1] - x[i];
    const auto at = [&](double t) { return y[i] + (y[i + 1] - y[i]) * (t - x[i]) / h; };
    total += 0.5 * (at(lo) + at(hi)) * (hi - lo);
  }
  return total;
}

}  // namespace

double imsr(const std::function<double(double)>& pattern, double theta0_rad, double delta_rad, int grid_size) {
  if (grid_size < 2) throw ValidationError("imsr: grid_size must be at least 2");
  const double half = kPi / 2.0;
  const double lo = theta0_rad - delta_rad / 2.0;
  const double hi = theta0_rad + delta_rad / 2.0;
  if (!(delta_rad > 0.0) || lo <= -half || hi >= half)
    throw ValidationError("imsr: mainlobe must lie inside (-pi/2, pi/2)");
  std::vector<double> x(static_cast<std::size_t>(grid_size));
  std::vector<double> y(x.size());
  for (int i = 0; i < grid_size; ++i) {
    x[static_cast<std::size_t>(i)] = -half + kPi * i / (grid_size - 1);
    y[static_cast<std::size_t>(i)] = pattern(x[static_cast<std::size_t>(i)]);
  }
  const double main = integrate_linear(x, y, lo, hi);
  const double side = integrate_linear(x, y, -half, lo) + integrate_linear(x, y, hi, half);
  if (!(side > 0.0)) throw NumericalError("imsr: sidelobe integral is zero (unphysical pattern)");
  return main / side;
}

double imsr(const HybridPrecoder& p, double theta0_rad, double delta_rad, int grid_size) {
  const CMat x = p.combined();
  return imsr([&x](double th) { return beampattern_gain_combined(x, th); }, theta0_rad, delta_rad, grid_size);
}

BeamWeights beam_weights_from_gains(std::span<const double> chi) {
  const auto n = static_cast<Index>(chi.size());
  if (n == 0) throw ValidationError("beam_weights: at least one beam is required");
  for (double c : chi)
    if (!(c > 0.0)) throw ValidationError("beam_weights: every beam gain must be positive");
  BeamWeights out;
  out.w.resize(n);
  const double last2 = chi.back() * chi.back();
  double denom = 1.0;
  for (Index i = 0; i + 1 < n; ++i) denom += last2 / (chi[static_cast<std::size_t>(i)] * chi[static_cast<std::size_t>(i)]);
  double acc = 0.0;
  for (Index l = 0; l + 1 < n; ++l) {
    const double c = chi[static_cast<std::size_t>(l)];
    out.w(l) = (last2 / (c * c)) / denom;
    acc += out.w(l);
  }
  out.w(n - 1) = 1.0 - acc;
  return out;
}

BeamWeights beam_weights(const HybridPrecoder& p, std::span<const double> beam_angles_rad) {
  const CMat x = p.combined();
  std::vector<double> chi;
  for (double th : beam_angles_rad) chi.push_back(beampattern_gain_combined(x, th));
  return beam_weights_from_gains(chi);
}

std::vector<BeampatternPoint> beampattern_sweep(const HybridPrecoder& p, double start_deg, double stop_deg,
                                                double step_deg) {
  if (!(step_deg > 0.0) || stop_deg < start_deg) throw ValidationError("beampattern_sweep: bad grid");
  const CMat x = p.combined();
  std::vector<BeampatternPoint> out;
  const auto n = static_cast<int>(std::floor((stop_deg - start_deg) / step_deg + 1e-9)) + 1;
  for (int i = 0; i < n; ++i) {
    const double deg = start_deg + i * step_deg;
    out.push_back({deg, beampattern_gain_combined(x, deg_to_rad(deg))});
  }
  return out;
}

}  // namespace isacbf

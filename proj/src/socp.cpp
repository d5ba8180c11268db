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

#include "isacbf/socp.hpp"

#include <cmath>
#include <sstream>

namespace isacbf {

double row_slack(const CVec& z, Index m, double gamma, double sigma) {
  const double lhs = std::sqrt(1.0 + 1.0 / gamma) * std::abs(z(m));
  const double rhs = std::sqrt(z.squaredNorm() + sigma * sigma);
  return lhs - rhs;
}

namespace {

// Off-diagonal radius for a fixed multiplier: root of
// y - y0 + lambda * s * y / sqrt(y^2 + sigma^2) on [0, y0].
double shrink_radius(double y0, double lambda, double s, double sigma) {
  if (y0 == 0.0) return 0.0;
  if (sigma == 0.0) return std::max(0.0, y0 - lambda * s);
  double lo = 0.0;
  double hi = y0;
  for (int i = 0; i < 200 && hi - lo > 1e-17 * y0; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double g = mid - y0 + lambda * s * mid / std::sqrt(mid * mid + sigma * sigma);
    if (g > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

CVec project_row(const CVec& b, Index m, double gamma, double sigma) {
  if (!(gamma > 0.0)) throw ValidationError("project_row: threshold must be positive");
  if (!(sigma >= 0.0)) throw ValidationError("project_row: sigma must be non-negative");
  if (m < 0 || m >= b.size()) throw ValidationError("project_row: row index out of range");

  const double s = std::sqrt(gamma);
  const double x0 = std::abs(b(m));
  const double y0 = std::sqrt(std::max(0.0, b.squaredNorm() - x0 * x0));
  const auto boundary = [&](double y) { return s * std::sqrt(y * y + sigma * sigma); };
  if (x0 >= boundary(y0)) return b;

  double lo = 0.0;
  double hi = boundary(y0) - x0;
  const double width0 = hi;
  int iter = 0;
  for (; iter < 200; ++iter) {
    if (hi - lo <= 4e-16 * width0 + 1e-300) break;
    const double mid = 0.5 * (lo + hi);
    const double c = boundary(shrink_radius(y0, mid, s, sigma)) - (x0 + mid);
    if (c > 0.0)
      lo = mid;
    else
      hi = mid;
  }
  if (iter == 200) {
    std::ostringstream os;
    os << "project_row: multiplier search did not converge (bracket " << hi - lo << ")";
    throw NumericalError(os.str());
  }
  const double y = shrink_radius(y0, hi, s, sigma);
  const double x = std::max(x0 + hi, boundary(y));

  CVec z(b.size());
  const double ratio = y0 > 0.0 ? y / y0 : 0.0;
  for (Index n = 0; n < b.size(); ++n) z(n) = ratio * b(n);
  z(m) = x0 > 0.0 ? b(m) * (x / x0) : cd(x, 0.0);
  return z;
}

AuxMatrix update_aux(const CMat& effective, const RVec& thresholds, const RVec& noise_std) {
  if (thresholds.size() != effective.rows() || noise_std.size() != effective.rows())
    throw ValidationError("update_aux: one threshold and noise level per CU is required");
  AuxMatrix out{CMat(effective.rows(), effective.cols()), noise_std, thresholds};
  for (Index m = 0; m < effective.rows(); ++m) {
    try {
      out.z.row(m) = project_row(effective.row(m).transpose(), m, thresholds(m), noise_std(m)).transpose();
    } catch (const NumericalError& e) {
      std::ostringstream os;
      os << "row " << m << ": " << e.what();
      throw NumericalError(os.str());
    }
  }
  return out;
}

AuxMatrix update_aux(const CMat& channels, const HybridPrecoder& p, const RVec& thresholds, const RVec& noise_std) {
  return update_aux(CMat(channels.adjoint() * p.combined()), thresholds, noise_std);
}

double aux_objective(const CMat& effective, const CMat& z) { return (effective - z).squaredNorm(); }

}  // namespace isacbf

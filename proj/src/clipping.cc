// Copyright 2026 The declip Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "declip/clipping.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace declip {

namespace {

void require_positive_theta(double theta) {
  if (!(theta > 0.0) || !std::isfinite(theta))
    throw std::invalid_argument("clipping threshold must be positive and finite");
}

// SDR of x against its clipped version without materialising the clipped signal.
double clipped_sdr(std::span<const double> x, double theta) {
  double ref = 0.0, res = 0.0;
  for (double s : x) {
    ref += s * s;
    const double excess = std::abs(s) - theta;
    if (excess > 0.0) res += excess * excess;
  }
  if (res == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(ref / res);
}

}  // namespace

ClipModel::ClipModel(double t) : theta(t) { require_positive_theta(t); }

Signal hard_clip(const Signal& x, double theta) {
  require_positive_theta(theta);
  std::vector<double> out(x.samples().begin(), x.samples().end());
  for (double& s : out) s = std::clamp(s, -theta, theta);
  return Signal(std::move(out), x.sample_rate());
}

SampleMask masks_from_clipped(const Signal& y, double theta, double tolerance) {
  require_positive_theta(theta);
  if (!(tolerance >= 0.0)) throw std::invalid_argument("mask tolerance must be nonnegative");
  std::vector<SampleKind> kinds(y.size());
  for (std::size_t n = 0; n < y.size(); ++n) {
    const double s = y[n];
    if (std::abs(s) > theta + tolerance)
      throw std::invalid_argument("sample " + std::to_string(n) +
                                  " exceeds the clipping threshold");
    if (s >= theta - tolerance)
      kinds[n] = SampleKind::kHigh;
    else if (s <= -theta + tolerance)
      kinds[n] = SampleKind::kLow;
    else
      kinds[n] = SampleKind::kReliable;
  }
  return SampleMask(std::move(kinds));
}

double threshold_for_input_sdr(const Signal& x, double target_sdr_db,
                               const ThresholdSearchOptions& options) {
  const auto samples = x.samples();
  double peak = 0.0;
  for (double s : samples) peak = std::max(peak, std::abs(s));
  if (peak == 0.0) throw std::invalid_argument("cannot clip an all-zero signal");
  if (!std::isfinite(target_sdr_db) || target_sdr_db <= 0.0)
    throw std::invalid_argument("input SDR target must be a positive finite number of dB");

  double lo = 0.0, hi = peak;
  double best = peak;
  double best_err = std::numeric_limits<double>::infinity();
  for (int it = 0; it < options.max_iterations; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double value = clipped_sdr(samples, mid);
    const double err = std::abs(value - target_sdr_db);
    if (err < best_err) {
      best_err = err;
      best = mid;
    }
    if (err <= options.tolerance_db) return mid;
    if (value < target_sdr_db)
      lo = mid;
    else
      hi = mid;
  }
  if (best_err <= options.tolerance_db) return best;
  throw std::runtime_error("threshold search did not reach the SDR tolerance");
}

}  // namespace declip

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

#ifndef DECLIP_CLIPPING_H_
#define DECLIP_CLIPPING_H_

#include "declip/signal.h"

namespace declip {

/// Symmetric hard-clipping model with thresholds -theta and theta.
struct ClipModel {
  explicit ClipModel(double theta);
  double theta;
};

/// Saturates every sample to [-theta, theta].
Signal hard_clip(const Signal& x, double theta);

/// Classifies samples of an observed clipped signal: y >= theta - tolerance is
/// clipped high, y <= -theta + tolerance is clipped low, the rest is reliable.
/// Samples exceeding theta by more than the tolerance are rejected.
SampleMask masks_from_clipped(const Signal& y, double theta, double tolerance = 0.0);

struct ThresholdSearchOptions {
  double tolerance_db = 1e-3;
  int max_iterations = 200;
};

/// Finds theta in (0, max|x|] with sdr(x, hard_clip(x, theta)) within the
/// tolerance of target_sdr_db, by bisection. The clipped SDR is nondecreasing
/// in theta, goes to 0 dB as theta -> 0 and to +inf at theta = max|x|, so any
/// positive finite target is reachable.
double threshold_for_input_sdr(const Signal& x, double target_sdr_db,
                               const ThresholdSearchOptions& options = {});

}  // namespace declip

#endif  // DECLIP_CLIPPING_H_

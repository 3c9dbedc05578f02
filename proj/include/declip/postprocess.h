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

#ifndef DECLIP_POSTPROCESS_H_
#define DECLIP_POSTPROCESS_H_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "declip/signal.h"

namespace declip {

enum class CrossfadePlacement { kReliable, kClipped, kMiddle };
enum class CrossfadeShape { kLinear, kSineSquared };
enum class ShortSegmentPolicy { kIgnore, kReplace, kShorten };

std::string_view to_string(CrossfadePlacement p);
std::string_view to_string(CrossfadeShape s);
std::string_view to_string(ShortSegmentPolicy p);
CrossfadePlacement parse_placement(std::string_view name);
CrossfadeShape parse_shape(std::string_view name);
ShortSegmentPolicy parse_short_policy(std::string_view name);

struct CrossfadeConfig {
  CrossfadePlacement placement = CrossfadePlacement::kReliable;
  CrossfadeShape shape = CrossfadeShape::kSineSquared;
  std::size_t length_w = 8;
  ShortSegmentPolicy short_policy = ShortSegmentPolicy::kShorten;
  /// With short_policy = ignore, also leave the reconstruction untouched on
  /// reliable runs too short for their ramps (no replacement either).
  bool strict_ignore = false;

  void validate() const;
  friend bool operator==(const CrossfadeConfig&, const CrossfadeConfig&) = default;
};

/// Overwrites reliable samples of the reconstruction with the observation.
Signal replace_reliable(const Signal& recon, const Signal& y, const SampleMask& mask);

/// Fade-out gains of the reconstruction, g[0] nearest the border. Endpoints
/// 0 and 1 are excluded:
///   linear        g[k] = (w - k) / (w + 1)
///   sine_squared  g[k] = cos^2(pi (k + 1) / (2 (w + 1)))
std::vector<double> crossfade_weights(std::size_t w, CrossfadeShape shape);

/// Replacement followed by crossfade ramps at every clipped/reliable border.
Signal crossfade_reliable(const Signal& recon, const Signal& y, const SampleMask& mask,
                          const CrossfadeConfig& cfg);

/// Largest |out[i+1] - out[i]| over index pairs straddling a clipped/reliable
/// border; 0 when the mask has no such border.
double max_border_step(std::span<const double> signal, const SampleMask& mask);

}  // namespace declip

#endif  // DECLIP_POSTPROCESS_H_

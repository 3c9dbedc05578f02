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

#include "declip/postprocess.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace declip {

std::string_view to_string(CrossfadePlacement p) {
  switch (p) {
    case CrossfadePlacement::kReliable: return "reliable";
    case CrossfadePlacement::kClipped: return "clipped";
    case CrossfadePlacement::kMiddle: return "middle";
  }
  return "unknown";
}

std::string_view to_string(CrossfadeShape s) {
  return s == CrossfadeShape::kLinear ? "linear" : "sine_squared";
}

std::string_view to_string(ShortSegmentPolicy p) {
  switch (p) {
    case ShortSegmentPolicy::kIgnore: return "ignore";
    case ShortSegmentPolicy::kReplace: return "replace";
    case ShortSegmentPolicy::kShorten: return "shorten";
  }
  return "unknown";
}

CrossfadePlacement parse_placement(std::string_view name) {
  if (name == "reliable") return CrossfadePlacement::kReliable;
  if (name == "clipped") return CrossfadePlacement::kClipped;
  if (name == "middle") return CrossfadePlacement::kMiddle;
  throw std::invalid_argument("unknown crossfade placement: " + std::string(name));
}

CrossfadeShape parse_shape(std::string_view name) {
  if (name == "linear") return CrossfadeShape::kLinear;
  if (name == "sine_squared" || name == "sine-squared") return CrossfadeShape::kSineSquared;
  throw std::invalid_argument("unknown crossfade shape: " + std::string(name));
}

ShortSegmentPolicy parse_short_policy(std::string_view name) {
  if (name == "ignore") return ShortSegmentPolicy::kIgnore;
  if (name == "replace") return ShortSegmentPolicy::kReplace;
  if (name == "shorten") return ShortSegmentPolicy::kShorten;
  throw std::invalid_argument("unknown short-segment policy: " + std::string(name));
}

void CrossfadeConfig::validate() const {
  if (length_w < 1) throw std::invalid_argument("crossfade length must be at least 1");
}

namespace {

void check_lengths(const Signal& recon, const Signal& y, const SampleMask& mask) {
  if (recon.size() != y.size() || mask.size() != y.size())
    throw std::invalid_argument("reconstruction, observation and mask differ in length");
}

// Alternating reliable / clipped regions; high and low runs that touch are
// merged because only reliable borders get ramps.
struct Region {
  std::size_t start;
  std::size_t end;  // inclusive
  bool reliable;
  std::size_t length() const { return end - start + 1; }
};

std::vector<Region> regions(const SampleMask& mask) {
  std::vector<Region> out;
  for (const Segment& s : segments(mask)) {
    const bool rel = s.kind == SampleKind::kReliable;
    if (!out.empty() && out.back().reliable == rel)
      out.back().end = s.end;
    else
      out.push_back({s.start, s.end, rel});
  }
  return out;
}

std::size_t border_count(const std::vector<Region>& rs, std::size_t i) {
  return (i > 0 ? 1u : 0u) + (i + 1 < rs.size() ? 1u : 0u);
}

// Ramp room on one side of a border: the whole run for a single border, half
// of it when ramps arrive from both ends.
std::size_t side_budget(const std::vector<Region>& rs, std::size_t i) {
  return border_count(rs, i) == 2 ? rs[i].length() / 2 : rs[i].length();
}

double blend(double recon_gain, double recon, double obs) {
  return recon_gain * recon + (1.0 - recon_gain) * obs;
}

}  // namespace

Signal replace_reliable(const Signal& recon, const Signal& y, const SampleMask& mask) {
  check_lengths(recon, y, mask);
  std::vector<double> out(recon.samples().begin(), recon.samples().end());
  for (std::size_t n = 0; n < out.size(); ++n)
    if (mask.is_reliable(n)) out[n] = y[n];
  return Signal(std::move(out), recon.sample_rate());
}

std::vector<double> crossfade_weights(std::size_t w, CrossfadeShape shape) {
  if (w < 1) throw std::invalid_argument("crossfade length must be at least 1");
  std::vector<double> g(w);
  const double denom = static_cast<double>(w + 1);
  for (std::size_t k = 0; k < w; ++k) {
    if (shape == CrossfadeShape::kLinear) {
      g[k] = static_cast<double>(w - k) / denom;
    } else {
      const double c = std::cos(std::numbers::pi * static_cast<double>(k + 1) / (2.0 * denom));
      g[k] = c * c;
    }
  }
  return g;
}

Signal crossfade_reliable(const Signal& recon, const Signal& y, const SampleMask& mask,
                          const CrossfadeConfig& cfg) {
  check_lengths(recon, y, mask);
  cfg.validate();
  std::vector<double> out = std::move(replace_reliable(recon, y, mask)).release();
  const std::vector<Region> rs = regions(mask);
  const std::size_t w = cfg.length_w;
  const bool shorten = cfg.short_policy == ShortSegmentPolicy::kShorten;

  if (cfg.placement != CrossfadePlacement::kMiddle) {
    const bool ramp_reliable = cfg.placement == CrossfadePlacement::kReliable;
    for (std::size_t i = 0; i < rs.size(); ++i) {
      const Region& r = rs[i];
      if (r.reliable != ramp_reliable) continue;
      const std::size_t borders = border_count(rs, i);
      if (borders == 0) continue;
      std::size_t width = w;
      if (r.length() < borders * w) {
        if (!shorten) {
          if (ramp_reliable && cfg.strict_ignore &&
              cfg.short_policy == ShortSegmentPolicy::kIgnore) {
            for (std::size_t n = r.start; n <= r.end; ++n) out[n] = recon[n];
          }
          continue;
        }
        width = side_budget(rs, i);
        if (width == 0) continue;
      }
      const std::vector<double> g = crossfade_weights(width, cfg.shape);
      // Reliable side: the reconstruction fades out away from the border.
      // Clipped side: the observation fades out away from the border.
      auto apply = [&](std::size_t n, std::size_t k) {
        out[n] = ramp_reliable ? blend(g[k], recon[n], y[n]) : blend(1.0 - g[k], recon[n], y[n]);
      };
      if (i > 0)
        for (std::size_t k = 0; k < width; ++k) apply(r.start + k, k);
      if (i + 1 < rs.size())
        for (std::size_t k = 0; k < width; ++k) apply(r.end - k, k);
    }
    return Signal(std::move(out), recon.sample_rate());
  }

  // Middle placement: one ramp per border, ceil(w/2) samples on the reliable
  // side and floor(w/2) on the clipped side.
  const std::size_t rel_need = (w + 1) / 2;
  const std::size_t clip_need = w / 2;
  std::vector<bool> rel_short(rs.size(), false);
  for (std::size_t i = 0; i < rs.size(); ++i) {
    const std::size_t need = rs[i].reliable ? rel_need : clip_need;
    rel_short[i] = rs[i].length() < border_count(rs, i) * need;
  }
  if (cfg.strict_ignore && cfg.short_policy == ShortSegmentPolicy::kIgnore) {
    for (std::size_t i = 0; i < rs.size(); ++i) {
      if (!rs[i].reliable || !rel_short[i] || border_count(rs, i) == 0) continue;
      for (std::size_t n = rs[i].start; n <= rs[i].end; ++n) out[n] = recon[n];
    }
  }
  for (std::size_t i = 0; i + 1 < rs.size(); ++i) {
    const std::size_t left = i, right = i + 1;
    const std::size_t rel_idx = rs[left].reliable ? left : right;
    const std::size_t clip_idx = rs[left].reliable ? right : left;
    std::size_t width = w;
    if (rel_short[rel_idx] || rel_short[clip_idx]) {
      if (!shorten) continue;
      const std::size_t br = side_budget(rs, rel_idx);
      const std::size_t bc = side_budget(rs, clip_idx);
      width = std::min(w, br > bc ? 2 * bc + 1 : 2 * br);
      if (width == 0) continue;
    }
    const std::vector<double> g = crossfade_weights(width, cfg.shape);
    const std::size_t clip_len = width / 2;
    // Position j runs from deep inside the clipped run to deep inside the
    // reliable run; g[j] is the reconstruction gain there.
    for (std::size_t j = 0; j < width; ++j) {
      std::size_t n;
      if (rs[left].reliable) {
        const std::size_t border_rel = rs[left].end;
        const std::size_t border_clip = rs[right].start;
        n = j < clip_len ? border_clip + (clip_len - 1 - j) : border_rel - (j - clip_len);
      } else {
        const std::size_t border_clip = rs[left].end;
        const std::size_t border_rel = rs[right].start;
        n = j < clip_len ? border_clip - (clip_len - 1 - j) : border_rel + (j - clip_len);
      }
      out[n] = blend(g[j], recon[n], y[n]);
    }
  }
  return Signal(std::move(out), recon.sample_rate());
}

double max_border_step(std::span<const double> signal, const SampleMask& mask) {
  if (signal.size() != mask.size()) throw std::invalid_argument("signal and mask differ in length");
  double best = 0.0;
  for (std::size_t i = 0; i + 1 < signal.size(); ++i) {
    if (mask.is_reliable(i) == mask.is_reliable(i + 1)) continue;
    best = std::max(best, std::abs(signal[i + 1] - signal[i]));
  }
  return best;
}

}  // namespace declip

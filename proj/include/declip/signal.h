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

#ifndef DECLIP_SIGNAL_H_
#define DECLIP_SIGNAL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace declip {

/// Mono real-valued signal with its sample rate. Always non-empty with finite
/// samples; amplitudes nominally in [-1, 1].
class Signal {
 public:
  Signal(std::vector<double> samples, int sample_rate);

  std::size_t size() const { return samples_.size(); }
  int sample_rate() const { return sample_rate_; }

  std::span<const double> samples() const { return samples_; }
  double operator[](std::size_t n) const { return samples_[n]; }

  /// Moves the sample vector out, leaving the signal in a valid-but-unspecified
  /// state that must not be used afterwards.
  std::vector<double> release() && { return std::move(samples_); }

  friend bool operator==(const Signal&, const Signal&) = default;

 private:
  std::vector<double> samples_;
  int sample_rate_;
};

enum class SampleKind : std::uint8_t { kReliable, kHigh, kLow };

std::string_view to_string(SampleKind kind);

/// Partition of sample indices into reliable, clipped-from-above and
/// clipped-from-below sets. Storing one kind per sample makes the partition
/// disjoint and exhaustive by construction.
class SampleMask {
 public:
  explicit SampleMask(std::vector<SampleKind> kinds);

  /// Builds a mask from three indicator sequences; throws unless exactly one
  /// of them is set at every index.
  static SampleMask from_indicators(const std::vector<bool>& reliable,
                                    const std::vector<bool>& high,
                                    const std::vector<bool>& low);
  static SampleMask all_reliable(std::size_t n);

  std::size_t size() const { return kinds_.size(); }
  SampleKind operator[](std::size_t n) const { return kinds_[n]; }
  std::span<const SampleKind> kinds() const { return kinds_; }

  bool is_reliable(std::size_t n) const { return kinds_[n] == SampleKind::kReliable; }
  bool is_clipped(std::size_t n) const { return kinds_[n] != SampleKind::kReliable; }

  std::vector<bool> reliable() const { return selector(SampleKind::kReliable); }
  std::vector<bool> high() const { return selector(SampleKind::kHigh); }
  std::vector<bool> low() const { return selector(SampleKind::kLow); }
  /// Indicator of all clipped samples (high or low).
  std::vector<bool> clipped() const;

  std::size_t count(SampleKind kind) const;

  friend bool operator==(const SampleMask&, const SampleMask&) = default;

 private:
  std::vector<bool> selector(SampleKind kind) const;

  std::vector<SampleKind> kinds_;
};

struct Segment {
  std::size_t start;
  std::size_t end;  // inclusive
  SampleKind kind;

  std::size_t length() const { return end - start + 1; }
  friend bool operator==(const Segment&, const Segment&) = default;
};

using SegmentList = std::vector<Segment>;

/// Maximal same-kind runs of the mask in index order.
SegmentList segments(const SampleMask& mask);

/// Inverse of segments(). Throws if the runs do not tile [0, n).
SampleMask expand(const SegmentList& runs, std::size_t n);

/// 20 log10(||u|| / ||u - v||). Returns +infinity when v equals u exactly.
double sdr(const Signal& u, const Signal& v);
double sdr(std::span<const double> u, std::span<const double> v);

/// sdr() restricted to the indices where selector is true.
double sdr_on_mask(const Signal& u, const Signal& v,
                   const std::vector<bool>& selector);
double sdr_on_mask(std::span<const double> u, std::span<const double> v,
                   const std::vector<bool>& selector);

}  // namespace declip

#endif  // DECLIP_SIGNAL_H_

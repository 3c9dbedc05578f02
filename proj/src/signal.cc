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

#include "declip/signal.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace declip {

Signal::Signal(std::vector<double> samples, int sample_rate)
    : samples_(std::move(samples)), sample_rate_(sample_rate) {
  if (samples_.empty()) throw std::invalid_argument("signal must have at least one sample");
  if (sample_rate_ <= 0) throw std::invalid_argument("sample rate must be positive");
  for (double s : samples_) {
    if (!std::isfinite(s)) throw std::invalid_argument("signal contains non-finite samples");
  }
}

std::string_view to_string(SampleKind kind) {
  switch (kind) {
    case SampleKind::kReliable: return "reliable";
    case SampleKind::kHigh: return "high";
    case SampleKind::kLow: return "low";
  }
  return "unknown";
}

SampleMask::SampleMask(std::vector<SampleKind> kinds) : kinds_(std::move(kinds)) {
  for (SampleKind k : kinds_) {
    if (k != SampleKind::kReliable && k != SampleKind::kHigh && k != SampleKind::kLow)
      throw std::invalid_argument("invalid sample kind");
  }
}

SampleMask SampleMask::from_indicators(const std::vector<bool>& reliable,
                                       const std::vector<bool>& high,
                                       const std::vector<bool>& low) {
  const std::size_t n = reliable.size();
  if (high.size() != n || low.size() != n)
    throw std::invalid_argument("mask indicators differ in length");
  std::vector<SampleKind> kinds(n);
  for (std::size_t i = 0; i < n; ++i) {
    const int set = int(reliable[i]) + int(high[i]) + int(low[i]);
    if (set != 1)
      throw std::invalid_argument("mask indicators are not a partition at index " +
                                  std::to_string(i));
    kinds[i] = reliable[i] ? SampleKind::kReliable
               : high[i]   ? SampleKind::kHigh
                           : SampleKind::kLow;
  }
  return SampleMask(std::move(kinds));
}

SampleMask SampleMask::all_reliable(std::size_t n) {
  return SampleMask(std::vector<SampleKind>(n, SampleKind::kReliable));
}

std::vector<bool> SampleMask::selector(SampleKind kind) const {
  std::vector<bool> out(kinds_.size());
  for (std::size_t i = 0; i < kinds_.size(); ++i) out[i] = kinds_[i] == kind;
  return out;
}

std::vector<bool> SampleMask::clipped() const {
  std::vector<bool> out(kinds_.size());
  for (std::size_t i = 0; i < kinds_.size(); ++i) out[i] = kinds_[i] != SampleKind::kReliable;
  return out;
}

std::size_t SampleMask::count(SampleKind kind) const {
  return static_cast<std::size_t>(std::count(kinds_.begin(), kinds_.end(), kind));
}

SegmentList segments(const SampleMask& mask) {
  SegmentList runs;
  const std::size_t n = mask.size();
  std::size_t start = 0;
  for (std::size_t i = 1; i <= n; ++i) {
    if (i == n || mask[i] != mask[start]) {
      runs.push_back({start, i - 1, mask[start]});
      start = i;
    }
  }
  return runs;
}

SampleMask expand(const SegmentList& runs, std::size_t n) {
  std::vector<SampleKind> kinds;
  kinds.reserve(n);
  std::size_t next = 0;
  for (const Segment& run : runs) {
    if (run.start != next || run.end < run.start)
      throw std::invalid_argument("segments do not tile the index range");
    kinds.insert(kinds.end(), run.length(), run.kind);
    next = run.end + 1;
  }
  if (next != n) throw std::invalid_argument("segments do not cover the signal");
  return SampleMask(std::move(kinds));
}

namespace {

double sdr_from_energies(double reference, double residual) {
  if (reference == 0.0) throw std::invalid_argument("SDR reference is all-zero");
  if (residual == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(reference / residual);
}

}  // namespace

double sdr(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw std::invalid_argument("SDR operands differ in length");
  double ref = 0.0, res = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    ref += u[i] * u[i];
    res += d * d;
  }
  return sdr_from_energies(ref, res);
}

double sdr(const Signal& u, const Signal& v) {
  if (u.sample_rate() != v.sample_rate())
    throw std::invalid_argument("SDR operands differ in sample rate");
  return sdr(u.samples(), v.samples());
}

double sdr_on_mask(std::span<const double> u, std::span<const double> v,
                   const std::vector<bool>& selector) {
  if (u.size() != v.size()) throw std::invalid_argument("SDR operands differ in length");
  if (selector.size() != u.size())
    throw std::invalid_argument("SDR selector length differs from signal length");
  double ref = 0.0, res = 0.0;
  std::size_t selected = 0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (!selector[i]) continue;
    const double d = u[i] - v[i];
    ref += u[i] * u[i];
    res += d * d;
    ++selected;
  }
  if (selected == 0) throw std::invalid_argument("SDR selector selects no samples");
  return sdr_from_energies(ref, res);
}

double sdr_on_mask(const Signal& u, const Signal& v, const std::vector<bool>& selector) {
  if (u.sample_rate() != v.sample_rate())
    throw std::invalid_argument("SDR operands differ in sample rate");
  return sdr_on_mask(u.samples(), v.samples(), selector);
}

}  // namespace declip

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

#ifndef DECLIP_TF_TRANSFORM_H_
#define DECLIP_TF_TRANSFORM_H_

#include <complex>
#include <cstddef>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "declip/signal.h"

namespace declip {

enum class WindowKind { kHann, kSine, kHamming };

std::string_view to_string(WindowKind kind);
WindowKind parse_window_kind(std::string_view name);

struct FrameParams {
  std::size_t window_length = 8192;
  std::size_t hop = 2048;
  std::size_t fft_length = 8192;
  WindowKind window = WindowKind::kHann;

  /// Throws unless hop divides window_length, window_length >= 2 hop and
  /// fft_length >= window_length.
  void validate() const;

  /// 8192/2048/8192 Hann at 44.1 kHz, scaled down by powers of two for lower
  /// rates.
  static FrameParams default_for_rate(int sample_rate);

  friend bool operator==(const FrameParams&, const FrameParams&) = default;
};

/// Coefficient grid of size bins() x frames(), stored frame-major so every
/// frame's one-sided spectrum is contiguous.
class TFCoeffs {
 public:
  using value_type = std::complex<double>;

  TFCoeffs(FrameParams params, std::size_t signal_length);

  /// Number of frames for a signal of the given length: ceil(n / hop).
  static std::size_t frame_count(const FrameParams& params, std::size_t signal_length);
  static std::size_t bin_count(const FrameParams& params) { return params.fft_length / 2 + 1; }

  std::size_t bins() const { return bins_; }
  std::size_t frames() const { return frames_; }
  std::size_t size() const { return data_.size(); }
  std::size_t signal_length() const { return signal_length_; }
  const FrameParams& params() const { return params_; }

  value_type& at(std::size_t bin, std::size_t frame) { return data_[frame * bins_ + bin]; }
  const value_type& at(std::size_t bin, std::size_t frame) const {
    return data_[frame * bins_ + bin];
  }

  std::span<value_type> data() { return data_; }
  std::span<const value_type> data() const { return data_; }
  std::span<value_type> frame(std::size_t t) { return {data_.data() + t * bins_, bins_}; }
  std::span<const value_type> frame(std::size_t t) const {
    return {data_.data() + t * bins_, bins_};
  }

  /// True when both grids share parameters and dimensions.
  bool same_layout(const TFCoeffs& other) const;

  friend bool operator==(const TFCoeffs&, const TFCoeffs&) = default;

 private:
  FrameParams params_;
  std::size_t signal_length_;
  std::size_t bins_;
  std::size_t frames_;
  std::vector<value_type> data_;
};

/// Real inner product Re sum conj(a) b, treating the grid as a real vector.
double inner(const TFCoeffs& a, const TFCoeffs& b);
double squared_norm(const TFCoeffs& z);

/// Tight short-time Fourier frame with frame bound 1 for a fixed signal length.
///
/// Frames start at t*hop - window_length/2 (half a window of zero padding on
/// both ends). Samples are weighted by 1/sqrt(sum_t w^2(n - t*hop)) before
/// windowing, which makes the frame exactly tight at the edges as well as in
/// the interior. One-sided spectra are scaled so that the real Euclidean norm
/// of the coefficient grid equals the norm of the signal; synthesis is then
/// the exact adjoint of analysis and synthesis(analysis(x)) = x.
///
/// Instances are immutable after construction; analyze/synthesize are safe
/// to call concurrently.
class StftFrame {
 public:
  StftFrame(const FrameParams& params, std::size_t signal_length);
  ~StftFrame();
  StftFrame(const StftFrame&) = delete;
  StftFrame& operator=(const StftFrame&) = delete;
  StftFrame(StftFrame&&) noexcept;
  StftFrame& operator=(StftFrame&&) noexcept;

  const FrameParams& params() const { return params_; }
  std::size_t signal_length() const { return signal_length_; }
  TFCoeffs make_coeffs() const { return TFCoeffs(params_, signal_length_); }

  void analyze(std::span<const double> x, TFCoeffs& out) const;
  void synthesize(const TFCoeffs& z, std::span<double> out) const;

  TFCoeffs analyze(std::span<const double> x) const;
  std::vector<double> synthesize(const TFCoeffs& z) const;

 private:
  struct Plans;

  FrameParams params_;
  std::size_t signal_length_;
  std::size_t frames_;
  std::vector<double> window_;
  std::vector<double> sample_gain_;  // 1/sqrt of the summed squared windows
  std::vector<double> bin_scale_;    // analysis scale per one-sided bin
  std::unique_ptr<Plans> plans_;
};

TFCoeffs analysis(const Signal& x, const FrameParams& params);
Signal synthesis(const TFCoeffs& z, int sample_rate);

}  // namespace declip

#endif  // DECLIP_TF_TRANSFORM_H_

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

#include "declip/tf_transform.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>

namespace declip {

namespace {

// FFTW planning is not thread-safe; execution of an existing plan on new
// arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

template <typename T>
std::unique_ptr<T[], FftwFree> fftw_alloc(std::size_t n) {
  auto* p = static_cast<T*>(fftw_malloc(sizeof(T) * n));
  if (p == nullptr) throw std::bad_alloc();
  return std::unique_ptr<T[], FftwFree>(p);
}

std::vector<double> make_window(WindowKind kind, std::size_t length) {
  std::vector<double> w(length);
  const double n_len = static_cast<double>(length);
  for (std::size_t n = 0; n < length; ++n) {
    const double x = static_cast<double>(n);
    switch (kind) {
      case WindowKind::kHann: {
        const double s = std::sin(std::numbers::pi * x / n_len);
        w[n] = s * s;
        break;
      }
      case WindowKind::kSine:
        w[n] = std::sin(std::numbers::pi * (x + 0.5) / n_len);
        break;
      case WindowKind::kHamming:
        w[n] = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * x / n_len);
        break;
    }
  }
  return w;
}

bool is_self_conjugate_bin(std::size_t bin, std::size_t fft_length) {
  return bin == 0 || (fft_length % 2 == 0 && bin == fft_length / 2);
}

std::ptrdiff_t frame_start(std::size_t t, const FrameParams& p) {
  return static_cast<std::ptrdiff_t>(t * p.hop) -
         static_cast<std::ptrdiff_t>(p.window_length / 2);
}

}  // namespace

std::string_view to_string(WindowKind kind) {
  switch (kind) {
    case WindowKind::kHann: return "hann";
    case WindowKind::kSine: return "sine";
    case WindowKind::kHamming: return "hamming";
  }
  return "unknown";
}

WindowKind parse_window_kind(std::string_view name) {
  if (name == "hann") return WindowKind::kHann;
  if (name == "sine") return WindowKind::kSine;
  if (name == "hamming") return WindowKind::kHamming;
  throw std::invalid_argument("unknown window: " + std::string(name));
}

void FrameParams::validate() const {
  if (hop == 0 || window_length == 0)
    throw std::invalid_argument("window length and hop must be positive");
  if (window_length % hop != 0)
    throw std::invalid_argument("hop must divide the window length");
  if (window_length < 2 * hop)
    throw std::invalid_argument("window must overlap by at least 50%");
  if (fft_length < window_length)
    throw std::invalid_argument("FFT length must be at least the window length");
}

FrameParams FrameParams::default_for_rate(int sample_rate) {
  if (sample_rate <= 0) throw std::invalid_argument("sample rate must be positive");
  FrameParams p;
  const double ideal = 8192.0 * sample_rate / 44100.0;
  std::size_t length = 8192;
  while (length > 64 && static_cast<double>(length) / ideal > std::numbers::sqrt2) length /= 2;
  while (static_cast<double>(length) / ideal < 1.0 / std::numbers::sqrt2) length *= 2;
  p.window_length = length;
  p.fft_length = length;
  p.hop = length / 4;
  return p;
}

TFCoeffs::TFCoeffs(FrameParams params, std::size_t signal_length)
    : params_(params), signal_length_(signal_length) {
  params_.validate();
  if (signal_length == 0) throw std::invalid_argument("signal length must be positive");
  bins_ = bin_count(params_);
  frames_ = frame_count(params_, signal_length);
  data_.assign(bins_ * frames_, value_type{});
}

std::size_t TFCoeffs::frame_count(const FrameParams& params, std::size_t signal_length) {
  return (signal_length + params.hop - 1) / params.hop;
}

bool TFCoeffs::same_layout(const TFCoeffs& other) const {
  return params_ == other.params_ && signal_length_ == other.signal_length_ &&
         bins_ == other.bins_ && frames_ == other.frames_;
}

double inner(const TFCoeffs& a, const TFCoeffs& b) {
  if (!a.same_layout(b)) throw std::invalid_argument("coefficient grids differ in layout");
  double acc = 0.0;
  const auto da = a.data();
  const auto db = b.data();
  for (std::size_t i = 0; i < da.size(); ++i)
    acc += da[i].real() * db[i].real() + da[i].imag() * db[i].imag();
  return acc;
}

double squared_norm(const TFCoeffs& z) {
  double acc = 0.0;
  for (const auto& c : z.data()) acc += std::norm(c);
  return acc;
}

struct StftFrame::Plans {
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;

  ~Plans() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (inverse) fftw_destroy_plan(inverse);
  }
};

StftFrame::StftFrame(const FrameParams& params, std::size_t signal_length)
    : params_(params), signal_length_(signal_length) {
  params_.validate();
  if (signal_length < params_.window_length)
    throw std::invalid_argument("signal of " + std::to_string(signal_length) +
                                " samples is shorter than one window (" +
                                std::to_string(params_.window_length) + ")");
  frames_ = TFCoeffs::frame_count(params_, signal_length);
  window_ = make_window(params_.window, params_.window_length);

  std::vector<double> overlap(signal_length, 0.0);
  for (std::size_t t = 0; t < frames_; ++t) {
    const std::ptrdiff_t start = frame_start(t, params_);
    for (std::size_t n = 0; n < params_.window_length; ++n) {
      const std::ptrdiff_t m = start + static_cast<std::ptrdiff_t>(n);
      if (m < 0 || m >= static_cast<std::ptrdiff_t>(signal_length)) continue;
      overlap[static_cast<std::size_t>(m)] += window_[n] * window_[n];
    }
  }
  sample_gain_.resize(signal_length);
  for (std::size_t m = 0; m < signal_length; ++m) {
    if (!(overlap[m] > 1e-12)) throw std::invalid_argument("frame does not cover every sample");
    sample_gain_[m] = 1.0 / std::sqrt(overlap[m]);
  }

  const std::size_t fft = params_.fft_length;
  const std::size_t bins = TFCoeffs::bin_count(params_);
  bin_scale_.resize(bins);
  for (std::size_t f = 0; f < bins; ++f) {
    bin_scale_[f] = (is_self_conjugate_bin(f, fft) ? 1.0 : std::numbers::sqrt2) /
                    std::sqrt(static_cast<double>(fft));
  }

  auto real_buf = fftw_alloc<double>(fft);
  auto spec_buf = fftw_alloc<fftw_complex>(bins);
  plans_ = std::make_unique<Plans>();
  std::lock_guard lock(planner_mutex());
  const int n = static_cast<int>(fft);
  plans_->forward = fftw_plan_dft_r2c_1d(n, real_buf.get(), spec_buf.get(), FFTW_ESTIMATE);
  plans_->inverse = fftw_plan_dft_c2r_1d(n, spec_buf.get(), real_buf.get(), FFTW_ESTIMATE);
  if (!plans_->forward || !plans_->inverse) throw std::runtime_error("FFTW planning failed");
}

StftFrame::~StftFrame() = default;
StftFrame::StftFrame(StftFrame&&) noexcept = default;
StftFrame& StftFrame::operator=(StftFrame&&) noexcept = default;

void StftFrame::analyze(std::span<const double> x, TFCoeffs& out) const {
  if (x.size() != signal_length_)
    throw std::invalid_argument("analysis input length does not match the frame");
  if (out.params() != params_ || out.signal_length() != signal_length_)
    throw std::invalid_argument("analysis output grid does not match the frame");
  const std::size_t fft = params_.fft_length;
  const std::size_t bins = bin_scale_.size();
  const auto len = static_cast<std::ptrdiff_t>(signal_length_);
  auto real_buf = fftw_alloc<double>(fft);
  auto spec_buf = fftw_alloc<fftw_complex>(bins);

  for (std::size_t t = 0; t < frames_; ++t) {
    const std::ptrdiff_t start = frame_start(t, params_);
    std::fill_n(real_buf.get(), fft, 0.0);
    for (std::size_t n = 0; n < params_.window_length; ++n) {
      const std::ptrdiff_t m = start + static_cast<std::ptrdiff_t>(n);
      if (m < 0 || m >= len) continue;
      const auto mi = static_cast<std::size_t>(m);
      real_buf[n] = window_[n] * sample_gain_[mi] * x[mi];
    }
    fftw_execute_dft_r2c(plans_->forward, real_buf.get(), spec_buf.get());
    auto frame = out.frame(t);
    for (std::size_t f = 0; f < bins; ++f)
      frame[f] = {spec_buf[f][0] * bin_scale_[f], spec_buf[f][1] * bin_scale_[f]};
  }
}

void StftFrame::synthesize(const TFCoeffs& z, std::span<double> out) const {
  if (out.size() != signal_length_)
    throw std::invalid_argument("synthesis output length does not match the frame");
  if (z.params() != params_ || z.signal_length() != signal_length_ || z.frames() != frames_)
    throw std::invalid_argument("coefficient grid does not match the frame");
  const std::size_t fft = params_.fft_length;
  const std::size_t bins = bin_scale_.size();
  const auto len = static_cast<std::ptrdiff_t>(signal_length_);
  auto real_buf = fftw_alloc<double>(fft);
  auto spec_buf = fftw_alloc<fftw_complex>(bins);

  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t t = 0; t < frames_; ++t) {
    const auto frame = z.frame(t);
    for (std::size_t f = 0; f < bins; ++f) {
      // The c2r transform doubles every bin that has a conjugate partner.
      const bool self_conj = is_self_conjugate_bin(f, fft);
      const double s = bin_scale_[f] * (self_conj ? 1.0 : 0.5);
      spec_buf[f][0] = frame[f].real() * s;
      spec_buf[f][1] = self_conj ? 0.0 : frame[f].imag() * s;
    }
    fftw_execute_dft_c2r(plans_->inverse, spec_buf.get(), real_buf.get());
    const std::ptrdiff_t start = frame_start(t, params_);
    for (std::size_t n = 0; n < params_.window_length; ++n) {
      const std::ptrdiff_t m = start + static_cast<std::ptrdiff_t>(n);
      if (m < 0 || m >= len) continue;
      out[static_cast<std::size_t>(m)] += window_[n] * real_buf[n];
    }
  }
  for (std::size_t m = 0; m < signal_length_; ++m) out[m] *= sample_gain_[m];
}

TFCoeffs StftFrame::analyze(std::span<const double> x) const {
  TFCoeffs out = make_coeffs();
  analyze(x, out);
  return out;
}

std::vector<double> StftFrame::synthesize(const TFCoeffs& z) const {
  std::vector<double> out(signal_length_);
  synthesize(z, out);
  return out;
}

TFCoeffs analysis(const Signal& x, const FrameParams& params) {
  return StftFrame(params, x.size()).analyze(x.samples());
}

Signal synthesis(const TFCoeffs& z, int sample_rate) {
  StftFrame frame(z.params(), z.signal_length());
  return Signal(frame.synthesize(z), sample_rate);
}

}  // namespace declip

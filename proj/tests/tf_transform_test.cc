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

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "test_util.h"

namespace declip {
namespace {

const FrameParams kSmall{256, 64, 256, WindowKind::kHann};

double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

TEST(FrameParams, ValidateAndDefaults) {
  EXPECT_NO_THROW(FrameParams{}.validate());
  EXPECT_THROW((FrameParams{256, 100, 256}.validate()), std::invalid_argument);
  EXPECT_THROW((FrameParams{256, 256, 256}.validate()), std::invalid_argument);
  EXPECT_THROW((FrameParams{256, 64, 128}.validate()), std::invalid_argument);
  EXPECT_THROW((FrameParams{0, 0, 0}.validate()), std::invalid_argument);
  EXPECT_EQ(FrameParams::default_for_rate(44100), (FrameParams{8192, 2048, 8192}));
  EXPECT_EQ(FrameParams::default_for_rate(48000), (FrameParams{8192, 2048, 8192}));
  EXPECT_EQ(FrameParams::default_for_rate(22050), (FrameParams{4096, 1024, 4096}));
  EXPECT_EQ(FrameParams::default_for_rate(16000), (FrameParams{4096, 1024, 4096}));
  EXPECT_EQ(FrameParams::default_for_rate(8000), (FrameParams{2048, 512, 2048}));
}

TEST(WindowKind, ParseRoundTrip) {
  for (WindowKind k : {WindowKind::kHann, WindowKind::kSine, WindowKind::kHamming})
    EXPECT_EQ(parse_window_kind(to_string(k)), k);
  EXPECT_THROW(parse_window_kind("kaiser"), std::invalid_argument);
}

TEST(TFCoeffs, Dimensions) {
  EXPECT_EQ(TFCoeffs::frame_count(kSmall, 1000), 16u);
  EXPECT_EQ(TFCoeffs::frame_count(kSmall, 1024), 16u);
  EXPECT_EQ(TFCoeffs::frame_count(kSmall, 1025), 17u);
  EXPECT_EQ(TFCoeffs::bin_count(kSmall), 129u);
  const TFCoeffs z(kSmall, 1000);
  EXPECT_EQ(z.size(), 16u * 129u);
  EXPECT_TRUE(z.same_layout(TFCoeffs(kSmall, 1000)));
  EXPECT_FALSE(z.same_layout(TFCoeffs(kSmall, 1100)));
}

TEST(StftFrame, RejectsSignalShorterThanWindow) {
  EXPECT_THROW(StftFrame(kSmall, 255), std::invalid_argument);
  EXPECT_NO_THROW(StftFrame(kSmall, 256));
}

TEST(StftFrame, ZeroSignalGivesZeroCoefficients) {
  const StftFrame frame(kSmall, 1000);
  const TFCoeffs z = frame.analyze(std::vector<double>(1000, 0.0));
  for (const auto& c : z.data()) EXPECT_EQ(c, std::complex<double>(0.0, 0.0));
  const std::vector<double> x = frame.synthesize(z);
  for (double s : x) EXPECT_EQ(s, 0.0);
}

TEST(StftFrame, RejectsMismatchedSizes) {
  const StftFrame frame(kSmall, 1000);
  EXPECT_THROW(frame.analyze(std::vector<double>(999, 0.0)), std::invalid_argument);
  EXPECT_THROW(frame.synthesize(TFCoeffs(kSmall, 1100)), std::invalid_argument);
}

// Analysis followed by synthesis reproduces the input for every window.
TEST(StftFrameProperty, PerfectReconstruction) {
  std::mt19937_64 rng(5);
  for (WindowKind w : {WindowKind::kHann, WindowKind::kSine, WindowKind::kHamming}) {
    for (std::size_t n : {256u, 257u, 1000u, 1024u, 3001u}) {
      FrameParams p = kSmall;
      p.window = w;
      const StftFrame frame(p, n);
      const auto x = testing::random_samples(rng, n);
      EXPECT_LE(max_abs_diff(frame.synthesize(frame.analyze(x)), x), 1e-9)
          << to_string(w) << " n=" << n;
    }
  }
}

TEST(StftFrameProperty, ZeroPaddedFftAlsoReconstructs) {
  std::mt19937_64 rng(6);
  const FrameParams p{128, 32, 512, WindowKind::kHann};
  const StftFrame frame(p, 700);
  const auto x = testing::random_samples(rng, 700);
  EXPECT_LE(max_abs_diff(frame.synthesize(frame.analyze(x)), x), 1e-9);
}

// <A x, z> == <x, D z>: synthesis is the adjoint of analysis.
TEST(StftFrameProperty, Adjointness) {
  std::mt19937_64 rng(7);
  for (std::size_t n : {256u, 999u, 2048u}) {
    const StftFrame frame(kSmall, n);
    for (int trial = 0; trial < 10; ++trial) {
      const auto x = testing::random_samples(rng, n);
      const TFCoeffs z = testing::random_coeffs(rng, kSmall, n);
      const double lhs = inner(frame.analyze(x), z);
      const auto dz = frame.synthesize(z);
      double rhs = 0.0;
      for (std::size_t i = 0; i < n; ++i) rhs += x[i] * dz[i];
      const double scale = std::sqrt(norm2(x) * squared_norm(z));
      EXPECT_LE(std::abs(lhs - rhs), 1e-10 * scale);
    }
  }
}

// Frame bound one: analysis preserves energy.
TEST(StftFrameProperty, Tightness) {
  std::mt19937_64 rng(8);
  for (std::size_t n : {300u, 1024u, 4097u}) {
    const StftFrame frame(kSmall, n);
    const auto x = testing::random_samples(rng, n);
    EXPECT_NEAR(squared_norm(frame.analyze(x)), norm2(x), 1e-9 * norm2(x));
  }
}

// A D is an orthogonal projection, so it never increases the norm.
TEST(StftFrameProperty, AnalysisOfSynthesisIsContractive) {
  std::mt19937_64 rng(9);
  const StftFrame frame(kSmall, 1000);
  for (int trial = 0; trial < 20; ++trial) {
    const TFCoeffs z = testing::random_coeffs(rng, kSmall, 1000);
    const TFCoeffs adz = frame.analyze(frame.synthesize(z));
    EXPECT_LE(squared_norm(adz), squared_norm(z) * (1.0 + 1e-12));
    // Projection is idempotent.
    const TFCoeffs again = frame.analyze(frame.synthesize(adz));
    double diff = 0.0;
    for (std::size_t i = 0; i < adz.size(); ++i) diff += std::norm(again.data()[i] - adz.data()[i]);
    EXPECT_LE(diff, 1e-18 * squared_norm(z) + 1e-24);
  }
}

TEST(StftFrameProperty, Linearity) {
  std::mt19937_64 rng(10);
  const StftFrame frame(kSmall, 800);
  const auto a = testing::random_samples(rng, 800);
  const auto b = testing::random_samples(rng, 800);
  std::vector<double> mix(800);
  for (std::size_t i = 0; i < 800; ++i) mix[i] = 2.5 * a[i] - 0.75 * b[i];
  const TFCoeffs za = frame.analyze(a), zb = frame.analyze(b), zm = frame.analyze(mix);
  for (std::size_t i = 0; i < zm.size(); ++i)
    EXPECT_LE(std::abs(zm.data()[i] - (2.5 * za.data()[i] - 0.75 * zb.data()[i])), 1e-12);
}

TEST(StftFrame, SinusoidConcentratesEnergyNearItsBin) {
  const std::size_t n = 4096;
  std::vector<double> x(n);
  // Bin 32 of a 256-point transform.
  for (std::size_t i = 0; i < n; ++i) x[i] = std::cos(2.0 * std::numbers::pi * 32.0 * static_cast<double>(i) / 256.0);
  const StftFrame frame(kSmall, n);
  const TFCoeffs z = frame.analyze(x);
  double near = 0.0, total = squared_norm(z);
  for (std::size_t t = 0; t < z.frames(); ++t)
    for (std::size_t f = 31; f <= 33; ++f) near += std::norm(z.at(f, t));
  EXPECT_GT(near / total, 0.99);
}

TEST(FreeFunctions, AnalysisSynthesisOnSignals) {
  std::mt19937_64 rng(11);
  const Signal x = testing::random_signal(rng, 9000, 44100);
  const FrameParams p{1024, 256, 1024};
  const TFCoeffs z = analysis(x, p);
  const Signal back = synthesis(z, 44100);
  EXPECT_EQ(back.sample_rate(), 44100);
  EXPECT_LE(max_abs_diff(back.samples(), x.samples()), 1e-9);
}

}  // namespace
}  // namespace declip

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

#include "declip/shrinkage.h"

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "test_util.h"

namespace declip {
namespace {

// Tiny grids: 8 bins (fft 14) and 8 frames (56 samples, hop 7).
const FrameParams kGrid{14, 7, 14, WindowKind::kHann};
constexpr std::size_t kGridSamples = 56;

// Straightforward per-coefficient reference without shared scratch or
// boundary shortcuts.
TFCoeffs naive_pew(const TFCoeffs& z, double lambda, const NeighborhoodShape& shape) {
  TFCoeffs out = z;
  const auto ht = static_cast<long>(shape.time_extent() / 2);
  const auto hf = static_cast<long>(shape.freq_extent() / 2);
  for (long t = 0; t < static_cast<long>(z.frames()); ++t) {
    for (long f = 0; f < static_cast<long>(z.bins()); ++f) {
      double e = 0.0;
      for (long dt = -ht; dt <= ht; ++dt) {
        for (long df = -hf; df <= hf; ++df) {
          const long tt = t + dt, ff = f + df;
          if (tt < 0 || ff < 0 || tt >= static_cast<long>(z.frames()) ||
              ff >= static_cast<long>(z.bins()))
            continue;
          e += shape.weight(static_cast<std::size_t>(dt + ht), static_cast<std::size_t>(df + hf)) *
               std::norm(z.at(static_cast<std::size_t>(ff), static_cast<std::size_t>(tt)));
        }
      }
      const double gain = e > 0.0 ? std::max(1.0 - lambda * lambda / e, 0.0) : 0.0;
      out.at(static_cast<std::size_t>(f), static_cast<std::size_t>(t)) *= gain;
    }
  }
  return out;
}

TEST(Hinge, Examples) {
  EXPECT_EQ(hinge(std::vector<double>{-1.0, 2.0, 0.0}), (std::vector<double>{-1.0, 0.0, 0.0}));
  EXPECT_EQ(hinge(-0.25), -0.25);
  EXPECT_EQ(hinge(3.0), 0.0);
}

TEST(NeighborhoodShape, Validation) {
  EXPECT_THROW(NeighborhoodShape(2, 1), std::invalid_argument);
  EXPECT_THROW(NeighborhoodShape(1, 0), std::invalid_argument);
  EXPECT_THROW(NeighborhoodShape(3, 1, {1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(NeighborhoodShape(3, 1, {1.0, 0.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(NeighborhoodShape(3, 1, {1.0, 1.0, -1.0}), std::invalid_argument);
  const NeighborhoodShape w(3, 1, {0.5, 1.0, 0.5});
  EXPECT_TRUE(w.weighted());
  EXPECT_EQ(w.weight(0, 0), 0.5);
  EXPECT_EQ(NeighborhoodShape::persistent_default(), NeighborhoodShape(3, 1));
}

TEST(NeighborhoodEnergy, ThreeByOneOfOnesIsNine) {
  TFCoeffs z(kGrid, kGridSamples);
  for (auto& c : z.data()) c = {3.0, 0.0};
  // Interior coefficient: three frames of 3^2.
  EXPECT_DOUBLE_EQ(neighborhood_energy(z, 4, 4, NeighborhoodShape(3, 1)), 27.0);
  for (auto& c : z.data()) c = {1.0, 0.0};
  EXPECT_DOUBLE_EQ(neighborhood_energy(z, 4, 4, NeighborhoodShape(3, 1)), 3.0);
  // Zero padding at the first frame.
  EXPECT_DOUBLE_EQ(neighborhood_energy(z, 4, 0, NeighborhoodShape(3, 1)), 2.0);
  EXPECT_DOUBLE_EQ(neighborhood_energy(z, 4, 4, NeighborhoodShape(3, 3)), 9.0);
  EXPECT_DOUBLE_EQ(neighborhood_energy(z, 0, 0, NeighborhoodShape(3, 3)), 4.0);
  EXPECT_THROW(neighborhood_energy(z, 8, 0, NeighborhoodShape(3, 3)), std::out_of_range);
  EXPECT_THROW(neighborhood_energy(z, 0, 8, NeighborhoodShape(3, 3)), std::out_of_range);
}

TEST(PewShrink, Examples) {
  TFCoeffs z(kGrid, kGridSamples);
  z.at(2, 3) = {2.0, 0.0};
  // Isolated coefficient of magnitude 2, lambda 1: gain 1 - 1/4.
  EXPECT_DOUBLE_EQ(pew_shrink(z, 1.0, NeighborhoodShape(3, 1)).at(2, 3).real(), 1.5);
  // Lambda above the energy kills it.
  EXPECT_EQ(pew_shrink(z, 2.5, NeighborhoodShape(3, 1)).at(2, 3), std::complex<double>(0.0, 0.0));
  // A neighbor's energy keeps a small coefficient alive.
  z.at(2, 4) = {0.1, 0.0};
  const TFCoeffs s = pew_shrink(z, 1.0, NeighborhoodShape(3, 1));
  EXPECT_NEAR(s.at(2, 4).real(), 0.1 * (1.0 - 1.0 / 4.01), 1e-15);
  EXPECT_EQ(ew_shrink(z, 1.0).at(2, 4), std::complex<double>(0.0, 0.0));
  // Zero lambda is the identity.
  EXPECT_EQ(pew_shrink(z, 0.0, NeighborhoodShape(3, 3)), z);
}

TEST(PewShrink, Errors) {
  const TFCoeffs z(kGrid, kGridSamples);
  EXPECT_THROW(pew_shrink(z, -1.0, NeighborhoodShape(3, 1)), std::invalid_argument);
  EXPECT_THROW(pew_shrink(z, std::nan(""), NeighborhoodShape(3, 1)), std::invalid_argument);
  EXPECT_THROW(ew_shrink(z, INFINITY), std::invalid_argument);
}

TEST(PewShrinkProperty, MatchesNaiveOracle) {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> lam(0.0, 2.0);
  const std::vector<NeighborhoodShape> shapes = {
      NeighborhoodShape::singleton(), NeighborhoodShape(3, 1), NeighborhoodShape(1, 3),
      NeighborhoodShape(3, 3), NeighborhoodShape(5, 3, std::vector<double>(15, 0.5)),
      NeighborhoodShape(3, 1, {0.25, 1.0, 0.25})};
  for (int trial = 0; trial < 200; ++trial) {
    const TFCoeffs z = testing::random_coeffs(rng, kGrid, kGridSamples);
    const double lambda = lam(rng);
    for (const auto& shape : shapes) {
      const TFCoeffs got = pew_shrink(z, lambda, shape);
      const TFCoeffs ref = naive_pew(z, lambda, shape);
      for (std::size_t i = 0; i < z.size(); ++i)
        ASSERT_LE(std::abs(got.data()[i] - ref.data()[i]), 1e-12);
    }
  }
}

TEST(PewShrinkProperty, InPlaceMatchesOutOfPlace) {
  std::mt19937_64 rng(13);
  std::vector<double> scratch;
  for (int trial = 0; trial < 50; ++trial) {
    TFCoeffs z = testing::random_coeffs(rng, kGrid, kGridSamples);
    const TFCoeffs expected = pew_shrink(z, 1.1, NeighborhoodShape(3, 3));
    pew_shrink_in_place(z, 1.1, NeighborhoodShape(3, 3), scratch);
    EXPECT_EQ(z, expected);
  }
}

TEST(PewShrinkProperty, EwIsSingletonPew) {
  std::mt19937_64 rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const TFCoeffs z = testing::random_coeffs(rng, kGrid, kGridSamples);
    EXPECT_EQ(ew_shrink(z, 0.9), pew_shrink(z, 0.9, NeighborhoodShape::singleton()));
  }
}

// Larger lambda: magnitudes never grow and the support only shrinks.
TEST(PewShrinkProperty, MonotoneInLambdaWithNestedSupport) {
  std::mt19937_64 rng(15);
  std::uniform_real_distribution<double> lam(0.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const TFCoeffs z = testing::random_coeffs(rng, kGrid, kGridSamples);
    double l1 = lam(rng), l2 = lam(rng);
    if (l1 > l2) std::swap(l1, l2);
    const TFCoeffs a = pew_shrink(z, l1, NeighborhoodShape(3, 1));
    const TFCoeffs b = pew_shrink(z, l2, NeighborhoodShape(3, 1));
    for (std::size_t i = 0; i < z.size(); ++i) {
      EXPECT_LE(std::abs(b.data()[i]), std::abs(a.data()[i]) + 1e-15);
      EXPECT_LE(std::abs(a.data()[i]), std::abs(z.data()[i]) + 1e-15);
      if (a.data()[i] == std::complex<double>(0.0, 0.0))
        EXPECT_EQ(b.data()[i], std::complex<double>(0.0, 0.0));
    }
  }
}

// Gains are real and nonnegative: phases survive, only magnitudes change.
TEST(PewShrinkProperty, PreservesPhase) {
  std::mt19937_64 rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    const TFCoeffs z = testing::random_coeffs(rng, kGrid, kGridSamples);
    const TFCoeffs s = pew_shrink(z, 0.7, NeighborhoodShape(3, 3));
    for (std::size_t i = 0; i < z.size(); ++i) {
      const auto out = s.data()[i], in = z.data()[i];
      if (out == std::complex<double>(0.0, 0.0)) continue;
      // Cross product of parallel vectors vanishes; dot product is positive.
      EXPECT_NEAR(out.real() * in.imag() - out.imag() * in.real(), 0.0, 1e-12);
      EXPECT_GT(out.real() * in.real() + out.imag() * in.imag(), 0.0);
    }
  }
}

}  // namespace
}  // namespace declip

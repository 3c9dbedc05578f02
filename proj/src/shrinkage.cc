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

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace declip {

NeighborhoodShape::NeighborhoodShape(std::size_t time_extent, std::size_t freq_extent,
                                     std::vector<double> weights)
    : time_extent_(time_extent), freq_extent_(freq_extent), weights_(std::move(weights)) {
  if (time_extent_ == 0 || freq_extent_ == 0 || time_extent_ % 2 == 0 ||
      freq_extent_ % 2 == 0)
    throw std::invalid_argument("neighborhood extents must be odd and positive");
  if (!weights_.empty()) {
    if (weights_.size() != time_extent_ * freq_extent_)
      throw std::invalid_argument("neighborhood weights do not match the extents");
    for (double w : weights_) {
      if (!(w >= 0.0) || !std::isfinite(w))
        throw std::invalid_argument("neighborhood weights must be finite and nonnegative");
    }
    if (!(weight(time_extent_ / 2, freq_extent_ / 2) > 0.0))
      throw std::invalid_argument("neighborhood center weight must be positive");
  }
}

std::vector<double> hinge(std::span<const double> v) {
  std::vector<double> out(v.size());
  std::transform(v.begin(), v.end(), out.begin(), [](double x) { return hinge(x); });
  return out;
}

double neighborhood_energy(const TFCoeffs& z, std::size_t bin, std::size_t frame,
                           const NeighborhoodShape& shape) {
  if (bin >= z.bins() || frame >= z.frames())
    throw std::out_of_range("neighborhood center lies outside the grid");
  const auto half_t = static_cast<std::ptrdiff_t>(shape.time_extent() / 2);
  const auto half_f = static_cast<std::ptrdiff_t>(shape.freq_extent() / 2);
  double energy = 0.0;
  for (std::ptrdiff_t dt = -half_t; dt <= half_t; ++dt) {
    const std::ptrdiff_t t = static_cast<std::ptrdiff_t>(frame) + dt;
    if (t < 0 || t >= static_cast<std::ptrdiff_t>(z.frames())) continue;
    for (std::ptrdiff_t df = -half_f; df <= half_f; ++df) {
      const std::ptrdiff_t f = static_cast<std::ptrdiff_t>(bin) + df;
      if (f < 0 || f >= static_cast<std::ptrdiff_t>(z.bins())) continue;
      energy += shape.weight(static_cast<std::size_t>(dt + half_t),
                             static_cast<std::size_t>(df + half_f)) *
                std::norm(z.at(static_cast<std::size_t>(f), static_cast<std::size_t>(t)));
    }
  }
  return energy;
}

namespace {

// Neighborhood energies of the whole grid, in the grid's frame-major layout.
void energy_map(const TFCoeffs& z, const NeighborhoodShape& shape, std::vector<double>& energy) {
  const std::size_t bins = z.bins();
  const std::size_t frames = z.frames();
  const auto data = z.data();
  std::vector<double> power(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) power[i] = std::norm(data[i]);
  energy.assign(data.size(), 0.0);

  const auto half_t = static_cast<std::ptrdiff_t>(shape.time_extent() / 2);
  const auto half_f = static_cast<std::ptrdiff_t>(shape.freq_extent() / 2);
  for (std::ptrdiff_t dt = -half_t; dt <= half_t; ++dt) {
    for (std::ptrdiff_t df = -half_f; df <= half_f; ++df) {
      const double w = shape.weight(static_cast<std::size_t>(dt + half_t),
                                    static_cast<std::size_t>(df + half_f));
      if (w == 0.0) continue;
      for (std::size_t t = 0; t < frames; ++t) {
        const std::ptrdiff_t src_t = static_cast<std::ptrdiff_t>(t) + dt;
        if (src_t < 0 || src_t >= static_cast<std::ptrdiff_t>(frames)) continue;
        const double* src = power.data() + static_cast<std::size_t>(src_t) * bins;
        double* dst = energy.data() + t * bins;
        const std::size_t f_lo = df < 0 ? static_cast<std::size_t>(-df) : 0;
        const std::size_t f_hi = df > 0 ? bins - static_cast<std::size_t>(df) : bins;
        for (std::size_t f = f_lo; f < f_hi; ++f) dst[f] += w * src[f + df];
      }
    }
  }
}

void check_lambda(double lambda) {
  if (!(lambda >= 0.0) || !std::isfinite(lambda))
    throw std::invalid_argument("shrinkage lambda must be finite and nonnegative");
}

}  // namespace

void pew_shrink_in_place(TFCoeffs& z, double lambda, const NeighborhoodShape& shape,
                         std::vector<double>& energy) {
  check_lambda(lambda);
  energy_map(z, shape, energy);
  const double lambda_sq = lambda * lambda;
  auto data = z.data();
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double e = energy[i];
    const double gain = e > 0.0 ? std::max(1.0 - lambda_sq / e, 0.0) : 0.0;
    data[i] *= gain;
  }
}

TFCoeffs pew_shrink(const TFCoeffs& z, double lambda, const NeighborhoodShape& shape) {
  TFCoeffs out = z;
  std::vector<double> energy;
  pew_shrink_in_place(out, lambda, shape, energy);
  return out;
}

TFCoeffs ew_shrink(const TFCoeffs& z, double lambda) {
  return pew_shrink(z, lambda, NeighborhoodShape::singleton());
}

}  // namespace declip

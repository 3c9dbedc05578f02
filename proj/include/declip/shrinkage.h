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

#ifndef DECLIP_SHRINKAGE_H_
#define DECLIP_SHRINKAGE_H_

#include <cstddef>
#include <span>
#include <vector>

#include "declip/tf_transform.h"

namespace declip {

/// Centered time-frequency neighborhood. Extents are odd; weights, when
/// present, are stored frame-offset-major (time_extent rows of freq_extent).
class NeighborhoodShape {
 public:
  NeighborhoodShape(std::size_t time_extent, std::size_t freq_extent,
                    std::vector<double> weights = {});

  static NeighborhoodShape singleton() { return {1, 1}; }
  /// Three frames by one bin, unweighted.
  static NeighborhoodShape persistent_default() { return {3, 1}; }

  std::size_t time_extent() const { return time_extent_; }
  std::size_t freq_extent() const { return freq_extent_; }
  bool weighted() const { return !weights_.empty(); }
  double weight(std::size_t dt, std::size_t df) const {
    return weights_.empty() ? 1.0 : weights_[dt * freq_extent_ + df];
  }
  std::span<const double> weights() const { return weights_; }

  friend bool operator==(const NeighborhoodShape&, const NeighborhoodShape&) = default;

 private:
  std::size_t time_extent_;
  std::size_t freq_extent_;
  std::vector<double> weights_;
};

/// Keeps negative entries, zeroes the rest.
std::vector<double> hinge(std::span<const double> v);
inline double hinge(double v) { return v < 0.0 ? v : 0.0; }

/// Weighted sum of |z|^2 over the neighborhood centered at (bin, frame).
/// Offsets outside the grid contribute nothing.
double neighborhood_energy(const TFCoeffs& z, std::size_t bin, std::size_t frame,
                           const NeighborhoodShape& shape);

/// Persistent empirical Wiener shrinkage: each coefficient is scaled by
/// max(1 - lambda^2 / E, 0), E being its neighborhood energy in the input.
TFCoeffs pew_shrink(const TFCoeffs& z, double lambda, const NeighborhoodShape& shape);

/// In-place form of pew_shrink. All gains are derived from the input before
/// any coefficient is overwritten; energy is scratch space reused by callers.
void pew_shrink_in_place(TFCoeffs& z, double lambda, const NeighborhoodShape& shape,
                         std::vector<double>& energy);

/// Empirical Wiener shrinkage, i.e. pew_shrink with a 1x1 neighborhood.
TFCoeffs ew_shrink(const TFCoeffs& z, double lambda);

}  // namespace declip

#endif  // DECLIP_SHRINKAGE_H_

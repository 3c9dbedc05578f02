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

#ifndef DECLIP_SOLVER_H_
#define DECLIP_SOLVER_H_

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "declip/shrinkage.h"
#include "declip/signal.h"
#include "declip/tf_transform.h"

namespace declip {

enum class ShrinkageKind { kEW, kPEW };
enum class RestartRule { kFunctionValue, kNone };

std::string_view to_string(ShrinkageKind kind);
std::string_view to_string(RestartRule rule);
ShrinkageKind parse_shrinkage_kind(std::string_view name);
RestartRule parse_restart_rule(std::string_view name);

struct SolverConfig {
  double lambda_target = 1e-4;
  double lambda_init = 1e-1;
  int n_outer = 20;
  int n_inner = 500;
  double step = 1.0;
  ShrinkageKind shrinkage = ShrinkageKind::kPEW;
  NeighborhoodShape shape = NeighborhoodShape::persistent_default();
  bool momentum = true;
  RestartRule restart = RestartRule::kFunctionValue;
  /// Frame used for the synthesis operator; unset means
  /// FrameParams::default_for_rate of the input.
  std::optional<FrameParams> frame;
  /// Slack allowed when checking that reliable samples lie within the
  /// thresholds (for inputs that went through quantisation).
  double consistency_tolerance = 0.0;
  /// Keep every inner-iteration objective in the trace.
  bool record_inner_objectives = false;

  void validate() const;
  /// Regularisation weight of an outer stage: geometric from lambda_init to
  /// lambda_target, the last stage using lambda_target exactly.
  double stage_lambda(int stage) const;
  FrameParams frame_for(int sample_rate) const;
};

struct StageRecord {
  int stage = 0;
  double lambda = 0.0;
  double objective = 0.0;  // smooth part at the stage-end iterate
  int inner_iterations = 0;
  int restarts = 0;
  std::size_t nonzero_coefficients = 0;
  std::optional<double> sdr_whole;
  std::optional<double> sdr_clipped;
  std::optional<double> sdr_reliable;
  std::vector<double> inner_objectives;
};

struct SolverTrace {
  std::vector<StageRecord> stages;
};

struct SolverResult {
  Signal estimate;
  SolverTrace trace;
};

/// Called after every outer stage with the stage-end time-domain estimate.
using StageObserver = std::function<void(const StageRecord&, std::span<const double> estimate)>;

/// Quadratic data terms of the declipping objective evaluated at a
/// time-domain estimate: squared error on reliable samples plus squared
/// threshold undershoot on clipped ones (each halved).
double smooth_objective_signal(std::span<const double> estimate, std::span<const double> y,
                               const SampleMask& mask, double theta);

/// Residual whose analysis is the gradient of the smooth objective.
void smooth_residual(std::span<const double> estimate, std::span<const double> y,
                     const SampleMask& mask, double theta, std::span<double> residual);

double smooth_objective(const TFCoeffs& z, const Signal& y, const SampleMask& mask,
                        double theta);
TFCoeffs smooth_gradient(const TFCoeffs& z, const Signal& y, const SampleMask& mask,
                         double theta);

/// Social-sparsity declipper: accelerated proximal-style iterations on the
/// smooth data terms with EW/PEW shrinkage, lambda continuation over outer
/// stages and function-value adaptive restart. Stage SDRs are traced when a
/// ground truth is given.
SolverResult declip_sspew(const Signal& y, const SampleMask& mask, double theta,
                          const SolverConfig& cfg,
                          const std::optional<Signal>& ground_truth = std::nullopt,
                          const StageObserver& observer = {});

}  // namespace declip

#endif  // DECLIP_SOLVER_H_

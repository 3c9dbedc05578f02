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

#include "declip/solver.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

namespace declip {

std::string_view to_string(ShrinkageKind kind) {
  return kind == ShrinkageKind::kEW ? "ew" : "pew";
}

std::string_view to_string(RestartRule rule) {
  return rule == RestartRule::kFunctionValue ? "function-value" : "none";
}

ShrinkageKind parse_shrinkage_kind(std::string_view name) {
  if (name == "ew" || name == "EW") return ShrinkageKind::kEW;
  if (name == "pew" || name == "PEW") return ShrinkageKind::kPEW;
  throw std::invalid_argument("unknown shrinkage: " + std::string(name));
}

RestartRule parse_restart_rule(std::string_view name) {
  if (name == "function-value" || name == "function_value") return RestartRule::kFunctionValue;
  if (name == "none") return RestartRule::kNone;
  throw std::invalid_argument("unknown restart rule: " + std::string(name));
}

void SolverConfig::validate() const {
  if (!(lambda_target > 0.0) || !std::isfinite(lambda_target))
    throw std::invalid_argument("lambda_target must be positive");
  if (!(lambda_init >= lambda_target) || !std::isfinite(lambda_init))
    throw std::invalid_argument("lambda_init must be at least lambda_target");
  if (n_outer < 1) throw std::invalid_argument("n_outer must be at least 1");
  if (n_inner < 1) throw std::invalid_argument("n_inner must be at least 1");
  if (!(step > 0.0 && step <= 1.0)) throw std::invalid_argument("step must lie in (0, 1]");
  if (!(consistency_tolerance >= 0.0))
    throw std::invalid_argument("consistency_tolerance must be nonnegative");
  if (frame) frame->validate();
}

double SolverConfig::stage_lambda(int stage) const {
  if (stage < 0 || stage >= n_outer) throw std::out_of_range("stage index out of range");
  if (stage == n_outer - 1) return lambda_target;
  const double frac = static_cast<double>(stage) / static_cast<double>(n_outer - 1);
  return lambda_init * std::pow(lambda_target / lambda_init, frac);
}

FrameParams SolverConfig::frame_for(int sample_rate) const {
  return frame ? *frame : FrameParams::default_for_rate(sample_rate);
}

namespace {

void check_dimensions(std::size_t estimate, std::size_t y, const SampleMask& mask) {
  if (estimate != y || mask.size() != y)
    throw std::invalid_argument("estimate, observation and mask differ in length");
}

std::optional<double> optional_sdr(std::span<const double> ref, std::span<const double> est,
                                   const std::vector<bool>& selector) {
  double energy = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i)
    if (selector[i]) energy += ref[i] * ref[i];
  if (energy == 0.0) return std::nullopt;
  return sdr_on_mask(ref, est, selector);
}

}  // namespace

double smooth_objective_signal(std::span<const double> estimate, std::span<const double> y,
                               const SampleMask& mask, double theta) {
  check_dimensions(estimate.size(), y.size(), mask);
  double acc = 0.0;
  for (std::size_t n = 0; n < y.size(); ++n) {
    double r = 0.0;
    switch (mask[n]) {
      case SampleKind::kReliable: r = estimate[n] - y[n]; break;
      case SampleKind::kHigh: r = hinge(estimate[n] - theta); break;
      case SampleKind::kLow: r = hinge(-estimate[n] - theta); break;
    }
    acc += r * r;
  }
  return 0.5 * acc;
}

void smooth_residual(std::span<const double> estimate, std::span<const double> y,
                     const SampleMask& mask, double theta, std::span<double> residual) {
  check_dimensions(estimate.size(), y.size(), mask);
  if (residual.size() != y.size()) throw std::invalid_argument("residual length mismatch");
  for (std::size_t n = 0; n < y.size(); ++n) {
    switch (mask[n]) {
      case SampleKind::kReliable: residual[n] = estimate[n] - y[n]; break;
      case SampleKind::kHigh: residual[n] = hinge(estimate[n] - theta); break;
      case SampleKind::kLow: residual[n] = -hinge(-estimate[n] - theta); break;
    }
  }
}

double smooth_objective(const TFCoeffs& z, const Signal& y, const SampleMask& mask,
                        double theta) {
  check_dimensions(z.signal_length(), y.size(), mask);
  StftFrame frame(z.params(), z.signal_length());
  return smooth_objective_signal(frame.synthesize(z), y.samples(), mask, theta);
}

TFCoeffs smooth_gradient(const TFCoeffs& z, const Signal& y, const SampleMask& mask,
                         double theta) {
  check_dimensions(z.signal_length(), y.size(), mask);
  StftFrame frame(z.params(), z.signal_length());
  const std::vector<double> estimate = frame.synthesize(z);
  std::vector<double> residual(y.size());
  smooth_residual(estimate, y.samples(), mask, theta, residual);
  return frame.analyze(residual);
}

SolverResult declip_sspew(const Signal& y, const SampleMask& mask, double theta,
                          const SolverConfig& cfg, const std::optional<Signal>& ground_truth,
                          const StageObserver& observer) {
  cfg.validate();
  if (!(theta > 0.0)) throw std::invalid_argument("clipping threshold must be positive");
  const std::size_t n = y.size();
  if (mask.size() != n) throw std::invalid_argument("mask length differs from signal length");
  if (ground_truth && ground_truth->size() != n)
    throw std::invalid_argument("ground truth length differs from signal length");
  const auto obs = y.samples();
  for (std::size_t i = 0; i < n; ++i) {
    if (mask.is_reliable(i) && std::abs(obs[i]) > theta + cfg.consistency_tolerance)
      throw std::invalid_argument("reliable sample " + std::to_string(i) +
                                  " exceeds the clipping threshold");
  }

  const NeighborhoodShape shape =
      cfg.shrinkage == ShrinkageKind::kEW ? NeighborhoodShape::singleton() : cfg.shape;
  const StftFrame frame(cfg.frame_for(y.sample_rate()), n);
  const std::vector<bool> clipped_sel = mask.clipped();
  const std::vector<bool> reliable_sel = mask.reliable();

  TFCoeffs z = frame.analyze(obs);
  TFCoeffs z_prev = z;
  TFCoeffs w = z;
  std::vector<double> x = frame.synthesize(z);
  std::vector<double> x_prev = x;
  std::vector<double> xw(n), residual(n);
  TFCoeffs grad = frame.make_coeffs();
  std::vector<double> energy;
  double f = smooth_objective_signal(x, obs, mask, theta);

  SolverTrace trace;
  trace.stages.reserve(static_cast<std::size_t>(cfg.n_outer));
  for (int stage = 0; stage < cfg.n_outer; ++stage) {
    StageRecord rec;
    rec.stage = stage;
    rec.lambda = cfg.stage_lambda(stage);
    rec.inner_iterations = cfg.n_inner;
    if (cfg.record_inner_objectives) rec.inner_objectives.reserve(cfg.n_inner);

    // Each stage starts from the previous iterate with fresh momentum.
    double t = 1.0;
    z_prev = z;
    x_prev = x;
    for (int it = 0; it < cfg.n_inner; ++it) {
      double t_next = 1.0;
      double beta = 0.0;
      if (cfg.momentum) {
        t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t * t));
        beta = (t - 1.0) / t_next;
      }
      auto wd = w.data();
      const auto zd = z.data();
      const auto zpd = z_prev.data();
      if (beta != 0.0) {
        for (std::size_t i = 0; i < wd.size(); ++i) wd[i] = zd[i] + beta * (zd[i] - zpd[i]);
        for (std::size_t i = 0; i < n; ++i) xw[i] = x[i] + beta * (x[i] - x_prev[i]);
      } else {
        std::copy(zd.begin(), zd.end(), wd.begin());
        std::copy(x.begin(), x.end(), xw.begin());
      }

      smooth_residual(xw, obs, mask, theta, residual);
      frame.analyze(residual, grad);
      const auto gd = grad.data();
      for (std::size_t i = 0; i < wd.size(); ++i) wd[i] -= cfg.step * gd[i];
      pew_shrink_in_place(w, rec.lambda, shape, energy);

      std::swap(z_prev, z);
      std::swap(z, w);
      std::swap(x_prev, x);
      frame.synthesize(z, x);
      const double f_new = smooth_objective_signal(x, obs, mask, theta);
      if (cfg.record_inner_objectives) rec.inner_objectives.push_back(f_new);

      if (cfg.momentum) {
        if (cfg.restart == RestartRule::kFunctionValue && f_new > f) {
          t = 1.0;
          ++rec.restarts;
        } else {
          t = t_next;
        }
      }
      f = f_new;
    }

    rec.objective = f;
    rec.nonzero_coefficients = static_cast<std::size_t>(std::count_if(
        z.data().begin(), z.data().end(), [](const auto& c) { return c != TFCoeffs::value_type{}; }));
    if (ground_truth) {
      const auto ref = ground_truth->samples();
      rec.sdr_whole = optional_sdr(ref, x, std::vector<bool>(n, true));
      rec.sdr_clipped = optional_sdr(ref, x, clipped_sel);
      rec.sdr_reliable = optional_sdr(ref, x, reliable_sel);
    }
    if (observer) observer(rec, x);
    trace.stages.push_back(std::move(rec));
  }

  return {Signal(std::move(x), y.sample_rate()), std::move(trace)};
}

}  // namespace declip

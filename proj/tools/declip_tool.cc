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

// Command-line front end: synthesize, clip, declip, postprocess and sweep.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "declip/audio_io.h"
#include "declip/clipping.h"
#include "declip/harness.h"
#include "declip/postprocess.h"
#include "declip/signal.h"
#include "declip/solver.h"

namespace {

using namespace declip;
namespace fs = std::filesystem;

struct CrossfadeFlags {
  std::optional<std::string> placement, shape, short_policy;
  std::optional<std::size_t> width;

  void add_to(CLI::App* app) {
    app->add_option("--placement", placement, "crossfade placement: reliable|clipped|middle");
    app->add_option("--shape", shape, "crossfade shape: linear|sine_squared");
    app->add_option("--width", width, "crossfade length in samples");
    app->add_option("--short-policy", short_policy, "short segments: ignore|replace|shorten");
  }
  void apply(RunConfig& rc) const {
    if (placement) rc.set("placement", *placement);
    if (shape) rc.set("shape", *shape);
    if (width) rc.set("width", std::to_string(*width));
    if (short_policy) rc.set("short_policy", *short_policy);
  }
};

RunConfig build_config(const std::optional<std::string>& config_file,
                       const std::vector<std::string>& overrides, const CrossfadeFlags& flags) {
  RunConfig rc;
  if (config_file) rc.merge_file(*config_file);
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got " + kv);
    rc.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  flags.apply(rc);
  return rc;
}

fs::path default_sidecar(const fs::path& wav) {
  fs::path p = wav;
  p += ".sidecar";
  return p;
}

void report_write(const WavWriteReport& r, const fs::path& path) {
  if (r.clipped_samples > 0)
    std::cerr << "warning: " << r.clipped_samples << " samples saturated while writing "
              << path.string() << "\n";
}

ClipSidecar load_matching_sidecar(const fs::path& path, const Signal& y) {
  ClipSidecar sc = read_sidecar(path);
  if (sc.length != y.size())
    throw std::invalid_argument("sidecar describes " + std::to_string(sc.length) +
                                " samples but the WAV has " + std::to_string(y.size()));
  if (sc.sample_rate != y.sample_rate())
    throw std::invalid_argument("sidecar sample rate does not match the WAV");
  return sc;
}

PostStrategy make_post(const std::string& name, const RunConfig& rc) {
  PostStrategy p;
  p.kind = parse_post_kind(name);
  p.label = std::string(to_string(p.kind));
  p.crossfade = rc.crossfade();
  return p;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Declipping toolkit: social-sparsity declipper with RR/CR postprocessing"};
  app.require_subcommand(1);

  // synth
  auto* synth = app.add_subcommand("synth", "write a synthetic test signal");
  std::string synth_kind = "multisine";
  double synth_duration = 1.0;
  int synth_rate = 44100;
  std::optional<std::uint64_t> synth_seed;
  std::string synth_out;
  synth->add_option("--kind", synth_kind, "sine|multisine|sweep|noise_burst");
  synth->add_option("--duration", synth_duration, "seconds");
  synth->add_option("--rate", synth_rate, "sample rate in Hz");
  synth->add_option("--seed", synth_seed, "RNG seed (default: $DECLIP_SEED or 0)");
  synth->add_option("--out", synth_out, "output WAV")->required();

  // clip
  auto* clip = app.add_subcommand("clip", "hard-clip a WAV at a threshold or input SDR");
  std::string clip_in, clip_out;
  std::optional<double> clip_sdr, clip_theta;
  std::optional<std::string> clip_sidecar;
  clip->add_option("input", clip_in, "input WAV")->required();
  auto* sdr_opt = clip->add_option("--sdr", clip_sdr, "target input SDR in dB");
  auto* theta_opt = clip->add_option("--theta", clip_theta, "clipping threshold");
  sdr_opt->excludes(theta_opt);
  clip->add_option("--out", clip_out, "clipped WAV")->required();
  clip->add_option("--sidecar", clip_sidecar, "sidecar path (default: <out>.sidecar)");

  // declip
  auto* dec = app.add_subcommand("declip", "declip a clipped WAV described by its sidecar");
  std::string dec_in, dec_out, dec_post = "none";
  std::optional<std::string> dec_sidecar, dec_config, dec_trace, dec_ref;
  std::vector<std::string> dec_set;
  CrossfadeFlags dec_cf;
  dec->add_option("input", dec_in, "clipped WAV")->required();
  dec->add_option("--sidecar", dec_sidecar, "sidecar path (default: <input>.sidecar)");
  dec->add_option("--config", dec_config, "key-value configuration file");
  dec->add_option("--set", dec_set, "override a configuration key (key=value)");
  dec->add_option("--out", dec_out, "output WAV")->required();
  dec->add_option("--trace", dec_trace, "per-outer-iteration trace CSV");
  dec->add_option("--post", dec_post, "none|rr|cr");
  dec->add_option("--ref", dec_ref, "original WAV for SDR traces");
  dec_cf.add_to(dec);

  // postprocess
  auto* post = app.add_subcommand("postprocess", "apply RR or CR to an external reconstruction");
  std::string post_recon, post_clipped, post_out, post_kind = "cr";
  std::optional<std::string> post_sidecar, post_config;
  std::vector<std::string> post_set;
  CrossfadeFlags post_cf;
  post->add_option("recon", post_recon, "reconstructed WAV")->required();
  post->add_option("clipped", post_clipped, "clipped WAV")->required();
  post->add_option("--sidecar", post_sidecar, "sidecar path (default: <clipped>.sidecar)");
  post->add_option("--config", post_config, "key-value configuration file");
  post->add_option("--set", post_set, "override a configuration key (key=value)");
  post->add_option("--post", post_kind, "rr|cr|none");
  post->add_option("--out", post_out, "output WAV")->required();
  post_cf.add_to(post);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run a corpus x input-SDR x strategy sweep");
  std::string sweep_spec;
  std::optional<std::string> sweep_out;
  std::optional<int> sweep_jobs;
  sweep->add_option("spec", sweep_spec, "JSON sweep specification")->required();
  sweep->add_option("--out", sweep_out, "output directory (overrides the spec)");
  sweep->add_option("--jobs", sweep_jobs, "worker threads (overrides the spec)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*synth) {
      const std::uint64_t seed = synth_seed ? *synth_seed : default_seed();
      const Signal x = synth_signal(parse_synth_kind(synth_kind), synth_duration, synth_rate, seed);
      report_write(write_wav(x, synth_out), synth_out);
      std::cout << "wrote " << x.size() << " samples to " << synth_out << "\n";
    } else if (*clip) {
      if (!clip_sdr && !clip_theta) throw std::invalid_argument("clip needs --sdr or --theta");
      const Signal x = read_wav(clip_in);
      const double theta = clip_sdr ? threshold_for_input_sdr(x, *clip_sdr) : *clip_theta;
      const Signal y = hard_clip(x, theta);
      ClipSidecar sc;
      sc.theta = theta;
      sc.achieved_sdr = sdr(x, y);
      sc.length = x.size();
      sc.sample_rate = x.sample_rate();
      sc.mask = masks_from_clipped(y, theta);
      report_write(write_wav(y, clip_out), clip_out);
      const fs::path sidecar = clip_sidecar ? fs::path(*clip_sidecar) : default_sidecar(clip_out);
      write_sidecar(sc, sidecar);
      std::cout << "theta=" << theta << " achieved_sdr=" << format_metric(sc.achieved_sdr)
                << " clipped=" << (sc.mask.count(SampleKind::kHigh) + sc.mask.count(SampleKind::kLow))
                << "\n";
    } else if (*dec) {
      const Signal y = read_wav(dec_in);
      const ClipSidecar sc = load_matching_sidecar(
          dec_sidecar ? fs::path(*dec_sidecar) : default_sidecar(dec_in), y);
      RunConfig rc = build_config(dec_config, dec_set, dec_cf);
      SolverConfig cfg = rc.solver();
      // Clipped WAVs store 16-bit samples; allow one quantisation step.
      cfg.consistency_tolerance = std::max(cfg.consistency_tolerance, 1.0 / 32768.0);
      std::optional<Signal> ref;
      if (dec_ref) {
        ref = read_wav(*dec_ref);
        if (ref->size() != y.size() || ref->sample_rate() != y.sample_rate())
          throw std::invalid_argument("reference WAV does not match the clipped input");
      }
      const PostStrategy strategy = make_post(dec_post, rc);
      const std::optional<CrossfadeConfig> trace_cf =
          strategy.kind == PostKind::kCR ? std::optional(strategy.crossfade) : std::nullopt;
      DeclipOutcome outcome = run_declip(y, sc.mask, sc.theta, cfg, ref, trace_cf);
      const Signal result = apply_post(strategy, outcome.estimate, y, sc.mask);
      report_write(write_wav(result, dec_out), dec_out);
      if (dec_trace) {
        std::ofstream out(*dec_trace, std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + *dec_trace);
        write_trace_csv(out, outcome.trace);
      }
      if (ref) {
        std::cout << "sdr_whole=" << format_metric(sdr(*ref, result)) << "\n";
      }
    } else if (*post) {
      const Signal recon = read_wav(post_recon);
      const Signal y = read_wav(post_clipped);
      const ClipSidecar sc = load_matching_sidecar(
          post_sidecar ? fs::path(*post_sidecar) : default_sidecar(post_clipped), y);
      if (recon.size() != y.size())
        throw std::invalid_argument("reconstruction and clipped WAV differ in length");
      const RunConfig rc = build_config(post_config, post_set, post_cf);
      const Signal result = apply_post(make_post(post_kind, rc), recon, y, sc.mask);
      report_write(write_wav(result, post_out), post_out);
    } else if (*sweep) {
      SweepSpec spec = read_sweep_spec(sweep_spec);
      if (sweep_out) spec.output_dir = *sweep_out;
      if (sweep_jobs) spec.jobs = *sweep_jobs;
      const SweepResult result = run_sweep(spec);
      std::cout << result.rows.size() << " rows, " << result.summary.size() << " summary rows, "
                << result.failures << " failures; results in " << spec.output_dir.string() << "\n";
      if (result.failures > 0) {
        for (const auto& r : result.rows)
          if (r.status != "ok")
            std::cerr << r.signal_id << " @ " << r.input_sdr << " dB / " << r.strategy << ": "
                      << r.status << "\n";
        return 1;
      }
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

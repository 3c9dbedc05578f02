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

#ifndef DECLIP_HARNESS_H_
#define DECLIP_HARNESS_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "declip/audio_io.h"
#include "declip/postprocess.h"
#include "declip/signal.h"
#include "declip/solver.h"

namespace declip {

// ---------------------------------------------------------------------------
// Clip sidecar: threshold, achieved input SDR and the run-length encoded mask,
// so declipping never has to re-derive masks from quantised samples.

struct ClipSidecar {
  double theta = 0.0;
  double achieved_sdr = 0.0;
  std::size_t length = 0;
  int sample_rate = 0;
  SampleMask mask = SampleMask::all_reliable(0);
};

std::string format_sidecar(const ClipSidecar& sidecar);
ClipSidecar parse_sidecar(std::string_view text);
void write_sidecar(const ClipSidecar& sidecar, const std::filesystem::path& path);
ClipSidecar read_sidecar(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Flat key-value configuration ("key = value", '#' comments) whose keys
// mirror the SolverConfig and CrossfadeConfig fields.

std::map<std::string, std::string> parse_key_values(std::string_view text);

class RunConfig {
 public:
  /// Applies one setting; throws on unknown keys or malformed values.
  void set(const std::string& key, const std::string& value);
  void merge_file(const std::filesystem::path& path);
  void merge_text(std::string_view text);

  SolverConfig solver() const;
  const CrossfadeConfig& crossfade() const { return crossfade_; }
  CrossfadeConfig& crossfade() { return crossfade_; }

 private:
  SolverConfig solver_;
  CrossfadeConfig crossfade_;
  std::optional<std::size_t> window_length_, hop_, fft_length_;
  std::optional<WindowKind> window_;
  std::optional<std::size_t> time_extent_, freq_extent_;
  std::vector<double> weights_;
};

// ---------------------------------------------------------------------------
// Postprocessing strategies.

enum class PostKind { kNone, kRR, kCR };

PostKind parse_post_kind(std::string_view name);
std::string_view to_string(PostKind kind);

struct PostStrategy {
  std::string label;
  PostKind kind = PostKind::kNone;
  CrossfadeConfig crossfade;
};

Signal apply_post(const PostStrategy& strategy, const Signal& recon, const Signal& y,
                  const SampleMask& mask);

// ---------------------------------------------------------------------------
// Declipping run with an optional reference signal for per-stage metrics.

struct TraceRow {
  StageRecord stage;
  std::optional<double> sdr_rr;  // whole-signal SDR of the replaced iterate
  std::optional<double> sdr_cr;  // whole-signal SDR of the crossfaded iterate
};

struct DeclipOutcome {
  Signal estimate;
  std::vector<TraceRow> trace;
};

DeclipOutcome run_declip(const Signal& y, const SampleMask& mask, double theta,
                         const SolverConfig& cfg, const std::optional<Signal>& reference,
                         const std::optional<CrossfadeConfig>& trace_crossfade);

/// Column order is fixed; the header is always written. Missing values are
/// empty fields, infinite SDRs print as "inf".
void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace);
std::string format_metric(std::optional<double> value);

// ---------------------------------------------------------------------------
// Corpus sweep.

struct CorpusEntry {
  std::string id;
  std::optional<std::filesystem::path> wav;
  SynthKind synth = SynthKind::kMultisine;
  double duration_s = 1.0;
  int sample_rate = 44100;
  std::uint64_t seed = 0;

  Signal load() const;
};

struct SweepSpec {
  std::vector<CorpusEntry> corpus;
  std::vector<double> input_sdrs{1, 3, 5, 7, 10, 15, 20};
  SolverConfig solver;
  std::vector<PostStrategy> post;
  std::filesystem::path output_dir = "sweep_out";
  int jobs = 1;
  bool write_wavs = true;

  void validate() const;
};

/// Seed for synthetic entries that do not set one: DECLIP_SEED, else 0.
std::uint64_t default_seed();

/// Parses a JSON sweep description. Relative WAV paths and the output
/// directory resolve against base_dir.
SweepSpec parse_sweep_spec(std::string_view json_text, const std::filesystem::path& base_dir);
SweepSpec read_sweep_spec(const std::filesystem::path& path);

struct ResultRow {
  std::string signal_id;
  double input_sdr = 0.0;
  std::string strategy;
  std::optional<double> sdr_whole;
  std::optional<double> sdr_clipped;
  std::optional<double> sdr_reliable;
  double runtime_s = 0.0;
  std::string status = "ok";
};

struct SweepResult {
  std::vector<ResultRow> rows;     // signal x input SDR x strategy order
  std::vector<ResultRow> summary;  // mean over the corpus per input SDR x strategy
  std::size_t failures = 0;
};

/// Runs every (signal, input SDR) job on a worker pool, then writes
/// results.csv, results.json, per-job trace CSVs under traces/ and, when
/// enabled, WAVs under wav/.
SweepResult run_sweep(const SweepSpec& spec);

void write_results_csv(std::ostream& out, const SweepResult& result, bool include_runtime = true);

}  // namespace declip

#endif  // DECLIP_HARNESS_H_

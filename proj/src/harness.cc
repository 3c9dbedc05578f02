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

#include "declip/harness.h"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "declip/clipping.h"

namespace declip {

namespace fs = std::filesystem;

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed for " + path.string());
}

double parse_double(const std::string& key, const std::string& value) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(value, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != value.size())
    throw std::invalid_argument("setting '" + key + "' expects a number, got '" + value + "'");
  return v;
}

long long parse_int(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (v != std::floor(v)) throw std::invalid_argument("setting '" + key + "' expects an integer");
  return static_cast<long long>(v);
}

std::size_t parse_size(const std::string& key, const std::string& value) {
  const long long v = parse_int(key, value);
  if (v < 0) throw std::invalid_argument("setting '" + key + "' must be nonnegative");
  return static_cast<std::size_t>(v);
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes" || value == "on") return true;
  if (value == "false" || value == "0" || value == "no" || value == "off") return false;
  throw std::invalid_argument("setting '" + key + "' expects a boolean, got '" + value + "'");
}

char kind_letter(SampleKind k) {
  switch (k) {
    case SampleKind::kReliable: return 'R';
    case SampleKind::kHigh: return 'H';
    case SampleKind::kLow: return 'L';
  }
  return '?';
}

std::string format_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string format_exact(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::optional<double> part_sdr(std::span<const double> ref, std::span<const double> est,
                               const std::vector<bool>& sel) {
  double energy = 0.0;
  for (std::size_t i = 0; i < ref.size(); ++i)
    if (sel[i]) energy += ref[i] * ref[i];
  if (energy == 0.0) return std::nullopt;
  return sdr_on_mask(ref, est, sel);
}

nlohmann::json metric_json(std::optional<double> v) {
  if (!v) return nullptr;
  if (std::isinf(*v)) return *v > 0 ? "inf" : "-inf";
  return *v;
}

std::string sanitize(std::string s) {
  for (char& c : s)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '-' && c != '_' && c != '.') c = '_';
  return s;
}

}  // namespace

// --- sidecar ---------------------------------------------------------------

std::string format_sidecar(const ClipSidecar& s) {
  if (s.mask.size() != s.length) throw std::invalid_argument("sidecar mask length mismatch");
  const SegmentList runs = segments(s.mask);
  std::ostringstream out;
  out << "# declip clipping sidecar\n";
  out << "version=1\n";
  out << "theta=" << format_exact(s.theta) << "\n";
  out << "achieved_sdr=" << format_exact(s.achieved_sdr) << "\n";
  out << "N=" << s.length << "\n";
  out << "rate=" << s.sample_rate << "\n";
  out << "runs=" << runs.size() << "\n";
  for (const Segment& r : runs) out << kind_letter(r.kind) << ' ' << r.start << ' ' << r.length() << "\n";
  return out.str();
}

ClipSidecar parse_sidecar(std::string_view text) {
  ClipSidecar s;
  std::optional<std::size_t> declared_runs;
  bool have_theta = false, have_n = false, have_rate = false;
  SegmentList runs;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq != std::string::npos) {
      const std::string key = trim(std::string_view(t).substr(0, eq));
      const std::string value = trim(std::string_view(t).substr(eq + 1));
      if (key == "version") {
        if (value != "1") throw std::invalid_argument("unsupported sidecar version " + value);
      } else if (key == "theta") {
        s.theta = parse_double(key, value);
        have_theta = true;
      } else if (key == "achieved_sdr") {
        s.achieved_sdr = value == "inf" ? std::numeric_limits<double>::infinity()
                                        : parse_double(key, value);
      } else if (key == "N") {
        s.length = parse_size(key, value);
        have_n = true;
      } else if (key == "rate") {
        s.sample_rate = static_cast<int>(parse_int(key, value));
        have_rate = true;
      } else if (key == "runs") {
        declared_runs = parse_size(key, value);
      } else {
        throw std::invalid_argument("unknown sidecar key '" + key + "'");
      }
      continue;
    }
    std::istringstream fields(t);
    char letter = 0;
    std::size_t start = 0, length = 0;
    std::string extra;
    if (!(fields >> letter >> start >> length) || (fields >> extra) || length == 0)
      throw std::invalid_argument("malformed sidecar run at line " + std::to_string(line_no));
    SampleKind kind;
    switch (letter) {
      case 'R': kind = SampleKind::kReliable; break;
      case 'H': kind = SampleKind::kHigh; break;
      case 'L': kind = SampleKind::kLow; break;
      default:
        throw std::invalid_argument("unknown run kind at line " + std::to_string(line_no));
    }
    runs.push_back({start, start + length - 1, kind});
  }
  if (!have_theta || !have_n || !have_rate)
    throw std::invalid_argument("sidecar lacks theta, N or rate");
  if (!(s.theta > 0.0)) throw std::invalid_argument("sidecar theta must be positive");
  if (declared_runs && *declared_runs != runs.size())
    throw std::invalid_argument("sidecar run count does not match its header");
  s.mask = expand(runs, s.length);
  return s;
}

void write_sidecar(const ClipSidecar& sidecar, const fs::path& path) {
  write_text(path, format_sidecar(sidecar));
}

ClipSidecar read_sidecar(const fs::path& path) { return parse_sidecar(read_text(path)); }

// --- configuration ---------------------------------------------------------

std::map<std::string, std::string> parse_key_values(std::string_view text) {
  std::map<std::string, std::string> out;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string t = trim(std::string_view(line).substr(0, hash));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config line " + std::to_string(line_no) + " lacks '='");
    const std::string key = trim(std::string_view(t).substr(0, eq));
    if (key.empty())
      throw std::invalid_argument("config line " + std::to_string(line_no) + " has no key");
    out[key] = trim(std::string_view(t).substr(eq + 1));
  }
  return out;
}

void RunConfig::set(const std::string& key, const std::string& value) {
  if (key == "lambda_target") solver_.lambda_target = parse_double(key, value);
  else if (key == "lambda_init") solver_.lambda_init = parse_double(key, value);
  else if (key == "n_outer") solver_.n_outer = static_cast<int>(parse_int(key, value));
  else if (key == "n_inner") solver_.n_inner = static_cast<int>(parse_int(key, value));
  else if (key == "step") solver_.step = parse_double(key, value);
  else if (key == "shrinkage") solver_.shrinkage = parse_shrinkage_kind(value);
  else if (key == "momentum") solver_.momentum = parse_bool(key, value);
  else if (key == "restart") solver_.restart = parse_restart_rule(value);
  else if (key == "consistency_tolerance") solver_.consistency_tolerance = parse_double(key, value);
  else if (key == "neighborhood_time") time_extent_ = parse_size(key, value);
  else if (key == "neighborhood_freq") freq_extent_ = parse_size(key, value);
  else if (key == "neighborhood_weights") {
    weights_.clear();
    std::istringstream in(value);
    std::string item;
    while (std::getline(in, item, ',')) weights_.push_back(parse_double(key, trim(item)));
  }
  else if (key == "window_length") window_length_ = parse_size(key, value);
  else if (key == "hop") hop_ = parse_size(key, value);
  else if (key == "fft_length") fft_length_ = parse_size(key, value);
  else if (key == "window") window_ = parse_window_kind(value);
  else if (key == "placement") crossfade_.placement = parse_placement(value);
  else if (key == "shape") crossfade_.shape = parse_shape(value);
  else if (key == "width" || key == "length_w") crossfade_.length_w = parse_size(key, value);
  else if (key == "short_policy") crossfade_.short_policy = parse_short_policy(value);
  else if (key == "strict_ignore") crossfade_.strict_ignore = parse_bool(key, value);
  else throw std::invalid_argument("unknown setting '" + key + "'");
}

void RunConfig::merge_text(std::string_view text) {
  for (const auto& [k, v] : parse_key_values(text)) set(k, v);
}

void RunConfig::merge_file(const fs::path& path) { merge_text(read_text(path)); }

SolverConfig RunConfig::solver() const {
  SolverConfig cfg = solver_;
  if (time_extent_ || freq_extent_ || !weights_.empty()) {
    cfg.shape = NeighborhoodShape(time_extent_.value_or(cfg.shape.time_extent()),
                                  freq_extent_.value_or(cfg.shape.freq_extent()), weights_);
  }
  if (window_length_ || hop_ || fft_length_ || window_) {
    FrameParams p;
    p.window_length = window_length_.value_or(p.window_length);
    p.hop = hop_.value_or(p.window_length / 4);
    p.fft_length = fft_length_.value_or(p.window_length);
    p.window = window_.value_or(p.window);
    p.validate();
    cfg.frame = p;
  }
  cfg.validate();
  crossfade_.validate();
  return cfg;
}

// --- postprocessing --------------------------------------------------------

PostKind parse_post_kind(std::string_view name) {
  if (name == "none") return PostKind::kNone;
  if (name == "rr" || name == "RR") return PostKind::kRR;
  if (name == "cr" || name == "CR") return PostKind::kCR;
  throw std::invalid_argument("unknown postprocessing strategy: " + std::string(name));
}

std::string_view to_string(PostKind kind) {
  switch (kind) {
    case PostKind::kNone: return "none";
    case PostKind::kRR: return "rr";
    case PostKind::kCR: return "cr";
  }
  return "unknown";
}

Signal apply_post(const PostStrategy& strategy, const Signal& recon, const Signal& y,
                  const SampleMask& mask) {
  switch (strategy.kind) {
    case PostKind::kNone:
      if (recon.size() != y.size() || mask.size() != y.size())
        throw std::invalid_argument("reconstruction, observation and mask differ in length");
      return recon;
    case PostKind::kRR: return replace_reliable(recon, y, mask);
    case PostKind::kCR: return crossfade_reliable(recon, y, mask, strategy.crossfade);
  }
  throw std::logic_error("unhandled postprocessing kind");
}

// --- declipping run --------------------------------------------------------

DeclipOutcome run_declip(const Signal& y, const SampleMask& mask, double theta,
                         const SolverConfig& cfg, const std::optional<Signal>& reference,
                         const std::optional<CrossfadeConfig>& trace_crossfade) {
  std::vector<TraceRow> rows;
  StageObserver observer = [&](const StageRecord& rec, std::span<const double> estimate) {
    TraceRow row{rec, std::nullopt, std::nullopt};
    row.stage.inner_objectives.clear();
    if (reference) {
      const Signal iterate(std::vector<double>(estimate.begin(), estimate.end()), y.sample_rate());
      const std::vector<bool> all(y.size(), true);
      row.sdr_rr = part_sdr(reference->samples(), replace_reliable(iterate, y, mask).samples(), all);
      if (trace_crossfade) {
        row.sdr_cr = part_sdr(reference->samples(),
                              crossfade_reliable(iterate, y, mask, *trace_crossfade).samples(), all);
      }
    }
    rows.push_back(std::move(row));
  };
  SolverResult result = declip_sspew(y, mask, theta, cfg, reference, observer);
  return {std::move(result.estimate), std::move(rows)};
}

std::string format_metric(std::optional<double> value) {
  return value ? format_number(*value) : std::string();
}

void write_trace_csv(std::ostream& out, const std::vector<TraceRow>& trace) {
  out << "outer,lambda,objective,inner_iterations,restarts,nonzero_coefficients,"
         "sdr_whole,sdr_clipped,sdr_reliable,sdr_rr,sdr_cr\n";
  for (const TraceRow& r : trace) {
    out << r.stage.stage + 1 << ',' << format_number(r.stage.lambda) << ','
        << format_number(r.stage.objective) << ',' << r.stage.inner_iterations << ','
        << r.stage.restarts << ',' << r.stage.nonzero_coefficients << ','
        << format_metric(r.stage.sdr_whole) << ',' << format_metric(r.stage.sdr_clipped) << ','
        << format_metric(r.stage.sdr_reliable) << ',' << format_metric(r.sdr_rr) << ','
        << format_metric(r.sdr_cr) << '\n';
  }
}

// --- sweep -----------------------------------------------------------------

Signal CorpusEntry::load() const {
  if (wav) return read_wav(*wav);
  return synth_signal(synth, duration_s, sample_rate, seed);
}

void SweepSpec::validate() const {
  if (corpus.empty()) throw std::invalid_argument("sweep corpus is empty");
  if (input_sdrs.empty()) throw std::invalid_argument("sweep input SDR list is empty");
  if (post.empty()) throw std::invalid_argument("sweep has no postprocessing strategies");
  if (jobs < 1) throw std::invalid_argument("sweep needs at least one worker");
  solver.validate();
  for (const auto& p : post) p.crossfade.validate();
}

std::uint64_t default_seed() {
  const char* env = std::getenv("DECLIP_SEED");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (end == env || *end != '\0') throw std::invalid_argument("DECLIP_SEED must be an integer");
  return v;
}

namespace {

std::string json_scalar(const nlohmann::json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "true" : "false";
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number()) return format_exact(v.get<double>());
  throw std::invalid_argument("setting values must be scalars");
}

PostStrategy parse_post_entry(const nlohmann::json& j) {
  PostStrategy p;
  if (j.is_string()) {
    p.kind = parse_post_kind(j.get<std::string>());
    p.label = std::string(to_string(p.kind));
    return p;
  }
  if (!j.is_object()) throw std::invalid_argument("post entries must be strings or objects");
  p.kind = parse_post_kind(j.value("kind", std::string("cr")));
  RunConfig rc;
  for (const auto& [k, v] : j.items()) {
    if (k == "kind" || k == "label") continue;
    rc.set(k, json_scalar(v));
  }
  p.crossfade = rc.crossfade();
  p.label = j.value("label", std::string(to_string(p.kind)));
  return p;
}

}  // namespace

SweepSpec parse_sweep_spec(std::string_view json_text, const fs::path& base_dir) {
  const nlohmann::json j = nlohmann::json::parse(json_text);
  if (!j.is_object()) throw std::invalid_argument("sweep spec must be a JSON object");
  SweepSpec spec;
  const auto resolve = [&](const std::string& p) {
    fs::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  if (!j.contains("corpus") || !j["corpus"].is_array())
    throw std::invalid_argument("sweep spec needs a corpus array");
  std::size_t index = 0;
  for (const auto& e : j["corpus"]) {
    CorpusEntry entry;
    if (e.is_string()) {
      entry.wav = resolve(e.get<std::string>());
      entry.id = entry.wav->stem().string();
    } else if (e.is_object()) {
      if (e.contains("wav")) {
        entry.wav = resolve(e["wav"].get<std::string>());
        entry.id = e.value("id", entry.wav->stem().string());
      } else {
        entry.synth = parse_synth_kind(e.value("synth", std::string("multisine")));
        entry.duration_s = e.value("duration", 1.0);
        entry.sample_rate = e.value("rate", 44100);
        entry.seed = e.contains("seed") ? e["seed"].get<std::uint64_t>() : default_seed();
        entry.id = e.value("id", std::string(to_string(entry.synth)) + "_" +
                                     std::to_string(entry.seed) + "_" + std::to_string(index));
      }
    } else {
      throw std::invalid_argument("corpus entries must be paths or objects");
    }
    spec.corpus.push_back(std::move(entry));
    ++index;
  }
  for (std::size_t a = 0; a < spec.corpus.size(); ++a)
    for (std::size_t b = a + 1; b < spec.corpus.size(); ++b)
      if (spec.corpus[a].id == spec.corpus[b].id)
        throw std::invalid_argument("duplicate corpus id '" + spec.corpus[a].id + "'");

  if (j.contains("input_sdrs")) spec.input_sdrs = j["input_sdrs"].get<std::vector<double>>();

  RunConfig rc;
  if (j.contains("config")) rc.merge_file(resolve(j["config"].get<std::string>()));
  if (j.contains("solver")) {
    for (const auto& [k, v] : j["solver"].items()) rc.set(k, json_scalar(v));
  }
  spec.solver = rc.solver();

  if (j.contains("post")) {
    for (const auto& p : j["post"]) spec.post.push_back(parse_post_entry(p));
  } else {
    for (const char* name : {"none", "rr", "cr"}) spec.post.push_back(parse_post_entry(name));
  }
  for (std::size_t a = 0; a < spec.post.size(); ++a)
    for (std::size_t b = a + 1; b < spec.post.size(); ++b)
      if (spec.post[a].label == spec.post[b].label)
        throw std::invalid_argument("duplicate strategy label '" + spec.post[a].label + "'");

  spec.output_dir = resolve(j.value("output_dir", std::string("sweep_out")));
  spec.jobs = j.value("jobs", 1);
  spec.write_wavs = j.value("write_wavs", true);
  spec.validate();
  return spec;
}

SweepSpec read_sweep_spec(const fs::path& path) {
  return parse_sweep_spec(read_text(path), path.parent_path());
}

void write_results_csv(std::ostream& out, const SweepResult& result, bool include_runtime) {
  out << "signal_id,input_sdr,strategy,sdr_whole,sdr_clipped,sdr_reliable";
  if (include_runtime) out << ",runtime_s";
  out << ",status\n";
  const auto emit = [&](const ResultRow& r) {
    out << r.signal_id << ',' << format_number(r.input_sdr) << ',' << r.strategy << ','
        << format_metric(r.sdr_whole) << ',' << format_metric(r.sdr_clipped) << ','
        << format_metric(r.sdr_reliable);
    if (include_runtime) out << ',' << format_number(r.runtime_s);
    std::string status = r.status;
    std::replace(status.begin(), status.end(), ',', ';');
    std::replace(status.begin(), status.end(), '\n', ' ');
    out << ',' << status << '\n';
  };
  for (const auto& r : result.rows) emit(r);
  for (const auto& r : result.summary) emit(r);
}

namespace {

struct JobOutput {
  std::vector<ResultRow> rows;
};

std::string job_stem(const std::string& id, double sdr) {
  return sanitize(id) + "_sdr" + sanitize(format_number(sdr));
}

JobOutput run_job(const SweepSpec& spec, const CorpusEntry& entry, double target_sdr) {
  using clock = std::chrono::steady_clock;
  JobOutput out;
  const auto fail_all = [&](const std::string& msg) {
    out.rows.clear();
    for (const auto& p : spec.post) {
      ResultRow row;
      row.signal_id = entry.id;
      row.input_sdr = target_sdr;
      row.strategy = p.label;
      row.status = "error: " + msg;
      out.rows.push_back(std::move(row));
    }
  };
  try {
    const Signal x = entry.load();
    const double theta = threshold_for_input_sdr(x, target_sdr);
    const Signal y = hard_clip(x, theta);
    const SampleMask mask = masks_from_clipped(y, theta);

    std::optional<CrossfadeConfig> trace_cf;
    for (const auto& p : spec.post)
      if (p.kind == PostKind::kCR && !trace_cf) trace_cf = p.crossfade;
    if (!trace_cf) trace_cf = CrossfadeConfig{};

    const auto t0 = clock::now();
    DeclipOutcome outcome = run_declip(y, mask, theta, spec.solver, x, trace_cf);
    const double solver_s = std::chrono::duration<double>(clock::now() - t0).count();

    const std::string stem = job_stem(entry.id, target_sdr);
    {
      std::ofstream trace(spec.output_dir / "traces" / (stem + ".csv"), std::ios::trunc);
      if (!trace) throw std::runtime_error("cannot write trace for " + stem);
      write_trace_csv(trace, outcome.trace);
    }
    if (spec.write_wavs) {
      write_wav(Signal(x), spec.output_dir / "wav" / (stem + "_original.wav"));
      write_wav(y, spec.output_dir / "wav" / (stem + "_clipped.wav"));
    }

    const std::vector<bool> all(x.size(), true);
    const std::vector<bool> clipped = mask.clipped();
    const std::vector<bool> reliable = mask.reliable();
    for (const auto& p : spec.post) {
      ResultRow row;
      row.signal_id = entry.id;
      row.input_sdr = target_sdr;
      row.strategy = p.label;
      try {
        const auto t1 = clock::now();
        const Signal result = apply_post(p, outcome.estimate, y, mask);
        row.runtime_s = solver_s + std::chrono::duration<double>(clock::now() - t1).count();
        row.sdr_whole = part_sdr(x.samples(), result.samples(), all);
        row.sdr_clipped = part_sdr(x.samples(), result.samples(), clipped);
        row.sdr_reliable = part_sdr(x.samples(), result.samples(), reliable);
        if (spec.write_wavs)
          write_wav(result, spec.output_dir / "wav" / (stem + "_" + sanitize(p.label) + ".wav"));
      } catch (const std::exception& e) {
        row.status = std::string("error: ") + e.what();
      }
      out.rows.push_back(std::move(row));
    }
  } catch (const std::exception& e) {
    fail_all(e.what());
  }
  return out;
}

}  // namespace

SweepResult run_sweep(const SweepSpec& spec) {
  spec.validate();
  fs::create_directories(spec.output_dir / "traces");
  if (spec.write_wavs) fs::create_directories(spec.output_dir / "wav");

  struct Job {
    std::size_t entry;
    double sdr;
  };
  std::vector<Job> jobs;
  for (std::size_t e = 0; e < spec.corpus.size(); ++e)
    for (double s : spec.input_sdrs) jobs.push_back({e, s});

  std::vector<JobOutput> outputs(jobs.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < jobs.size(); i = next++)
      outputs[i] = run_job(spec, spec.corpus[jobs[i].entry], jobs[i].sdr);
  };
  const std::size_t n_workers =
      std::min<std::size_t>(static_cast<std::size_t>(spec.jobs), jobs.size());
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) pool.emplace_back(worker);
  }

  SweepResult result;
  for (auto& o : outputs)
    for (auto& r : o.rows) result.rows.push_back(std::move(r));
  for (const auto& r : result.rows)
    if (r.status != "ok") ++result.failures;

  for (double s : spec.input_sdrs) {
    for (const auto& p : spec.post) {
      ResultRow mean;
      mean.signal_id = "mean";
      mean.input_sdr = s;
      mean.strategy = p.label;
      double sw = 0, sc = 0, sr = 0, rt = 0;
      std::size_t nw = 0, nc = 0, nr = 0, count = 0;
      for (const auto& r : result.rows) {
        if (r.input_sdr != s || r.strategy != p.label || r.status != "ok") continue;
        ++count;
        rt += r.runtime_s;
        if (r.sdr_whole) { sw += *r.sdr_whole; ++nw; }
        if (r.sdr_clipped) { sc += *r.sdr_clipped; ++nc; }
        if (r.sdr_reliable) { sr += *r.sdr_reliable; ++nr; }
      }
      if (nw) mean.sdr_whole = sw / double(nw);
      if (nc) mean.sdr_clipped = sc / double(nc);
      if (nr) mean.sdr_reliable = sr / double(nr);
      mean.runtime_s = count ? rt / double(count) : 0.0;
      if (count == 0) mean.status = "error: no successful rows";
      result.summary.push_back(std::move(mean));
    }
  }

  {
    std::ofstream csv(spec.output_dir / "results.csv", std::ios::trunc);
    if (!csv) throw std::runtime_error("cannot write results.csv");
    write_results_csv(csv, result);
  }
  nlohmann::json j;
  const auto row_json = [](const ResultRow& r) {
    return nlohmann::json{{"signal_id", r.signal_id},
                          {"input_sdr", r.input_sdr},
                          {"strategy", r.strategy},
                          {"sdr_whole", metric_json(r.sdr_whole)},
                          {"sdr_clipped", metric_json(r.sdr_clipped)},
                          {"sdr_reliable", metric_json(r.sdr_reliable)},
                          {"runtime_s", r.runtime_s},
                          {"status", r.status}};
  };
  j["rows"] = nlohmann::json::array();
  for (const auto& r : result.rows) j["rows"].push_back(row_json(r));
  j["summary"] = nlohmann::json::array();
  for (const auto& r : result.summary) j["summary"].push_back(row_json(r));
  write_text(spec.output_dir / "results.json", j.dump(2) + "\n");
  return result;
}

}  // namespace declip

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

#include "declip/audio_io.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>
#include <string>

namespace declip {

namespace {

std::uint32_t read_u32(const std::uint8_t* p) {
  return std::uint32_t(p[0]) | (std::uint32_t(p[1]) << 8) | (std::uint32_t(p[2]) << 16) |
         (std::uint32_t(p[3]) << 24);
}

std::uint16_t read_u16(const std::uint8_t* p) {
  return static_cast<std::uint16_t>(p[0] | (p[1] << 8));
}

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u16(std::vector<std::uint8_t>& out, std::uint16_t v) {
  out.push_back(static_cast<std::uint8_t>(v));
  out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_tag(std::vector<std::uint8_t>& out, const char* tag) {
  out.insert(out.end(), tag, tag + 4);
}

bool tag_is(const std::uint8_t* p, const char* tag) { return std::memcmp(p, tag, 4) == 0; }

std::int16_t to_pcm(double x, bool* saturated) {
  const double scaled = std::round(x * 32768.0);
  const double clamped = std::clamp(scaled, -32768.0, 32767.0);
  if (saturated) *saturated = clamped != scaled;
  return static_cast<std::int16_t>(clamped);
}

void peak_normalize(std::vector<double>& v, double peak) {
  double m = 0.0;
  for (double s : v) m = std::max(m, std::abs(s));
  if (m == 0.0) return;
  const double g = peak / m;
  for (double& s : v) s *= g;
}

}  // namespace

Signal decode_wav(const std::vector<std::uint8_t>& bytes) {
  if (bytes.size() < 12 || !tag_is(bytes.data(), "RIFF") || !tag_is(bytes.data() + 8, "WAVE"))
    throw WavError("not a RIFF/WAVE file");
  std::size_t pos = 12;
  bool have_fmt = false;
  int rate = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_size = 0;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::size_t size = read_u32(chunk + 4);
    const std::size_t body = pos + 8;
    if (body + size > bytes.size()) {
      if (tag_is(chunk, "data")) throw WavError("truncated data chunk");
      throw WavError("corrupt chunk header");
    }
    if (tag_is(chunk, "fmt ")) {
      if (size < 16) throw WavError("fmt chunk too short");
      const std::uint8_t* f = bytes.data() + body;
      const int format = read_u16(f);
      const int channels = read_u16(f + 2);
      rate = static_cast<int>(read_u32(f + 4));
      const int bits = read_u16(f + 14);
      if (format != 1) throw WavError("unsupported WAV format tag " + std::to_string(format));
      if (channels != 1) throw WavError("only mono WAV is supported");
      if (bits != 16) throw WavError("only 16-bit PCM WAV is supported");
      if (rate <= 0) throw WavError("invalid sample rate");
      have_fmt = true;
    } else if (tag_is(chunk, "data")) {
      data = bytes.data() + body;
      data_size = size;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt) throw WavError("missing fmt chunk");
  if (data == nullptr) throw WavError("missing data chunk");
  if (data_size % 2 != 0) throw WavError("data chunk is not a whole number of samples");
  const std::size_t n = data_size / 2;
  if (n == 0) throw WavError("WAV file contains no samples");
  std::vector<double> samples(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto raw = static_cast<std::int16_t>(read_u16(data + 2 * i));
    samples[i] = static_cast<double>(raw) / 32768.0;
  }
  return Signal(std::move(samples), rate);
}

Signal read_wav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw WavError("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return decode_wav(bytes);
  } catch (const WavError& e) {
    throw WavError(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> encode_wav(const Signal& signal, WavWriteReport* report) {
  const std::size_t n = signal.size();
  const std::uint64_t data_bytes = 2ull * n;
  if (data_bytes + 36 > 0xffffffffull) throw WavError("signal too long for a WAV file");
  const auto rate = static_cast<std::uint32_t>(signal.sample_rate());
  std::vector<std::uint8_t> out;
  out.reserve(44 + data_bytes);
  put_tag(out, "RIFF");
  put_u32(out, static_cast<std::uint32_t>(36 + data_bytes));
  put_tag(out, "WAVE");
  put_tag(out, "fmt ");
  put_u32(out, 16);
  put_u16(out, 1);          // PCM
  put_u16(out, 1);          // mono
  put_u32(out, rate);
  put_u32(out, rate * 2);   // byte rate
  put_u16(out, 2);          // block align
  put_u16(out, 16);         // bits per sample
  put_tag(out, "data");
  put_u32(out, static_cast<std::uint32_t>(data_bytes));
  std::size_t saturated_count = 0;
  for (double s : signal.samples()) {
    bool saturated = false;
    const auto v = static_cast<std::uint16_t>(to_pcm(s, &saturated));
    if (saturated) ++saturated_count;
    put_u16(out, v);
  }
  if (report) report->clipped_samples = saturated_count;
  return out;
}

WavWriteReport write_wav(const Signal& signal, const std::filesystem::path& path) {
  WavWriteReport report;
  const std::vector<std::uint8_t> bytes = encode_wav(signal, &report);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw WavError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw WavError("write failed for " + path.string());
  return report;
}

double quantize_sample(double x) { return static_cast<double>(to_pcm(x, nullptr)) / 32768.0; }

SynthKind parse_synth_kind(std::string_view name) {
  if (name == "sine") return SynthKind::kSine;
  if (name == "multisine") return SynthKind::kMultisine;
  if (name == "sweep") return SynthKind::kSweep;
  if (name == "noise_burst" || name == "noise-burst") return SynthKind::kNoiseBurst;
  throw std::invalid_argument("unknown synthetic signal kind: " + std::string(name));
}

std::string_view to_string(SynthKind kind) {
  switch (kind) {
    case SynthKind::kSine: return "sine";
    case SynthKind::kMultisine: return "multisine";
    case SynthKind::kSweep: return "sweep";
    case SynthKind::kNoiseBurst: return "noise_burst";
  }
  return "unknown";
}

std::vector<double> multisine_frequencies() {
  const double base = 220.0;
  return {base, base * std::numbers::sqrt2, base * std::numbers::phi, base * std::numbers::e,
          base * std::numbers::pi};
}

Signal synth_signal(SynthKind kind, double duration_s, int sample_rate, std::uint64_t seed) {
  if (!(duration_s > 0.0) || !std::isfinite(duration_s))
    throw std::invalid_argument("duration must be positive");
  if (sample_rate <= 0) throw std::invalid_argument("sample rate must be positive");
  const auto n = static_cast<std::size_t>(std::llround(duration_s * sample_rate));
  if (n == 0) throw std::invalid_argument("duration is shorter than one sample");
  const double rate = sample_rate;
  const double two_pi = 2.0 * std::numbers::pi;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> phase_dist(0.0, two_pi);
  std::vector<double> x(n);

  switch (kind) {
    case SynthKind::kSine: {
      for (std::size_t i = 0; i < n; ++i) x[i] = std::sin(two_pi * 440.0 * i / rate);
      break;
    }
    case SynthKind::kMultisine: {
      const std::vector<double> freqs = multisine_frequencies();
      const double amps[] = {1.0, 0.8, 0.65, 0.5, 0.4};
      for (std::size_t k = 0; k < freqs.size(); ++k) {
        const double phase = phase_dist(rng);
        for (std::size_t i = 0; i < n; ++i) x[i] += amps[k] * std::sin(two_pi * freqs[k] * i / rate + phase);
      }
      break;
    }
    case SynthKind::kSweep: {
      const double f0 = 100.0, f1 = std::min(8000.0, 0.45 * rate);
      const double k = std::log(f1 / f0) / duration_s;
      const double phase = phase_dist(rng);
      for (std::size_t i = 0; i < n; ++i) {
        const double t = i / rate;
        x[i] = std::sin(phase + two_pi * f0 * (std::exp(k * t) - 1.0) / k);
      }
      break;
    }
    case SynthKind::kNoiseBurst: {
      std::normal_distribution<double> noise(0.0, 1.0);
      for (std::size_t i = 0; i < n; ++i) {
        const double env = std::sin(std::numbers::pi * 4.0 * i / rate);
        x[i] = env * env * noise(rng);
      }
      break;
    }
  }
  peak_normalize(x, 0.99);
  return Signal(std::move(x), sample_rate);
}

}  // namespace declip

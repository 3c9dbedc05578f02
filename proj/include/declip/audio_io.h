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

#ifndef DECLIP_AUDIO_IO_H_
#define DECLIP_AUDIO_IO_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "declip/signal.h"

namespace declip {

class WavError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Only 16-bit PCM mono is read or written.
struct WavSpec {
  int sample_rate = 44100;
  int bit_depth = 16;
  int channels = 1;
};

/// Reads a 16-bit PCM mono RIFF/WAVE file; samples are scaled by 1/32768.
Signal read_wav(const std::filesystem::path& path);
Signal decode_wav(const std::vector<std::uint8_t>& bytes);

/// Number of samples that fell outside the 16-bit range and were saturated.
struct WavWriteReport {
  std::size_t clipped_samples = 0;
};

/// Writes a canonical 44-byte-header 16-bit PCM mono file.
WavWriteReport write_wav(const Signal& signal, const std::filesystem::path& path);
std::vector<std::uint8_t> encode_wav(const Signal& signal, WavWriteReport* report = nullptr);

/// Rounds an amplitude to the 16-bit grid and back, saturating out-of-range
/// values.
double quantize_sample(double x);

enum class SynthKind { kSine, kMultisine, kSweep, kNoiseBurst };

SynthKind parse_synth_kind(std::string_view name);
std::string_view to_string(SynthKind kind);

/// Deterministic synthetic test signals, peak-normalised to 0.99.
///  sine        440 Hz
///  multisine   five fixed incommensurate partials, phases drawn from seed
///  sweep       exponential chirp 100 Hz .. 8 kHz
///  noise_burst Gaussian noise under a 4 Hz raised-cosine envelope
Signal synth_signal(SynthKind kind, double duration_s, int sample_rate, std::uint64_t seed);

/// Partial frequencies of the multisine, in Hz.
std::vector<double> multisine_frequencies();

}  // namespace declip

#endif  // DECLIP_AUDIO_IO_H_

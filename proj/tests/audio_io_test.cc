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

#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "test_util.h"

namespace declip {
namespace {

namespace fs = std::filesystem;

fs::path temp_path(const std::string& name) {
  return fs::temp_directory_path() / ("declip_audio_io_test_" + name);
}

std::uint32_t le32(const std::vector<std::uint8_t>& b, std::size_t at) {
  return b[at] | (b[at + 1] << 8) | (b[at + 2] << 16) | (static_cast<std::uint32_t>(b[at + 3]) << 24);
}
std::uint16_t le16(const std::vector<std::uint8_t>& b, std::size_t at) {
  return static_cast<std::uint16_t>(b[at] | (b[at + 1] << 8));
}

TEST(Wav, CanonicalHeader) {
  const auto bytes = encode_wav(Signal({0.0, 0.5, -0.5}, 22050));
  ASSERT_EQ(bytes.size(), 44u + 6u);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "RIFF");
  EXPECT_EQ(le32(bytes, 4), 36u + 6u);
  EXPECT_EQ(std::string(bytes.begin() + 8, bytes.begin() + 16), "WAVEfmt ");
  EXPECT_EQ(le32(bytes, 16), 16u);
  EXPECT_EQ(le16(bytes, 20), 1u);
  EXPECT_EQ(le16(bytes, 22), 1u);
  EXPECT_EQ(le32(bytes, 24), 22050u);
  EXPECT_EQ(le32(bytes, 28), 44100u);
  EXPECT_EQ(le16(bytes, 32), 2u);
  EXPECT_EQ(le16(bytes, 34), 16u);
  EXPECT_EQ(std::string(bytes.begin() + 36, bytes.begin() + 40), "data");
  EXPECT_EQ(le32(bytes, 40), 6u);
  EXPECT_EQ(le16(bytes, 46), 16384u);
  EXPECT_EQ(le16(bytes, 48), 0xC000u);
}

TEST(Wav, QuantizationExamples) {
  EXPECT_EQ(quantize_sample(0.0), 0.0);
  EXPECT_EQ(quantize_sample(1.0 - 1.0 / 32768.0), 32767.0 / 32768.0);
  EXPECT_EQ(quantize_sample(1.0), 32767.0 / 32768.0);
  EXPECT_EQ(quantize_sample(-1.0), -1.0);
  EXPECT_EQ(quantize_sample(-2.0), -1.0);
  EXPECT_EQ(quantize_sample(0.25), 0.25);
}

TEST(Wav, MostNegativeCodeDecodesToMinusOne) {
  auto bytes = encode_wav(Signal({0.0}, 8000));
  bytes[44] = 0x00;
  bytes[45] = 0x80;
  EXPECT_EQ(decode_wav(bytes)[0], -1.0);
}

TEST(Wav, SaturationIsCounted) {
  WavWriteReport report;
  const auto bytes = encode_wav(Signal({1.0, 0.2, -1.0, -1.5, 3.0}, 8000), &report);
  EXPECT_EQ(report.clipped_samples, 3u);
  const Signal back = decode_wav(bytes);
  EXPECT_EQ(back[0], 32767.0 / 32768.0);
  EXPECT_EQ(back[2], -1.0);
  EXPECT_EQ(back[4], 32767.0 / 32768.0);
}

TEST(Wav, SilenceRoundTripsExactly) {
  const Signal s(std::vector<double>(100, 0.0), 44100);
  EXPECT_EQ(decode_wav(encode_wav(s)), s);
}

// Encoding then decoding moves each in-range sample by at most half a step.
TEST(WavProperty, RoundTripWithinHalfStep) {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> u(-1.0, 1.0 - 1.0 / 32768.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(1000);
    for (double& s : v) s = u(rng);
    const Signal in(v, 44100);
    const Signal out = decode_wav(encode_wav(in));
    ASSERT_EQ(out.size(), in.size());
    EXPECT_EQ(out.sample_rate(), 44100);
    for (std::size_t i = 0; i < v.size(); ++i) EXPECT_LE(std::abs(out[i] - in[i]), 0.5 / 32768.0);
    // Quantized values are fixed points.
    EXPECT_EQ(decode_wav(encode_wav(out)), out);
  }
}

TEST(Wav, FileRoundTripAndDeterminism) {
  const Signal s = synth_signal(SynthKind::kSweep, 0.1, 16000, 3);
  const fs::path a = temp_path("a.wav"), b = temp_path("b.wav");
  write_wav(s, a);
  write_wav(s, b);
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  const std::vector<char> ba((std::istreambuf_iterator<char>(fa)), {});
  const std::vector<char> bb((std::istreambuf_iterator<char>(fb)), {});
  EXPECT_EQ(ba, bb);
  const Signal back = read_wav(a);
  EXPECT_EQ(back.sample_rate(), 16000);
  EXPECT_EQ(back.size(), s.size());
  fs::remove(a);
  fs::remove(b);
}

TEST(Wav, SkipsUnknownChunks) {
  auto bytes = encode_wav(Signal({0.5, -0.25}, 8000));
  // Insert a LIST chunk between fmt and data.
  const std::vector<std::uint8_t> list{'L', 'I', 'S', 'T', 4, 0, 0, 0, 'a', 'b', 'c', 'd'};
  bytes.insert(bytes.begin() + 36, list.begin(), list.end());
  const std::uint32_t riff = static_cast<std::uint32_t>(bytes.size() - 8);
  for (int i = 0; i < 4; ++i) bytes[4 + i] = static_cast<std::uint8_t>(riff >> (8 * i));
  const Signal s = decode_wav(bytes);
  EXPECT_EQ(s[0], 0.5);
  EXPECT_EQ(s[1], -0.25);
}

TEST(Wav, Errors) {
  const auto good = encode_wav(Signal({0.1, 0.2}, 8000));
  EXPECT_THROW(decode_wav({}), WavError);
  auto bad = good;
  bad[0] = 'X';
  EXPECT_THROW(decode_wav(bad), WavError);
  bad = good;
  bad[22] = 2;  // stereo
  EXPECT_THROW(decode_wav(bad), WavError);
  bad = good;
  bad[34] = 24;  // 24-bit
  EXPECT_THROW(decode_wav(bad), WavError);
  bad = good;
  bad[20] = 3;  // float
  EXPECT_THROW(decode_wav(bad), WavError);
  bad.assign(good.begin(), good.end() - 1);
  EXPECT_THROW(decode_wav(bad), WavError);
  EXPECT_THROW(read_wav(temp_path("does_not_exist.wav")), WavError);
}

TEST(Synth, LengthPeakAndSeed) {
  for (auto kind : {SynthKind::kSine, SynthKind::kMultisine, SynthKind::kSweep,
                    SynthKind::kNoiseBurst}) {
    const Signal s = synth_signal(kind, 0.5, 8000, 7);
    EXPECT_EQ(s.size(), 4000u);
    double peak = 0.0;
    for (double v : s.samples()) peak = std::max(peak, std::abs(v));
    EXPECT_NEAR(peak, 0.99, 1e-12) << to_string(kind);
    EXPECT_EQ(synth_signal(kind, 0.5, 8000, 7), s);
    EXPECT_EQ(parse_synth_kind(to_string(kind)), kind);
  }
  EXPECT_NE(synth_signal(SynthKind::kMultisine, 0.5, 8000, 1),
            synth_signal(SynthKind::kMultisine, 0.5, 8000, 2));
  EXPECT_THROW(synth_signal(SynthKind::kSine, 0.0, 8000, 1), std::invalid_argument);
  EXPECT_THROW(synth_signal(SynthKind::kSine, 1.0, 0, 1), std::invalid_argument);
  EXPECT_THROW(parse_synth_kind("square"), std::invalid_argument);
}

TEST(Synth, MultisineHasFiveWeightedPartials) {
  const int rate = 44100;
  const Signal s = synth_signal(SynthKind::kMultisine, 1.0, rate, 11);
  const auto freqs = multisine_frequencies();
  ASSERT_EQ(freqs.size(), 5u);
  std::vector<double> amp;
  for (double f : freqs) {
    std::complex<double> acc = 0.0;
    for (std::size_t n = 0; n < s.size(); ++n)
      acc += s[n] * std::polar(1.0, -2.0 * std::numbers::pi * f * static_cast<double>(n) / rate);
    amp.push_back(2.0 * std::abs(acc) / static_cast<double>(s.size()));
  }
  const double expected[] = {1.0, 0.8, 0.65, 0.5, 0.4};
  for (std::size_t k = 0; k < 5; ++k) EXPECT_NEAR(amp[k] / amp[0], expected[k], 0.02) << k;
  // Off-partial probe sees almost nothing.
  std::complex<double> off = 0.0;
  for (std::size_t n = 0; n < s.size(); ++n)
    off += s[n] * std::polar(1.0, -2.0 * std::numbers::pi * 1500.0 * static_cast<double>(n) / rate);
  EXPECT_LT(2.0 * std::abs(off) / static_cast<double>(s.size()), 0.01 * amp[0]);
}

}  // namespace
}  // namespace declip

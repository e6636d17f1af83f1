/*
 * Copyright 2026 The Artic Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "artic/audio.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iterator>
#include <numbers>
#include <numeric>
#include <vector>

#include "artic/errors.hpp"

namespace artic {

namespace fs = std::filesystem;

std::string to_string(Provenance provenance) {
  switch (provenance) {
    case Provenance::kOriginal: return "original";
    case Provenance::kEnhanced: return "enhanced";
    case Provenance::kMixed: return "mixed";
    case Provenance::kSynthesized: return "synthesized";
  }
  return "original";
}

namespace {

constexpr std::uint16_t kFormatPcm = 1;
constexpr std::uint16_t kFormatFloat = 3;
constexpr std::uint16_t kFormatExtensible = 0xFFFE;

template <typename T>
T load(const std::uint8_t* p) {
  T v;
  std::memcpy(&v, p, sizeof(T));
  return v;
}

template <typename T>
void store(std::vector<std::uint8_t>& out, T v) {
  const auto* p = reinterpret_cast<const std::uint8_t*>(&v);
  out.insert(out.end(), p, p + sizeof(T));
}

struct ParsedWav {
  WavInfo info;
  std::uint16_t format = 0;
  const std::uint8_t* data = nullptr;
  std::size_t data_bytes = 0;
};

ParsedWav parse_wav(const std::vector<std::uint8_t>& bytes, const std::string& name) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), "RIFF", 4) != 0 ||
      std::memcmp(bytes.data() + 8, "WAVE", 4) != 0) {
    throw FormatError("not a RIFF/WAVE file: " + name);
  }
  ParsedWav wav;
  bool have_fmt = false;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint8_t* chunk = bytes.data() + pos;
    const std::uint32_t size = load<std::uint32_t>(chunk + 4);
    const std::size_t body = pos + 8;
    if (std::memcmp(chunk, "fmt ", 4) == 0) {
      if (size < 16 || body + size > bytes.size()) throw FormatError("truncated fmt chunk: " + name);
      wav.format = load<std::uint16_t>(bytes.data() + body);
      wav.info.channels = load<std::uint16_t>(bytes.data() + body + 2);
      wav.info.sample_rate = static_cast<int>(load<std::uint32_t>(bytes.data() + body + 4));
      wav.info.bits_per_sample = load<std::uint16_t>(bytes.data() + body + 14);
      if (wav.format == kFormatExtensible && size >= 26) {
        wav.format = load<std::uint16_t>(bytes.data() + body + 24);
      }
      have_fmt = true;
    } else if (std::memcmp(chunk, "data", 4) == 0) {
      wav.data = bytes.data() + body;
      wav.data_bytes = std::min<std::size_t>(size, bytes.size() - body);
      break;
    }
    pos = body + size + (size & 1u);
  }
  if (!have_fmt || wav.data == nullptr) throw FormatError("missing fmt or data chunk: " + name);
  if (wav.info.channels != 1) throw FormatError("expected mono audio: " + name);
  const bool pcm16 = wav.format == kFormatPcm && wav.info.bits_per_sample == 16;
  const bool float32 = wav.format == kFormatFloat && wav.info.bits_per_sample == 32;
  if (!pcm16 && !float32) throw FormatError("unsupported sample format (need PCM16 or float32): " + name);
  if (wav.info.sample_rate <= 0) throw FormatError("bad sample rate: " + name);
  wav.info.num_frames = static_cast<Index>(wav.data_bytes / (wav.info.bits_per_sample / 8));
  return wav;
}

std::vector<std::uint8_t> slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open audio file: " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Waveform decode(const std::vector<std::uint8_t>& bytes, Provenance provenance, const std::string& name) {
  const ParsedWav parsed = parse_wav(bytes, name);
  Waveform wav;
  wav.sample_rate = parsed.info.sample_rate;
  wav.provenance = provenance;
  wav.samples.resize(parsed.info.num_frames);
  for (Index i = 0; i < parsed.info.num_frames; ++i) {
    if (parsed.info.bits_per_sample == 16) {
      wav.samples(i) = static_cast<float>(load<std::int16_t>(parsed.data + 2 * i)) / 32768.0f;
    } else {
      wav.samples(i) = load<float>(parsed.data + 4 * i);
    }
  }
  return wav;
}

}  // namespace

WavInfo read_wav_info(const fs::path& path) { return parse_wav(slurp(path), path.string()).info; }

Waveform read_wav(const fs::path& path, Provenance provenance) {
  return decode(slurp(path), provenance, path.string());
}

Waveform decode_wav(const std::vector<std::uint8_t>& bytes, Provenance provenance) {
  return decode(bytes, provenance, "<memory>");
}

std::vector<std::uint8_t> encode_wav(const Waveform& wav) {
  const auto n = static_cast<std::uint32_t>(wav.samples.size());
  std::vector<std::uint8_t> out;
  out.reserve(44 + 2 * n);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  store<std::uint32_t>(out, 36 + 2 * n);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  store<std::uint32_t>(out, 16);
  store<std::uint16_t>(out, kFormatPcm);
  store<std::uint16_t>(out, 1);
  store<std::uint32_t>(out, static_cast<std::uint32_t>(wav.sample_rate));
  store<std::uint32_t>(out, static_cast<std::uint32_t>(wav.sample_rate) * 2);
  store<std::uint16_t>(out, 2);
  store<std::uint16_t>(out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  store<std::uint32_t>(out, 2 * n);
  for (Index i = 0; i < wav.samples.size(); ++i) {
    const float v = std::clamp(wav.samples(i), -1.0f, 1.0f);
    const auto q = static_cast<std::int16_t>(std::lround(std::clamp(v * 32768.0f, -32768.0f, 32767.0f)));
    store<std::int16_t>(out, q);
  }
  return out;
}

void write_wav(const Waveform& wav, const fs::path& path) {
  const std::vector<std::uint8_t> bytes = encode_wav(wav);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw LoadError("cannot open for writing: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
}

Waveform resample(const Waveform& wav, int target_rate) {
  if (target_rate <= 0) throw ConfigError("target sample rate must be positive");
  if (target_rate == wav.sample_rate) return wav;

  constexpr double kZeroCrossings = 32.0;
  constexpr double kBeta = 8.6;
  constexpr double kRolloff = 0.95;
  const double ratio = static_cast<double>(target_rate) / wav.sample_rate;
  const double cutoff = kRolloff * std::min(1.0, ratio);  // relative to input Nyquist
  const double half_width = kZeroCrossings / cutoff;     // in input samples
  const double i0_beta = std::cyl_bessel_i(0.0, kBeta);

  // Output sample n sits at input position n * up / down; its fractional
  // part cycles through `down` phases, so the kernel is tabulated per phase.
  const std::int64_t g = std::gcd<std::int64_t>(wav.sample_rate, target_rate);
  const std::int64_t up = wav.sample_rate / g;
  const std::int64_t down = target_rate / g;
  struct Phase {
    Index first = 0;  // offset of the first tap from the integer position
    std::vector<double> weights;
  };
  std::vector<Phase> phases(static_cast<std::size_t>(down));
  for (std::int64_t p = 0; p < down; ++p) {
    const double frac = static_cast<double>(p) / static_cast<double>(down);
    Phase& phase = phases[static_cast<std::size_t>(p)];
    phase.first = static_cast<Index>(std::ceil(frac - half_width));
    const auto last = static_cast<Index>(std::floor(frac + half_width));
    for (Index k = phase.first; k <= last; ++k) {
      const double d = frac - static_cast<double>(k);
      const double x = cutoff * d;
      const double sinc = std::abs(x) < 1e-12 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
      const double r = d / half_width;
      const double window = std::cyl_bessel_i(0.0, kBeta * std::sqrt(std::max(0.0, 1.0 - r * r))) / i0_beta;
      phase.weights.push_back(sinc * window);
    }
  }

  const Index n_in = wav.samples.size();
  const auto n_out = static_cast<Index>(std::llround(static_cast<double>(n_in) * ratio));
  Waveform out;
  out.sample_rate = target_rate;
  out.provenance = wav.provenance;
  out.samples.resize(n_out);
  for (Index n = 0; n < n_out; ++n) {
    const std::int64_t pos = static_cast<std::int64_t>(n) * up;
    const auto base = static_cast<Index>(pos / down);
    const Phase& phase = phases[static_cast<std::size_t>(pos % down)];
    double acc = 0.0;
    double norm = 0.0;
    for (std::size_t j = 0; j < phase.weights.size(); ++j) {
      const Index i = base + phase.first + static_cast<Index>(j);
      if (i < 0 || i >= n_in) continue;
      acc += phase.weights[j] * wav.samples(i);
      norm += phase.weights[j];
    }
    out.samples(n) = static_cast<float>(norm != 0.0 ? acc / norm : 0.0);
  }
  return out;
}

Waveform mix_targets(const Waveform& enhanced, const Waveform& original) {
  if (enhanced.sample_rate != original.sample_rate) {
    throw AlignmentError("mix_targets: sample rates differ (" + std::to_string(enhanced.sample_rate) +
                         " vs " + std::to_string(original.sample_rate) + ")");
  }
  if (enhanced.size() != original.size()) {
    throw AlignmentError("mix_targets: lengths differ (" + std::to_string(enhanced.size()) + " vs " +
                         std::to_string(original.size()) + ")");
  }
  Waveform out;
  out.sample_rate = enhanced.sample_rate;
  out.provenance = Provenance::kMixed;
  // Accumulate in double so that mixing equal inputs returns them unchanged.
  out.samples = (kEnhancedWeight * enhanced.samples.cast<double>() +
                 kOriginalWeight * original.samples.cast<double>())
                    .cwiseMax(-1.0)
                    .cwiseMin(1.0)
                    .cast<float>();
  return out;
}

std::pair<ArticulatoryTrajectory, Waveform> reconcile_lengths(ArticulatoryTrajectory traj, Waveform wav,
                                                               int samples_per_frame) {
  const Index frames = std::min(traj.num_frames(), wav.size() / samples_per_frame);
  if (frames < traj.num_frames()) traj.data.conservativeResize(frames, Eigen::NoChange);
  wav.samples.conservativeResize(frames * samples_per_frame);
  return {std::move(traj), std::move(wav)};
}

}  // namespace artic

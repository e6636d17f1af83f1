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

#include "artic/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "artic/errors.hpp"
#include "random.hpp"

namespace artic {

namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Anchor {
  double x0, y0, x1, y1;
};

// Rough midsagittal outline (face to the left, y down) in MRI pixels.
const std::map<std::string, Anchor>& outline() {
  static const std::map<std::string, Anchor> anchors = {
      {"upper_lip", {14, 40, 18, 44}},       {"lower_lip", {14, 50, 18, 47}},
      {"lower_incisor", {20, 50, 22, 48}},   {"chin", {16, 56, 30, 72}},
      {"tongue", {24, 50, 52, 56}},          {"epiglottis", {52, 58, 54, 64}},
      {"larynx", {54, 66, 56, 74}},          {"subglottal", {56, 74, 56, 82}},
      {"pharyngeal_wall", {60, 40, 60, 70}}, {"velum", {44, 34, 54, 40}},
      {"nasal_cavity", {20, 30, 58, 28}},    {"hard_palate", {22, 36, 44, 32}},
  };
  return anchors;
}

// Sum of three slow sinusoids scaled to roughly [-1, 1].
struct Motion {
  double amp[3], freq[3], phase[3];

  explicit Motion(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> f(0.5, 4.0);
    std::uniform_real_distribution<double> p(0.0, kTwoPi);
    std::uniform_real_distribution<double> a(0.2, 0.5);
    for (int k = 0; k < 3; ++k) {
      amp[k] = a(rng);
      freq[k] = f(rng);
      phase[k] = p(rng);
    }
  }

  double operator()(double t) const {
    double v = 0.0;
    for (int k = 0; k < 3; ++k) v += amp[k] * std::sin(kTwoPi * freq[k] * t + phase[k]);
    return v;
  }
};

struct Articulators {
  Motion tongue, jaw, lips, velum, pharynx, larynx, nasal;
  double drift_phase_x, drift_phase_y;

  explicit Articulators(std::mt19937_64& rng)
      : tongue(rng), jaw(rng), lips(rng), velum(rng), pharynx(rng), larynx(rng), nasal(rng) {
    std::uniform_real_distribution<double> p(0.0, kTwoPi);
    drift_phase_x = p(rng);
    drift_phase_y = p(rng);
  }
};

Eigen::Vector2d displacement(const std::string& label, double u, double t, const Articulators& a) {
  if (label == "tongue") return {0.5 * a.tongue(t), -3.0 * a.tongue(t) * std::sin(std::numbers::pi * u)};
  if (label == "lower_lip") return {0.0, 2.0 * a.jaw(t) + 1.5 * a.lips(t)};
  if (label == "upper_lip") return {0.0, -1.0 * a.lips(t)};
  if (label == "lower_incisor" || label == "chin") return {0.0, 2.0 * a.jaw(t)};
  if (label == "velum") return {1.5 * a.velum(t) * u, 1.0 * a.velum(t) * u};
  if (label == "pharyngeal_wall") return {1.0 * a.pharynx(t), 0.0};
  if (label == "epiglottis" || label == "larynx") return {0.0, 1.0 * a.larynx(t)};
  if (label == "subglottal") return {0.0, 0.5 * a.larynx(t)};
  if (label == "nasal_cavity") return {0.3 * a.nasal(t), 0.3 * a.nasal(t)};
  return {0.0, 0.0};  // hard palate
}

// Harmonic tone sampled at `rate`: pitch tracks the tongue, loudness the lips.
Eigen::VectorXf render_tone(const Articulators& a, Index samples, int rate) {
  Eigen::VectorXf out(samples);
  double phase = 0.0;
  for (Index n = 0; n < samples; ++n) {
    const double t = static_cast<double>(n) / rate;
    const double f0 = 140.0 + 60.0 * a.tongue(t);
    phase += kTwoPi * f0 / rate;
    const double brightness = 0.5 + 0.4 * a.velum(t);
    double v = 0.0;
    for (int h = 1; h <= 6; ++h) v += std::pow(brightness, h - 1) * std::sin(h * phase) / h;
    out(n) = static_cast<float>(0.25 * (0.6 + 0.4 * a.lips(t)) * v);
  }
  return out;
}

const char* const kWords[] = {"the", "vocal", "tract", "moves", "while", "we", "speak", "softly",
                              "a",   "tone",  "rises", "and",   "falls", "over", "time", "again"};

}  // namespace

SyntheticUtterance make_synthetic_utterance(const std::string& utterance_id, Index frames, std::uint64_t seed,
                                            int enhanced_rate) {
  if (frames < 1) throw ConfigError("synthetic utterance needs at least one frame");
  std::mt19937_64 rng(seed);
  const Articulators a(rng);
  const auto& labels = default_segment_labels();

  std::map<std::string, std::pair<int, int>> ranges;  // first index, count
  for (int p = 0; p < kContourPoints; ++p) {
    auto [it, inserted] = ranges.try_emplace(labels[p], p, 0);
    ++it->second.second;
  }

  // Tracking jitter on everything but the rigid palate keeps the palate the
  // unique minimum-variance region whatever the articulator phases.
  std::normal_distribution<double> jitter(0.0, 0.3);
  FrameMatrix coords(frames, 2 * kContourPoints);
  for (Index t = 0; t < frames; ++t) {
    const double time = static_cast<double>(t) / kFrameRate;
    const Eigen::Vector2d drift(0.3 * std::sin(kTwoPi * 0.2 * time + a.drift_phase_x),
                                0.2 * std::sin(kTwoPi * 0.15 * time + a.drift_phase_y));
    for (int p = 0; p < kContourPoints; ++p) {
      const auto& [first, count] = ranges.at(labels[p]);
      const double u = count > 1 ? static_cast<double>(p - first) / (count - 1) : 0.0;
      const Anchor& anchor = outline().at(labels[p]);
      Eigen::Vector2d base(anchor.x0 + u * (anchor.x1 - anchor.x0), anchor.y0 + u * (anchor.y1 - anchor.y0));
      if (labels[p] == "tongue") base.y() -= 12.0 * std::sin(std::numbers::pi * u);
      Eigen::Vector2d pos = base + drift + displacement(labels[p], u, time, a);
      if (labels[p] != "hard_palate") pos += Eigen::Vector2d(jitter(rng), jitter(rng));
      coords(t, 2 * p) = static_cast<float>(pos.x());
      coords(t, 2 * p + 1) = static_cast<float>(pos.y());
    }
  }

  SyntheticUtterance utt;
  utt.contours = make_contours(utterance_id, std::move(coords));
  const double duration = static_cast<double>(frames) / kFrameRate;
  const auto enhanced_len = static_cast<Index>(std::llround(duration * enhanced_rate));
  const auto original_len = static_cast<Index>(std::llround(duration * kSampleRate));
  utt.enhanced = Waveform{render_tone(a, enhanced_len, enhanced_rate), enhanced_rate, Provenance::kEnhanced};

  Eigen::VectorXf clean = render_tone(a, original_len, kSampleRate);
  Eigen::VectorXf noisy = clean;
  const Index delay = kSampleRate * 3 / 100;
  for (Index n = delay; n < noisy.size(); ++n) noisy(n) += 0.3f * clean(n - delay);
  std::normal_distribution<float> noise(0.0f, 0.02f);
  for (Index n = 0; n < noisy.size(); ++n) noisy(n) += noise(rng);
  utt.original = Waveform{std::move(noisy), kSampleRate, Provenance::kOriginal};

  std::ostringstream text;
  const int words = 3 + static_cast<int>(internal::uniform_below(rng, 4));
  for (int w = 0; w < words; ++w) {
    if (w > 0) text << ' ';
    text << kWords[internal::uniform_below(rng, std::size(kWords))];
  }
  utt.transcript = text.str();
  return utt;
}

fs::path write_synthetic_corpus(const fs::path& dir, const SyntheticCorpusOptions& options) {
  if (options.utterances < 0) throw ConfigError("utterance count must be >= 0");
  if (!(options.min_duration_s > 0.0) || options.max_duration_s < options.min_duration_s) {
    throw ConfigError("bad synthetic duration range");
  }
  fs::create_directories(dir / "contours");
  fs::create_directories(dir / "wav");
  std::mt19937_64 rng(options.seed);
  std::uniform_real_distribution<double> duration(options.min_duration_s, options.max_duration_s);
  nlohmann::json entries = nlohmann::json::array();
  for (int i = 0; i < options.utterances; ++i) {
    std::ostringstream id;
    id << "utt" << std::setw(3) << std::setfill('0') << i;
    const auto frames = std::max<Index>(1, static_cast<Index>(std::llround(duration(rng) * kFrameRate)));
    const SyntheticUtterance utt = make_synthetic_utterance(id.str(), frames, rng(), options.enhanced_rate);
    const std::string contours = "contours/" + id.str() + ".artj";
    const std::string original = "wav/" + id.str() + ".original.wav";
    const std::string enhanced = "wav/" + id.str() + ".enhanced.wav";
    write_contours(utt.contours, dir / contours);
    write_wav(utt.original, dir / original);
    write_wav(utt.enhanced, dir / enhanced);
    entries.push_back({{"id", id.str()},
                       {"contours", contours},
                       {"original_wav", original},
                       {"enhanced_wav", enhanced},
                       {"transcript", utt.transcript}});
  }
  const fs::path manifest = dir / "manifest.json";
  std::ofstream out(manifest);
  if (!out) throw LoadError("cannot write " + manifest.string());
  out << nlohmann::json{{"utterances", entries}}.dump(2) << '\n';
  return manifest;
}

}  // namespace artic

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

#include "artic/models/train.hpp"

#include <cmath>
#include <utility>

#include "artic/errors.hpp"
#include "random.hpp"

namespace artic::models {

using nlohmann::json;

void TrainConfig::validate() const {
  if (steps < 0) throw ConfigError("train.steps must be >= 0");
  if (segment_frames < 0) throw ConfigError("train.segment_frames must be >= 0");
  if (batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  if (!(learning_rate > 0.0)) throw ConfigError("train.learning_rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) throw ConfigError("train betas must lie in [0, 1)");
  if (!(lr_decay > 0.0 && lr_decay <= 1.0)) throw ConfigError("train.lr_decay must lie in (0, 1]");
  if (decay_every < 1) throw ConfigError("train.decay_every must be >= 1");
  if (checkpoint_every < 0) throw ConfigError("train.checkpoint_every must be >= 0");
  if (weights.adversarial < 0 || weights.feature_matching < 0 || weights.mel < 0) {
    throw ConfigError("loss weights must be non-negative");
  }
}

double TrainConfig::learning_rate_at(long step) const {
  return learning_rate * std::pow(lr_decay, static_cast<double>(step / decay_every));
}

json to_json(const TrainConfig& c) {
  return {{"steps", c.steps},
          {"segment_frames", c.segment_frames},
          {"batch_size", c.batch_size},
          {"learning_rate", c.learning_rate},
          {"beta1", c.beta1},
          {"beta2", c.beta2},
          {"lr_decay", c.lr_decay},
          {"decay_every", c.decay_every},
          {"weights",
           {{"adversarial", c.weights.adversarial},
            {"feature_matching", c.weights.feature_matching},
            {"mel", c.weights.mel}}},
          {"seed", c.seed},
          {"checkpoint_every", c.checkpoint_every}};
}

TrainConfig train_config_from_json(const json& doc) {
  TrainConfig c;
  try {
    c.steps = doc.value("steps", c.steps);
    c.segment_frames = doc.value("segment_frames", c.segment_frames);
    c.batch_size = doc.value("batch_size", c.batch_size);
    c.learning_rate = doc.value("learning_rate", c.learning_rate);
    c.beta1 = doc.value("beta1", c.beta1);
    c.beta2 = doc.value("beta2", c.beta2);
    c.lr_decay = doc.value("lr_decay", c.lr_decay);
    c.decay_every = doc.value("decay_every", c.decay_every);
    if (doc.contains("weights")) {
      const json& w = doc.at("weights");
      c.weights.adversarial = w.value("adversarial", c.weights.adversarial);
      c.weights.feature_matching = w.value("feature_matching", c.weights.feature_matching);
      c.weights.mel = w.value("mel", c.weights.mel);
    }
    c.seed = doc.value("seed", c.seed);
    c.checkpoint_every = doc.value("checkpoint_every", c.checkpoint_every);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad training config: ") + e.what());
  }
  c.validate();
  return c;
}

void validate_pairs(const std::vector<TrainingPair>& data, int input_dim) {
  for (const auto& pair : data) {
    if (pair.features.rows() < 1) throw ShapeError(pair.utterance_id + ": no frames");
    if (pair.features.cols() != input_dim) {
      throw ShapeError(pair.utterance_id + ": feature width " + std::to_string(pair.features.cols()) +
                       " does not match model input " + std::to_string(input_dim));
    }
    if (pair.target.size() != pair.features.rows() * kSamplesPerFrame) {
      throw ShapeError(pair.utterance_id + ": target length is not T * 240");
    }
  }
}

template <typename Scalar>
void store_adam(TensorArchive& archive, const nn::Adam<Scalar>& adam, const nn::ParameterList<Scalar>& params,
                const std::string& prefix) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    store_tensor(archive, prefix + "m." + params[i]->name, params[i]->shape, adam.first_moments()[i]);
    store_tensor(archive, prefix + "v." + params[i]->name, params[i]->shape, adam.second_moments()[i]);
  }
  archive.metadata[prefix + "steps"] = adam.steps();
}

template <typename Scalar>
void load_adam(const TensorArchive& archive, nn::Adam<Scalar>& adam, const nn::ParameterList<Scalar>& params,
               const std::string& prefix) {
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto m = archive.tensors.find(prefix + "m." + params[i]->name);
    const auto v = archive.tensors.find(prefix + "v." + params[i]->name);
    if (m == archive.tensors.end() || v == archive.tensors.end()) {
      throw FormatError("checkpoint lacks optimizer state for " + params[i]->name);
    }
    load_tensor(m->second, adam.first_moments()[i]);
    load_tensor(v->second, adam.second_moments()[i]);
  }
  adam.set_steps(archive.metadata.value(prefix + "steps", 0L));
}

// ---------------------------------------------------------------------------

template <typename Scalar>
GanTrainer<Scalar>::GanTrainer(const GeneratorConfig& generator, const DiscriminatorConfig& discriminator,
                               const TrainConfig& train, const MelConfig& mel)
    : generator_config_(generator),
      discriminator_config_(discriminator),
      train_(train),
      mel_(mel),
      rng_(train.seed ^ 0x5eedULL) {
  train_.validate();
  generator_ = std::make_unique<HifiCarGenerator<Scalar>>(generator, train.seed);
  discriminators_ = std::make_unique<Discriminators<Scalar>>(discriminator, train.seed + 1);
  g_params_ = generator_->parameters();
  d_params_ = discriminators_->parameters();
  const typename nn::Adam<Scalar>::Options options{train.learning_rate, train.beta1, train.beta2, 1e-8};
  g_adam_ = nn::Adam<Scalar>(g_params_, options);
  d_adam_ = nn::Adam<Scalar>(d_params_, options);
  basis_ = nn::make_spectral_basis<Scalar>(mel.n_fft, mel.hop, static_cast<Scalar>(mel.log_floor),
                                           hann_window(mel.n_fft), mel_filterbank(mel));
}

template <typename Scalar>
typename GanTrainer<Scalar>::Segment GanTrainer<Scalar>::sample_segment(const std::vector<TrainingPair>& data) {
  const TrainingPair& pair = data[internal::uniform_below(rng_, data.size())];
  const Index frames = pair.features.rows();
  if (train_.segment_frames == 0 || frames <= train_.segment_frames) return {&pair, 0, frames};
  const auto span = static_cast<std::uint64_t>(frames - train_.segment_frames + 1);
  return {&pair, static_cast<Index>(internal::uniform_below(rng_, span)), train_.segment_frames};
}

template <typename Scalar>
Var<Scalar> GanTrainer<Scalar>::generate_segment(const Segment& s) {
  const Index hop = generator_config_.hop();
  const MatrixX<Scalar> features = s.pair->features.middleRows(s.start, s.frames).template cast<Scalar>();
  if (generator_config_.ar_context == 0) return generator_->forward(features_to_var(features), Var<Scalar>());
  const VectorX<Scalar> target = s.pair->target.template cast<Scalar>();
  std::vector<Var<Scalar>> chunks;
  for (Index c = 0; c < s.frames; c += generator_config_.chunk_frames) {
    const Index n = std::min<Index>(generator_config_.chunk_frames, s.frames - c);
    const Var<Scalar> history(generator_->history_window(target, (s.start + c) * hop));
    chunks.push_back(generator_->forward(Var<Scalar>(features.middleRows(c, n).transpose()), history));
  }
  return chunks.size() == 1 ? chunks.front() : nn::concat_cols(chunks);
}

template <typename Scalar>
Var<Scalar> GanTrainer<Scalar>::target_segment(const Segment& s) const {
  const Index hop = generator_config_.hop();
  return Var<Scalar>(s.pair->target.segment(s.start * hop, s.frames * hop).transpose().template cast<Scalar>());
}

template <typename Scalar>
Var<Scalar> GanTrainer<Scalar>::mel_l1(const Var<Scalar>& fake, const Var<Scalar>& real) const {
  Var<Scalar> real_mel;
  {
    nn::NoGradGuard no_grad;
    real_mel = nn::log_mel_spectrogram(real, basis_);
  }
  return nn::l1_loss(nn::log_mel_spectrogram(fake, basis_), real_mel);
}

template <typename Scalar>
void GanTrainer<Scalar>::check_finite(const char* term, double value) const {
  if (!std::isfinite(value)) throw NonFiniteError(term, step_ + 1);
}

template <typename Scalar>
StepLosses GanTrainer<Scalar>::step(const std::vector<TrainingPair>& data) {
  if (data.empty()) throw Error("training set is empty");
  const double lr = train_.learning_rate_at(step_);
  const auto& w = train_.weights;
  const bool adversarial = w.adversarial > 0.0 || w.feature_matching > 0.0;
  const Scalar inv_batch = Scalar(1) / static_cast<Scalar>(train_.batch_size);

  std::vector<Segment> segments;
  std::vector<Var<Scalar>> fakes;
  std::vector<Var<Scalar>> reals;
  for (int b = 0; b < train_.batch_size; ++b) {
    segments.push_back(sample_segment(data));
    fakes.push_back(generate_segment(segments.back()));
    reals.push_back(target_segment(segments.back()));
  }

  StepLosses losses;
  losses.step = step_ + 1;

  if (adversarial) {
    nn::zero_grad(d_params_);
    std::vector<Var<Scalar>> terms;
    for (std::size_t b = 0; b < fakes.size(); ++b) {
      const auto real_out = (*discriminators_)(reals[b]);
      const auto fake_out = (*discriminators_)(nn::detach(fakes[b]));
      for (std::size_t k = 0; k < real_out.scores.size(); ++k) {
        terms.push_back(nn::mse_to(real_out.scores[k], Scalar(1)));
        terms.push_back(nn::mse_to(fake_out.scores[k], Scalar(0)));
      }
    }
    Var<Scalar> d_loss = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) d_loss = d_loss + terms[i];
    d_loss = nn::scale(d_loss, inv_batch);
    losses.discriminator = static_cast<double>(d_loss.item());
    check_finite("discriminator", losses.discriminator);
    nn::backward(d_loss);
    d_adam_.step(d_params_, lr);
  }

  nn::zero_grad(g_params_);
  std::vector<Var<Scalar>> mel_terms;
  std::vector<Var<Scalar>> adv_terms;
  std::vector<Var<Scalar>> fm_terms;
  for (std::size_t b = 0; b < fakes.size(); ++b) {
    mel_terms.push_back(mel_l1(fakes[b], reals[b]));
    if (!adversarial) continue;
    DiscriminatorOutput<Scalar> real_out;
    {
      nn::NoGradGuard no_grad;
      real_out = (*discriminators_)(reals[b]);
    }
    const auto fake_out = (*discriminators_)(fakes[b]);
    for (std::size_t k = 0; k < fake_out.scores.size(); ++k) {
      adv_terms.push_back(nn::mse_to(fake_out.scores[k], Scalar(1)));
      for (std::size_t l = 0; l < fake_out.feature_maps[k].size(); ++l) {
        fm_terms.push_back(nn::l1_loss(fake_out.feature_maps[k][l], real_out.feature_maps[k][l]));
      }
    }
  }
  const auto total = [inv_batch](const std::vector<Var<Scalar>>& terms) {
    Var<Scalar> acc = terms.front();
    for (std::size_t i = 1; i < terms.size(); ++i) acc = acc + terms[i];
    return nn::scale(acc, inv_batch);
  };
  const Var<Scalar> mel = total(mel_terms);
  Var<Scalar> g_loss = nn::scale(mel, static_cast<Scalar>(w.mel));
  losses.mel = static_cast<double>(mel.item());
  check_finite("mel", losses.mel);
  if (adversarial) {
    const Var<Scalar> adv = total(adv_terms);
    const Var<Scalar> fm = total(fm_terms);
    losses.adversarial = static_cast<double>(adv.item());
    losses.feature_matching = static_cast<double>(fm.item());
    check_finite("adversarial", losses.adversarial);
    check_finite("feature_matching", losses.feature_matching);
    g_loss = g_loss + nn::scale(adv, static_cast<Scalar>(w.adversarial)) +
             nn::scale(fm, static_cast<Scalar>(w.feature_matching));
  }
  losses.generator = static_cast<double>(g_loss.item());
  check_finite("generator", losses.generator);
  nn::backward(g_loss);
  g_adam_.step(g_params_, lr);

  for (const auto* p : g_params_) {
    if (!p->value.allFinite()) throw NonFiniteError("generator parameter " + p->name, step_ + 1);
  }
  for (const auto* p : d_params_) {
    if (!p->value.allFinite()) throw NonFiniteError("discriminator parameter " + p->name, step_ + 1);
  }
  ++step_;
  return losses;
}

template <typename Scalar>
void GanTrainer<Scalar>::train(const std::vector<TrainingPair>& data, long steps, const StepCallback& on_step) {
  validate_pairs(data, generator_config_.input_dim);
  for (long i = 0; i < steps; ++i) {
    const StepLosses losses = step(data);
    if (on_step) on_step(losses);
  }
}

template <typename Scalar>
double GanTrainer<Scalar>::mel_loss(const TrainingPair& pair) {
  nn::NoGradGuard no_grad;
  const Segment whole{&pair, 0, pair.features.rows()};
  return static_cast<double>(mel_l1(generate_segment(whole), target_segment(whole)).item());
}

template <typename Scalar>
TensorArchive GanTrainer<Scalar>::save_state(const json& extra_metadata) const {
  TensorArchive archive;
  archive.metadata = extra_metadata.is_object() ? extra_metadata : json::object();
  archive.metadata["kind"] = "hificar";
  archive.metadata["step"] = step_;
  archive.metadata["generator"] = to_json(generator_config_);
  archive.metadata["discriminator"] = to_json(discriminator_config_);
  archive.metadata["train"] = to_json(train_);
  store_parameters(archive, g_params_, "generator.");
  store_parameters(archive, d_params_, "discriminator.");
  store_adam(archive, g_adam_, g_params_, "adam_g.");
  store_adam(archive, d_adam_, d_params_, "adam_d.");
  return archive;
}

template <typename Scalar>
void GanTrainer<Scalar>::load_state(const TensorArchive& archive) {
  load_parameters(archive, g_params_, "generator.");
  load_parameters(archive, d_params_, "discriminator.");
  load_adam(archive, g_adam_, g_params_, "adam_g.");
  load_adam(archive, d_adam_, d_params_, "adam_d.");
  step_ = archive.metadata.value("step", 0L);
}

template <typename Scalar>
InitReport GanTrainer<Scalar>::init_generator_from(const TensorArchive& archive) {
  return init_from_archive(archive, g_params_, "generator.");
}

// ---------------------------------------------------------------------------

template <typename Scalar>
CblTrainer<Scalar>::CblTrainer(const CblConfig& model, const TrainConfig& train)
    : model_config_(model), train_(train), rng_(train.seed ^ 0xcb1ULL) {
  train_.validate();
  model_ = std::make_unique<CblNet<Scalar>>(model, train.seed);
  params_ = model_->parameters();
  adam_ = nn::Adam<Scalar>(params_, {train.learning_rate, train.beta1, train.beta2, 1e-8});
}

template <typename Scalar>
double CblTrainer<Scalar>::step(const std::vector<CblPair>& data) {
  if (data.empty()) throw Error("training set is empty");
  nn::zero_grad(params_);
  std::vector<Var<Scalar>> terms;
  for (int b = 0; b < train_.batch_size; ++b) {
    const CblPair& pair = data[internal::uniform_below(rng_, data.size())];
    const Index frames = pair.features.rows();
    Index start = 0;
    Index n = frames;
    if (train_.segment_frames > 0 && frames > train_.segment_frames) {
      start = static_cast<Index>(internal::uniform_below(rng_, static_cast<std::uint64_t>(frames - train_.segment_frames + 1)));
      n = train_.segment_frames;
    }
    const MatrixX<Scalar> x = pair.features.middleRows(start, n).template cast<Scalar>();
    const MatrixX<Scalar> y = pair.target.middleRows(start, n).template cast<Scalar>();
    terms.push_back(nn::l1_loss(model_->forward(features_to_var(x)), Var<Scalar>(y.transpose())));
  }
  Var<Scalar> loss = terms.front();
  for (std::size_t i = 1; i < terms.size(); ++i) loss = loss + terms[i];
  loss = nn::scale(loss, Scalar(1) / static_cast<Scalar>(train_.batch_size));
  const double value = static_cast<double>(loss.item());
  if (!std::isfinite(value)) throw NonFiniteError("l1", step_ + 1);
  nn::backward(loss);
  adam_.step(params_, train_.learning_rate_at(step_));
  for (const auto* p : params_) {
    if (!p->value.allFinite()) throw NonFiniteError("parameter " + p->name, step_ + 1);
  }
  ++step_;
  return value;
}

template <typename Scalar>
void CblTrainer<Scalar>::train(const std::vector<CblPair>& data, long steps,
                               const std::function<void(long, double)>& on_step) {
  for (const auto& pair : data) {
    if (pair.features.cols() != model_config_.input_dim || pair.target.cols() != model_config_.output_dim ||
        pair.features.rows() != pair.target.rows() || pair.features.rows() == 0) {
      throw ShapeError(pair.utterance_id + ": CBL pair shape mismatch");
    }
  }
  for (long i = 0; i < steps; ++i) {
    const double loss = step(data);
    if (on_step) on_step(step_, loss);
  }
}

template <typename Scalar>
TensorArchive CblTrainer<Scalar>::save_state(const json& extra_metadata) const {
  TensorArchive archive;
  archive.metadata = extra_metadata.is_object() ? extra_metadata : json::object();
  archive.metadata["kind"] = "cbl";
  archive.metadata["step"] = step_;
  archive.metadata["cbl"] = to_json(model_config_);
  archive.metadata["train"] = to_json(train_);
  store_parameters(archive, params_, "cbl.");
  store_adam(archive, adam_, params_, "adam.");
  return archive;
}

template <typename Scalar>
void CblTrainer<Scalar>::load_state(const TensorArchive& archive) {
  load_parameters(archive, params_, "cbl.");
  load_adam(archive, adam_, params_, "adam.");
  step_ = archive.metadata.value("step", 0L);
}

template class GanTrainer<float>;
template class GanTrainer<double>;
template class CblTrainer<float>;
template class CblTrainer<double>;

}  // namespace artic::models

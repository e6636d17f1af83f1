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

#ifndef ARTIC_MODELS_TRAIN_HPP_
#define ARTIC_MODELS_TRAIN_HPP_

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

#include "artic/mel.hpp"
#include "artic/models/cbl.hpp"
#include "artic/models/checkpoint.hpp"
#include "artic/models/discriminators.hpp"
#include "artic/models/hificar.hpp"
#include "artic/nn/ops.hpp"
#include "artic/types.hpp"

namespace artic::models {

// One training example: time-major features [T x D] and the waveform target
// of exactly T * 240 samples.
struct TrainingPair {
  std::string utterance_id;
  MatrixX<float> features;
  Eigen::VectorXf target;
};

struct LossWeights {
  double adversarial = 1.0;
  double feature_matching = 2.0;
  double mel = 45.0;
};

struct TrainConfig {
  long steps = 1000;
  int segment_frames = 32;  // 0 trains on whole utterances
  int batch_size = 1;
  double learning_rate = 2e-4;
  double beta1 = 0.8;
  double beta2 = 0.99;
  double lr_decay = 0.999;  // applied every `decay_every` steps
  long decay_every = 100;
  LossWeights weights;
  std::uint64_t seed = 0;
  long checkpoint_every = 100;  // 0 keeps only the initial and final checkpoints

  void validate() const;
  double learning_rate_at(long step) const;
};

nlohmann::json to_json(const TrainConfig& config);
TrainConfig train_config_from_json(const nlohmann::json& doc);

struct StepLosses {
  long step = 0;
  double discriminator = 0.0;
  double adversarial = 0.0;
  double feature_matching = 0.0;
  double mel = 0.0;  // unweighted L1 between log mels
  double generator = 0.0;
};

using StepCallback = std::function<void(const StepLosses&)>;

// Throws ShapeError naming the utterance when a pair violates the length
// contract or the feature width.
void validate_pairs(const std::vector<TrainingPair>& data, int input_dim);

// Adversarial trainer for the direct generator. Training forwards
// chunk-by-chunk with teacher-forced history, the same chunking used by
// generation, so each step sees the history encoder in its inference role.
template <typename Scalar>
class GanTrainer {
 public:
  GanTrainer(const GeneratorConfig& generator, const DiscriminatorConfig& discriminator,
             const TrainConfig& train, const MelConfig& mel = {});

  StepLosses step(const std::vector<TrainingPair>& data);
  void train(const std::vector<TrainingPair>& data, long steps, const StepCallback& on_step = {});

  // Mel L1 of teacher-forced output on a full pair, without updating anything.
  double mel_loss(const TrainingPair& pair);

  long step_count() const { return step_; }
  HifiCarGenerator<Scalar>& generator() { return *generator_; }
  Discriminators<Scalar>& discriminators() { return *discriminators_; }
  const TrainConfig& config() const { return train_; }

  // Full training state: tensors under generator./discriminator./adam_*.
  TensorArchive save_state(const nlohmann::json& extra_metadata = {}) const;
  void load_state(const TensorArchive& archive);

  // Copies matching generator tensors from a vocoder checkpoint.
  InitReport init_generator_from(const TensorArchive& archive);

 private:
  struct Segment {
    const TrainingPair* pair;
    Index start;
    Index frames;
  };

  Segment sample_segment(const std::vector<TrainingPair>& data);
  Var<Scalar> generate_segment(const Segment& segment);
  Var<Scalar> target_segment(const Segment& segment) const;
  Var<Scalar> mel_l1(const Var<Scalar>& fake, const Var<Scalar>& real) const;
  void check_finite(const char* term, double value) const;

  GeneratorConfig generator_config_;
  DiscriminatorConfig discriminator_config_;
  TrainConfig train_;
  MelConfig mel_;
  std::unique_ptr<HifiCarGenerator<Scalar>> generator_;
  std::unique_ptr<Discriminators<Scalar>> discriminators_;
  nn::ParameterList<Scalar> g_params_;
  nn::ParameterList<Scalar> d_params_;
  nn::Adam<Scalar> g_adam_;
  nn::Adam<Scalar> d_adam_;
  std::shared_ptr<const nn::SpectralBasis<Scalar>> basis_;
  std::mt19937_64 rng_;
  long step_ = 0;
};

// Non-adversarial trainer for the CNN-BiLSTM intermediate predictor: L1 on
// [T x out] targets (log mels or interpolated deep features, time-major).
struct CblPair {
  std::string utterance_id;
  MatrixX<float> features;
  MatrixX<float> target;
};

template <typename Scalar>
class CblTrainer {
 public:
  CblTrainer(const CblConfig& model, const TrainConfig& train);

  // Returns the L1 loss of this step.
  double step(const std::vector<CblPair>& data);
  void train(const std::vector<CblPair>& data, long steps, const std::function<void(long, double)>& on_step = {});

  CblNet<Scalar>& model() { return *model_; }
  long step_count() const { return step_; }

  TensorArchive save_state(const nlohmann::json& extra_metadata = {}) const;
  void load_state(const TensorArchive& archive);

 private:
  CblConfig model_config_;
  TrainConfig train_;
  std::unique_ptr<CblNet<Scalar>> model_;
  nn::ParameterList<Scalar> params_;
  nn::Adam<Scalar> adam_;
  std::mt19937_64 rng_;
  long step_ = 0;
};

// Adam moments are stored next to the weights so a resumed run continues
// bit-for-bit.
template <typename Scalar>
void store_adam(TensorArchive& archive, const nn::Adam<Scalar>& adam, const nn::ParameterList<Scalar>& params,
                const std::string& prefix);
template <typename Scalar>
void load_adam(const TensorArchive& archive, nn::Adam<Scalar>& adam, const nn::ParameterList<Scalar>& params,
               const std::string& prefix);

extern template class GanTrainer<float>;
extern template class GanTrainer<double>;
extern template class CblTrainer<float>;
extern template class CblTrainer<double>;

}  // namespace artic::models

#endif  // ARTIC_MODELS_TRAIN_HPP_

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

#ifndef ARTIC_SRC_CLI_COMMANDS_HPP_
#define ARTIC_SRC_CLI_COMMANDS_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "cli/run_config.hpp"

namespace artic::cli {

struct CommandContext {
  RunConfig config;
  std::ostream& out;
  std::ostream& err;
};

struct PreprocessOptions {
  bool force = false;
};
int cmd_preprocess(CommandContext& ctx, const PreprocessOptions& options);

struct TrainOptions {
  std::string model = "hificar";
  std::string name;  // defaults to the model shortcut
  std::optional<std::filesystem::path> init_from;
  std::string vocoder;  // recorded for CNN-BiLSTM checkpoints
  bool force = false;
};
int cmd_train(CommandContext& ctx, const TrainOptions& options);

struct ModelOptions {
  std::string name = "hificar";
  std::string vocoder;  // checkpoint name overriding the one recorded at training
  std::string split = "test";
};
int cmd_synthesize(CommandContext& ctx, const ModelOptions& options);
int cmd_evaluate(CommandContext& ctx, const ModelOptions& options);
int cmd_benchmark(CommandContext& ctx, const ModelOptions& options);
int cmd_ablate(CommandContext& ctx, const ModelOptions& options);

struct CompareOptions {
  std::string mri_model = "hificar";
  std::string ema_model = "ema";
};
int cmd_compare_ema(CommandContext& ctx, const CompareOptions& options);

struct CorpusOptions {
  std::filesystem::path out;
  int utterances = 10;
  std::uint64_t seed = 0;
  double min_duration_s = 1.0;
  double max_duration_s = 2.0;
};
int cmd_synth_corpus(const CorpusOptions& options, std::ostream& out);

}  // namespace artic::cli

#endif  // ARTIC_SRC_CLI_COMMANDS_HPP_

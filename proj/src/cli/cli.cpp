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

#include "artic/cli.hpp"

#include <functional>
#include <optional>

#include <CLI11.hpp>

#include "artic/errors.hpp"
#include "cli/commands.hpp"
#include "cli/run_config.hpp"

namespace artic {

namespace {

struct Common {
  std::string config;
  std::vector<std::string> sets;
  std::optional<std::string> out;
  std::optional<std::uint64_t> seed;
};

void add_common(CLI::App* cmd, Common& common) {
  cmd->add_option("--config", common.config, "run configuration (JSON)")->required();
  cmd->add_option("--set", common.sets, "override a config value, e.g. --set train.steps=10");
  cmd->add_option("--out", common.out, "output directory (overrides output_dir)");
  cmd->add_option("--seed", common.seed, "seed for split, training and ablation unless set per section");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"artic: articulatory MRI to speech toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ARTIC_VERSION));

  Common common;
  cli::PreprocessOptions pre;
  cli::TrainOptions train;
  cli::ModelOptions model;
  cli::CompareOptions compare;
  cli::CorpusOptions corpus;
  std::optional<long> steps;
  std::optional<std::string> init_from;
  std::optional<int> trials;
  std::optional<std::string> device;
  std::optional<int> subsets;

  auto* preprocess = app.add_subcommand("preprocess", "prune, center and split a manifest; mix training targets");
  add_common(preprocess, common);
  preprocess->add_flag("--force", pre.force, "overwrite existing preprocessed outputs");

  auto* train_cmd = app.add_subcommand("train", "train a model and write checkpoints and a loss log");
  add_common(train_cmd, common);
  train_cmd->add_option("--model", train.model, "hificar | ema | vocoder | deep-vocoder | cbl | cbl-deep");
  train_cmd->add_option("--name", train.name, "checkpoint label (default: the model name)");
  train_cmd->add_option("--steps", steps, "training steps (overrides train.steps)");
  train_cmd->add_option("--init-from", init_from, "vocoder checkpoint to initialise the generator from");
  train_cmd->add_option("--vocoder", train.vocoder, "vocoder label recorded with a CNN-BiLSTM model");
  train_cmd->add_flag("--force", train.force, "overwrite existing checkpoints");

  std::vector<CLI::App*> model_cmds;
  for (const auto& [name, help] : std::vector<std::pair<std::string, std::string>>{
           {"synthesize", "synthesize a split with a trained model"},
           {"evaluate", "MCD and ASR CER of a trained model"},
           {"benchmark", "five-trial inference timing"},
           {"ablate", "feature-importance ablation"}}) {
    auto* cmd = app.add_subcommand(name, help);
    add_common(cmd, common);
    cmd->add_option("--model", model.name, "checkpoint label");
    cmd->add_option("--vocoder", model.vocoder, "vocoder label for CNN-BiLSTM models");
    cmd->add_option("--split", model.split, "train | val | test");
    model_cmds.push_back(cmd);
  }
  model_cmds[2]->add_option("--trials", trials, "timing trials (default 5)");
  model_cmds[2]->add_option("--device", device, "cpu (also read from $ARTIC_DEVICE)");
  model_cmds[3]->add_option("--subsets", subsets, "number of random subsets (overrides ablation.n_subsets)");

  auto* compare_cmd = app.add_subcommand("compare-ema", "MRI versus EMA models on the test split");
  add_common(compare_cmd, common);
  compare_cmd->add_option("--mri-model", compare.mri_model, "label of the MRI model");
  compare_cmd->add_option("--ema-model", compare.ema_model, "label of the EMA model");

  auto* corpus_cmd = app.add_subcommand("synth-corpus", "write a procedural toy corpus and manifest");
  corpus_cmd->add_option("--out", corpus.out, "corpus directory")->required();
  corpus_cmd->add_option("--utterances", corpus.utterances, "number of utterances");
  corpus_cmd->add_option("--seed", corpus.seed, "random seed");
  corpus_cmd->add_option("--min-duration", corpus.min_duration_s, "shortest utterance (s)");
  corpus_cmd->add_option("--max-duration", corpus.max_duration_s, "longest utterance (s)");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (corpus_cmd->parsed()) return cli::cmd_synth_corpus(corpus, out);

    // Flags win over --set, which wins over the file.
    std::vector<std::string> overrides = common.sets;
    if (common.out) overrides.push_back("output_dir=" + nlohmann::json(*common.out).dump());
    if (common.seed) overrides.push_back("seed=" + std::to_string(*common.seed));
    if (steps) overrides.push_back("train.steps=" + std::to_string(*steps));
    if (trials) overrides.push_back("benchmark.trials=" + std::to_string(*trials));
    if (device) overrides.push_back("benchmark.device=" + nlohmann::json(*device).dump());
    if (subsets) overrides.push_back("ablation.n_subsets=" + std::to_string(*subsets));
    cli::CommandContext ctx{cli::load_run_config(common.config, overrides), out, err};
    if (init_from) train.init_from = std::filesystem::absolute(*init_from);

    if (preprocess->parsed()) return cli::cmd_preprocess(ctx, pre);
    if (train_cmd->parsed()) return cli::cmd_train(ctx, train);
    if (model_cmds[0]->parsed()) return cli::cmd_synthesize(ctx, model);
    if (model_cmds[1]->parsed()) return cli::cmd_evaluate(ctx, model);
    if (model_cmds[2]->parsed()) return cli::cmd_benchmark(ctx, model);
    if (model_cmds[3]->parsed()) return cli::cmd_ablate(ctx, model);
    if (compare_cmd->parsed()) return cli::cmd_compare_ema(ctx, compare);
  } catch (const UserError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const NonFiniteError& e) {
    err << "error: training aborted: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace artic

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

#include "cli/commands.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

#include "artic/ablation/ablation.hpp"
#include "artic/ablation/importance_map.hpp"
#include "artic/errors.hpp"
#include "artic/eval/asr.hpp"
#include "artic/eval/benchmark.hpp"
#include "artic/eval/cer.hpp"
#include "artic/eval/mcd.hpp"
#include "artic/mel.hpp"
#include "artic/models/checkpoint.hpp"
#include "artic/models/synthesizer.hpp"
#include "artic/models/train.hpp"
#include "artic/provenance.hpp"
#include "artic/synthetic.hpp"
#include "cli/workspace.hpp"

namespace artic::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Re-raises the active exception with the utterance id prefixed, keeping the
// user/runtime distinction that decides the exit code.
[[noreturn]] void rethrow_with_id(const std::string& id) {
  try {
    throw;
  } catch (const UserError& e) {
    throw UserError(id + ": " + e.what());
  } catch (const NonFiniteError&) {
    throw;
  } catch (const std::exception& e) {
    throw Error(id + ": " + e.what());
  }
}

json provenance(const CommandContext& ctx, const std::string& command) {
  return provenance_block(command, ctx.config.doc, ctx.config.seeds());
}

bool non_empty_dir(const fs::path& dir) { return fs::is_directory(dir) && !fs::is_empty(dir); }

std::string fixed(double v, int digits) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

void write_text(const std::string& text, const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write " + path.string());
  out << text;
}

struct LoadedModel {
  std::unique_ptr<models::Synthesizer> synth;
  json metadata;
  std::string input;
  fs::path checkpoint;
};

LoadedModel load_model(const Workspace& ws, const std::string& name, const std::string& vocoder_override) {
  LoadedModel model;
  model.checkpoint = ws.latest_checkpoint(name);
  if (!fs::exists(model.checkpoint)) {
    throw LoadError("no checkpoint for model '" + name + "' at " + model.checkpoint.string() +
                    "; run 'artic train' first");
  }
  const models::TensorArchive archive = models::load_archive(model.checkpoint);
  model.metadata = archive.metadata;
  model.input = archive.metadata.value("input", "mri");
  fs::path vocoder;
  if (archive.metadata.value("kind", "") == "cbl") {
    const std::string vocoder_name = vocoder_override.empty() ? archive.metadata.value("vocoder", "") : vocoder_override;
    if (vocoder_name.empty()) throw ConfigError("model '" + name + "' needs a vocoder (--vocoder)");
    vocoder = ws.latest_checkpoint(vocoder_name);
    if (!fs::exists(vocoder)) throw LoadError("no checkpoint for vocoder '" + vocoder_name + "' at " + vocoder.string());
  }
  model.synth = models::load_synthesizer(model.checkpoint, vocoder);
  return model;
}

std::vector<UtteranceInfo> split_utterances(const SplitFile& split, const std::string& name) {
  auto utts = split.subset(parse_split(name));
  if (utts.empty()) throw ConfigError("the " + name + " split is empty");
  return utts;
}

void save_checkpoint(const models::TensorArchive& archive, const fs::path& dir, long step) {
  char file[32];
  std::snprintf(file, sizeof(file), "step_%07ld.artc", step);
  models::save_archive(archive, dir / file);
  fs::copy_file(dir / file, dir / "latest.artc", fs::copy_options::overwrite_existing);
}

}  // namespace

// ---------------------------------------------------------------------------

int cmd_preprocess(CommandContext& ctx, const PreprocessOptions& options) {
  const RunConfig& cfg = ctx.config;
  const Workspace ws(cfg.output_dir);
  FeatureConfig features = cfg.base_features();
  select_points(features.segment_labels, features.keep_labels);

  std::vector<UtteranceRecord> records = load_manifest(cfg.manifest, cfg.manifest_options);
  if (records.empty()) {
    ctx.err << "warning: manifest " << cfg.manifest << " lists no utterances; nothing written\n";
    return 0;
  }
  if (fs::exists(ws.preprocessed()) && !options.force) {
    throw ConfigError(ws.preprocessed().string() + " already exists; pass --force to overwrite");
  }
  records = make_split(std::move(records), cfg.split, cfg.split_seed);

  std::vector<ContourSequence> train_contours;
  for (const auto& r : records) {
    if (r.split == Split::kTrain) train_contours.push_back(r.contours);
  }
  features.center = fit_center(train_contours);

  std::vector<ContourSequence> pruned_train;
  for (const auto& c : train_contours) pruned_train.push_back(prune(c, features.keep_labels));
  ablation::ReferenceFrame frame;
  frame.positions = mean_point_positions(pruned_train);
  for (Index p : select_points(features.segment_labels, features.keep_labels)) {
    frame.point_indices.push_back(static_cast<int>(p));
  }

  if (options.force) fs::remove_all(ws.preprocessed());
  for (const char* sub : {"traj", "ema", "targets", "reference"}) fs::create_directories(ws.preprocessed() / sub);

  json utterances = json::array();
  json assignments = json::object();
  Index dropped_frames = 0;
  for (const auto& r : records) {
    try {
      ArticulatoryTrajectory traj = make_trajectory(r.contours, features);
      Waveform original = read_wav(r.original_wav_path, Provenance::kOriginal);
      if (original.sample_rate != kSampleRate) original = resample(original, kSampleRate);
      Waveform enhanced = read_wav(r.enhanced_wav_path, Provenance::kEnhanced);
      if (enhanced.sample_rate != kSampleRate) enhanced = resample(enhanced, kSampleRate);
      const Index frames_in = traj.num_frames();
      auto [t1, orig] = reconcile_lengths(std::move(traj), std::move(original), kSamplesPerFrame);
      auto [t2, enh] = reconcile_lengths(std::move(t1), std::move(enhanced), kSamplesPerFrame);
      orig.samples.conservativeResize(enh.size());
      if (t2.num_frames() < 1) throw AlignmentError("waveform shorter than one frame");
      dropped_frames += frames_in - t2.num_frames();
      const Waveform mixed = mix_targets(enh, orig);
      const EmaEstimate ema = estimate_ema(t2, features.ema_point_map);
      write_trajectory(t2, ws.trajectory(r.utterance_id));
      write_matrix(ema.data, ws.ema(r.utterance_id));
      write_wav(mixed, ws.target(r.utterance_id));
      write_wav(enh, ws.reference(r.utterance_id));
      utterances.push_back({{"id", r.utterance_id},
                            {"split", to_string(*r.split)},
                            {"frames", t2.num_frames()},
                            {"transcript", r.transcript}});
      assignments[r.utterance_id] = to_string(*r.split);
    } catch (...) {
      rethrow_with_id(r.utterance_id);
    }
  }

  save_feature_config(features, ws.features_file());
  write_json(frame.to_json(), ws.reference_frame_file());
  const SplitSizes sizes = count_splits(records);
  const json sizes_json = {{"train", sizes.train}, {"val", sizes.val}, {"test", sizes.test}};
  write_json({{"seed", cfg.split_seed},
              {"ratios", {{"train", cfg.split.train}, {"val", cfg.split.val}, {"test", cfg.split.test}}},
              {"sizes", sizes_json},
              {"fingerprint", config_hash(assignments)},
              {"utterances", utterances}},
             ws.split_file());
  const auto& center = *features.center;
  write_json({{"provenance", provenance(ctx, "preprocess")},
              {"num_utterances", records.size()},
              {"split_sizes", sizes_json},
              {"center_point", center.point_index},
              {"center_label", features.segment_labels[static_cast<std::size_t>(center.point_index)]},
              {"frames_trimmed", dropped_frames}},
             ws.preprocessed() / "preprocess_report.json");
  ctx.out << "preprocessed " << records.size() << " utterances (train " << sizes.train << ", val " << sizes.val
          << ", test " << sizes.test << "); center point " << center.point_index << " ("
          << features.segment_labels[static_cast<std::size_t>(center.point_index)] << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_train(CommandContext& ctx, const TrainOptions& options) {
  const RunConfig& cfg = ctx.config;
  const ModelSpec spec = model_spec(options.model);
  const std::string name = options.name.empty() ? spec.name : options.name;
  const Workspace ws(cfg.output_dir);
  const SplitFile split = load_split(ws);
  const auto train_utts = split_utterances(split, "train");
  const fs::path dir = ws.checkpoints(name);
  if (non_empty_dir(dir) && !options.force) {
    throw ConfigError(dir.string() + " already holds checkpoints; pass --force to overwrite");
  }
  if (options.init_from && spec.family != "hificar") throw ConfigError("--init-from applies to HiFi-CAR models only");

  json metadata = {{"model", name},
                   {"family", spec.family},
                   {"input", spec.input},
                   {"output", spec.output},
                   {"split_fingerprint", split.fingerprint},
                   {"provenance", provenance(ctx, "train")}};
  if (!options.vocoder.empty()) metadata["vocoder"] = options.vocoder;

  FeatureSource source(ws, cfg);
  const long steps = cfg.train.steps;
  const long every = cfg.train.checkpoint_every;
  const fs::path log_path = ws.reports() / (name + "_loss.csv");
  fs::create_directories(ws.reports());
  if (options.force) fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream log(log_path);
  if (!log) throw LoadError("cannot write " + log_path.string());
  log << std::setprecision(9);

  if (spec.family == "hificar") {
    std::vector<models::TrainingPair> pairs;
    for (const auto& u : train_utts) {
      try {
        pairs.push_back({u.utterance_id, source.load(spec.input, u), source.target(u).samples});
      } catch (...) {
        rethrow_with_id(u.utterance_id);
      }
    }
    models::GanTrainer<float> trainer(cfg.generator_config(cfg.representation_dim(spec.input)),
                                      cfg.discriminator_config(), cfg.train);
    if (options.init_from) {
      const models::TensorArchive archive = models::load_archive(*options.init_from);
      const models::InitReport report = trainer.init_generator_from(archive);
      write_json({{"provenance", provenance(ctx, "train")},
                  {"checkpoint", options.init_from->string()},
                  {"report", report.to_json()}},
                 ws.reports() / (name + "_init.json"));
      ctx.out << "init-from: copied " << report.copied.size() << " tensors, skipped " << report.skipped.size() << "\n";
      if (report.warning) ctx.err << "warning: " << *report.warning << "\n";
      metadata["init_from"] = options.init_from->string();
    }
    save_checkpoint(trainer.save_state(metadata), dir, 0);
    log << "step,discriminator,adversarial,feature_matching,mel,generator,learning_rate\n";
    trainer.train(pairs, steps, [&](const models::StepLosses& l) {
      log << l.step << ',' << l.discriminator << ',' << l.adversarial << ',' << l.feature_matching << ',' << l.mel
          << ',' << l.generator << ',' << cfg.train.learning_rate_at(l.step - 1) << '\n';
      if ((every > 0 && l.step % every == 0) || l.step == steps) save_checkpoint(trainer.save_state(metadata), dir, l.step);
    });
    if (steps > 0) ctx.out << "trained " << name << " for " << steps << " steps; final mel loss in " << log_path << "\n";
  } else {
    const int out_dim = cfg.representation_dim(spec.output);
    std::vector<models::CblPair> pairs;
    for (const auto& u : train_utts) {
      try {
        pairs.push_back({u.utterance_id, source.load(spec.input, u), source.load(spec.output, u)});
      } catch (...) {
        rethrow_with_id(u.utterance_id);
      }
    }
    models::CblTrainer<float> trainer(cfg.cbl_config(cfg.representation_dim(spec.input), out_dim), cfg.train);
    save_checkpoint(trainer.save_state(metadata), dir, 0);
    log << "step,l1,learning_rate\n";
    trainer.train(pairs, steps, [&](long step, double loss) {
      log << step << ',' << loss << ',' << cfg.train.learning_rate_at(step - 1) << '\n';
      if ((every > 0 && step % every == 0) || step == steps) save_checkpoint(trainer.save_state(metadata), dir, step);
    });
    if (steps > 0) ctx.out << "trained " << name << " for " << steps << " steps\n";
  }
  if (steps == 0) ctx.out << "steps=0: wrote the initial checkpoint only\n";
  return 0;
}

// ---------------------------------------------------------------------------

int cmd_synthesize(CommandContext& ctx, const ModelOptions& options) {
  const Workspace ws(ctx.config.output_dir);
  const SplitFile split = load_split(ws);
  const auto utts = split_utterances(split, options.split);
  LoadedModel model = load_model(ws, options.name, options.vocoder);
  FeatureSource source(ws, ctx.config);
  fs::create_directories(ws.synth(options.name));
  for (const auto& u : utts) {
    try {
      const Waveform wav{model.synth->synthesize(source.load(model.input, u)), kSampleRate, Provenance::kSynthesized};
      write_wav(wav, ws.synth(options.name) / (u.utterance_id + ".wav"));
    } catch (...) {
      rethrow_with_id(u.utterance_id);
    }
  }
  ctx.out << "synthesized " << utts.size() << " utterances to " << ws.synth(options.name) << "\n";
  return 0;
}

int cmd_evaluate(CommandContext& ctx, const ModelOptions& options) {
  const RunConfig& cfg = ctx.config;
  const Workspace ws(cfg.output_dir);
  const SplitFile split = load_split(ws);
  const auto utts = split_utterances(split, options.split);
  const auto asr = eval::make_asr_client(cfg.asr);
  LoadedModel model = load_model(ws, options.name, options.vocoder);
  FeatureSource source(ws, cfg);
  fs::create_directories(ws.synth(options.name));

  std::vector<std::string> ids, refs, hyps;
  std::vector<double> mcds;
  for (const auto& u : utts) {
    try {
      const Waveform wav{model.synth->synthesize(source.load(model.input, u)), kSampleRate, Provenance::kSynthesized};
      write_wav(wav, ws.synth(options.name) / (u.utterance_id + ".wav"));
      mcds.push_back(eval::mcd(source.reference(u), wav, cfg.mcd));
      hyps.push_back(eval::transcribe(wav, *asr, u.utterance_id));
      refs.push_back(u.transcript);
      ids.push_back(u.utterance_id);
    } catch (...) {
      rethrow_with_id(u.utterance_id);
    }
  }
  const eval::McdResult mcd = eval::make_mcd_result(ids, mcds);
  const eval::CerResult cer = eval::make_cer_result(ids, refs, hyps);
  write_json({{"provenance", provenance(ctx, "evaluate")},
              {"model", options.name},
              {"checkpoint", model.checkpoint.string()},
              {"split", options.split},
              {"mcd_settings", eval::to_json(cfg.mcd)},
              {"asr_client", asr->name()},
              {"mcd", mcd.to_json()},
              {"cer", cer.to_json()}},
             ws.reports() / ("evaluate_" + options.name + ".json"));
  std::ostringstream table;
  table << "Model\tMCD (dB)\tCER (%)\n"
        << options.name << '\t' << fixed(mcd.summary.mean, 2) << " +/- " << fixed(mcd.summary.std, 2) << '\t'
        << fixed(100.0 * cer.summary.mean, 1) << " +/- " << fixed(100.0 * cer.summary.std, 1) << '\n';
  write_text(table.str(), ws.reports() / ("evaluate_" + options.name + ".txt"));
  ctx.out << table.str();
  return 0;
}

int cmd_benchmark(CommandContext& ctx, const ModelOptions& options) {
  const RunConfig& cfg = ctx.config;
  const Workspace ws(cfg.output_dir);
  const std::string device = eval::resolve_device(cfg.device);
  const SplitFile split = load_split(ws);
  const auto utts = split_utterances(split, options.split);
  LoadedModel model = load_model(ws, options.name, options.vocoder);
  FeatureSource source(ws, cfg);
  std::vector<MatrixX<float>> inputs;
  for (const auto& u : utts) inputs.push_back(source.load(model.input, u));
  const eval::TimingResult timing = eval::benchmark_inference(*model.synth, inputs, device, cfg.trials);
  write_json({{"provenance", provenance(ctx, "benchmark")},
              {"model", options.name},
              {"checkpoint", model.checkpoint.string()},
              {"split", options.split},
              {"timing", timing.to_json()}},
             ws.reports() / ("benchmark_" + options.name + ".json"));
  std::ostringstream table;
  table << "Model\tDevice\tSeconds/utterance\tParameters\n"
        << options.name << '\t' << timing.device << '\t' << fixed(timing.mean, 4) << " +/- " << fixed(timing.std, 4)
        << '\t' << timing.parameter_count << '\n';
  write_text(table.str(), ws.reports() / ("benchmark_" + options.name + ".txt"));
  ctx.out << table.str();
  return 0;
}

int cmd_ablate(CommandContext& ctx, const ModelOptions& options) {
  const RunConfig& cfg = ctx.config;
  const Workspace ws(cfg.output_dir);
  const SplitFile split = load_split(ws);
  const auto utts = split_utterances(split, options.split);
  const FeatureConfig features = load_feature_config(ws.features_file());
  const auto columns = feature_columns(features);
  const ablation::ReferenceFrame frame = ablation::ReferenceFrame::from_json(read_json(ws.reference_frame_file()));
  LoadedModel model = load_model(ws, options.name, options.vocoder);
  if (model.input != "mri") throw ConfigError("ablation needs a model that reads MRI features");

  const ablation::SubsetPlan plan =
      ablation::make_plan(cfg.ablation_seed, cfg.n_subsets, cfg.keep_fraction, static_cast<int>(columns.size()));
  fs::create_directories(ws.reports());
  const std::string stem = "ablation_" + options.name;
  ablation::save_plan(plan, ws.reports() / (stem + "_plan.json"));

  FeatureSource source(ws, cfg);
  std::vector<ablation::TestUtterance> test;
  for (const auto& u : utts) test.push_back({u.utterance_id, source.load("mri", u), source.reference(u), u.transcript});
  const ablation::FeatureImportanceReport report = ablation::run_ablation(*model.synth, test, plan, cfg.mcd);

  json doc = report.to_json();
  doc["provenance"] = provenance(ctx, "ablate");
  doc["model"] = options.name;
  doc["plan"] = {{"seed", plan.seed},
                 {"n_subsets", plan.subsets.size()},
                 {"keep_fraction", plan.keep_fraction},
                 {"subset_size", plan.subset_size()},
                 {"file", stem + "_plan.json"}};
  json map = json::array();
  for (const auto& c : columns) map.push_back({{"point", c.point_index}, {"axis", c.axis == 0 ? "x" : "y"}});
  doc["feature_index_map"] = map;
  doc["mcd_settings"] = eval::to_json(cfg.mcd);
  write_json(doc, ws.reports() / (stem + ".json"));
  ablation::write_importance_csv(report, columns, ws.reports() / (stem + ".csv"));
  ablation::render_importance_map(report, columns, frame, ws.reports() / (stem + ".png"));
  if (report.has_failures()) ctx.err << "warning: some subsets failed; see " << stem << ".json\n";
  ctx.out << "ablation over " << plan.subsets.size() << " subsets written to " << ws.reports() / (stem + ".json")
          << "\n";
  return 0;
}

int cmd_compare_ema(CommandContext& ctx, const CompareOptions& options) {
  const RunConfig& cfg = ctx.config;
  const Workspace ws(cfg.output_dir);
  const SplitFile split = load_split(ws);
  const auto utts = split_utterances(split, "test");
  LoadedModel mri = load_model(ws, options.mri_model, "");
  LoadedModel ema = load_model(ws, options.ema_model, "");
  if (mri.input != "mri") throw ConfigError("model '" + options.mri_model + "' does not read MRI features");
  if (ema.input != "ema") throw ConfigError("model '" + options.ema_model + "' does not read EMA features");
  const auto asr = eval::make_asr_client(cfg.asr);
  FeatureSource source(ws, cfg);
  std::vector<ablation::ComparisonUtterance> test;
  for (const auto& u : utts) {
    test.push_back({u.utterance_id, source.load("mri", u), source.load("ema", u), source.reference(u), u.transcript});
  }
  const ablation::EmaComparison result =
      ablation::compare_ema(*mri.synth, *ema.synth, test, mri.metadata.value("split_fingerprint", ""),
                            ema.metadata.value("split_fingerprint", ""), asr.get(), cfg.mcd);
  json doc = result.to_json();
  doc["provenance"] = provenance(ctx, "compare-ema");
  doc["models"] = {{"mri", options.mri_model}, {"ema", options.ema_model}};
  write_json(doc, ws.reports() / "compare_ema.json");
  std::ostringstream table;
  table << "Features\tMCD (dB)\tCER (%)\n";
  for (const auto* m : {&result.mri, &result.ema}) {
    table << m->name << '\t' << fixed(m->mcd.summary.mean, 3) << " +/- " << fixed(m->mcd.summary.std, 3) << '\t'
          << fixed(100.0 * m->cer->summary.mean, 1) << " +/- " << fixed(100.0 * m->cer->summary.std, 1) << '\n';
  }
  table << "winner\t" << result.mcd_winner << '\t' << result.cer_winner << '\n';
  write_text(table.str(), ws.reports() / "compare_ema.txt");
  ctx.out << table.str();
  return 0;
}

int cmd_synth_corpus(const CorpusOptions& options, std::ostream& out) {
  SyntheticCorpusOptions o;
  o.utterances = options.utterances;
  o.seed = options.seed;
  o.min_duration_s = options.min_duration_s;
  o.max_duration_s = options.max_duration_s;
  const fs::path manifest = write_synthetic_corpus(options.out, o);
  out << "wrote " << options.utterances << " synthetic utterances; manifest " << manifest << "\n";
  return 0;
}

}  // namespace artic::cli

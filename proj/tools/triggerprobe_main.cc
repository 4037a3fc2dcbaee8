// Copyright 2026 The triggerprobe Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// triggerprobe: chi-squared clue analysis, targeted augmentation and
// trigger-robustness evaluation for tweet classifiers.

#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "triggerprobe/commands.h"
#include "triggerprobe/kernels/chi2.h"

namespace tp = triggerprobe;

namespace {

void AddCommon(CLI::App *cmd, tp::RunConfig &cfg) {
  cmd->add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Seed for all randomness")->capture_default_str();
}

void AddCorpusOptions(CLI::App *cmd, tp::RunConfig &cfg) {
  cmd->add_option("--top-n", cfg.top_n, "Replacement-set size")->capture_default_str();
  cmd->add_option("--min-df", cfg.min_df, "Minimum document frequency for a term")
      ->capture_default_str();
}

void AddTriggerOptions(CLI::App *cmd, tp::RunConfig &cfg) {
  cmd->add_option("--trigger", cfg.trigger, "Raw trigger phrase (default \"10 deaths\")");
  cmd->add_option("--template", cfg.trigger_template,
                  "Trigger template with a {n} placeholder (default \"{n} deaths\")");
  cmd->add_option("--n", cfg.trigger_n, "Value substituted for {n}");
}

void AddModelOptions(CLI::App *cmd, tp::RunConfig &cfg, std::string &model,
                     std::string &filler) {
  cmd->add_option("--dev", cfg.dev_path, "Dev TSV")->required();
  cmd->add_option("--alpha", cfg.alpha, "Naive Bayes smoothing")->capture_default_str();
  cmd->add_option("--model", model, "baseline | backend")
      ->check(CLI::IsMember({"baseline", "backend"}))
      ->capture_default_str();
  cmd->add_flag("--with-aug", cfg.with_aug, "Also train on the augmented corpus");
  cmd->add_option("--filler", filler, "builtin | backend")
      ->check(CLI::IsMember({"builtin", "backend"}))
      ->capture_default_str();
  cmd->add_option("--backend", cfg.backend_target,
                  "Backend target: cmd:<command>, tcp:<host>:<port> or <host>:<port> "
                  "(env TRIGGERPROBE_BACKEND)");
  cmd->add_option("--top-k", cfg.top_k, "Fill-mask candidates per query")->capture_default_str();
  cmd->add_option("--threads", cfg.threads, "Worker threads for built-in augmentation")
      ->capture_default_str();
  cmd->add_option("--lr", cfg.train_params.learning_rate, "Backend learning rate")
      ->capture_default_str();
  cmd->add_option("--batch-size", cfg.train_params.batch_size, "Backend batch size")
      ->capture_default_str();
  cmd->add_option("--max-len", cfg.train_params.max_len, "Backend max sequence length")
      ->capture_default_str();
  cmd->add_option("--epochs", cfg.train_params.epochs, "Backend epochs")->capture_default_str();
  cmd->add_option("--dropout", cfg.train_params.dropout, "Backend classifier dropout")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"triggerprobe: probe and harden tweet classifiers against easy clues"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "triggerprobe 1.0 (kernels: " +
                                        std::string(tp::kernels::IsaName(tp::kernels::ActiveIsa())) +
                                        ")");

  tp::RunConfig cfg;
  std::string model = "baseline";
  std::string filler = "builtin";

  auto *stats = app.add_subcommand("stats", "Rank unigrams by chi-squared and write the replacement set");
  stats->add_option("--train", cfg.train_path, "Train TSV")->required();
  AddCorpusOptions(stats, cfg);
  AddCommon(stats, cfg);

  auto *augment = app.add_subcommand("augment", "Mask replacement-set words and refill (doubles the corpus)");
  augment->add_option("--train", cfg.train_path, "Train TSV")->required();
  augment->add_option("--rset", cfg.rset_path, "Replacement set from `stats` (else computed)");
  AddCorpusOptions(augment, cfg);
  augment->add_option("--filler", filler, "builtin | backend")
      ->check(CLI::IsMember({"builtin", "backend"}))
      ->capture_default_str();
  augment->add_option("--backend", cfg.backend_target,
                      "Backend target (env TRIGGERPROBE_BACKEND)");
  augment->add_option("--top-k", cfg.top_k, "Fill-mask candidates per query")->capture_default_str();
  augment->add_option("--threads", cfg.threads, "Worker threads for the built-in filler")
      ->capture_default_str();
  AddCommon(augment, cfg);

  auto *perturb = app.add_subcommand("perturb", "Prepend a trigger phrase to every example");
  perturb->add_option("--input,--dev", cfg.input_path, "TSV to perturb")->required();
  AddTriggerOptions(perturb, cfg);
  AddCommon(perturb, cfg);

  auto *train_eval = app.add_subcommand("train-eval", "Train, evaluate on dev, aggregate over runs");
  train_eval->add_option("--train", cfg.train_path, "Train TSV")->required();
  train_eval->add_option("--repeat", cfg.repeat, "Number of runs (seeds seed..seed+repeat-1)")
      ->capture_default_str();
  AddCorpusOptions(train_eval, cfg);
  AddModelOptions(train_eval, cfg, model, filler);
  AddCommon(train_eval, cfg);

  auto *robust = app.add_subcommand("robustness", "Clean vs triggered dev F1");
  robust->add_option("--train", cfg.train_path, "Train TSV")->required();
  AddCorpusOptions(robust, cfg);
  AddModelOptions(robust, cfg, model, filler);
  AddTriggerOptions(robust, cfg);
  AddCommon(robust, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : tp::ExitCodeFor(tp::ErrorKind::kInvalidArgument);
  }
  cfg.model = model == "backend" ? tp::ModelChoice::kBackend : tp::ModelChoice::kBaseline;
  cfg.filler = filler == "backend" ? tp::FillerChoice::kBackend : tp::FillerChoice::kBuiltin;

  try {
    if (stats->parsed()) {
      const auto rset = tp::CmdStats(cfg);
      std::cout << tp::FormatTopTable(rset);
    } else if (augment->parsed()) {
      const auto result = tp::CmdAugment(cfg);
      std::cout << "wrote " << result.dataset.size() << " rows\n";
    } else if (perturb->parsed()) {
      const auto perturbed = tp::CmdPerturb(cfg);
      std::cout << "wrote " << perturbed.size() << " rows\n";
    } else if (train_eval->parsed()) {
      std::cout << tp::FormatReport(tp::CmdTrainEval(cfg));
    } else if (robust->parsed()) {
      const auto outcome = tp::CmdRobustness(cfg);
      std::cout << "[plain]\n" << tp::FormatReport(outcome.plain);
      if (outcome.augmented) std::cout << "\n[augmented]\n" << tp::FormatReport(*outcome.augmented);
    }
  } catch (const tp::Error &e) {
    std::cerr << "triggerprobe: " << tp::ErrorKindName(e.kind()) << " error: " << e.what()
              << "\n";
    return tp::ExitCodeFor(e.kind());
  } catch (const std::exception &e) {
    std::cerr << "triggerprobe: internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

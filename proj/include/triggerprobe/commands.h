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

#ifndef TRIGGERPROBE_COMMANDS_H_
#define TRIGGERPROBE_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <string>

#include "triggerprobe/augmentor.h"
#include "triggerprobe/errors.h"
#include "triggerprobe/evaluator.h"
#include "triggerprobe/feature_stats.h"

namespace triggerprobe {

enum class FillerChoice { kBuiltin, kBackend };
enum class ModelChoice { kBaseline, kBackend };

inline constexpr std::uint64_t kDefaultSeed = 13;

// Fine-tuning settings forwarded to a backend's train op.
struct BackendTrainParams {
  double learning_rate = 4e-5;
  int batch_size = 32;
  int max_len = 70;
  int epochs = 7;
  double dropout = 0.1;
};

struct RunConfig {
  std::string train_path;
  std::string dev_path;
  std::string test_path;
  std::string input_path;  // perturb input; defaults to dev_path
  std::string rset_path;   // precomputed replacement set for augment
  std::string out_dir = ".";

  std::int64_t top_n = static_cast<std::int64_t>(kDefaultTopN);
  std::size_t min_df = kDefaultMinDf;
  double alpha = 1.0;
  std::uint64_t seed = kDefaultSeed;
  int repeat = 1;
  unsigned threads = 1;

  std::string trigger;           // raw trigger; wins over the template
  std::string trigger_template;  // e.g. "{n} deaths"
  std::optional<std::int64_t> trigger_n;

  FillerChoice filler = FillerChoice::kBuiltin;
  ModelChoice model = ModelChoice::kBaseline;
  std::string backend_target;  // falls back to $TRIGGERPROBE_BACKEND
  int top_k = kDefaultTopK;
  bool with_aug = false;
  BackendTrainParams train_params;
};

// Throws InvalidArgument / IoError when the config cannot run.
void ValidateConfig(const RunConfig &config, bool needs_train, bool needs_dev);

// Raw --trigger if set, else the rendered template (default "10 deaths").
std::string ResolveTrigger(const RunConfig &config);
std::string ResolveBackendTarget(const RunConfig &config);

// Output file names, relative to RunConfig::out_dir.
inline constexpr char kRsetFile[] = "replacement_set.tsv";
inline constexpr char kTopTableFile[] = "top_terms.txt";
inline constexpr char kAugmentedFile[] = "augmented.tsv";
inline constexpr char kProvenanceFile[] = "augmented.provenance.jsonl";
inline constexpr char kPerturbedFile[] = "perturbed.tsv";
inline constexpr char kEvalJsonFile[] = "eval_report.json";
inline constexpr char kEvalTextFile[] = "eval_report.txt";
inline constexpr char kRobustJsonFile[] = "robustness_report.json";
inline constexpr char kRobustTextFile[] = "robustness_report.txt";

ReplacementSet CmdStats(const RunConfig &config);
AugmentResult CmdAugment(const RunConfig &config);
LabeledDataset CmdPerturb(const RunConfig &config);
EvalReport CmdTrainEval(const RunConfig &config);

struct RobustnessOutcome {
  RobustnessReport plain;
  std::optional<RobustnessReport> augmented;
};
RobustnessOutcome CmdRobustness(const RunConfig &config);

// Process exit code per error class; 0 is success.
int ExitCodeFor(ErrorKind kind);

// Pieces shared with the tests.
ReplacementSet ComputeReplacementSet(const LabeledDataset &train, std::int64_t top_n,
                                     std::size_t min_df);
// Trains a baseline model, optionally on the augmented training set, and
// returns its robustness on `dev`.
RobustnessReport BaselineRobustness(const LabeledDataset &train, const LabeledDataset &dev,
                                    const std::string &trigger, bool augment,
                                    std::int64_t top_n, std::size_t min_df, double alpha,
                                    std::uint64_t seed);

}  // namespace triggerprobe

#endif  // TRIGGERPROBE_COMMANDS_H_

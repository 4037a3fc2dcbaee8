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

#ifndef TRIGGERPROBE_EVALUATOR_H_
#define TRIGGERPROBE_EVALUATOR_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "triggerprobe/classifier.h"
#include "triggerprobe/corpus.h"

namespace triggerprobe {

// Positive class is INFORMATIVE.
struct Confusion {
  std::int64_t tp = 0;
  std::int64_t fp = 0;
  std::int64_t fn = 0;
  std::int64_t tn = 0;

  std::int64_t total() const { return tp + fp + fn + tn; }
  bool operator==(const Confusion &) const = default;
};

struct EvalReport {
  Confusion confusion;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
  // F1 with UNINFORMATIVE as the positive class (diagnostic only).
  double f1_uninformative = 0;
  // Aggregates. A plain Score() result has n_runs == 1 and no mean/std.
  std::int64_t n_runs = 1;
  std::optional<double> f1_mean;
  std::optional<double> f1_std;
  std::vector<double> run_f1;
};

// Precision, recall and F1 from counts; a zero denominator yields 0.
EvalReport ReportFromConfusion(const Confusion &confusion);

// Throws InvalidArgument on a length mismatch or empty input.
EvalReport Score(const std::vector<Label> &preds, const std::vector<Label> &golds);

// Pools confusion counts across runs (precision/recall/f1 are recomputed
// from the pooled counts) and records the per-run F1 mean and sample
// standard deviation (n - 1 denominator, 0 for a single run). Throws
// InvalidArgument for an empty list.
EvalReport Aggregate(const std::vector<EvalReport> &reports);

// "92.72 (0.18)": F1 mean and std in percentage points, two decimals.
std::string FormatMeanStd(const EvalReport &report);

struct RobustnessReport {
  EvalReport clean;
  EvalReport adversarial;
  std::string trigger;
  double f1_drop = 0;  // clean.f1 - adversarial.f1
  // Examples predicted UNINFORMATIVE clean and INFORMATIVE with the trigger.
  std::int64_t flipped_to_informative = 0;
  // The subset of those whose gold label is UNINFORMATIVE.
  std::int64_t gold_uninformative_flipped = 0;
};

// Evaluates `model` on `dev` and on `dev` with `trigger` prepended.
RobustnessReport Robustness(Classifier &model, const LabeledDataset &dev,
                            const std::string &trigger);

inline constexpr char kEvalSchema[] = "triggerprobe.eval-report/v1";
inline constexpr char kRobustnessSchema[] = "triggerprobe.robustness-report/v1";

nlohmann::json ToJson(const EvalReport &report);
nlohmann::json ToJson(const RobustnessReport &report);

std::string FormatReport(const EvalReport &report);
std::string FormatReport(const RobustnessReport &report);

}  // namespace triggerprobe

#endif  // TRIGGERPROBE_EVALUATOR_H_

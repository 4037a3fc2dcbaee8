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

#include "triggerprobe/evaluator.h"

#include <cmath>
#include <cstdio>
#include <string>

#include "triggerprobe/errors.h"
#include "triggerprobe/perturber.h"

namespace triggerprobe {

namespace {

double Ratio(std::int64_t num, std::int64_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string Percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v * 100.0);
  return buf;
}

nlohmann::json ConfusionJson(const Confusion &c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}};
}

nlohmann::json ReportBody(const EvalReport &r) {
  nlohmann::json j = {
      {"confusion", ConfusionJson(r.confusion)},
      {"precision", r.precision},
      {"recall", r.recall},
      {"f1", r.f1},
      {"f1_uninformative", r.f1_uninformative},
      {"n_runs", r.n_runs},
      {"display", FormatMeanStd(r)},
  };
  j["f1_mean"] = r.f1_mean ? nlohmann::json(*r.f1_mean) : nlohmann::json(nullptr);
  j["f1_std"] = r.f1_std ? nlohmann::json(*r.f1_std) : nlohmann::json(nullptr);
  j["run_f1"] = r.run_f1;
  return j;
}

}  // namespace

EvalReport ReportFromConfusion(const Confusion &confusion) {
  EvalReport r;
  r.confusion = confusion;
  r.precision = Ratio(confusion.tp, confusion.tp + confusion.fp);
  r.recall = Ratio(confusion.tp, confusion.tp + confusion.fn);
  // 2PR/(P+R) reduced to a single rounding.
  r.f1 = confusion.tp == 0 ? 0.0
                           : 2.0 * static_cast<double>(confusion.tp) /
                                 static_cast<double>(2 * confusion.tp + confusion.fp +
                                                     confusion.fn);
  r.f1_uninformative = confusion.tn == 0
                           ? 0.0
                           : 2.0 * static_cast<double>(confusion.tn) /
                                 static_cast<double>(2 * confusion.tn + confusion.fn +
                                                     confusion.fp);
  return r;
}

EvalReport Score(const std::vector<Label> &preds, const std::vector<Label> &golds) {
  if (preds.size() != golds.size()) {
    throw InvalidArgument("score: " + std::to_string(preds.size()) +
                          " predictions for " + std::to_string(golds.size()) +
                          " gold labels");
  }
  if (preds.empty()) throw InvalidArgument("score: nothing to evaluate");
  Confusion c;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const bool pred_pos = preds[i] == Label::kInformative;
    const bool gold_pos = golds[i] == Label::kInformative;
    if (pred_pos && gold_pos) ++c.tp;
    else if (pred_pos) ++c.fp;
    else if (gold_pos) ++c.fn;
    else ++c.tn;
  }
  return ReportFromConfusion(c);
}

EvalReport Aggregate(const std::vector<EvalReport> &reports) {
  if (reports.empty()) throw InvalidArgument("aggregate: no reports");
  Confusion pooled;
  std::vector<double> f1s;
  for (const EvalReport &r : reports) {
    pooled.tp += r.confusion.tp;
    pooled.fp += r.confusion.fp;
    pooled.fn += r.confusion.fn;
    pooled.tn += r.confusion.tn;
    f1s.push_back(r.f1);
  }
  double sum = 0;
  for (double f : f1s) sum += f;
  const double n = static_cast<double>(f1s.size());
  const double mean = sum / n;
  double ss = 0;
  for (double f : f1s) ss += (f - mean) * (f - mean);
  const double std_dev = f1s.size() > 1 ? std::sqrt(ss / (n - 1)) : 0.0;

  EvalReport out = ReportFromConfusion(pooled);
  out.n_runs = static_cast<std::int64_t>(f1s.size());
  out.f1_mean = mean;
  out.f1_std = std_dev;
  out.run_f1 = std::move(f1s);
  return out;
}

std::string FormatMeanStd(const EvalReport &report) {
  const double mean = report.f1_mean.value_or(report.f1);
  const double sd = report.f1_std.value_or(0.0);
  return Percent(mean) + " (" + Percent(sd) + ")";
}

RobustnessReport Robustness(Classifier &model, const LabeledDataset &dev,
                            const std::string &trigger) {
  const std::vector<Label> golds = Golds(dev);
  const LabeledDataset perturbed = PerturbDataset(dev, trigger);
  const std::vector<Label> clean_preds = model.PredictBatch(Texts(dev));
  const std::vector<Label> adv_preds = model.PredictBatch(Texts(perturbed));

  RobustnessReport r;
  r.trigger = trigger;
  r.clean = Score(clean_preds, golds);
  r.adversarial = Score(adv_preds, golds);
  r.f1_drop = r.clean.f1 - r.adversarial.f1;
  for (std::size_t i = 0; i < golds.size(); ++i) {
    if (clean_preds[i] == Label::kUninformative && adv_preds[i] == Label::kInformative) {
      ++r.flipped_to_informative;
      if (golds[i] == Label::kUninformative) ++r.gold_uninformative_flipped;
    }
  }
  return r;
}

nlohmann::json ToJson(const EvalReport &report) {
  nlohmann::json j = ReportBody(report);
  j["schema"] = kEvalSchema;
  return j;
}

nlohmann::json ToJson(const RobustnessReport &report) {
  return {
      {"schema", kRobustnessSchema},
      {"trigger", report.trigger},
      {"clean", ReportBody(report.clean)},
      {"adversarial", ReportBody(report.adversarial)},
      {"f1_drop", report.f1_drop},
      {"flipped_to_informative", report.flipped_to_informative},
      {"gold_uninformative_flipped", report.gold_uninformative_flipped},
  };
}

std::string FormatReport(const EvalReport &report) {
  const Confusion &c = report.confusion;
  std::string out;
  out += "runs:      " + std::to_string(report.n_runs) + "\n";
  out += "F1:        " + FormatMeanStd(report) + "\n";
  out += "precision: " + Percent(report.precision) + "\n";
  out += "recall:    " + Percent(report.recall) + "\n";
  out += "confusion: tp=" + std::to_string(c.tp) + " fp=" + std::to_string(c.fp) +
         " fn=" + std::to_string(c.fn) + " tn=" + std::to_string(c.tn) + "\n";
  return out;
}

std::string FormatReport(const RobustnessReport &report) {
  std::string out;
  out += "trigger:      \"" + report.trigger + "\"\n";
  out += "clean F1:     " + Percent(report.clean.f1) + "\n";
  out += "trigger F1:   " + Percent(report.adversarial.f1) + "\n";
  out += "F1 drop:      " + Percent(report.f1_drop) + "\n";
  out += "UNINFORMATIVE-class F1: " + Percent(report.clean.f1_uninformative) + " -> " +
         Percent(report.adversarial.f1_uninformative) + "\n";
  out += "flipped U->I: " + std::to_string(report.flipped_to_informative) + " (" +
         std::to_string(report.gold_uninformative_flipped) +
         " gold UNINFORMATIVE)\n";
  return out;
}

}  // namespace triggerprobe

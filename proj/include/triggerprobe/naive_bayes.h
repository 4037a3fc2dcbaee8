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

#ifndef TRIGGERPROBE_NAIVE_BAYES_H_
#define TRIGGERPROBE_NAIVE_BAYES_H_

#include <array>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "triggerprobe/classifier.h"
#include "triggerprobe/corpus.h"

namespace triggerprobe {

inline constexpr double kDefaultAlpha = 1.0;

struct Prediction {
  Label label = Label::kUninformative;
  std::array<double, kNumLabels> scores{};  // log-space, unnormalized

  double margin() const {
    return scores[LabelIndex(Label::kInformative)] -
           scores[LabelIndex(Label::kUninformative)];
  }
};

// Multinomial Naive Bayes over the vocabulary it was trained with. Immutable
// after construction; Predict is safe to call concurrently.
class NaiveBayesModel {
 public:
  double alpha() const { return alpha_; }
  std::size_t vocab_size() const { return terms_.size(); }
  const std::vector<std::string> &terms() const { return terms_; }
  double class_log_prior(Label label) const { return log_prior_[LabelIndex(label)]; }

  // -inf-free: every vocabulary term has a finite value per label. Returns
  // false for out-of-vocabulary tokens.
  bool TokenLogLikelihood(std::string_view token, Label label, double *out) const;
  double TokenLogLikelihood(std::size_t index, Label label) const {
    return log_likelihood_[LabelIndex(label)][index];
  }

  // Log-likelihood ratio INFORMATIVE vs UNINFORMATIVE summed over the in-vocab
  // tokens of `text` (the text's contribution to Prediction::margin()).
  double TokenLogRatio(std::string_view text) const;

  // Out-of-vocabulary tokens are ignored. Exact score ties go to
  // UNINFORMATIVE.
  Prediction Predict(std::string_view text) const;

  std::string Serialize() const;
  static NaiveBayesModel Parse(std::string_view text);

 private:
  friend NaiveBayesModel TrainNaiveBayes(const LabeledDataset &, const Vocabulary &,
                                         double);

  std::int64_t IndexOf(std::string_view token) const;

  double alpha_ = kDefaultAlpha;
  std::array<double, kNumLabels> log_prior_{};
  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t> index_;
  std::array<std::vector<double>, kNumLabels> log_likelihood_;
};

// log P(c) = ln(N_c / N);
// log P(t | c) = ln((count(t, c) + alpha) / (sum_t' count(t', c) + alpha |V|)).
// Throws DataError when a label is missing or the vocabulary is empty,
// InvalidArgument for alpha <= 0 or a vocabulary built from other data.
NaiveBayesModel TrainNaiveBayes(const LabeledDataset &dataset,
                                const Vocabulary &vocab,
                                double alpha = kDefaultAlpha);

class NaiveBayesClassifier : public Classifier {
 public:
  explicit NaiveBayesClassifier(const NaiveBayesModel &model) : model_(model) {}
  std::vector<Label> PredictBatch(const std::vector<std::string> &texts) override;

 private:
  const NaiveBayesModel &model_;
};

}  // namespace triggerprobe

#endif  // TRIGGERPROBE_NAIVE_BAYES_H_

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

#include "triggerprobe/naive_bayes.h"

#include <charconv>
#include <cmath>
#include <string>
#include <system_error>

#include "triggerprobe/errors.h"

namespace triggerprobe {

namespace {

constexpr std::string_view kModelMagic = "# triggerprobe naive-bayes v1";

std::string ShortestDouble(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

double ParseDouble(std::string_view field, std::size_t line) {
  double value = 0;
  const auto r = std::from_chars(field.data(), field.data() + field.size(), value);
  if (r.ec != std::errc() || r.ptr != field.data() + field.size()) {
    throw ParseError("model line " + std::to_string(line) + ": bad number '" +
                     std::string(field) + "'");
  }
  return value;
}

std::vector<std::string_view> Fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (std::size_t tab; (tab = line.find('\t', start)) != std::string_view::npos;
       start = tab + 1) {
    out.push_back(line.substr(start, tab - start));
  }
  out.push_back(line.substr(start));
  return out;
}

}  // namespace

NaiveBayesModel TrainNaiveBayes(const LabeledDataset &dataset,
                                const Vocabulary &vocab, double alpha) {
  if (!(alpha > 0) || !std::isfinite(alpha)) {
    throw InvalidArgument("alpha must be a positive finite number");
  }
  if (vocab.empty()) throw DataError("naive bayes: vocabulary is empty");
  if (!dataset.fully_labeled()) throw DataError("naive bayes: dataset has unlabeled examples");
  const auto docs = dataset.LabelCounts();
  for (Label label : kAllLabels) {
    if (docs[LabelIndex(label)] == 0) {
      throw DataError("naive bayes: no training examples labeled " +
                      std::string(LabelName(label)));
    }
    if (static_cast<std::int64_t>(docs[LabelIndex(label)]) !=
        vocab.class_doc_counts()[LabelIndex(label)]) {
      throw InvalidArgument("naive bayes: vocabulary was not built from this dataset");
    }
  }

  NaiveBayesModel model;
  model.alpha_ = alpha;
  model.terms_ = vocab.terms();
  model.index_.reserve(model.terms_.size());
  for (std::size_t i = 0; i < model.terms_.size(); ++i) model.index_.emplace(model.terms_[i], i);

  const double n = static_cast<double>(dataset.size());
  const double v = static_cast<double>(vocab.size());
  for (Label label : kAllLabels) {
    const std::size_t c = LabelIndex(label);
    model.log_prior_[c] = std::log(static_cast<double>(docs[c]) / n);
    std::int64_t class_total = 0;
    for (std::size_t i = 0; i < vocab.size(); ++i) class_total += vocab.term_class_count(i, label);
    const double denom = static_cast<double>(class_total) + alpha * v;
    auto &ll = model.log_likelihood_[c];
    ll.resize(vocab.size());
    for (std::size_t i = 0; i < vocab.size(); ++i) {
      ll[i] = std::log((static_cast<double>(vocab.term_class_count(i, label)) + alpha) / denom);
    }
  }
  return model;
}

std::int64_t NaiveBayesModel::IndexOf(std::string_view token) const {
  const auto it = index_.find(std::string(token));
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

bool NaiveBayesModel::TokenLogLikelihood(std::string_view token, Label label,
                                         double *out) const {
  const std::int64_t i = IndexOf(token);
  if (i < 0) return false;
  *out = log_likelihood_[LabelIndex(label)][static_cast<std::size_t>(i)];
  return true;
}

double NaiveBayesModel::TokenLogRatio(std::string_view text) const {
  double ratio = 0;
  for (const std::string &t : Tokenize(text)) {
    const std::int64_t i = IndexOf(t);
    if (i < 0) continue;
    const auto k = static_cast<std::size_t>(i);
    ratio += log_likelihood_[0][k] - log_likelihood_[1][k];
  }
  return ratio;
}

Prediction NaiveBayesModel::Predict(std::string_view text) const {
  Prediction p;
  p.scores = log_prior_;
  for (const std::string &t : Tokenize(text)) {
    const std::int64_t i = IndexOf(t);
    if (i < 0) continue;
    const auto k = static_cast<std::size_t>(i);
    p.scores[0] += log_likelihood_[0][k];
    p.scores[1] += log_likelihood_[1][k];
  }
  p.label = p.scores[LabelIndex(Label::kInformative)] >
                    p.scores[LabelIndex(Label::kUninformative)]
                ? Label::kInformative
                : Label::kUninformative;
  return p;
}

std::string NaiveBayesModel::Serialize() const {
  std::string out(kModelMagic);
  out += "\nalpha\t" + ShortestDouble(alpha_) + "\n";
  out += "prior\t" + ShortestDouble(log_prior_[0]) + "\t" + ShortestDouble(log_prior_[1]) + "\n";
  out += "terms\t" + std::to_string(terms_.size()) + "\n";
  out += "term\tloglik_informative\tloglik_uninformative\n";
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    out += terms_[i];
    out += '\t' + ShortestDouble(log_likelihood_[0][i]);
    out += '\t' + ShortestDouble(log_likelihood_[1][i]);
    out += '\n';
  }
  return out;
}

NaiveBayesModel NaiveBayesModel::Parse(std::string_view text) {
  std::vector<std::string_view> lines;
  for (std::size_t start = 0; start < text.size();) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    lines.push_back(text.substr(start, nl - start));
    start = nl + 1;
  }
  if (lines.size() < 5 || lines[0] != kModelMagic) {
    throw ParseError("model: missing or unsupported version header");
  }
  NaiveBayesModel model;
  auto alpha = Fields(lines[1]);
  auto prior = Fields(lines[2]);
  auto count = Fields(lines[3]);
  if (alpha.size() != 2 || alpha[0] != "alpha" || prior.size() != 3 ||
      prior[0] != "prior" || count.size() != 2 || count[0] != "terms") {
    throw ParseError("model: malformed preamble");
  }
  model.alpha_ = ParseDouble(alpha[1], 2);
  model.log_prior_ = {ParseDouble(prior[1], 3), ParseDouble(prior[2], 3)};
  std::size_t n_terms = 0;
  const auto r = std::from_chars(count[1].data(), count[1].data() + count[1].size(), n_terms);
  if (r.ec != std::errc()) throw ParseError("model line 4: bad term count");
  if (lines.size() < 5 + n_terms) throw ParseError("model: truncated term table");
  for (std::size_t i = 0; i < n_terms; ++i) {
    const auto f = Fields(lines[5 + i]);
    if (f.size() != 3) throw ParseError("model line " + std::to_string(6 + i) + ": expected 3 columns");
    model.terms_.emplace_back(f[0]);
    model.index_.emplace(model.terms_.back(), i);
    model.log_likelihood_[0].push_back(ParseDouble(f[1], 6 + i));
    model.log_likelihood_[1].push_back(ParseDouble(f[2], 6 + i));
  }
  return model;
}

std::vector<Label> NaiveBayesClassifier::PredictBatch(
    const std::vector<std::string> &texts) {
  std::vector<Label> out;
  out.reserve(texts.size());
  for (const std::string &t : texts) out.push_back(model_.Predict(t).label);
  return out;
}

}  // namespace triggerprobe

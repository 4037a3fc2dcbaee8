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

#ifndef TRIGGERPROBE_CLASSIFIER_H_
#define TRIGGERPROBE_CLASSIFIER_H_

#include <string>
#include <vector>

#include "triggerprobe/corpus.h"

namespace triggerprobe {

// Anything that labels a batch of texts. Implementations return exactly one
// label per input, in input order.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual std::vector<Label> PredictBatch(const std::vector<std::string> &texts) = 0;
};

// Always answers the same label. Useful as a do-nothing reference model.
class ConstantClassifier : public Classifier {
 public:
  explicit ConstantClassifier(Label label) : label_(label) {}
  std::vector<Label> PredictBatch(const std::vector<std::string> &texts) override {
    return std::vector<Label>(texts.size(), label_);
  }

 private:
  Label label_;
};

std::vector<std::string> Texts(const LabeledDataset &dataset);
std::vector<Label> Golds(const LabeledDataset &dataset);

}  // namespace triggerprobe

#endif  // TRIGGERPROBE_CLASSIFIER_H_

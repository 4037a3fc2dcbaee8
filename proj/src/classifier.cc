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

#include "triggerprobe/classifier.h"

#include "triggerprobe/errors.h"

namespace triggerprobe {

std::vector<std::string> Texts(const LabeledDataset &dataset) {
  std::vector<std::string> texts;
  texts.reserve(dataset.size());
  for (const Example &e : dataset) texts.push_back(e.text);
  return texts;
}

std::vector<Label> Golds(const LabeledDataset &dataset) {
  std::vector<Label> golds;
  golds.reserve(dataset.size());
  for (const Example &e : dataset) {
    if (!e.label) throw DataError("example '" + e.id + "' is unlabeled");
    golds.push_back(*e.label);
  }
  return golds;
}

}  // namespace triggerprobe

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

#ifndef TRIGGERPROBE_PERTURBER_H_
#define TRIGGERPROBE_PERTURBER_H_

#include <cstdint>
#include <optional>
#include <string>

#include "triggerprobe/corpus.h"

namespace triggerprobe {

inline constexpr char kDefaultTrigger[] = "10 deaths";
inline constexpr char kDefaultTriggerTemplate[] = "{n} deaths";
inline constexpr char kTriggerPlaceholder[] = "{n}";

enum class TriggerPosition { kPrepend };

struct TriggerSpec {
  std::string templ;
  std::optional<std::int64_t> n;
  TriggerPosition position = TriggerPosition::kPrepend;
};

// Substitutes every "{n}" with the decimal value of `n`. Throws
// InvalidArgument when a placeholder has no value, or when the rendered
// trigger is blank or contains a tab or newline.
std::string RenderTrigger(const TriggerSpec &spec);

// Each text becomes `trigger + " " + text`; ids, labels and order are kept.
// Throws InvalidArgument for an empty trigger or one with a tab or newline.
LabeledDataset PerturbDataset(const LabeledDataset &dataset,
                              const std::string &trigger);

}  // namespace triggerprobe

#endif  // TRIGGERPROBE_PERTURBER_H_

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

#include "triggerprobe/perturber.h"

#include <string>

#include "triggerprobe/errors.h"

namespace triggerprobe {

std::string RenderTrigger(const TriggerSpec &spec) {
  std::string out;
  const std::string_view placeholder = kTriggerPlaceholder;
  std::size_t pos = 0;
  while (true) {
    const std::size_t hit = spec.templ.find(placeholder, pos);
    if (hit == std::string::npos) {
      out.append(spec.templ, pos, std::string::npos);
      break;
    }
    if (!spec.n) {
      throw InvalidArgument("trigger template '" + spec.templ +
                            "' has a {n} placeholder but no n was given");
    }
    out.append(spec.templ, pos, hit - pos);
    out += std::to_string(*spec.n);
    pos = hit + placeholder.size();
  }
  if (out.find_first_not_of(" ") == std::string::npos) {
    throw InvalidArgument("rendered trigger is empty");
  }
  if (out.find_first_of("\t\r\n") != std::string::npos) {
    throw InvalidArgument("trigger must not contain tabs or newlines");
  }
  return out;
}

LabeledDataset PerturbDataset(const LabeledDataset &dataset,
                              const std::string &trigger) {
  if (trigger.empty()) throw InvalidArgument("trigger must be non-empty");
  if (trigger.find_first_of("\t\r\n") != std::string::npos) {
    throw InvalidArgument("trigger must not contain tabs or newlines");
  }
  LabeledDataset out(dataset.split());
  out.Reserve(dataset.size());
  for (const Example &e : dataset) {
    out.Add(Example{e.id, trigger + " " + e.text, e.label});
  }
  return out;
}

}  // namespace triggerprobe

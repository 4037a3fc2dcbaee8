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

#ifndef TRIGGERPROBE_FEATURE_STATS_H_
#define TRIGGERPROBE_FEATURE_STATS_H_

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_set>
#include <vector>

#include "triggerprobe/corpus.h"

namespace triggerprobe {

struct TermScore {
  std::string term;
  double chi2 = 0.0;
  Vocabulary::ClassCounts observed{};
  std::array<double, kNumLabels> expected{};
};

using TokenSet = std::unordered_set<std::string>;

// The top-N discriminative unigrams, highest chi2 first.
struct ReplacementSet {
  std::size_t n = 0;
  std::vector<TermScore> terms;

  bool Contains(std::string_view token) const;
  TokenSet Tokens() const;
};

inline constexpr std::size_t kDefaultTopN = 20;

// One score per vocabulary term, in vocabulary order. Expected counts follow
// class document shares: E[t][c] = (N_c / N) * T_t. Throws DataError for an
// empty vocabulary, an unlabeled dataset, or a label with no documents, and
// InvalidArgument if `vocab` was not built from `dataset`.
std::vector<TermScore> Chi2Scores(const Vocabulary &vocab,
                                  const LabeledDataset &dataset);

// Highest chi2 first, ties broken by ascending term. Throws InvalidArgument
// for n <= 0 and DataError for empty `scores`.
ReplacementSet TopN(std::vector<TermScore> scores, std::int64_t n);

// Versioned tab-separated document; chi2 and expected values are written in
// shortest round-trip form so a reload is exact.
std::string SerializeReplacementSet(const ReplacementSet &rset);
ReplacementSet ParseReplacementSet(std::string_view text);

// Human-readable ranked table.
std::string FormatTopTable(const ReplacementSet &rset);

}  // namespace triggerprobe

#endif  // TRIGGERPROBE_FEATURE_STATS_H_

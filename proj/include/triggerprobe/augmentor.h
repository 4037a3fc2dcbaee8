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

#ifndef TRIGGERPROBE_AUGMENTOR_H_
#define TRIGGERPROBE_AUGMENTOR_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "triggerprobe/backend_protocol.h"
#include "triggerprobe/corpus.h"
#include "triggerprobe/feature_stats.h"

namespace triggerprobe {

// A tokenized example with every replacement-set token replaced by MASK.
struct MaskedExample {
  std::string source_id;
  std::string source_text;
  std::optional<Label> label;
  // One slot per source token; std::nullopt is the MASK sentinel.
  std::vector<std::optional<std::string>> tokens;
  std::vector<TokenSpan> spans;
  std::vector<std::size_t> mask_positions;
};

struct Fill {
  std::size_t position = 0;  // token index in the source
  std::string token;
  bool fallback = false;  // backend produced no eligible candidate
};

struct AugmentedExample {
  std::string source_id;
  std::string id;
  std::string text;
  Label label = Label::kUninformative;
  std::vector<std::size_t> mask_positions;
  std::vector<Fill> fills;
};

// Masks every occurrence of every replacement-set token. Throws
// InvalidArgument for an empty set.
MaskedExample MaskExample(const Example &example, const TokenSet &replacement_tokens);
MaskedExample MaskExample(const Example &example, const ReplacementSet &rset);

// Source text with the first fills.size() masks replaced by `fills` and the
// remaining masks rendered as "[MASK]". Text between tokens is preserved.
std::string RenderMasked(const MaskedExample &masked, std::span<const std::string> fills);

// Deterministic 64-bit generator (SplitMix64). Draws are specified exactly,
// so sampled output is identical across platforms and standard libraries.
class FillRng {
 public:
  explicit FillRng(std::uint64_t state) : state_(state) {}
  std::uint64_t Next();
  // Unbiased draw in [0, bound); bound > 0.
  std::uint64_t Below(std::uint64_t bound);

  // Stream for one example: mixes the run seed with a hash of the id.
  static FillRng ForExample(std::uint64_t seed, std::string_view source_id);

 private:
  std::uint64_t state_;
};

// Strategy that fills the masks of one example.
class MaskFiller {
 public:
  virtual ~MaskFiller() = default;
  virtual AugmentedExample Fill(const MaskedExample &masked, const TokenSet &forbidden,
                                std::uint64_t seed) = 0;
  // True if Fill may be called from several threads at once.
  virtual bool concurrent() const { return false; }
};

// Built-in filler: each mask is drawn independently from the label's
// unigram distribution, P(t) proportional to term_class_count(t, label),
// restricted to t not in `forbidden`.
class ClassConditionalFiller : public MaskFiller {
 public:
  explicit ClassConditionalFiller(const Vocabulary &vocab);

  AugmentedExample Fill(const MaskedExample &masked, const TokenSet &forbidden,
                        std::uint64_t seed) override;
  bool concurrent() const override { return true; }

  // Throws DataError naming `source_id` when nothing is eligible.
  std::string Sample(Label label, const TokenSet &forbidden, FillRng &rng,
                     std::string_view source_id);

  // Eligible (token, weight) pairs in vocabulary order.
  std::vector<std::pair<std::string, std::int64_t>> Candidates(Label label,
                                                               const TokenSet &forbidden);

 private:
  struct Table {
    std::vector<std::size_t> index;
    std::vector<std::int64_t> cumulative;
  };
  using Tables = std::array<Table, kNumLabels>;

  std::shared_ptr<const Tables> TablesFor(const TokenSet &forbidden);

  std::vector<std::string> terms_;
  std::vector<Vocabulary::ClassCounts> counts_;
  std::mutex mu_;
  std::map<std::vector<std::string>, std::shared_ptr<const Tables>> cache_;
};

AugmentedExample ClassConditionalFill(const MaskedExample &masked, const Vocabulary &vocab,
                                      const TokenSet &forbidden, std::uint64_t seed);

inline constexpr int kDefaultTopK = 10;

// Fills masks left to right, re-querying the backend after each fill. The
// first candidate that is a single tokenizer-valid unit (after lowercasing)
// and not forbidden wins; when none qualifies the slot is sampled from
// `fallback` and flagged. Not usable concurrently.
class BackendFiller : public MaskFiller {
 public:
  BackendFiller(BackendClient &client, ClassConditionalFiller &fallback,
                int top_k = kDefaultTopK);

  AugmentedExample Fill(const MaskedExample &masked, const TokenSet &forbidden,
                        std::uint64_t seed) override;

  std::int64_t backend_calls() const { return calls_; }
  std::int64_t fallbacks() const { return fallbacks_; }

 private:
  BackendClient &client_;
  ClassConditionalFiller &fallback_;
  int top_k_;
  std::int64_t calls_ = 0;
  std::int64_t fallbacks_ = 0;
};

// Candidate normalized to a token, or nullopt if it is not a single
// letters-and-digits unit (special symbols, subword pieces, punctuation).
std::optional<std::string> NormalizeCandidate(std::string_view candidate);

inline constexpr char kAugmentedIdSuffix[] = "-aug";

struct AugmentResult {
  LabeledDataset dataset;  // originals followed by one augmented copy each
  std::vector<AugmentedExample> augmented;
};

// Emits exactly one augmented example per source (unchanged copies for
// sources with nothing to mask), so the output is twice the input size.
// Augmented ids are the source id plus "-aug". With a concurrent filler and
// threads > 1 examples are filled in parallel; output order never changes.
AugmentResult AugmentDataset(const LabeledDataset &dataset, const ReplacementSet &rset,
                             MaskFiller &filler, std::uint64_t seed, unsigned threads = 1);

// Sidecar: one JSON object per line (source id, augmented id, mask
// positions, fills with fallback flags).
std::string SerializeProvenance(const std::vector<AugmentedExample> &augmented);

}  // namespace triggerprobe

#endif  // TRIGGERPROBE_AUGMENTOR_H_

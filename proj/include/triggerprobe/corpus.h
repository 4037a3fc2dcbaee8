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

#ifndef TRIGGERPROBE_CORPUS_H_
#define TRIGGERPROBE_CORPUS_H_

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace triggerprobe {

// Shared-task labels. INFORMATIVE is the positive class everywhere.
enum class Label : std::uint8_t {
  kInformative = 0,
  kUninformative = 1,
};

inline constexpr std::size_t kNumLabels = 2;
inline constexpr std::array<Label, kNumLabels> kAllLabels = {
    Label::kInformative, Label::kUninformative};

inline constexpr std::size_t LabelIndex(Label label) {
  return static_cast<std::size_t>(label);
}

// Uppercase wire name ("INFORMATIVE" / "UNINFORMATIVE").
std::string_view LabelName(Label label);

// Case-insensitive; surrounding whitespace ignored.
std::optional<Label> ParseLabel(std::string_view text);

enum class Split { kTrain, kDev, kTest, kOther };

std::string_view SplitName(Split split);
std::optional<Split> ParseSplit(std::string_view text);

struct Example {
  std::string id;
  std::string text;
  std::optional<Label> label;

  bool operator==(const Example &) const = default;
};

// Ordered examples with unique ids. Iteration order is insertion (file) order.
class LabeledDataset {
 public:
  explicit LabeledDataset(Split split = Split::kOther) : split_(split) {}

  // Throws DataError on a duplicate id or a blank text.
  void Add(Example example);

  Split split() const { return split_; }
  const std::vector<Example> &examples() const { return examples_; }
  std::size_t size() const { return examples_.size(); }
  bool empty() const { return examples_.empty(); }
  const Example &operator[](std::size_t i) const { return examples_[i]; }
  auto begin() const { return examples_.begin(); }
  auto end() const { return examples_.end(); }

  bool Contains(std::string_view id) const;
  bool fully_labeled() const;
  std::array<std::size_t, kNumLabels> LabelCounts() const;

  void Reserve(std::size_t n);

 private:
  Split split_;
  std::vector<Example> examples_;
  std::unordered_set<std::string> ids_;
};

// Parses shared-task TSV: a header row, then "Id\tText\tLabel" rows (or
// "Id\tText" rows when the header has two columns). Accepts '\n' and "\r\n".
// Throws ParseError naming the 1-based line number on malformed input.
LabeledDataset ParseTsv(std::string_view bytes, Split split);
LabeledDataset ReadTsvFile(const std::string &path, Split split);

// Writes the header and one row per example. Labeled datasets get three
// columns; a dataset with any unlabeled example is written with two.
std::string SerializeTsv(const LabeledDataset &dataset);
void WriteTsvFile(const std::string &path, const LabeledDataset &dataset);

// Byte range [begin, end) of one token in the source text.
struct TokenSpan {
  std::size_t begin = 0;
  std::size_t end = 0;
};

struct Token {
  std::string text;  // lowercased
  TokenSpan span;
};

// Lowercases and splits on everything that is not a Unicode letter or
// decimal digit. Invalid UTF-8 bytes act as separators.
std::vector<std::string> Tokenize(std::string_view text);
std::vector<Token> TokenizeWithSpans(std::string_view text);

// True when `token` is a single tokenizer-valid unit: non-empty, lowercase
// and made only of letters and digits.
bool IsValidToken(std::string_view token);

// Token statistics over a labeled dataset. Terms are sorted ascending; a
// term's index is its position in that order.
class Vocabulary {
 public:
  using ClassCounts = std::array<std::int64_t, kNumLabels>;

  Vocabulary() = default;

  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }
  const std::vector<std::string> &terms() const { return terms_; }
  const std::string &term(std::size_t index) const { return terms_[index]; }

  // -1 when absent.
  std::int64_t IndexOf(std::string_view token) const;
  bool Contains(std::string_view token) const { return IndexOf(token) >= 0; }

  std::int64_t doc_freq(std::size_t index) const { return doc_freq_[index]; }
  const ClassCounts &class_counts(std::size_t index) const {
    return class_counts_[index];
  }
  std::int64_t term_class_count(std::size_t index, Label label) const {
    return class_counts_[index][LabelIndex(label)];
  }
  std::int64_t total_count(std::size_t index) const;

  // Documents per label in the dataset the vocabulary was built from.
  const ClassCounts &class_doc_counts() const { return class_docs_; }
  std::int64_t num_docs() const { return class_docs_[0] + class_docs_[1]; }
  std::size_t min_df() const { return min_df_; }

 private:
  friend Vocabulary BuildVocab(const LabeledDataset &, std::size_t);

  struct Hash {
    using is_transparent = void;
    std::size_t operator()(std::string_view s) const {
      return std::hash<std::string_view>{}(s);
    }
  };

  std::vector<std::string> terms_;
  std::unordered_map<std::string, std::size_t, Hash, std::equal_to<>> index_;
  std::vector<std::int64_t> doc_freq_;
  std::vector<ClassCounts> class_counts_;
  ClassCounts class_docs_{};
  std::size_t min_df_ = 1;
};

inline constexpr std::size_t kDefaultMinDf = 5;

// Keeps tokens whose document frequency is at least `min_df`. Throws
// DataError for an empty or partially unlabeled dataset and
// InvalidArgument for min_df == 0.
Vocabulary BuildVocab(const LabeledDataset &dataset,
                      std::size_t min_df = kDefaultMinDf);

}  // namespace triggerprobe

#endif  // TRIGGERPROBE_CORPUS_H_

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

#include "triggerprobe/corpus.h"

#include <unicode/uchar.h>
#include <unicode/utf8.h>

#include <algorithm>
#include <fstream>
#include <sstream>
#include <string>
#include <utility>

#include "triggerprobe/errors.h"

namespace triggerprobe {

const char *ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return "io";
    case ErrorKind::kParse: return "parse";
    case ErrorKind::kInvalidArgument: return "invalid-argument";
    case ErrorKind::kData: return "data";
    case ErrorKind::kProtocol: return "protocol";
    case ErrorKind::kTransport: return "transport";
  }
  return "unknown";
}

std::string_view LabelName(Label label) {
  return label == Label::kInformative ? "INFORMATIVE" : "UNINFORMATIVE";
}

namespace {

bool IsAsciiSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

std::string_view TrimAscii(std::string_view s) {
  while (!s.empty() && IsAsciiSpace(s.front())) s.remove_prefix(1);
  while (!s.empty() && IsAsciiSpace(s.back())) s.remove_suffix(1);
  return s;
}

bool EqualsIgnoreAsciiCase(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    char x = a[i], y = b[i];
    if (x >= 'a' && x <= 'z') x = static_cast<char>(x - 'a' + 'A');
    if (y >= 'a' && y <= 'z') y = static_cast<char>(y - 'a' + 'A');
    if (x != y) return false;
  }
  return true;
}

// True if every code point is Unicode whitespace (or the string is empty).
bool IsBlank(std::string_view text) {
  const auto *s = reinterpret_cast<const uint8_t *>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  while (i < length) {
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c < 0 || !u_isUWhiteSpace(c)) return false;
  }
  return true;
}

std::vector<std::string_view> SplitTabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
  return fields;
}

std::string LineError(std::size_t line, const std::string &what) {
  return "line " + std::to_string(line) + ": " + what;
}

}  // namespace

std::optional<Label> ParseLabel(std::string_view text) {
  text = TrimAscii(text);
  if (EqualsIgnoreAsciiCase(text, "INFORMATIVE")) return Label::kInformative;
  if (EqualsIgnoreAsciiCase(text, "UNINFORMATIVE")) return Label::kUninformative;
  return std::nullopt;
}

std::string_view SplitName(Split split) {
  switch (split) {
    case Split::kTrain: return "train";
    case Split::kDev: return "dev";
    case Split::kTest: return "test";
    case Split::kOther: return "other";
  }
  return "other";
}

std::optional<Split> ParseSplit(std::string_view text) {
  for (Split s : {Split::kTrain, Split::kDev, Split::kTest, Split::kOther}) {
    if (EqualsIgnoreAsciiCase(text, SplitName(s))) return s;
  }
  return std::nullopt;
}

void LabeledDataset::Add(Example example) {
  if (IsBlank(example.text)) {
    throw DataError("example '" + example.id + "' has blank text");
  }
  if (!ids_.insert(example.id).second) {
    throw DataError("duplicate id '" + example.id + "'");
  }
  examples_.push_back(std::move(example));
}

bool LabeledDataset::Contains(std::string_view id) const {
  return ids_.count(std::string(id)) > 0;
}

bool LabeledDataset::fully_labeled() const {
  return std::all_of(examples_.begin(), examples_.end(),
                     [](const Example &e) { return e.label.has_value(); });
}

std::array<std::size_t, kNumLabels> LabeledDataset::LabelCounts() const {
  std::array<std::size_t, kNumLabels> counts{};
  for (const Example &e : examples_) {
    if (e.label) ++counts[LabelIndex(*e.label)];
  }
  return counts;
}

void LabeledDataset::Reserve(std::size_t n) {
  examples_.reserve(n);
  ids_.reserve(n);
}

LabeledDataset ParseTsv(std::string_view bytes, Split split) {
  LabeledDataset dataset(split);
  std::size_t pos = 0;
  std::size_t line_no = 0;
  std::size_t columns = 0;
  while (pos < bytes.size()) {
    std::size_t nl = bytes.find('\n', pos);
    const bool last = nl == std::string_view::npos;
    if (last) nl = bytes.size();
    std::string_view line = bytes.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    const auto fields = SplitTabs(line);
    if (line_no == 1) {
      if (fields.size() != 2 && fields.size() != 3) {
        throw ParseError(LineError(line_no, "header must have 2 or 3 columns, got " +
                                                std::to_string(fields.size())));
      }
      columns = fields.size();
      continue;
    }
    if (line.empty() && last) break;
    if (fields.size() != columns) {
      throw ParseError(LineError(line_no, "expected " + std::to_string(columns) +
                                              " columns, got " +
                                              std::to_string(fields.size())));
    }
    Example example;
    example.id = std::string(fields[0]);
    example.text = std::string(fields[1]);
    if (example.id.empty()) throw ParseError(LineError(line_no, "empty id"));
    if (columns == 3) {
      example.label = ParseLabel(fields[2]);
      if (!example.label) {
        throw ParseError(LineError(line_no, "unknown label '" +
                                                std::string(fields[2]) + "'"));
      }
    }
    if (dataset.Contains(example.id)) {
      throw ParseError(LineError(line_no, "duplicate id '" + example.id + "'"));
    }
    if (IsBlank(example.text)) {
      throw ParseError(LineError(line_no, "blank text"));
    }
    dataset.Add(std::move(example));
  }
  if (line_no == 0) throw ParseError("line 1: missing header row");
  return dataset;
}

LabeledDataset ReadTsvFile(const std::string &path, Split split) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failed for '" + path + "'");
  try {
    return ParseTsv(buffer.str(), split);
  } catch (const ParseError &e) {
    throw ParseError(path + ": " + e.what());
  }
}

std::string SerializeTsv(const LabeledDataset &dataset) {
  const bool labeled = dataset.fully_labeled();
  std::string out = labeled ? "Id\tText\tLabel\n" : "Id\tText\n";
  for (const Example &e : dataset) {
    out += e.id;
    out += '\t';
    out += e.text;
    if (labeled) {
      out += '\t';
      out += LabelName(*e.label);
    }
    out += '\n';
  }
  return out;
}

void WriteTsvFile(const std::string &path, const LabeledDataset &dataset) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << SerializeTsv(dataset);
  if (!out.flush()) throw IoError("write failed for '" + path + "'");
}

std::vector<Token> TokenizeWithSpans(std::string_view text) {
  std::vector<Token> tokens;
  const auto *s = reinterpret_cast<const uint8_t *>(text.data());
  const auto length = static_cast<int32_t>(text.size());
  int32_t i = 0;
  Token current;
  bool open = false;
  while (i < length) {
    const int32_t start = i;
    UChar32 c;
    U8_NEXT(s, i, length, c);
    if (c >= 0 && u_isalnum(c)) {
      if (!open) {
        current = Token{};
        current.span.begin = static_cast<std::size_t>(start);
        open = true;
      }
      const UChar32 lower = u_tolower(c);
      char buf[U8_MAX_LENGTH];
      int32_t n = 0;
      U8_APPEND_UNSAFE(buf, n, lower);
      current.text.append(buf, static_cast<std::size_t>(n));
      current.span.end = static_cast<std::size_t>(i);
    } else if (open) {
      tokens.push_back(std::move(current));
      open = false;
    }
  }
  if (open) tokens.push_back(std::move(current));
  return tokens;
}

std::vector<std::string> Tokenize(std::string_view text) {
  auto with_spans = TokenizeWithSpans(text);
  std::vector<std::string> tokens;
  tokens.reserve(with_spans.size());
  for (Token &t : with_spans) tokens.push_back(std::move(t.text));
  return tokens;
}

bool IsValidToken(std::string_view token) {
  const auto tokens = TokenizeWithSpans(token);
  return tokens.size() == 1 && tokens[0].span.begin == 0 &&
         tokens[0].span.end == token.size() && tokens[0].text == token;
}

std::int64_t Vocabulary::IndexOf(std::string_view token) const {
  const auto it = index_.find(token);
  return it == index_.end() ? -1 : static_cast<std::int64_t>(it->second);
}

std::int64_t Vocabulary::total_count(std::size_t index) const {
  const ClassCounts &c = class_counts_[index];
  return c[0] + c[1];
}

Vocabulary BuildVocab(const LabeledDataset &dataset, std::size_t min_df) {
  if (min_df == 0) throw InvalidArgument("min_df must be positive");
  if (dataset.empty()) throw DataError("cannot build a vocabulary from an empty dataset");

  struct Stats {
    std::int64_t doc_freq = 0;
    Vocabulary::ClassCounts counts{};
  };
  std::unordered_map<std::string, Stats> stats;
  Vocabulary vocab;
  vocab.min_df_ = min_df;
  for (const Example &e : dataset) {
    if (!e.label) throw DataError("example '" + e.id + "' is unlabeled");
    const std::size_t label = LabelIndex(*e.label);
    ++vocab.class_docs_[label];
    std::vector<std::string> tokens = Tokenize(e.text);
    for (const std::string &t : tokens) ++stats[t].counts[label];
    std::sort(tokens.begin(), tokens.end());
    tokens.erase(std::unique(tokens.begin(), tokens.end()), tokens.end());
    for (const std::string &t : tokens) ++stats[t].doc_freq;
  }

  for (const auto &[term, s] : stats) {
    if (s.doc_freq >= static_cast<std::int64_t>(min_df)) vocab.terms_.push_back(term);
  }
  std::sort(vocab.terms_.begin(), vocab.terms_.end());
  vocab.doc_freq_.reserve(vocab.terms_.size());
  vocab.class_counts_.reserve(vocab.terms_.size());
  vocab.index_.reserve(vocab.terms_.size());
  for (std::size_t i = 0; i < vocab.terms_.size(); ++i) {
    const Stats &s = stats.at(vocab.terms_[i]);
    vocab.doc_freq_.push_back(s.doc_freq);
    vocab.class_counts_.push_back(s.counts);
    vocab.index_.emplace(vocab.terms_[i], i);
  }
  return vocab;
}

}  // namespace triggerprobe

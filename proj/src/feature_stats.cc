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

#include "triggerprobe/feature_stats.h"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <string>
#include <system_error>
#include <utility>

#include "triggerprobe/errors.h"
#include "triggerprobe/kernels/chi2.h"

namespace triggerprobe {

namespace {

constexpr std::string_view kRsetMagic = "# triggerprobe replacement-set v1";
constexpr std::string_view kRsetHeader =
    "term\tchi2\tobserved_informative\tobserved_uninformative\t"
    "expected_informative\texpected_uninformative";

std::string ShortestDouble(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, r.ptr);
}

template <typename T>
T ParseNumber(std::string_view field, std::size_t line) {
  T value{};
  const auto r = std::from_chars(field.data(), field.data() + field.size(), value);
  if (r.ec != std::errc() || r.ptr != field.data() + field.size()) {
    throw ParseError("replacement set line " + std::to_string(line) +
                     ": bad number '" + std::string(field) + "'");
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

bool ReplacementSet::Contains(std::string_view token) const {
  return std::any_of(terms.begin(), terms.end(),
                     [&](const TermScore &t) { return t.term == token; });
}

TokenSet ReplacementSet::Tokens() const {
  TokenSet set;
  for (const TermScore &t : terms) set.insert(t.term);
  return set;
}

std::vector<TermScore> Chi2Scores(const Vocabulary &vocab,
                                  const LabeledDataset &dataset) {
  if (vocab.empty()) throw DataError("chi2: vocabulary is empty");
  if (!dataset.fully_labeled()) throw DataError("chi2: dataset has unlabeled examples");
  const auto label_counts = dataset.LabelCounts();
  for (Label label : kAllLabels) {
    if (label_counts[LabelIndex(label)] == 0) {
      throw DataError("chi2: no documents labeled " + std::string(LabelName(label)));
    }
    if (static_cast<std::int64_t>(label_counts[LabelIndex(label)]) !=
        vocab.class_doc_counts()[LabelIndex(label)]) {
      throw InvalidArgument("chi2: vocabulary was not built from this dataset");
    }
  }

  const double n_docs = static_cast<double>(dataset.size());
  const double share_inf =
      static_cast<double>(label_counts[LabelIndex(Label::kInformative)]) / n_docs;
  const double share_uninf =
      static_cast<double>(label_counts[LabelIndex(Label::kUninformative)]) / n_docs;

  std::vector<std::size_t> kept;
  std::vector<double> obs_inf, obs_uninf;
  kept.reserve(vocab.size());
  obs_inf.reserve(vocab.size());
  obs_uninf.reserve(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (vocab.total_count(i) == 0) continue;
    kept.push_back(i);
    obs_inf.push_back(static_cast<double>(vocab.term_class_count(i, Label::kInformative)));
    obs_uninf.push_back(
        static_cast<double>(vocab.term_class_count(i, Label::kUninformative)));
  }
  std::vector<double> chi2(kept.size());
  kernels::Chi2TwoClass(obs_inf, obs_uninf, share_inf, share_uninf, chi2);

  std::vector<TermScore> scores;
  scores.reserve(kept.size());
  for (std::size_t k = 0; k < kept.size(); ++k) {
    const std::size_t i = kept[k];
    const double total = obs_inf[k] + obs_uninf[k];
    TermScore s;
    s.term = vocab.term(i);
    s.chi2 = chi2[k];
    s.observed = vocab.class_counts(i);
    s.expected[LabelIndex(Label::kInformative)] = share_inf * total;
    s.expected[LabelIndex(Label::kUninformative)] = share_uninf * total;
    scores.push_back(std::move(s));
  }
  return scores;
}

ReplacementSet TopN(std::vector<TermScore> scores, std::int64_t n) {
  if (n <= 0) throw InvalidArgument("top_n: n must be positive, got " + std::to_string(n));
  if (scores.empty()) throw DataError("top_n: no scored terms");
  const auto keep = std::min(static_cast<std::size_t>(n), scores.size());
  const auto by_rank = [](const TermScore &a, const TermScore &b) {
    if (a.chi2 != b.chi2) return a.chi2 > b.chi2;
    return a.term < b.term;
  };
  std::partial_sort(scores.begin(), scores.begin() + static_cast<std::ptrdiff_t>(keep),
                    scores.end(), by_rank);
  scores.resize(keep);
  return ReplacementSet{static_cast<std::size_t>(n), std::move(scores)};
}

std::string SerializeReplacementSet(const ReplacementSet &rset) {
  std::string out(kRsetMagic);
  out += "\nn\t" + std::to_string(rset.n) + "\n";
  out += kRsetHeader;
  out += '\n';
  for (const TermScore &t : rset.terms) {
    out += t.term;
    out += '\t' + ShortestDouble(t.chi2);
    out += '\t' + std::to_string(t.observed[0]);
    out += '\t' + std::to_string(t.observed[1]);
    out += '\t' + ShortestDouble(t.expected[0]);
    out += '\t' + ShortestDouble(t.expected[1]);
    out += '\n';
  }
  return out;
}

ReplacementSet ParseReplacementSet(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t nl = text.find('\n', start);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(start, nl - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = nl + 1;
  }
  if (lines.size() < 3 || lines[0] != kRsetMagic) {
    throw ParseError("replacement set: missing or unsupported version header");
  }
  const auto n_fields = Fields(lines[1]);
  if (n_fields.size() != 2 || n_fields[0] != "n") {
    throw ParseError("replacement set line 2: expected 'n<TAB>count'");
  }
  if (lines[2] != kRsetHeader) throw ParseError("replacement set line 3: bad column header");

  ReplacementSet rset;
  rset.n = ParseNumber<std::size_t>(n_fields[1], 2);
  for (std::size_t i = 3; i < lines.size(); ++i) {
    if (lines[i].empty() && i + 1 == lines.size()) break;
    const auto f = Fields(lines[i]);
    if (f.size() != 6) {
      throw ParseError("replacement set line " + std::to_string(i + 1) +
                       ": expected 6 columns");
    }
    TermScore t;
    t.term = std::string(f[0]);
    if (!IsValidToken(t.term)) {
      throw ParseError("replacement set line " + std::to_string(i + 1) +
                       ": invalid term '" + t.term + "'");
    }
    t.chi2 = ParseNumber<double>(f[1], i + 1);
    t.observed[0] = ParseNumber<std::int64_t>(f[2], i + 1);
    t.observed[1] = ParseNumber<std::int64_t>(f[3], i + 1);
    t.expected[0] = ParseNumber<double>(f[4], i + 1);
    t.expected[1] = ParseNumber<double>(f[5], i + 1);
    rset.terms.push_back(std::move(t));
  }
  return rset;
}

std::string FormatTopTable(const ReplacementSet &rset) {
  std::string out = "rank  term                  chi2          inf    uninf\n";
  char line[160];
  for (std::size_t i = 0; i < rset.terms.size(); ++i) {
    const TermScore &t = rset.terms[i];
    std::snprintf(line, sizeof(line), "%4zu  %-20s %12.4f %8lld %8lld\n", i + 1,
                  t.term.c_str(), t.chi2, static_cast<long long>(t.observed[0]),
                  static_cast<long long>(t.observed[1]));
    out += line;
  }
  return out;
}

}  // namespace triggerprobe

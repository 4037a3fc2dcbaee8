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

// Test-only fixtures and reference oracles. Nothing here calls into the
// chi-squared or Naive Bayes implementations it is used to check.

#ifndef TRIGGERPROBE_TESTS_TEST_UTIL_H_
#define TRIGGERPROBE_TESTS_TEST_UTIL_H_

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "triggerprobe/corpus.h"

namespace triggerprobe::testing {

inline Example Ex(std::string id, std::string text, Label label) {
  return Example{std::move(id), std::move(text), label};
}

// INFORMATIVE = {"deaths reported", "deaths rising"},
// UNINFORMATIVE = {"stay home", "good vibes"}.
inline LabeledDataset FixtureCorpus() {
  LabeledDataset d(Split::kTrain);
  d.Add(Ex("1", "deaths reported", Label::kInformative));
  d.Add(Ex("2", "deaths rising", Label::kInformative));
  d.Add(Ex("3", "stay home", Label::kUninformative));
  d.Add(Ex("4", "good vibes", Label::kUninformative));
  return d;
}

// Documents of space-separated terms "t0".."t{terms-1}". Both labels are
// always present.
inline LabeledDataset RandomCorpus(std::mt19937_64 &rng, int min_docs, int max_docs,
                                   int min_terms, int max_terms, int max_len = 6) {
  std::uniform_int_distribution<int> n_docs(min_docs, max_docs);
  std::uniform_int_distribution<int> n_terms(min_terms, max_terms);
  const int docs = n_docs(rng);
  const int terms = n_terms(rng);
  std::uniform_int_distribution<int> term(0, terms - 1);
  std::uniform_int_distribution<int> len(1, max_len);
  std::bernoulli_distribution coin(0.5);
  LabeledDataset d(Split::kTrain);
  for (int i = 0; i < docs; ++i) {
    std::string text;
    const int l = len(rng);
    for (int k = 0; k < l; ++k) {
      if (k) text += ' ';
      text += "t" + std::to_string(term(rng));
    }
    Label label = coin(rng) ? Label::kInformative : Label::kUninformative;
    if (i == 0) label = Label::kInformative;
    if (i == 1) label = Label::kUninformative;
    d.Add(Example{"d" + std::to_string(i), text, label});
  }
  return d;
}

// Splits on single spaces; only valid for the lowercase corpora above.
inline std::vector<std::string> SpaceSplit(const std::string &text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// Brute-force two-way contingency chi-squared per term, computed straight
// from the document texts: E = T_t * N_c / N.
inline std::map<std::string, double> OracleChi2(const LabeledDataset &d) {
  std::map<std::string, std::array<double, 2>> observed;
  std::array<double, 2> docs{0, 0};
  for (const Example &e : d) {
    const int c = *e.label == Label::kInformative ? 0 : 1;
    docs[c] += 1;
    for (const std::string &w : SpaceSplit(e.text)) observed[w][c] += 1;
  }
  const double n = docs[0] + docs[1];
  std::map<std::string, double> chi2;
  for (const auto &[w, o] : observed) {
    const double total = o[0] + o[1];
    double s = 0;
    for (int c = 0; c < 2; ++c) {
      const double e = total * docs[c] / n;
      s += (o[c] - e) * (o[c] - e) / e;
    }
    chi2[w] = s;
  }
  return chi2;
}

// Synthetic tweet-like corpus. INFORMATIVE texts carry a death/count clue
// ("<n> deaths", "<n> people died", ...) with probability p_clue_informative,
// UNINFORMATIVE ones with p_clue_uninformative. Both classes also draw
// topical words with some cross-talk, plus shared filler.
struct SyntheticOptions {
  int size = 2000;
  double informative_share = 0.472;
  double p_clue_informative = 0.9;
  double p_clue_uninformative = 0.05;
  int topic_words_min = 3;
  int topic_words_max = 6;
  double cross_talk = 0.4;  // chance a topical word comes from the other class
  int filler_min = 2;
  int filler_max = 5;
  int informative_pool = 18;    // distinct INFORMATIVE topical words used
  int uninformative_pool = 18;  // distinct UNINFORMATIVE topical words used
  int max_count = 60;           // clue numbers are drawn from 1..max_count
  std::uint64_t seed = 2020;
};

inline LabeledDataset SyntheticCorpus(const SyntheticOptions &o,
                                      const std::string &id_prefix = "s") {
  static const std::vector<std::string> kInformative = {
      "confirmed", "cases",   "tested",    "positive", "county",  "hospital",
      "patients",  "total",   "recovered", "officials", "health", "department",
      "state",     "update",  "announced", "residents", "new",    "reports"};
  static const std::vector<std::string> kUninformative = {
      "stay",   "home",  "safe", "please", "hope",    "love",  "pray",
      "everyone", "lol", "wear", "think",  "feel",    "god",   "friends",
      "really", "why",   "just", "trump"};
  static const std::vector<std::string> kFiller = {
      "covid19", "coronavirus", "the",  "and", "in",   "of",  "today", "to",
      "is",      "for",         "a",    "on",  "this", "we",  "at",    "pandemic"};
  static const std::vector<std::string> kClues = {
      "{n} deaths", "{n} people died", "death toll rises to {n}", "{n} deaths reported",
      "{n} new deaths"};

  std::mt19937_64 rng(o.seed);
  std::bernoulli_distribution is_informative(o.informative_share);
  std::uniform_int_distribution<int> topic_len(o.topic_words_min, o.topic_words_max);
  std::uniform_int_distribution<int> filler_len(o.filler_min, o.filler_max);
  std::uniform_int_distribution<int> count(1, o.max_count);
  const std::vector<std::string> inf_pool(kInformative.begin(),
                                          kInformative.begin() + o.informative_pool);
  const std::vector<std::string> uninf_pool(kUninformative.begin(),
                                            kUninformative.begin() + o.uninformative_pool);
  std::bernoulli_distribution crossed(o.cross_talk);
  std::bernoulli_distribution mention(0.3);
  auto pick = [&](const std::vector<std::string> &v) {
    return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
  };

  LabeledDataset d(Split::kTrain);
  for (int i = 0; i < o.size; ++i) {
    const bool inf = is_informative(rng);
    std::vector<std::string> words;
    const int topics = topic_len(rng);
    for (int k = 0; k < topics; ++k) {
      const bool own = !crossed(rng);
      words.push_back(pick(own == inf ? inf_pool : uninf_pool));
    }
    const int fill = filler_len(rng);
    for (int k = 0; k < fill; ++k) words.push_back(pick(kFiller));
    std::shuffle(words.begin(), words.end(), rng);
    const double p_clue = inf ? o.p_clue_informative : o.p_clue_uninformative;
    if (std::bernoulli_distribution(p_clue)(rng)) {
      std::string clue = pick(kClues);
      clue.replace(clue.find("{n}"), 3, std::to_string(count(rng)));
      const auto at = std::uniform_int_distribution<std::size_t>(0, words.size())(rng);
      words.insert(words.begin() + static_cast<std::ptrdiff_t>(at), clue);
    }
    std::string text = mention(rng) ? "@USER " : "";
    for (std::size_t k = 0; k < words.size(); ++k) {
      if (k) text += ' ';
      text += words[k];
    }
    if (mention(rng)) text += " HTTPURL";
    d.Add(Example{id_prefix + std::to_string(i), text,
                  inf ? Label::kInformative : Label::kUninformative});
  }
  return d;
}

// Hand-computed metrics for enumerated confusion matrices, as reduced
// fractions {numerator, denominator}. Positive class INFORMATIVE; a zero
// denominator yields 0 and F1 is 0 when tp == 0.
struct ConfusionCase {
  std::array<std::int64_t, 4> tp_fp_fn_tn;
  std::array<std::int64_t, 2> precision, recall, f1;
};

inline const std::vector<ConfusionCase> &ConfusionCases() {
  static const std::vector<ConfusionCase> cases = {
      {{2, 1, 1, 1}, {2, 3}, {2, 3}, {2, 3}},
      {{5, 0, 0, 5}, {1, 1}, {1, 1}, {1, 1}},
      {{0, 3, 2, 5}, {0, 1}, {0, 1}, {0, 1}},
      {{0, 0, 4, 6}, {0, 1}, {0, 1}, {0, 1}},
      {{0, 0, 0, 7}, {0, 1}, {0, 1}, {0, 1}},
      {{3, 0, 0, 0}, {1, 1}, {1, 1}, {1, 1}},
      {{1, 1, 1, 1}, {1, 2}, {1, 2}, {1, 2}},
      {{10, 2, 3, 85}, {5, 6}, {10, 13}, {4, 5}},
      {{7, 7, 0, 0}, {1, 2}, {1, 1}, {2, 3}},
      {{0, 5, 0, 5}, {0, 1}, {0, 1}, {0, 1}},
      {{1, 0, 9, 0}, {1, 1}, {1, 10}, {2, 11}},
      {{9, 1, 0, 0}, {9, 10}, {1, 1}, {18, 19}},
      {{4, 6, 2, 8}, {2, 5}, {2, 3}, {1, 2}},
      {{50, 10, 5, 35}, {5, 6}, {10, 11}, {20, 23}},
      {{3, 2, 7, 1}, {3, 5}, {3, 10}, {2, 5}},
      {{12, 0, 4, 4}, {1, 1}, {3, 4}, {6, 7}},
      {{1, 4, 0, 9}, {1, 5}, {1, 1}, {1, 3}},
      {{6, 3, 3, 6}, {2, 3}, {2, 3}, {2, 3}},
      {{100, 1, 1, 0}, {100, 101}, {100, 101}, {100, 101}},
      {{20, 30, 10, 40}, {2, 5}, {2, 3}, {1, 2}},
  };
  return cases;
}

inline double Frac(const std::array<std::int64_t, 2> &f) {
  return static_cast<double>(f[0]) / static_cast<double>(f[1]);
}

// Prediction/gold lists realizing a confusion matrix.
inline std::pair<std::vector<Label>, std::vector<Label>> ListsFor(
    const std::array<std::int64_t, 4> &c) {
  std::vector<Label> preds, golds;
  const Label inf = Label::kInformative, uninf = Label::kUninformative;
  const std::array<std::pair<Label, Label>, 4> cells = {
      {{inf, inf}, {inf, uninf}, {uninf, inf}, {uninf, uninf}}};
  for (std::size_t k = 0; k < 4; ++k) {
    for (std::int64_t i = 0; i < c[k]; ++i) {
      preds.push_back(cells[k].first);
      golds.push_back(cells[k].second);
    }
  }
  return {preds, golds};
}

// Deterministic split: every `stride`-th example goes to the second set.
inline std::pair<LabeledDataset, LabeledDataset> SplitEvery(const LabeledDataset &d,
                                                            int stride) {
  LabeledDataset train(Split::kTrain), dev(Split::kDev);
  for (std::size_t i = 0; i < d.size(); ++i) {
    (static_cast<int>(i % static_cast<std::size_t>(stride)) == stride - 1 ? dev : train)
        .Add(d[i]);
  }
  return {train, dev};
}

}  // namespace triggerprobe::testing

#endif  // TRIGGERPROBE_TESTS_TEST_UTIL_H_

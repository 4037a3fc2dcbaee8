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

#include "triggerprobe/augmentor.h"

#include <algorithm>
#include <exception>
#include <thread>
#include <utility>

#include "json.hpp"
#include "triggerprobe/errors.h"

namespace triggerprobe {

namespace {

std::uint64_t Fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t Mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Applies `fills` (in mask order) to the source text.
std::string ApplyFills(const MaskedExample &masked, const std::vector<Fill> &fills) {
  std::vector<std::string> tokens;
  tokens.reserve(fills.size());
  for (const Fill &f : fills) tokens.push_back(f.token);
  return RenderMasked(masked, tokens);
}

AugmentedExample Unfilled(const MaskedExample &masked) {
  AugmentedExample out;
  out.source_id = masked.source_id;
  out.id = masked.source_id + kAugmentedIdSuffix;
  if (!masked.label) throw DataError("example '" + masked.source_id + "' is unlabeled");
  out.label = *masked.label;
  out.mask_positions = masked.mask_positions;
  return out;
}

}  // namespace

MaskedExample MaskExample(const Example &example, const TokenSet &replacement_tokens) {
  if (replacement_tokens.empty()) throw InvalidArgument("replacement set is empty");
  MaskedExample masked;
  masked.source_id = example.id;
  masked.source_text = example.text;
  masked.label = example.label;
  for (Token &t : TokenizeWithSpans(example.text)) {
    if (replacement_tokens.count(t.text) > 0) {
      masked.mask_positions.push_back(masked.tokens.size());
      masked.tokens.emplace_back(std::nullopt);
    } else {
      masked.tokens.emplace_back(std::move(t.text));
    }
    masked.spans.push_back(t.span);
  }
  return masked;
}

MaskedExample MaskExample(const Example &example, const ReplacementSet &rset) {
  return MaskExample(example, rset.Tokens());
}

std::string RenderMasked(const MaskedExample &masked, std::span<const std::string> fills) {
  std::string out;
  out.reserve(masked.source_text.size() + 8 * masked.mask_positions.size());
  std::size_t cursor = 0;
  for (std::size_t m = 0; m < masked.mask_positions.size(); ++m) {
    const TokenSpan span = masked.spans[masked.mask_positions[m]];
    out.append(masked.source_text, cursor, span.begin - cursor);
    out += m < fills.size() ? fills[m] : std::string(kMaskToken);
    cursor = span.end;
  }
  out.append(masked.source_text, cursor, std::string::npos);
  return out;
}

std::uint64_t FillRng::Next() {
  state_ += 0x9e3779b97f4a7c15ULL;
  return Mix(state_);
}

std::uint64_t FillRng::Below(std::uint64_t bound) {
  // Reject the tail so every residue is equally likely.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound);
  std::uint64_t x;
  do {
    x = Next();
  } while (x >= limit);
  return x % bound;
}

FillRng FillRng::ForExample(std::uint64_t seed, std::string_view source_id) {
  return FillRng(Mix(seed ^ Mix(Fnv1a(source_id))));
}

ClassConditionalFiller::ClassConditionalFiller(const Vocabulary &vocab)
    : terms_(vocab.terms()) {
  counts_.reserve(vocab.size());
  for (std::size_t i = 0; i < vocab.size(); ++i) counts_.push_back(vocab.class_counts(i));
}

std::shared_ptr<const ClassConditionalFiller::Tables> ClassConditionalFiller::TablesFor(
    const TokenSet &forbidden) {
  std::vector<std::string> key(forbidden.begin(), forbidden.end());
  std::sort(key.begin(), key.end());
  std::lock_guard<std::mutex> lock(mu_);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  auto tables = std::make_shared<Tables>();
  for (Label label : kAllLabels) {
    Table &t = (*tables)[LabelIndex(label)];
    std::int64_t running = 0;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const std::int64_t w = counts_[i][LabelIndex(label)];
      if (w <= 0 || forbidden.count(terms_[i]) > 0) continue;
      running += w;
      t.index.push_back(i);
      t.cumulative.push_back(running);
    }
  }
  if (cache_.size() > 16) cache_.clear();
  cache_.emplace(std::move(key), tables);
  return tables;
}

std::vector<std::pair<std::string, std::int64_t>> ClassConditionalFiller::Candidates(
    Label label, const TokenSet &forbidden) {
  const auto tables = TablesFor(forbidden);
  const Table &t = (*tables)[LabelIndex(label)];
  std::vector<std::pair<std::string, std::int64_t>> out;
  std::int64_t prev = 0;
  for (std::size_t k = 0; k < t.index.size(); ++k) {
    out.emplace_back(terms_[t.index[k]], t.cumulative[k] - prev);
    prev = t.cumulative[k];
  }
  return out;
}

std::string ClassConditionalFiller::Sample(Label label, const TokenSet &forbidden,
                                           FillRng &rng, std::string_view source_id) {
  const auto tables = TablesFor(forbidden);
  const Table &t = (*tables)[LabelIndex(label)];
  if (t.index.empty()) {
    throw DataError("no eligible fill candidate for example '" + std::string(source_id) +
                    "' (label " + std::string(LabelName(label)) + ")");
  }
  const auto r = static_cast<std::int64_t>(
      rng.Below(static_cast<std::uint64_t>(t.cumulative.back())));
  const auto it = std::upper_bound(t.cumulative.begin(), t.cumulative.end(), r);
  return terms_[t.index[static_cast<std::size_t>(it - t.cumulative.begin())]];
}

AugmentedExample ClassConditionalFiller::Fill(const MaskedExample &masked,
                                              const TokenSet &forbidden, std::uint64_t seed) {
  AugmentedExample out = Unfilled(masked);
  FillRng rng = FillRng::ForExample(seed, masked.source_id);
  for (std::size_t pos : masked.mask_positions) {
    out.fills.push_back({pos, Sample(out.label, forbidden, rng, masked.source_id), false});
  }
  out.text = ApplyFills(masked, out.fills);
  return out;
}

AugmentedExample ClassConditionalFill(const MaskedExample &masked, const Vocabulary &vocab,
                                      const TokenSet &forbidden, std::uint64_t seed) {
  ClassConditionalFiller filler(vocab);
  return filler.Fill(masked, forbidden, seed);
}

std::optional<std::string> NormalizeCandidate(std::string_view candidate) {
  const auto tokens = TokenizeWithSpans(candidate);
  if (tokens.size() != 1 || tokens[0].span.begin != 0 ||
      tokens[0].span.end != candidate.size()) {
    return std::nullopt;
  }
  return tokens[0].text;
}

BackendFiller::BackendFiller(BackendClient &client, ClassConditionalFiller &fallback,
                             int top_k)
    : client_(client), fallback_(fallback), top_k_(top_k) {
  if (top_k <= 0) throw InvalidArgument("top_k must be positive");
}

AugmentedExample BackendFiller::Fill(const MaskedExample &masked, const TokenSet &forbidden,
                                     std::uint64_t seed) {
  AugmentedExample out = Unfilled(masked);
  FillRng rng = FillRng::ForExample(seed, masked.source_id);
  std::vector<std::string> chosen;
  for (std::size_t pos : masked.mask_positions) {
    const std::string query = RenderMasked(masked, chosen);
    ++calls_;
    const auto candidates = client_.FillMask(query, top_k_);
    std::optional<std::string> pick;
    for (const FillCandidate &c : candidates) {
      auto token = NormalizeCandidate(c.token);
      if (token && forbidden.count(*token) == 0) {
        pick = std::move(token);
        break;
      }
    }
    const bool fallback = !pick;
    if (fallback) {
      ++fallbacks_;
      pick = fallback_.Sample(out.label, forbidden, rng, masked.source_id);
    }
    chosen.push_back(*pick);
    out.fills.push_back({pos, *pick, fallback});
  }
  out.text = RenderMasked(masked, chosen);
  return out;
}

AugmentResult AugmentDataset(const LabeledDataset &dataset, const ReplacementSet &rset,
                             MaskFiller &filler, std::uint64_t seed, unsigned threads) {
  if (!dataset.fully_labeled()) throw DataError("augment: dataset has unlabeled examples");
  const TokenSet forbidden = rset.Tokens();
  if (forbidden.empty()) throw InvalidArgument("augment: replacement set is empty");
  for (const Example &e : dataset) {
    if (dataset.Contains(e.id + kAugmentedIdSuffix)) {
      throw DataError("augment: id '" + e.id + kAugmentedIdSuffix +
                      "' already exists in the dataset");
    }
  }

  const std::size_t n = dataset.size();
  std::vector<AugmentedExample> augmented(n);
  auto work = [&](std::size_t i) {
    augmented[i] = filler.Fill(MaskExample(dataset[i], forbidden), forbidden, seed);
  };

  const unsigned workers =
      filler.concurrent() ? std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)))
                          : 1u;
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) work(i);
  } else {
    std::vector<std::exception_ptr> errors(n);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < n; i += workers) {
          try {
            work(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (std::thread &t : pool) t.join();
    for (const auto &e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  AugmentResult result{LabeledDataset(dataset.split()), {}};
  result.dataset.Reserve(2 * n);
  for (const Example &e : dataset) result.dataset.Add(e);
  for (const AugmentedExample &a : augmented) {
    result.dataset.Add(Example{a.id, a.text, a.label});
  }
  result.augmented = std::move(augmented);
  return result;
}

std::string SerializeProvenance(const std::vector<AugmentedExample> &augmented) {
  std::string out;
  for (const AugmentedExample &a : augmented) {
    nlohmann::json fills = nlohmann::json::array();
    for (const Fill &f : a.fills) {
      fills.push_back({{"position", f.position}, {"token", f.token}, {"fallback", f.fallback}});
    }
    const nlohmann::json record = {{"source_id", a.source_id},
                                   {"id", a.id},
                                   {"label", LabelName(a.label)},
                                   {"mask_positions", a.mask_positions},
                                   {"fills", fills}};
    out += record.dump();
    out += '\n';
  }
  return out;
}

}  // namespace triggerprobe

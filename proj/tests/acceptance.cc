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

// Acceptance run: one PASS/FAIL/SKIP line per criterion. Exits nonzero if
// any criterion fails. Criteria needing the shared-task data read
// $TRIGGERPROBE_DATA_DIR/{train,dev}.tsv and are skipped without it.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "test_util.h"
#include "triggerprobe/augmentor.h"
#include "triggerprobe/backend_protocol.h"
#include "triggerprobe/commands.h"
#include "triggerprobe/corpus.h"
#include "triggerprobe/errors.h"
#include "triggerprobe/evaluator.h"
#include "triggerprobe/feature_stats.h"
#include "triggerprobe/naive_bayes.h"
#include "triggerprobe/perturber.h"

namespace triggerprobe {
namespace {

namespace fs = std::filesystem;
using namespace std::chrono_literals;
using Clock = std::chrono::steady_clock;

// Tolerances and budgets.
constexpr double kChi2Tolerance = 1e-9;
constexpr int kChi2Corpora = 100;
constexpr double kFixtureTolerance = 1e-12;
constexpr int kReferenceMinOverlap = 15;
constexpr int kAugmentCases = 1000;
constexpr double kSyntheticMinCleanF1 = 0.90;
constexpr double kSyntheticMinDrop = 0.30;
constexpr double kSharedTaskMinCleanF1 = 0.75;
constexpr double kSharedTaskMinDrop = 0.10;

// Published top-20 chi-squared unigrams for the shared-task train split.
const std::vector<std::string> kReferenceTop20 = {
    "breaking", "bringing", "case",     "cases",  "confirmed", "confirms",   "county",
    "deaths",   "department", "died",   "employee", "help",    "new",        "old",
    "positive", "recovered", "reported", "tested", "total",    "user"};

enum class Status { kPass, kFail, kSkip };

struct Outcome {
  Status status = Status::kPass;
  std::string detail;
};

// Collects failed checks; the outcome passes only if every check held.
class Checks {
 public:
  void Expect(bool ok, const std::string &what) {
    if (!ok) failures_.push_back(what);
  }
  Outcome Finish(std::string detail) const {
    Outcome o;
    o.status = failures_.empty() ? Status::kPass : Status::kFail;
    o.detail = std::move(detail);
    for (const auto &f : failures_) o.detail += "; FAILED: " + f;
    return o;
  }

 private:
  std::vector<std::string> failures_;
};

std::string Fmt(const char *format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string Pct(double v) { return Fmt("%.2f", 100 * v); }

std::optional<fs::path> DataDir() {
  const char *env = std::getenv("TRIGGERPROBE_DATA_DIR");
  if (env == nullptr || *env == '\0') return std::nullopt;
  return fs::path(env);
}

std::optional<fs::path> DevFile(const fs::path &dir) {
  for (const char *name : {"dev.tsv", "valid.tsv"}) {
    if (fs::is_regular_file(dir / name)) return dir / name;
  }
  return std::nullopt;
}

Outcome Chi2Oracle() {
  std::mt19937_64 rng(20200901);
  double worst = 0;
  std::size_t terms = 0;
  for (int i = 0; i < kChi2Corpora; ++i) {
    const LabeledDataset d = testing::RandomCorpus(rng, 2, 10, 2, 8);
    const auto oracle = testing::OracleChi2(d);
    const auto scores = Chi2Scores(BuildVocab(d, 1), d);
    if (scores.size() != oracle.size()) {
      return {Status::kFail, "term set differs from oracle on corpus " + std::to_string(i)};
    }
    for (const TermScore &s : scores) {
      worst = std::max(worst, std::abs(s.chi2 - oracle.at(s.term)));
      ++terms;
    }
  }
  Checks c;
  c.Expect(worst <= kChi2Tolerance, "max error above tolerance");
  return c.Finish(std::to_string(kChi2Corpora) + " corpora, " + std::to_string(terms) +
                  " terms, max |err| " + Fmt("%.3g", worst) + " <= 1e-9");
}

Outcome FixtureValues() {
  const LabeledDataset d = testing::FixtureCorpus();
  const auto scores = Chi2Scores(BuildVocab(d, 1), d);
  double deaths = NAN, stay = NAN;
  for (const TermScore &s : scores) {
    if (s.term == "deaths") deaths = s.chi2;
    if (s.term == "stay") stay = s.chi2;
  }
  const ReplacementSet top = TopN(scores, 1);
  Checks c;
  c.Expect(std::abs(deaths - 2.0) <= kFixtureTolerance, "chi2(deaths) != 2.0");
  c.Expect(std::abs(stay - 1.0) <= kFixtureTolerance, "chi2(stay) != 1.0");
  c.Expect(top.terms.size() == 1 && top.terms[0].term == "deaths", "top_n(1) != {deaths}");
  return c.Finish("chi2(deaths)=" + Fmt("%.6f", deaths) + ", chi2(stay)=" + Fmt("%.6f", stay) +
                  ", top_n(1)={" + (top.terms.empty() ? "" : top.terms[0].term) + "}");
}

Outcome ReferenceTop20() {
  const auto dir = DataDir();
  if (!dir || !fs::is_regular_file(*dir / "train.tsv")) {
    return {Status::kSkip, "shared-task train.tsv not available (set TRIGGERPROBE_DATA_DIR)"};
  }
  const LabeledDataset train = ReadTsvFile((*dir / "train.tsv").string(), Split::kTrain);
  const ReplacementSet top = ComputeReplacementSet(train, 20, kDefaultMinDf);
  const std::set<std::string> reference(kReferenceTop20.begin(), kReferenceTop20.end());
  int overlap = 0;
  std::string ours;
  for (const TermScore &t : top.terms) {
    overlap += reference.count(t.term) > 0;
    ours += (ours.empty() ? "" : ",") + t.term;
  }
  Checks c;
  c.Expect(overlap >= kReferenceMinOverlap, "overlap below 15");
  return c.Finish(std::to_string(overlap) + "/20 terms shared with the reference list [" + ours + "]");
}

Outcome AugmentationInvariants() {
  std::mt19937_64 rng(7000);
  int cases = 0, attempts = 0;
  std::size_t examples = 0, fills = 0;
  Checks c;
  while (cases < kAugmentCases && attempts < 10 * kAugmentCases) {
    ++attempts;
    const LabeledDataset d = testing::RandomCorpus(rng, 2, 12, 3, 10);
    const Vocabulary vocab = BuildVocab(d, 1);
    const ReplacementSet rset =
        TopN(Chi2Scores(vocab, d), 1 + static_cast<std::int64_t>(rng() % 3));
    const TokenSet forbidden = rset.Tokens();
    ClassConditionalFiller filler(vocab);
    const std::uint64_t seed = rng();
    AugmentResult r;
    try {
      r = AugmentDataset(d, rset, filler, seed, 1 + static_cast<unsigned>(rng() % 3));
    } catch (const DataError &) {
      continue;  // every term of some class is in the replacement set
    }
    ++cases;
    c.Expect(r.dataset.size() == 2 * d.size(), "size not doubled");
    for (std::size_t i = 0; i < d.size(); ++i) {
      const Example &orig = d[i];
      const Example &aug = r.dataset[d.size() + i];
      c.Expect(r.dataset[i] == orig, "original not preserved");
      c.Expect(aug.label == orig.label, "label changed");
      const auto before = Tokenize(orig.text), after = Tokenize(aug.text);
      if (before.size() != after.size()) {
        c.Expect(false, "token count changed");
        continue;
      }
      for (std::size_t k = 0; k < before.size(); ++k) {
        if (forbidden.count(before[k])) {
          ++fills;
          c.Expect(forbidden.count(after[k]) == 0, "fill inside replacement set");
        } else {
          c.Expect(after[k] == before[k], "non-mask token changed");
        }
      }
      ++examples;
    }
    const AugmentResult again = AugmentDataset(d, rset, filler, seed);
    c.Expect(SerializeTsv(again.dataset) == SerializeTsv(r.dataset) &&
                 SerializeProvenance(again.augmented) == SerializeProvenance(r.augmented),
             "rerun not byte-identical");
  }
  c.Expect(cases >= kAugmentCases, "fewer than 1000 cases generated");
  return c.Finish(std::to_string(cases) + " cases, " + std::to_string(examples) +
                  " examples, " + std::to_string(fills) + " fills");
}

Outcome PerturbationExactness() {
  Checks c;
  std::size_t rows = 0;
  for (const LabeledDataset &d : {testing::SyntheticCorpus({}), testing::FixtureCorpus()}) {
    const LabeledDataset p = PerturbDataset(d, RenderTrigger({kDefaultTriggerTemplate, 10}));
    c.Expect(p.size() == d.size(), "row count changed");
    c.Expect(p.LabelCounts() == d.LabelCounts(), "label counts changed");
    const std::string prefix = "10 deaths ";
    for (std::size_t i = 0; i < d.size() && i < p.size(); ++i) {
      c.Expect(p[i].text == prefix + d[i].text, "text != \"10 deaths \" + original");
      c.Expect(p[i].text.rfind(prefix, 0) == 0 && p[i].text.substr(prefix.size()) == d[i].text,
               "prefix strip did not recover input");
      c.Expect(p[i].id == d[i].id && p[i].label == d[i].label, "id/label changed");
      ++rows;
    }
  }
  return c.Finish(std::to_string(rows) + " rows checked");
}

Outcome MetricOracle() {
  Checks c;
  for (const auto &k : testing::ConfusionCases()) {
    const auto [preds, golds] = testing::ListsFor(k.tp_fp_fn_tn);
    const EvalReport r = Score(preds, golds);
    c.Expect(r.precision == testing::Frac(k.precision) && r.recall == testing::Frac(k.recall) &&
                 r.f1 == testing::Frac(k.f1),
             "mismatch on tp,fp,fn,tn=" + std::to_string(k.tp_fp_fn_tn[0]) + "," +
                 std::to_string(k.tp_fp_fn_tn[1]) + "," + std::to_string(k.tp_fp_fn_tn[2]) +
                 "," + std::to_string(k.tp_fp_fn_tn[3]));
  }
  const Label i = Label::kInformative, u = Label::kUninformative;
  const EvalReport none = Score({u, u}, {i, u});
  c.Expect(none.precision == 0 && none.f1 == 0, "no-positive-prediction convention");
  const EvalReport no_gold = Score({i, u}, {u, u});
  c.Expect(no_gold.recall == 0 && no_gold.f1 == 0, "no-positive-gold convention");

  auto run = [](double f1) {
    EvalReport r;
    r.f1 = f1;
    return r;
  };
  const double k = 0.0018 * std::sqrt(2.0);
  const std::string five =
      FormatMeanStd(Aggregate({run(0.9272 - k), run(0.9272), run(0.9272), run(0.9272),
                               run(0.9272 + k)}));
  const std::string one = FormatMeanStd(Aggregate({run(0.9272)}));
  c.Expect(five == "92.72 (0.18)", "five-run display '" + five + "'");
  c.Expect(one == "92.72 (0.00)", "single-run display '" + one + "'");
  return c.Finish(std::to_string(testing::ConfusionCases().size()) +
                  " confusion matrices exact; display \"" + five + "\", \"" + one + "\"");
}

std::string RobustnessSummary(const char *name, const RobustnessReport &r) {
  return std::string(name) + " clean " + Pct(r.clean.f1) + " -> " + Pct(r.adversarial.f1) +
         " (drop " + Pct(r.f1_drop) + ", U->I flips " +
         std::to_string(r.gold_uninformative_flipped) + "/" +
         std::to_string(r.clean.confusion.fp + r.clean.confusion.tn) +
         ", UNINFORMATIVE-class F1 " + Pct(r.clean.f1_uninformative) + " -> " +
         Pct(r.adversarial.f1_uninformative) + ")";
}

Outcome Phenomenon(const LabeledDataset &train, const LabeledDataset &dev, double min_clean,
                   double min_drop) {
  const RobustnessReport plain =
      BaselineRobustness(train, dev, kDefaultTrigger, false, 20, kDefaultMinDf, 1.0, kDefaultSeed);
  const RobustnessReport aug =
      BaselineRobustness(train, dev, kDefaultTrigger, true, 20, kDefaultMinDf, 1.0, kDefaultSeed);
  Checks c;
  c.Expect(plain.clean.f1 >= min_clean, "clean F1 " + Pct(plain.clean.f1) + " < " + Pct(min_clean));
  c.Expect(plain.f1_drop >= min_drop, "drop " + Pct(plain.f1_drop) + " < " + Pct(min_drop));
  c.Expect(aug.f1_drop < plain.f1_drop,
           "augmented drop " + Pct(aug.f1_drop) + " not below plain " + Pct(plain.f1_drop));
  return c.Finish(std::to_string(train.size()) + "/" + std::to_string(dev.size()) +
                  " train/dev; " + RobustnessSummary("plain", plain) + "; " +
                  RobustnessSummary("aug", aug));
}

Outcome SyntheticPhenomenon() {
  const auto [train, dev] = testing::SplitEvery(testing::SyntheticCorpus({}), 4);
  return Phenomenon(train, dev, kSyntheticMinCleanF1, kSyntheticMinDrop);
}

Outcome SharedTaskPhenomenon() {
  const auto dir = DataDir();
  if (!dir || !fs::is_regular_file(*dir / "train.tsv") || !DevFile(*dir)) {
    return {Status::kSkip,
            "shared-task train.tsv/dev.tsv not available (set TRIGGERPROBE_DATA_DIR)"};
  }
  const LabeledDataset train = ReadTsvFile((*dir / "train.tsv").string(), Split::kTrain);
  const LabeledDataset dev = ReadTsvFile(DevFile(*dir)->string(), Split::kDev);
  return Phenomenon(train, dev, kSharedTaskMinCleanF1, kSharedTaskMinDrop);
}

Outcome ProtocolConformance() {
  const std::string stub = std::string("cmd:") + STUB_BACKEND_PATH;
  ConnectOptions quick;
  quick.handshake_timeout = 2s;
  quick.call_timeout = 300ms;
  quick.heartbeat = 300ms;
  Checks c;
  auto throws = [](auto fn, auto tag) {
    try {
      fn();
    } catch (const decltype(tag) &) {
      return true;
    } catch (...) {
      return false;
    }
    return false;
  };

  // Handshake.
  {
    BackendClient client = BackendClient::Connect(stub, quick);
    c.Expect(client.protocol_version() == kProtocolVersion && client.outstanding() == 0 &&
                 client.HasCapability(BackendOp::kFillMask),
             "handshake state");
  }
  c.Expect(throws([&] { BackendClient::Connect(stub + " --version 2", quick); },
                  ProtocolError("")),
           "version mismatch not a protocol error");
  ConnectOptions need_train = quick;
  need_train.required_ops = {BackendOp::kTrain};
  c.Expect(throws([&] { BackendClient::Connect(stub + " --caps predict,fill_mask", need_train); },
                  ProtocolError("")),
           "missing capability not a protocol error");

  // Arity and ordering.
  const fs::path log = fs::temp_directory_path() / ("tp_accept_" + std::to_string(::getpid()));
  fs::remove(log);
  {
    BackendClient client = BackendClient::Connect(stub + " --log " + log.string(), quick);
    const std::vector<std::string> texts = {"10 deaths", "stay home", "deaths reported"};
    const auto labels = client.Predict(texts);
    c.Expect(labels == std::vector<Label>{Label::kInformative, Label::kUninformative,
                                          Label::kInformative},
             "predict arity/order");
    c.Expect(client.FillMask("10 [MASK] reported", 3).size() <= 3, "fill_mask top_k");
    c.Expect(!client.Train({{"train", nlohmann::json::array()}}).empty(), "train model id");
  }
  {
    std::ifstream in(log);
    std::uint64_t expect = 0;
    bool ordered = true;
    for (std::string line; std::getline(in, line); ++expect) {
      ordered = ordered && nlohmann::json::parse(line)["request_id"] == expect;
    }
    c.Expect(ordered && expect == 5, "request ids not 0..4 in order");
  }
  fs::remove(log);
  {
    BackendClient client = BackendClient::Connect(stub + " --short-on predict", quick);
    c.Expect(throws([&] { client.Predict({"a", "b"}); }, ProtocolError("")),
             "short label list accepted");
  }
  {
    BackendClient client = BackendClient::Connect(stub + " --wrong-id-on predict", quick);
    c.Expect(throws([&] { client.Predict({"a"}); }, ProtocolError("")) && client.broken(),
             "mismatched request id accepted");
  }

  // Timeout and crash containment.
  double hang_s = 0;
  {
    BackendClient client = BackendClient::Connect(stub + " --hang-on predict", quick);
    const auto start = Clock::now();
    c.Expect(throws([&] { client.Predict({"a"}); }, TransportError("")) && client.broken(),
             "hung backend not a transport error");
    hang_s = std::chrono::duration<double>(Clock::now() - start).count();
    c.Expect(hang_s < 1.0, "hung call exceeded its timeout");
  }
  {
    BackendClient client = BackendClient::Connect(stub + " --crash-on predict", quick);
    c.Expect(throws([&] { client.Predict({"a"}); }, TransportError("")) && client.broken(),
             "crash not a transport error");
  }
  return c.Finish("handshake, version, capability, arity, ordering, id pairing, timeout (" +
                  Fmt("%.2f", hang_s) + " s for 0.30 s deadline), crash");
}

struct Criterion {
  const char *id;
  const char *name;
  double budget_s;
  std::function<Outcome()> run;
};

int Main() {
  const std::vector<Criterion> criteria = {
      {"1", "chi-squared oracle equivalence", 1.0, Chi2Oracle},
      {"2", "fixture chi-squared values", 0.1, FixtureValues},
      {"3", "reference top-20 unigram overlap", 10.0, ReferenceTop20},
      {"4", "augmentation invariants", 30.0, AugmentationInvariants},
      {"5", "perturbation exactness", 1.0, PerturbationExactness},
      {"6", "metric oracle", 1.0, MetricOracle},
      {"7a", "trigger phenomenon, synthetic corpus", 30.0, SyntheticPhenomenon},
      {"7b", "trigger phenomenon, shared-task data", 60.0, SharedTaskPhenomenon},
      {"8", "backend protocol conformance", 5.0, ProtocolConformance},
  };
  int failed = 0;
  for (const Criterion &c : criteria) {
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o = {Status::kFail, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    if (o.status == Status::kPass && elapsed >= c.budget_s) {
      o.status = Status::kFail;
      o.detail += "; FAILED: runtime over budget";
    }
    const char *tag = o.status == Status::kPass ? "PASS" : o.status == Status::kFail ? "FAIL" : "SKIP";
    std::printf("[%s] %-3s %s (%.3f s, budget %.1f s): %s\n", tag, c.id, c.name, elapsed,
                c.budget_s, o.detail.c_str());
    std::fflush(stdout);
    failed += o.status == Status::kFail;
  }
  std::printf("%d criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace triggerprobe

int main() { return triggerprobe::Main(); }

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

#include "triggerprobe/commands.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "triggerprobe/backend_protocol.h"
#include "triggerprobe/naive_bayes.h"
#include "triggerprobe/perturber.h"

namespace triggerprobe {

namespace fs = std::filesystem;

namespace {

std::string ReadFile(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string OutPath(const RunConfig &config, const char *name) {
  return (fs::path(config.out_dir) / name).string();
}

// Writes, then reads back and compares so a zero exit means the bytes landed.
void WriteVerified(const std::string &path, const std::string &content) {
  {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << content;
    if (!out.flush()) throw IoError("write failed for '" + path + "'");
  }
  if (ReadFile(path) != content) throw IoError("verification failed for '" + path + "'");
}

void EnsureOutDir(const RunConfig &config) {
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec || !fs::is_directory(config.out_dir)) {
    throw IoError("cannot create output directory '" + config.out_dir + "'");
  }
}

void RequireFile(const std::string &path, const char *what) {
  if (path.empty()) throw InvalidArgument(std::string("missing --") + what + " path");
  if (!fs::is_regular_file(path)) {
    throw IoError(std::string(what) + " file '" + path + "' does not exist");
  }
}

NaiveBayesModel TrainBaseline(const LabeledDataset &train, std::size_t min_df, double alpha) {
  return TrainNaiveBayes(train, BuildVocab(train, min_df), alpha);
}

LabeledDataset AugmentBuiltin(const LabeledDataset &train, const ReplacementSet &rset,
                              std::size_t min_df, std::uint64_t seed, unsigned threads) {
  ClassConditionalFiller filler(BuildVocab(train, min_df));
  return AugmentDataset(train, rset, filler, seed, threads).dataset;
}

nlohmann::json TrainPayload(const RunConfig &config, const LabeledDataset &train,
                            const LabeledDataset &dev, std::uint64_t seed) {
  const BackendTrainParams &p = config.train_params;
  return {{"train", DatasetToJson(train)},
          {"dev", DatasetToJson(dev)},
          {"params",
           {{"learning_rate", p.learning_rate},
            {"batch_size", p.batch_size},
            {"max_len", p.max_len},
            {"epochs", p.epochs},
            {"dropout", p.dropout},
            {"seed", seed}}}};
}

BackendClient ConnectBackend(const RunConfig &config, std::vector<BackendOp> ops) {
  ConnectOptions options;
  options.required_ops = std::move(ops);
  return BackendClient::Connect(ResolveBackendTarget(config), options);
}

// Training set for one run: plain, or doubled by augmentation.
LabeledDataset RunTrainingSet(const RunConfig &config, const LabeledDataset &train,
                              std::uint64_t seed, BackendClient *client) {
  if (!config.with_aug) return train;
  const ReplacementSet rset = ComputeReplacementSet(train, config.top_n, config.min_df);
  if (config.filler == FillerChoice::kBackend) {
    if (client == nullptr) throw InvalidArgument("backend filler needs a backend");
    ClassConditionalFiller fallback(BuildVocab(train, config.min_df));
    BackendFiller filler(*client, fallback, config.top_k);
    return AugmentDataset(train, rset, filler, seed).dataset;
  }
  return AugmentBuiltin(train, rset, config.min_df, seed, config.threads);
}

}  // namespace

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidArgument: return 2;
    case ErrorKind::kIo: return 3;
    case ErrorKind::kParse: return 4;
    case ErrorKind::kData: return 5;
    case ErrorKind::kProtocol: return 6;
    case ErrorKind::kTransport: return 7;
  }
  return 1;
}

void ValidateConfig(const RunConfig &config, bool needs_train, bool needs_dev) {
  if (config.repeat < 1) throw InvalidArgument("--repeat must be at least 1");
  if (config.top_n <= 0) throw InvalidArgument("--top-n must be positive");
  if (config.min_df == 0) throw InvalidArgument("--min-df must be positive");
  if (!(config.alpha > 0)) throw InvalidArgument("--alpha must be positive");
  if (config.top_k <= 0) throw InvalidArgument("--top-k must be positive");
  if (needs_train) RequireFile(config.train_path, "train");
  if (needs_dev) RequireFile(config.dev_path, "dev");
  if (!config.test_path.empty()) RequireFile(config.test_path, "test");
  if (!config.rset_path.empty()) RequireFile(config.rset_path, "rset");
}

std::string ResolveTrigger(const RunConfig &config) {
  if (!config.trigger.empty()) {
    return RenderTrigger(TriggerSpec{config.trigger, config.trigger_n});
  }
  if (!config.trigger_template.empty() || config.trigger_n) {
    const std::string templ =
        config.trigger_template.empty() ? kDefaultTriggerTemplate : config.trigger_template;
    return RenderTrigger(TriggerSpec{templ, config.trigger_n});
  }
  return kDefaultTrigger;
}

std::string ResolveBackendTarget(const RunConfig &config) {
  if (!config.backend_target.empty()) return config.backend_target;
  if (const char *env = std::getenv(kBackendEnvVar); env != nullptr && *env != '\0') {
    return env;
  }
  throw InvalidArgument(std::string("no backend target: pass --backend or set ") +
                        kBackendEnvVar);
}

ReplacementSet ComputeReplacementSet(const LabeledDataset &train, std::int64_t top_n,
                                     std::size_t min_df) {
  const Vocabulary vocab = BuildVocab(train, min_df);
  if (vocab.empty()) {
    throw DataError("no term reaches min_df=" + std::to_string(min_df) +
                    "; the replacement set would be empty");
  }
  return TopN(Chi2Scores(vocab, train), top_n);
}

RobustnessReport BaselineRobustness(const LabeledDataset &train, const LabeledDataset &dev,
                                    const std::string &trigger, bool augment,
                                    std::int64_t top_n, std::size_t min_df, double alpha,
                                    std::uint64_t seed) {
  LabeledDataset training = train;
  if (augment) {
    training = AugmentBuiltin(train, ComputeReplacementSet(train, top_n, min_df), min_df,
                              seed, 1);
  }
  const NaiveBayesModel model = TrainBaseline(training, min_df, alpha);
  NaiveBayesClassifier classifier(model);
  return Robustness(classifier, dev, trigger);
}

ReplacementSet CmdStats(const RunConfig &config) {
  ValidateConfig(config, true, false);
  const LabeledDataset train = ReadTsvFile(config.train_path, Split::kTrain);
  const ReplacementSet rset = ComputeReplacementSet(train, config.top_n, config.min_df);
  EnsureOutDir(config);
  const std::string doc = SerializeReplacementSet(rset);
  WriteVerified(OutPath(config, kRsetFile), doc);
  WriteVerified(OutPath(config, kTopTableFile), FormatTopTable(rset));
  ParseReplacementSet(ReadFile(OutPath(config, kRsetFile)));
  return rset;
}

AugmentResult CmdAugment(const RunConfig &config) {
  ValidateConfig(config, true, false);
  const LabeledDataset train = ReadTsvFile(config.train_path, Split::kTrain);
  const ReplacementSet rset =
      config.rset_path.empty() ? ComputeReplacementSet(train, config.top_n, config.min_df)
                               : ParseReplacementSet(ReadFile(config.rset_path));
  if (rset.terms.empty()) throw DataError("replacement set is empty");

  ClassConditionalFiller builtin(BuildVocab(train, config.min_df));
  AugmentResult result;
  if (config.filler == FillerChoice::kBackend) {
    BackendClient client = ConnectBackend(config, {BackendOp::kFillMask});
    BackendFiller filler(client, builtin, config.top_k);
    result = AugmentDataset(train, rset, filler, config.seed);
    client.Shutdown();
  } else {
    result = AugmentDataset(train, rset, builtin, config.seed, config.threads);
  }
  if (result.dataset.size() != 2 * train.size()) {
    throw DataError("augmented corpus is not exactly twice the input size");
  }

  EnsureOutDir(config);
  const std::string tsv = SerializeTsv(result.dataset);
  WriteVerified(OutPath(config, kAugmentedFile), tsv);
  WriteVerified(OutPath(config, kProvenanceFile), SerializeProvenance(result.augmented));
  if (ParseTsv(tsv, Split::kTrain).size() != result.dataset.size()) {
    throw DataError("augmented corpus failed to re-parse");
  }
  return result;
}

LabeledDataset CmdPerturb(const RunConfig &config) {
  const std::string input = config.input_path.empty() ? config.dev_path : config.input_path;
  RequireFile(input, "input");
  const std::string trigger = ResolveTrigger(config);
  const LabeledDataset source = ReadTsvFile(input, Split::kDev);
  LabeledDataset perturbed = PerturbDataset(source, trigger);
  EnsureOutDir(config);
  const std::string tsv = SerializeTsv(perturbed);
  WriteVerified(OutPath(config, kPerturbedFile), tsv);
  if (ParseTsv(tsv, Split::kDev).size() != source.size()) {
    throw DataError("perturbed set failed to re-parse");
  }
  return perturbed;
}

EvalReport CmdTrainEval(const RunConfig &config) {
  ValidateConfig(config, true, true);
  const LabeledDataset train = ReadTsvFile(config.train_path, Split::kTrain);
  const LabeledDataset dev = ReadTsvFile(config.dev_path, Split::kDev);
  if (!dev.fully_labeled()) throw DataError("dev set is unlabeled; cannot evaluate");
  if (dev.empty()) throw DataError("dev set is empty");
  const std::vector<Label> golds = Golds(dev);

  std::vector<EvalReport> runs;
  if (config.model == ModelChoice::kBackend) {
    std::vector<BackendOp> ops = {BackendOp::kTrain, BackendOp::kPredict};
    if (config.with_aug && config.filler == FillerChoice::kBackend) {
      ops.push_back(BackendOp::kFillMask);
    }
    BackendClient client = ConnectBackend(config, ops);
    for (int r = 0; r < config.repeat; ++r) {
      const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r);
      const LabeledDataset training = RunTrainingSet(config, train, seed, &client);
      const std::string model_id = client.Train(TrainPayload(config, training, dev, seed));
      runs.push_back(Score(client.Predict(Texts(dev), model_id), golds));
    }
    client.Shutdown();
  } else {
    if (config.with_aug && config.filler == FillerChoice::kBackend) {
      BackendClient client = ConnectBackend(config, {BackendOp::kFillMask});
      for (int r = 0; r < config.repeat; ++r) {
        const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r);
        const NaiveBayesModel model =
            TrainBaseline(RunTrainingSet(config, train, seed, &client), config.min_df, config.alpha);
        NaiveBayesClassifier classifier(model);
        runs.push_back(Score(classifier.PredictBatch(Texts(dev)), golds));
      }
      client.Shutdown();
    } else {
      for (int r = 0; r < config.repeat; ++r) {
        const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r);
        const NaiveBayesModel model =
            TrainBaseline(RunTrainingSet(config, train, seed, nullptr), config.min_df, config.alpha);
        NaiveBayesClassifier classifier(model);
        runs.push_back(Score(classifier.PredictBatch(Texts(dev)), golds));
      }
    }
  }
  const EvalReport report = Aggregate(runs);
  EnsureOutDir(config);
  WriteVerified(OutPath(config, kEvalJsonFile), ToJson(report).dump(2) + "\n");
  WriteVerified(OutPath(config, kEvalTextFile), FormatReport(report));
  return report;
}

RobustnessOutcome CmdRobustness(const RunConfig &config) {
  ValidateConfig(config, true, true);
  const std::string trigger = ResolveTrigger(config);
  const LabeledDataset train = ReadTsvFile(config.train_path, Split::kTrain);
  const LabeledDataset dev = ReadTsvFile(config.dev_path, Split::kDev);
  if (!dev.fully_labeled()) throw DataError("dev set is unlabeled; cannot evaluate");
  if (dev.empty()) throw DataError("dev set is empty");

  RobustnessOutcome outcome;
  const bool needs_client = config.model == ModelChoice::kBackend ||
                            (config.with_aug && config.filler == FillerChoice::kBackend);
  std::optional<BackendClient> client;
  if (needs_client) {
    std::vector<BackendOp> ops;
    if (config.model == ModelChoice::kBackend) ops = {BackendOp::kTrain, BackendOp::kPredict};
    if (config.with_aug && config.filler == FillerChoice::kBackend) {
      ops.push_back(BackendOp::kFillMask);
    }
    client.emplace(ConnectBackend(config, ops));
  }

  auto evaluate = [&](const LabeledDataset &training) {
    if (config.model == ModelChoice::kBackend) {
      const std::string model_id =
          client->Train(TrainPayload(config, training, dev, config.seed));
      BackendClassifier classifier(*client, model_id);
      return Robustness(classifier, dev, trigger);
    }
    const NaiveBayesModel model = TrainBaseline(training, config.min_df, config.alpha);
    NaiveBayesClassifier classifier(model);
    return Robustness(classifier, dev, trigger);
  };

  outcome.plain = evaluate(train);
  if (config.with_aug) {
    RunConfig aug = config;
    aug.with_aug = true;
    outcome.augmented =
        evaluate(RunTrainingSet(aug, train, config.seed, client ? &*client : nullptr));
  }
  if (client) client->Shutdown();

  nlohmann::json doc = {{"schema", "triggerprobe.robustness-run/v1"},
                        {"plain", ToJson(outcome.plain)}};
  std::string text = "[plain]\n" + FormatReport(outcome.plain);
  if (outcome.augmented) {
    doc["augmented"] = ToJson(*outcome.augmented);
    text += "\n[augmented]\n" + FormatReport(*outcome.augmented);
  } else {
    doc["augmented"] = nullptr;
  }
  EnsureOutDir(config);
  WriteVerified(OutPath(config, kRobustJsonFile), doc.dump(2) + "\n");
  WriteVerified(OutPath(config, kRobustTextFile), text);
  return outcome;
}

}  // namespace triggerprobe

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

#ifndef TRIGGERPROBE_BACKEND_PROTOCOL_H_
#define TRIGGERPROBE_BACKEND_PROTOCOL_H_

#include <atomic>
#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "triggerprobe/classifier.h"
#include "triggerprobe/corpus.h"

namespace triggerprobe {

// Protocol v1: one JSON object per line over a byte stream (the standard
// streams of a spawned process, or a TCP connection). See
// docs/protocol-v1.md.
inline constexpr int kProtocolVersion = 1;
inline constexpr char kMaskToken[] = "[MASK]";
inline constexpr char kBackendEnvVar[] = "TRIGGERPROBE_BACKEND";

enum class BackendOp { kTrain, kPredict, kFillMask, kShutdown };

std::string_view BackendOpName(BackendOp op);
std::optional<BackendOp> ParseBackendOp(std::string_view name);

struct BackendRequest {
  BackendOp op = BackendOp::kPredict;
  nlohmann::json payload = nlohmann::json::object();
  std::uint64_t request_id = 0;  // assigned by the client
};

struct BackendResponse {
  std::uint64_t request_id = 0;
  bool ok = false;
  nlohmann::json result;
  std::string error;
};

struct FillCandidate {
  std::string token;
  double score = 0;
};

using namespace std::chrono_literals;

inline constexpr std::chrono::milliseconds kDefaultCallTimeout = 120s;
inline constexpr std::chrono::milliseconds kDefaultHeartbeat = 60s;

struct ConnectOptions {
  std::vector<BackendOp> required_ops;
  std::chrono::milliseconds handshake_timeout = 30s;
  // Default deadline for predict/fill_mask/shutdown.
  std::chrono::milliseconds call_timeout = kDefaultCallTimeout;
  // Train has no overall deadline, but the backend must send a record at
  // least this often.
  std::chrono::milliseconds heartbeat = kDefaultHeartbeat;
};

// Byte-stream endpoint carrying protocol lines.
class LineTransport {
 public:
  virtual ~LineTransport() = default;
  // Throws TransportError on failure.
  virtual void WriteLine(std::string_view line) = 0;
  // Waits until `deadline`; throws TransportError on timeout or EOF.
  virtual std::string ReadLine(std::chrono::steady_clock::time_point deadline) = 0;
  // Releases the endpoint. `force` kills a child process immediately.
  virtual void Close(bool force) = 0;
};

// "cmd:<shell command>" spawns a subprocess; "tcp:<host>:<port>" or a bare
// "<host>:<port>" connects over TCP. Anything else is treated as a command.
std::unique_ptr<LineTransport> OpenTransport(const std::string &target,
                                             std::chrono::milliseconds connect_timeout);

// Synchronous protocol client: one request in flight, strictly increasing
// request ids. Movable, not copyable, and never to be used from two threads
// at once. A timeout, EOF or malformed line marks the client broken.
class BackendClient {
 public:
  // Spawns or connects, then performs the hello handshake. Throws
  // TransportError for spawn/connect failures and ProtocolError for a
  // version mismatch or a missing capability.
  static BackendClient Connect(const std::string &target,
                               const ConnectOptions &options = {});
  // Same, over an already-open transport.
  static BackendClient Connect(std::unique_ptr<LineTransport> transport,
                               const ConnectOptions &options = {});

  BackendClient(BackendClient &&other) noexcept;
  BackendClient &operator=(BackendClient &&other) noexcept;
  BackendClient(const BackendClient &) = delete;
  BackendClient &operator=(const BackendClient &) = delete;
  // Sends shutdown if still healthy.
  ~BackendClient();

  // Assigns the request id. `timeout` defaults per op (see ConnectOptions).
  // ok == false responses are returned, not thrown.
  BackendResponse Call(BackendRequest request,
                       std::optional<std::chrono::milliseconds> timeout = std::nullopt);

  // Convenience wrappers; these throw TransportError carrying the backend's
  // message when it answers ok == false, and ProtocolError on a result that
  // does not match the op's schema.
  std::vector<Label> Predict(const std::vector<std::string> &texts,
                             const std::string &model_id = "");
  std::vector<FillCandidate> FillMask(const std::string &text, int top_k);
  // Returns the backend's model identifier.
  std::string Train(const nlohmann::json &payload);

  void Shutdown();

  bool broken() const { return broken_; }
  bool closed() const { return transport_ == nullptr; }
  int outstanding() const { return in_flight_ ? 1 : 0; }
  int protocol_version() const { return protocol_version_; }
  const std::vector<std::string> &capabilities() const { return capabilities_; }
  bool HasCapability(BackendOp op) const;
  std::uint64_t last_request_id() const { return next_id_ - 1; }

 private:
  BackendClient() = default;
  void Handshake(const ConnectOptions &options);
  BackendResponse ReadResponse(std::uint64_t id, std::chrono::milliseconds wait,
                               bool heartbeat);
  [[noreturn]] void Fail(const std::string &message, bool protocol);

  std::unique_ptr<LineTransport> transport_;
  std::vector<std::string> capabilities_;
  int protocol_version_ = 0;
  std::uint64_t next_id_ = 1;
  bool broken_ = false;
  bool in_flight_ = false;
  std::chrono::milliseconds call_timeout_ = kDefaultCallTimeout;
  std::chrono::milliseconds heartbeat_ = kDefaultHeartbeat;
};

// Routes predictions through a backend model.
class BackendClassifier : public Classifier {
 public:
  BackendClassifier(BackendClient &client, std::string model_id)
      : client_(client), model_id_(std::move(model_id)) {}
  std::vector<Label> PredictBatch(const std::vector<std::string> &texts) override {
    return client_.Predict(texts, model_id_);
  }

 private:
  BackendClient &client_;
  std::string model_id_;
};

// {"id", "text", "label"} records for train payloads.
nlohmann::json DatasetToJson(const LabeledDataset &dataset);

}  // namespace triggerprobe

#endif  // TRIGGERPROBE_BACKEND_PROTOCOL_H_

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

#include "triggerprobe/backend_protocol.h"

#include <fcntl.h>
#include <netdb.h>
#include <poll.h>
#include <signal.h>
#include <sys/socket.h>
#include <sys/types.h>
#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <cstring>
#include <string>
#include <thread>
#include <utility>

#include "triggerprobe/errors.h"

namespace triggerprobe {

namespace {

using Clock = std::chrono::steady_clock;

std::string Errno(const std::string &what) {
  return what + ": " + std::strerror(errno);
}

// Line-buffered reader/writer over a stream socket. Sockets (a socketpair
// for subprocesses) let every write use MSG_NOSIGNAL, so a dead peer shows
// up as EPIPE instead of SIGPIPE.
class SocketLines : public LineTransport {
 public:
  explicit SocketLines(int fd) : fd_(fd) {}
  ~SocketLines() override { CloseFd(); }

  void WriteLine(std::string_view line) override {
    if (fd_ < 0) throw TransportError("transport closed");
    std::string data(line);
    data += '\n';
    std::size_t sent = 0;
    while (sent < data.size()) {
      const ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        throw TransportError(Errno("backend write failed"));
      }
      sent += static_cast<std::size_t>(n);
    }
  }

  std::string ReadLine(Clock::time_point deadline) override {
    if (fd_ < 0) throw TransportError("transport closed");
    while (true) {
      const std::size_t nl = buffer_.find('\n');
      if (nl != std::string::npos) {
        std::string line = buffer_.substr(0, nl);
        buffer_.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      const auto remaining =
          std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
      if (remaining.count() <= 0) throw TransportError("backend timed out");
      pollfd pfd{fd_, POLLIN, 0};
      const int wait = static_cast<int>(std::min<std::int64_t>(remaining.count(), 1 << 30));
      const int rc = ::poll(&pfd, 1, wait);
      if (rc < 0) {
        if (errno == EINTR) continue;
        throw TransportError(Errno("poll failed"));
      }
      if (rc == 0) continue;
      char chunk[65536];
      const ssize_t n = ::recv(fd_, chunk, sizeof(chunk), 0);
      if (n < 0) {
        if (errno == EINTR || errno == EAGAIN) continue;
        throw TransportError(Errno("backend read failed"));
      }
      if (n == 0) throw TransportError("backend closed the connection");
      buffer_.append(chunk, static_cast<std::size_t>(n));
    }
  }

  void Close(bool) override { CloseFd(); }

 protected:
  void CloseFd() {
    if (fd_ >= 0) {
      ::close(fd_);
      fd_ = -1;
    }
  }

 private:
  int fd_;
  std::string buffer_;
};

class SubprocessLines : public SocketLines {
 public:
  SubprocessLines(int fd, pid_t pid) : SocketLines(fd), pid_(pid) {}
  ~SubprocessLines() override { Close(true); }

  void Close(bool force) override {
    CloseFd();
    if (pid_ <= 0) return;
    if (!force) {
      // Give a cleanly shut down backend a moment to exit.
      const auto until = Clock::now() + std::chrono::seconds(2);
      while (Clock::now() < until) {
        if (::waitpid(pid_, nullptr, WNOHANG) == pid_) {
          pid_ = -1;
          return;
        }
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
      }
    }
    // The child leads its own process group; take down anything the shell
    // forked too.
    ::kill(-pid_, SIGKILL);
    ::kill(pid_, SIGKILL);
    ::waitpid(pid_, nullptr, 0);
    pid_ = -1;
  }

 private:
  pid_t pid_;
};

std::unique_ptr<LineTransport> Spawn(const std::string &command) {
  int fds[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, fds) != 0) {
    throw TransportError(Errno("socketpair failed"));
  }
  const pid_t pid = ::fork();
  if (pid < 0) {
    ::close(fds[0]);
    ::close(fds[1]);
    throw TransportError(Errno("fork failed"));
  }
  if (pid == 0) {
    ::setpgid(0, 0);
    ::dup2(fds[1], STDIN_FILENO);
    ::dup2(fds[1], STDOUT_FILENO);
    ::execl("/bin/sh", "sh", "-c", command.c_str(), static_cast<char *>(nullptr));
    ::_exit(127);
  }
  ::close(fds[1]);
  return std::make_unique<SubprocessLines>(fds[0], pid);
}

std::unique_ptr<LineTransport> Dial(const std::string &host, const std::string &port,
                                    std::chrono::milliseconds timeout) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo *res = nullptr;
  const int gai = ::getaddrinfo(host.c_str(), port.c_str(), &hints, &res);
  if (gai != 0) {
    throw TransportError("cannot resolve " + host + ":" + port + ": " + ::gai_strerror(gai));
  }
  std::string last_error = "no addresses";
  for (addrinfo *ai = res; ai != nullptr; ai = ai->ai_next) {
    const int fd = ::socket(ai->ai_family, ai->ai_socktype | SOCK_CLOEXEC, ai->ai_protocol);
    if (fd < 0) continue;
    const int flags = ::fcntl(fd, F_GETFL, 0);
    ::fcntl(fd, F_SETFL, flags | O_NONBLOCK);
    int rc = ::connect(fd, ai->ai_addr, ai->ai_addrlen);
    if (rc != 0 && errno == EINPROGRESS) {
      pollfd pfd{fd, POLLOUT, 0};
      rc = ::poll(&pfd, 1, static_cast<int>(timeout.count()));
      int err = 0;
      socklen_t len = sizeof(err);
      if (rc == 1 && ::getsockopt(fd, SOL_SOCKET, SO_ERROR, &err, &len) == 0 && err == 0) {
        rc = 0;
      } else {
        errno = rc == 0 ? ETIMEDOUT : (err != 0 ? err : errno);
        rc = -1;
      }
    }
    if (rc == 0) {
      ::fcntl(fd, F_SETFL, flags);
      ::freeaddrinfo(res);
      return std::make_unique<SocketLines>(fd);
    }
    last_error = std::strerror(errno);
    ::close(fd);
  }
  ::freeaddrinfo(res);
  throw TransportError("cannot connect to " + host + ":" + port + ": " + last_error);
}

// "host:port" with a numeric port and no whitespace.
bool LooksLikeHostPort(const std::string &target, std::string *host, std::string *port) {
  const std::size_t colon = target.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 == target.size()) return false;
  if (target.find_first_of(" \t/") != std::string::npos) return false;
  const std::string p = target.substr(colon + 1);
  if (!std::all_of(p.begin(), p.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    return false;
  }
  *host = target.substr(0, colon);
  *port = p;
  return true;
}

std::vector<std::string> StringList(const nlohmann::json &j) {
  std::vector<std::string> out;
  for (const auto &v : j) out.push_back(v.get<std::string>());
  return out;
}

}  // namespace

std::string_view BackendOpName(BackendOp op) {
  switch (op) {
    case BackendOp::kTrain: return "train";
    case BackendOp::kPredict: return "predict";
    case BackendOp::kFillMask: return "fill_mask";
    case BackendOp::kShutdown: return "shutdown";
  }
  return "";
}

std::optional<BackendOp> ParseBackendOp(std::string_view name) {
  for (BackendOp op : {BackendOp::kTrain, BackendOp::kPredict, BackendOp::kFillMask,
                       BackendOp::kShutdown}) {
    if (name == BackendOpName(op)) return op;
  }
  return std::nullopt;
}

std::unique_ptr<LineTransport> OpenTransport(const std::string &target,
                                             std::chrono::milliseconds connect_timeout) {
  if (target.empty()) throw TransportError("empty backend target");
  std::string host, port;
  if (target.rfind("cmd:", 0) == 0) return Spawn(target.substr(4));
  if (target.rfind("tcp:", 0) == 0) {
    if (!LooksLikeHostPort(target.substr(4), &host, &port)) {
      throw TransportError("bad tcp target '" + target + "'");
    }
    return Dial(host, port, connect_timeout);
  }
  if (LooksLikeHostPort(target, &host, &port)) return Dial(host, port, connect_timeout);
  return Spawn(target);
}

BackendClient BackendClient::Connect(const std::string &target,
                                     const ConnectOptions &options) {
  return Connect(OpenTransport(target, options.handshake_timeout), options);
}

BackendClient BackendClient::Connect(std::unique_ptr<LineTransport> transport,
                                     const ConnectOptions &options) {
  BackendClient client;
  client.transport_ = std::move(transport);
  client.call_timeout_ = options.call_timeout;
  client.heartbeat_ = options.heartbeat;
  client.Handshake(options);
  return client;
}

BackendClient::BackendClient(BackendClient &&other) noexcept { *this = std::move(other); }

BackendClient &BackendClient::operator=(BackendClient &&other) noexcept {
  if (this != &other) {
    transport_ = std::move(other.transport_);
    capabilities_ = std::move(other.capabilities_);
    protocol_version_ = other.protocol_version_;
    next_id_ = other.next_id_;
    broken_ = other.broken_;
    in_flight_ = other.in_flight_;
    call_timeout_ = other.call_timeout_;
    heartbeat_ = other.heartbeat_;
  }
  return *this;
}

BackendClient::~BackendClient() {
  try {
    Shutdown();
  } catch (...) {
  }
}

void BackendClient::Fail(const std::string &message, bool protocol) {
  broken_ = true;
  in_flight_ = false;
  if (transport_) {
    transport_->Close(true);
    transport_.reset();
  }
  if (protocol) throw ProtocolError(message);
  throw TransportError(message);
}

void BackendClient::Handshake(const ConnectOptions &options) {
  const nlohmann::json hello = {
      {"op", "hello"}, {"protocol_version", kProtocolVersion}, {"request_id", 0}};
  nlohmann::json reply;
  try {
    transport_->WriteLine(hello.dump());
    const std::string line = transport_->ReadLine(Clock::now() + options.handshake_timeout);
    reply = nlohmann::json::parse(line);
  } catch (const TransportError &e) {
    Fail(std::string("handshake failed: ") + e.what(), false);
  } catch (const nlohmann::json::exception &e) {
    Fail(std::string("handshake: malformed reply: ") + e.what(), true);
  }
  try {
    if (!reply.is_object() || !reply.value("ok", false)) {
      const std::string msg =
          reply.is_object() ? reply.value("error", std::string("not ok")) : "not an object";
      Fail("handshake rejected: " + msg, true);
    }
    const auto &result = reply.at("result");
    protocol_version_ = result.at("protocol_version").get<int>();
    capabilities_ = StringList(result.at("capabilities"));
  } catch (const nlohmann::json::exception &e) {
    Fail(std::string("handshake: malformed reply: ") + e.what(), true);
  }
  if (protocol_version_ != kProtocolVersion) {
    Fail("protocol version mismatch: backend speaks v" + std::to_string(protocol_version_) +
             ", client speaks v" + std::to_string(kProtocolVersion),
         true);
  }
  for (BackendOp op : options.required_ops) {
    if (op != BackendOp::kShutdown && !HasCapability(op)) {
      Fail("backend lacks required capability '" + std::string(BackendOpName(op)) + "'",
           true);
    }
  }
}

bool BackendClient::HasCapability(BackendOp op) const {
  return std::find(capabilities_.begin(), capabilities_.end(), BackendOpName(op)) !=
         capabilities_.end();
}

BackendResponse BackendClient::ReadResponse(std::uint64_t id, std::chrono::milliseconds wait,
                                            bool heartbeat) {
  auto deadline = Clock::now() + wait;
  while (true) {
    std::string line;
    try {
      line = transport_->ReadLine(deadline);
    } catch (const TransportError &e) {
      Fail(std::string("request ") + std::to_string(id) + ": " + e.what(), false);
    }
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception &) {
      Fail("malformed response line: " + line.substr(0, 200), true);
    }
    if (!j.is_object() || !j.contains("request_id") || !j["request_id"].is_number_unsigned()) {
      Fail("response without a request_id: " + line.substr(0, 200), true);
    }
    const auto got = j["request_id"].get<std::uint64_t>();
    if (got != id) {
      Fail("response id " + std::to_string(got) + " does not match request " +
               std::to_string(id),
           true);
    }
    if (j.contains("progress")) {
      if (heartbeat) deadline = Clock::now() + wait;
      continue;
    }
    if (!j.contains("ok") || !j["ok"].is_boolean()) Fail("response without 'ok'", true);
    BackendResponse r;
    r.request_id = got;
    r.ok = j["ok"].get<bool>();
    if (r.ok) {
      r.result = j.value("result", nlohmann::json::object());
    } else {
      r.error = j.contains("error") && j["error"].is_string() ? j["error"].get<std::string>()
                                                              : "unspecified backend error";
    }
    return r;
  }
}

BackendResponse BackendClient::Call(BackendRequest request,
                                    std::optional<std::chrono::milliseconds> timeout) {
  if (!transport_) throw TransportError(broken_ ? "backend handle is broken" : "backend handle is closed");
  if (in_flight_) throw InvalidArgument("a request is already in flight on this handle");
  request.request_id = next_id_++;
  const bool train = request.op == BackendOp::kTrain;
  const auto wait = timeout.value_or(train ? heartbeat_ : call_timeout_);
  nlohmann::json line = {{"request_id", request.request_id},
                         {"op", BackendOpName(request.op)}};
  if (request.op != BackendOp::kShutdown) line["payload"] = request.payload;
  in_flight_ = true;
  try {
    transport_->WriteLine(line.dump());
  } catch (const TransportError &e) {
    Fail(e.what(), false);
  }
  BackendResponse r = ReadResponse(request.request_id, wait, train);
  in_flight_ = false;
  return r;
}

std::vector<Label> BackendClient::Predict(const std::vector<std::string> &texts,
                                          const std::string &model_id) {
  BackendRequest req{BackendOp::kPredict, {{"texts", texts}}};
  if (!model_id.empty()) req.payload["model_id"] = model_id;
  const BackendResponse r = Call(std::move(req));
  if (!r.ok) throw TransportError("backend predict failed: " + r.error);
  std::vector<Label> labels;
  try {
    const auto &arr = r.result.at("labels");
    if (!arr.is_array() || arr.size() != texts.size()) {
      throw ProtocolError("predict: expected " + std::to_string(texts.size()) + " labels");
    }
    for (const auto &v : arr) {
      const auto label = ParseLabel(v.get<std::string>());
      if (!label) throw ProtocolError("predict: unknown label " + v.dump());
      labels.push_back(*label);
    }
  } catch (const nlohmann::json::exception &e) {
    throw ProtocolError(std::string("predict: malformed result: ") + e.what());
  }
  return labels;
}

std::vector<FillCandidate> BackendClient::FillMask(const std::string &text, int top_k) {
  if (top_k <= 0) throw InvalidArgument("fill_mask: top_k must be positive");
  const BackendResponse r =
      Call(BackendRequest{BackendOp::kFillMask, {{"text", text}, {"top_k", top_k}}});
  if (!r.ok) throw TransportError("backend fill_mask failed: " + r.error);
  std::vector<FillCandidate> out;
  try {
    const auto &arr = r.result.at("candidates");
    if (!arr.is_array()) throw ProtocolError("fill_mask: candidates is not a list");
    if (arr.size() > static_cast<std::size_t>(top_k)) {
      throw ProtocolError("fill_mask: more than top_k candidates");
    }
    for (const auto &c : arr) {
      out.push_back({c.at("token").get<std::string>(), c.at("score").get<double>()});
    }
  } catch (const nlohmann::json::exception &e) {
    throw ProtocolError(std::string("fill_mask: malformed candidate list: ") + e.what());
  }
  return out;
}

std::string BackendClient::Train(const nlohmann::json &payload) {
  const BackendResponse r = Call(BackendRequest{BackendOp::kTrain, payload});
  if (!r.ok) throw TransportError("backend train failed: " + r.error);
  try {
    return r.result.at("model_id").get<std::string>();
  } catch (const nlohmann::json::exception &e) {
    throw ProtocolError(std::string("train: malformed result: ") + e.what());
  }
}

void BackendClient::Shutdown() {
  if (!transport_ || broken_) return;
  try {
    Call(BackendRequest{BackendOp::kShutdown, {}}, std::chrono::seconds(5));
  } catch (const Error &) {
    if (transport_) transport_->Close(true);
    transport_.reset();
    return;
  }
  if (transport_) transport_->Close(false);
  transport_.reset();
}

nlohmann::json DatasetToJson(const LabeledDataset &dataset) {
  nlohmann::json arr = nlohmann::json::array();
  for (const Example &e : dataset) {
    nlohmann::json row = {{"id", e.id}, {"text", e.text}};
    row["label"] = e.label ? nlohmann::json(std::string(LabelName(*e.label)))
                           : nlohmann::json(nullptr);
    arr.push_back(std::move(row));
  }
  return arr;
}

}  // namespace triggerprobe

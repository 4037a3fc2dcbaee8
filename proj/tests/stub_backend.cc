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

// Protocol v1 loopback backend for tests. Serves stdin/stdout, or a single
// TCP connection with --tcp-port-file. Fault flags make it misbehave on a
// chosen op.

#include <arpa/inet.h>
#include <netinet/in.h>
#include <sys/socket.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

namespace {

using nlohmann::json;

struct Options {
  int version = 1;
  std::string caps = "train,predict,fill_mask,shutdown";
  std::string predict = "keyword:deaths";  // or a constant label
  std::string candidates = "tolls,cases,people";
  std::string hang_on, crash_on, garbage_on, wrong_id_on, error_on, short_on;
  int progress = 0;
  int progress_interval_ms = 10;
  std::string log_path;
  std::string tcp_port_file;
};

std::vector<std::string> SplitComma(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

class Peer {
 public:
  Peer(const Options &o, std::FILE *in, std::FILE *out) : o_(o), in_(in), out_(out) {}

  int Serve() {
    std::string line;
    while (ReadLine(&line)) {
      if (!o_.log_path.empty()) {
        std::ofstream(o_.log_path, std::ios::app) << line << "\n";
      }
      json req;
      try {
        req = json::parse(line);
      } catch (const json::exception &) {
        Send({{"request_id", 0}, {"ok", false}, {"error", "unparseable request"}});
        continue;
      }
      const std::string op = req.value("op", "");
      const auto id = req.value("request_id", std::uint64_t{0});
      if (op == o_.crash_on) return 3;
      if (op == o_.hang_on) {
        std::this_thread::sleep_for(std::chrono::hours(1));
        return 4;
      }
      if (op == o_.garbage_on) {
        Raw("this is not json");
        continue;
      }
      if (op == o_.error_on) {
        Send({{"request_id", id}, {"ok", false}, {"error", "stub refuses " + op}});
        continue;
      }
      const std::uint64_t reply_id = op == o_.wrong_id_on ? id + 100 : id;
      if (op == "hello") {
        Send({{"request_id", reply_id},
              {"ok", true},
              {"result", {{"protocol_version", o_.version}, {"capabilities", SplitComma(o_.caps)}}}});
      } else if (op == "train") {
        for (int i = 0; i < o_.progress; ++i) {
          std::this_thread::sleep_for(std::chrono::milliseconds(o_.progress_interval_ms));
          Send({{"request_id", reply_id}, {"progress", {{"step", i + 1}, {"of", o_.progress}}}});
        }
        ++trained_;
        const auto n = req["payload"].value("train", json::array()).size();
        Send({{"request_id", reply_id},
              {"ok", true},
              {"result", {{"model_id", "stub-" + std::to_string(trained_)},
                          {"train_size", n}}}});
      } else if (op == "predict") {
        json labels = json::array();
        for (const auto &t : req["payload"]["texts"]) labels.push_back(Predict(t.get<std::string>()));
        if (op == o_.short_on && !labels.empty()) labels.erase(labels.end() - 1);
        Send({{"request_id", reply_id}, {"ok", true}, {"result", {{"labels", labels}}}});
      } else if (op == "fill_mask") {
        const int k = req["payload"].value("top_k", 10);
        json cands = json::array();
        double score = 0.9;
        for (const auto &c : SplitComma(o_.candidates)) {
          if (static_cast<int>(cands.size()) >= k) break;
          cands.push_back({{"token", c}, {"score", score}});
          score /= 2;
        }
        Send({{"request_id", reply_id}, {"ok", true}, {"result", {{"candidates", cands}}}});
      } else if (op == "shutdown") {
        Send({{"request_id", reply_id}, {"ok", true}, {"result", json::object()}});
        return 0;
      } else {
        Send({{"request_id", id}, {"ok", false}, {"error", "unknown op '" + op + "'"}});
      }
    }
    return 0;
  }

 private:
  std::string Predict(const std::string &text) const {
    if (o_.predict.rfind("keyword:", 0) == 0) {
      return text.find(o_.predict.substr(8)) != std::string::npos ? "INFORMATIVE"
                                                                  : "UNINFORMATIVE";
    }
    return o_.predict;
  }

  bool ReadLine(std::string *line) {
    line->clear();
    for (int c; (c = std::fgetc(in_)) != EOF;) {
      if (c == '\n') return true;
      line->push_back(static_cast<char>(c));
    }
    return !line->empty();
  }

  void Raw(const std::string &s) {
    std::fputs(s.c_str(), out_);
    std::fputc('\n', out_);
    std::fflush(out_);
  }

  void Send(const json &j) { Raw(j.dump()); }

  const Options &o_;
  std::FILE *in_;
  std::FILE *out_;
  int trained_ = 0;
};

int ServeTcp(const Options &o) {
  const int fd = ::socket(AF_INET, SOCK_STREAM, 0);
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_addr.s_addr = htonl(INADDR_LOOPBACK);
  addr.sin_port = 0;
  if (::bind(fd, reinterpret_cast<sockaddr *>(&addr), sizeof(addr)) != 0 ||
      ::listen(fd, 1) != 0) {
    std::perror("stub_backend: bind/listen");
    return 1;
  }
  socklen_t len = sizeof(addr);
  ::getsockname(fd, reinterpret_cast<sockaddr *>(&addr), &len);
  {
    const std::string tmp = o.tcp_port_file + ".tmp";
    std::ofstream(tmp) << ntohs(addr.sin_port) << "\n";
    std::rename(tmp.c_str(), o.tcp_port_file.c_str());
  }
  const int conn = ::accept(fd, nullptr, nullptr);
  ::close(fd);
  if (conn < 0) return 1;
  std::FILE *in = ::fdopen(conn, "r");
  std::FILE *out = ::fdopen(::dup(conn), "w");
  Peer peer(o, in, out);
  const int rc = peer.Serve();
  std::fclose(out);
  std::fclose(in);
  return rc;
}

}  // namespace

int main(int argc, char **argv) {
  Options o;
  CLI::App app{"protocol v1 loopback backend"};
  app.add_option("--version", o.version);
  app.add_option("--caps", o.caps);
  app.add_option("--predict", o.predict, "LABEL or keyword:WORD");
  app.add_option("--candidates", o.candidates);
  app.add_option("--hang-on", o.hang_on);
  app.add_option("--crash-on", o.crash_on);
  app.add_option("--garbage-on", o.garbage_on);
  app.add_option("--wrong-id-on", o.wrong_id_on);
  app.add_option("--error-on", o.error_on);
  app.add_option("--short-on", o.short_on);
  app.add_option("--progress", o.progress);
  app.add_option("--progress-interval-ms", o.progress_interval_ms);
  app.add_option("--log", o.log_path);
  app.add_option("--tcp-port-file", o.tcp_port_file);
  CLI11_PARSE(app, argc, argv);
  if (!o.tcp_port_file.empty()) return ServeTcp(o);
  Peer peer(o, stdin, stdout);
  return peer.Serve();
}

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

#ifndef TRIGGERPROBE_ERRORS_H_
#define TRIGGERPROBE_ERRORS_H_

#include <stdexcept>
#include <string>

namespace triggerprobe {

// Broad error classes. The CLI maps each to a distinct exit code.
enum class ErrorKind {
  kIo,
  kParse,
  kInvalidArgument,
  kData,
  kProtocol,
  kTransport,
};

const char *ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class IoError : public Error {
 public:
  explicit IoError(const std::string &message) : Error(ErrorKind::kIo, message) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string &message)
      : Error(ErrorKind::kParse, message) {}
};

class InvalidArgument : public Error {
 public:
  explicit InvalidArgument(const std::string &message)
      : Error(ErrorKind::kInvalidArgument, message) {}
};

// Input data violates a precondition (unlabeled rows, missing class, ...).
class DataError : public Error {
 public:
  explicit DataError(const std::string &message)
      : Error(ErrorKind::kData, message) {}
};

class ProtocolError : public Error {
 public:
  explicit ProtocolError(const std::string &message)
      : Error(ErrorKind::kProtocol, message) {}
};

class TransportError : public Error {
 public:
  explicit TransportError(const std::string &message)
      : Error(ErrorKind::kTransport, message) {}
};

}  // namespace triggerprobe

#endif  // TRIGGERPROBE_ERRORS_H_

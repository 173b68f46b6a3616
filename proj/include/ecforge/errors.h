// Copyright 2026 The ecforge Authors.
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

#ifndef ECFORGE_ERRORS_H_
#define ECFORGE_ERRORS_H_

#include <stdexcept>
#include <string>
#include <vector>

namespace ecforge {

// Failure classes. Each maps onto one CLI exit code.
enum class ErrorKind {
  kData,          // malformed or invalid input data (exit 1)
  kTransport,     // model service unreachable or misbehaving (exit 2)
  kConfig,        // bad configuration or missing files (exit 3)
  kPrecondition,  // caller violated an operation precondition (exit 1)
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// One problem found while reading a line-oriented file.
struct LineIssue {
  int line = 0;  // 1-based
  std::string reason;
};

class DataError : public Error {
 public:
  explicit DataError(const std::string &message)
      : Error(ErrorKind::kData, message) {}
  DataError(const std::string &message, std::vector<LineIssue> issues)
      : Error(ErrorKind::kData, message), issues_(std::move(issues)) {}

  const std::vector<LineIssue> &issues() const { return issues_; }

 private:
  std::vector<LineIssue> issues_;
};

class TransportError : public Error {
 public:
  TransportError(const std::string &endpoint, int attempts,
                 const std::string &reason)
      : Error(ErrorKind::kTransport,
              endpoint + " failed after " + std::to_string(attempts) +
                  " attempt(s): " + reason),
        endpoint_(endpoint),
        attempts_(attempts) {}

  const std::string &endpoint() const { return endpoint_; }
  int attempts() const { return attempts_; }

 private:
  std::string endpoint_;
  int attempts_;
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string &message)
      : Error(ErrorKind::kConfig, message) {}
};

class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string &message)
      : Error(ErrorKind::kPrecondition, message) {}
};

// Process exit code for an error kind: 1 data, 2 transport, 3 config.
int ExitCodeFor(ErrorKind kind);

}  // namespace ecforge

#endif  // ECFORGE_ERRORS_H_

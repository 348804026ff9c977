// Copyright 2026 The ddab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DDAB_ERROR_H_
#define DDAB_ERROR_H_

#include <stdexcept>
#include <string>

namespace ddab {

// Broad failure classes. The CLI maps each one to a distinct exit status.
enum class ErrorKind {
  kValidation,     // malformed input, inadmissible action, bad arguments
  kInfeasible,     // an operation's feasibility precondition does not hold
  kCapExceeded,    // an enumeration or state-space cap was hit
  kVerification,   // a cross-check failed
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ErrorKind::kValidation, what) {}
};

class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what)
      : Error(ErrorKind::kInfeasible, what) {}
};

class CapExceededError : public Error {
 public:
  explicit CapExceededError(const std::string& what)
      : Error(ErrorKind::kCapExceeded, what) {}
};

}  // namespace ddab

#endif  // DDAB_ERROR_H_

// Copyright 2026 The Resmatch Authors
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

#ifndef RESMATCH_ERROR_H_
#define RESMATCH_ERROR_H_

#include <stdexcept>
#include <string>

namespace resmatch {

// Broad failure categories. The CLI maps each one to its own exit status.
enum class ErrorKind {
  kParse,       // malformed input text
  kValidation,  // well-formed input violating a domain invariant
  kGuardLimit,  // instance too large for an exhaustive procedure
  kIo,          // missing or unreadable file
  kInternal,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void ThrowParse(const std::string& message) {
  throw Error(ErrorKind::kParse, message);
}
[[noreturn]] inline void ThrowValidation(const std::string& message) {
  throw Error(ErrorKind::kValidation, message);
}
[[noreturn]] inline void ThrowGuardLimit(const std::string& message) {
  throw Error(ErrorKind::kGuardLimit, message);
}

}  // namespace resmatch

#endif  // RESMATCH_ERROR_H_

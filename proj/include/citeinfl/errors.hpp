// Copyright 2026 The citeinfl Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace citeinfl {

// Exit-code class used by the CLI: validation problems map to 1, I/O to 2.
enum class ErrorKind { kValidation, kIo };

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what, ErrorKind kind = ErrorKind::kValidation)
      : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

#define CITEINFL_DEFINE_ERROR(Name)                                 \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

CITEINFL_DEFINE_ERROR(ScheduleDomainError);
CITEINFL_DEFINE_ERROR(OrderingError);
CITEINFL_DEFINE_ERROR(LookupError);
CITEINFL_DEFINE_ERROR(DomainError);
CITEINFL_DEFINE_ERROR(ConfigError);
CITEINFL_DEFINE_ERROR(ExhaustionError);
CITEINFL_DEFINE_ERROR(CensoringError);
CITEINFL_DEFINE_ERROR(FitError);
CITEINFL_DEFINE_ERROR(CorrelationError);
CITEINFL_DEFINE_ERROR(CollinearityError);
CITEINFL_DEFINE_ERROR(ParseError);
CITEINFL_DEFINE_ERROR(VersionError);

#undef CITEINFL_DEFINE_ERROR

class IoError : public Error {
 public:
  explicit IoError(const std::string& what)
      : Error("IoError: " + what, ErrorKind::kIo) {}
};

}  // namespace citeinfl

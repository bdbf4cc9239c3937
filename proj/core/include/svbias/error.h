// Copyright 2026 The svbias Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef SVBIAS_ERROR_H_
#define SVBIAS_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace svbias {

enum class ErrorCode {
  // Input files.
  kMissingHeader,
  kEmptyFile,
  kDuplicateSpeaker,
  kMalformedRow,
  kBadLabel,
  kNonFiniteScore,
  kIo,
  // Grouping and metrics.
  kUnknownAttribute,
  kEmptyPopulation,
  kDegenerateGroup,
  kZeroAggregate,
  kZeroGroupValue,
  kGroupSetMismatch,
  // Caller mistakes.
  kInvalidArgument,
  kConfig,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures are reported through this exception. `code()` lets
// callers (the CLI in particular) map failures onto exit codes without
// parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Returns a copy of `error` whose message is prefixed with `context`.
Error WithContext(const Error& error, std::string_view context);

}  // namespace svbias

#endif  // SVBIAS_ERROR_H_

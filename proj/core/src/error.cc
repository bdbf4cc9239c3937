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

#include "svbias/error.h"

#include <string>

namespace svbias {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMissingHeader: return "MissingHeader";
    case ErrorCode::kEmptyFile: return "EmptyFile";
    case ErrorCode::kDuplicateSpeaker: return "DuplicateSpeaker";
    case ErrorCode::kMalformedRow: return "MalformedRow";
    case ErrorCode::kBadLabel: return "BadLabel";
    case ErrorCode::kNonFiniteScore: return "NonFiniteScore";
    case ErrorCode::kIo: return "Io";
    case ErrorCode::kUnknownAttribute: return "UnknownAttribute";
    case ErrorCode::kEmptyPopulation: return "EmptyPopulation";
    case ErrorCode::kDegenerateGroup: return "DegenerateGroup";
    case ErrorCode::kZeroAggregate: return "ZeroAggregate";
    case ErrorCode::kZeroGroupValue: return "ZeroGroupValue";
    case ErrorCode::kGroupSetMismatch: return "GroupSetMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kConfig: return "Config";
  }
  return "Unknown";
}

Error WithContext(const Error& error, std::string_view context) {
  std::string message(context);
  message += ": ";
  message += error.what();
  return Error(error.code(), message);
}

}  // namespace svbias

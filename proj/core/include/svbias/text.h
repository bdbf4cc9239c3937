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

#ifndef SVBIAS_TEXT_H_
#define SVBIAS_TEXT_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace svbias {

// Splits on every occurrence of `sep`; empty fields are kept.
std::vector<std::string> SplitFields(std::string_view line, char sep);

std::string_view TrimWhitespace(std::string_view text);
std::string ToLower(std::string_view text);

// Parses the whole of `text` as a double (surrounding whitespace allowed).
// Non-finite spellings ("nan", "inf") parse successfully; callers decide.
std::optional<double> ParseDouble(std::string_view text);

// Shortest decimal representation that parses back to the same double.
// Locale independent; used for every number written to disk.
std::string FormatDouble(double value);

// Parses "0.001,0.01" style lists; throws kInvalidArgument on a bad item.
std::vector<double> ParseDoubleList(std::string_view text);

}  // namespace svbias

#endif  // SVBIAS_TEXT_H_

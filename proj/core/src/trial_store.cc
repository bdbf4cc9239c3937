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

#include "svbias/trial_store.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <unordered_map>

#include "svbias/error.h"
#include "svbias/text.h"

namespace svbias {
namespace {

// Reads the next line, dropping a trailing '\r'. Returns false at EOF.
bool ReadLine(std::istream& in, std::string& line, int& line_number) {
  if (!std::getline(in, line)) return false;
  ++line_number;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

std::string RowContext(int line_number) {
  return "line " + std::to_string(line_number);
}

std::optional<GroupKey> SpeakerGroup(const SpeakerMetadata& speaker,
                                     const std::vector<std::string>& names) {
  std::vector<std::string> values;
  values.reserve(names.size());
  for (const std::string& name : names) {
    const auto it = speaker.attributes.find(name);
    if (it == speaker.attributes.end()) return std::nullopt;
    values.push_back(it->second);
  }
  return GroupKey(names, std::move(values));
}

}  // namespace

GroupKey::GroupKey(std::vector<std::string> names,
                   std::vector<std::string> values) {
  if (names.size() != values.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "group key needs one value per attribute name");
  }
  std::vector<size_t> order(names.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return names[a] < names[b]; });
  names_.reserve(names.size());
  values_.reserve(values.size());
  for (size_t i : order) {
    if (!names_.empty() && names_.back() == names[i]) {
      throw Error(ErrorCode::kInvalidArgument,
                  "attribute '" + names[i] + "' repeated in group key");
    }
    names_.push_back(std::move(names[i]));
    values_.push_back(std::move(values[i]));
  }
}

std::string GroupKey::Label() const {
  std::string out;
  for (size_t i = 0; i < values_.size(); ++i) {
    if (i > 0) out += '/';
    out += values_[i];
  }
  return out;
}

std::string GroupKey::ToString() const {
  std::string out;
  for (size_t i = 0; i < names_.size(); ++i) {
    if (i > 0) out += ',';
    out += names_[i];
    out += '=';
    out += values_[i];
  }
  return out;
}

std::vector<SpeakerMetadata> LoadMetadata(std::istream& in) {
  std::string line;
  int line_number = 0;
  if (!ReadLine(in, line, line_number) || TrimWhitespace(line).empty()) {
    throw Error(ErrorCode::kEmptyFile, "metadata file is empty");
  }
  std::vector<std::string> header = SplitFields(line, ',');
  for (std::string& name : header) name = ToLower(TrimWhitespace(name));
  if (header.size() < 2 || header[0] != "speaker_id") {
    throw Error(ErrorCode::kMissingHeader,
                "metadata header must be 'speaker_id,<attribute>[,...]'");
  }
  std::set<std::string> seen_names;
  for (size_t i = 1; i < header.size(); ++i) {
    if (header[i].empty() || header[i] == "speaker_id" ||
        !seen_names.insert(header[i]).second) {
      throw Error(ErrorCode::kMissingHeader,
                  "bad or repeated attribute column '" + header[i] + "'");
    }
  }

  std::vector<SpeakerMetadata> records;
  std::set<std::string> seen_ids;
  while (ReadLine(in, line, line_number)) {
    if (TrimWhitespace(line).empty()) continue;
    std::vector<std::string> fields = SplitFields(line, ',');
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kMalformedRow,
                  RowContext(line_number) + ": expected " +
                      std::to_string(header.size()) + " fields, got " +
                      std::to_string(fields.size()));
    }
    SpeakerMetadata record;
    record.speaker_id = std::move(fields[0]);
    if (record.speaker_id.empty()) {
      throw Error(ErrorCode::kMalformedRow,
                  RowContext(line_number) + ": empty speaker_id");
    }
    if (!seen_ids.insert(record.speaker_id).second) {
      throw Error(ErrorCode::kDuplicateSpeaker,
                  RowContext(line_number) + ": duplicate speaker_id '" +
                      record.speaker_id + "'");
    }
    for (size_t i = 1; i < header.size(); ++i) {
      record.attributes.emplace(header[i], std::move(fields[i]));
    }
    records.push_back(std::move(record));
  }
  return records;
}

std::vector<TrialRecord> LoadTrials(std::istream& in) {
  std::string line;
  int line_number = 0;
  if (!ReadLine(in, line, line_number)) {
    throw Error(ErrorCode::kMissingHeader, "scores file has no header");
  }
  std::vector<std::string> header = SplitFields(line, ',');
  for (std::string& name : header) name = std::string(TrimWhitespace(name));
  static const std::vector<std::string> kExpected = {"enroll_id", "test_id",
                                                     "label", "score"};
  if (header != kExpected) {
    throw Error(ErrorCode::kMissingHeader,
                "scores header must be exactly 'enroll_id,test_id,label,score'");
  }

  std::vector<TrialRecord> trials;
  while (ReadLine(in, line, line_number)) {
    if (TrimWhitespace(line).empty()) continue;
    std::vector<std::string> fields = SplitFields(line, ',');
    if (fields.size() != 4) {
      throw Error(ErrorCode::kMalformedRow,
                  RowContext(line_number) + ": expected 4 fields, got " +
                      std::to_string(fields.size()));
    }
    TrialRecord trial;
    trial.enroll_id = std::move(fields[0]);
    trial.test_id = std::move(fields[1]);
    const std::string label = ToLower(TrimWhitespace(fields[2]));
    if (label == "target") {
      trial.label = TrialLabel::kTarget;
    } else if (label == "nontarget") {
      trial.label = TrialLabel::kNontarget;
    } else {
      throw Error(ErrorCode::kBadLabel, RowContext(line_number) +
                                            ": bad label '" + fields[2] + "'");
    }
    const auto score = ParseDouble(fields[3]);
    if (!score) {
      throw Error(ErrorCode::kMalformedRow, RowContext(line_number) +
                                                ": bad score '" + fields[3] +
                                                "'");
    }
    if (!std::isfinite(*score)) {
      throw Error(ErrorCode::kNonFiniteScore,
                  RowContext(line_number) + ": non-finite score '" +
                      fields[3] + "'");
    }
    trial.score = *score;
    trials.push_back(std::move(trial));
  }
  return trials;
}

namespace {

template <typename Loader>
auto LoadFromPath(const std::filesystem::path& path, Loader loader) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kIo, path.string() + ": cannot open file");
  }
  try {
    return loader(in);
  } catch (const Error& e) {
    throw WithContext(e, path.string());
  }
}

}  // namespace

std::vector<SpeakerMetadata> LoadMetadataFile(
    const std::filesystem::path& path) {
  return LoadFromPath(path, [](std::istream& in) { return LoadMetadata(in); });
}

std::vector<TrialRecord> LoadTrialsFile(const std::filesystem::path& path) {
  return LoadFromPath(path, [](std::istream& in) { return LoadTrials(in); });
}

GroupedTrials AssignGroups(std::span<const TrialRecord> trials,
                           std::span<const SpeakerMetadata> metadata,
                           const std::vector<std::string>& attribute_names,
                           GroupingPolicy policy) {
  if (attribute_names.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "at least one group attribute is required");
  }
  std::set<std::string> known;
  for (const SpeakerMetadata& speaker : metadata) {
    for (const auto& [name, value] : speaker.attributes) known.insert(name);
  }
  std::vector<std::string> names;
  for (const std::string& raw : attribute_names) {
    std::string name = ToLower(TrimWhitespace(raw));
    if (!known.contains(name)) {
      throw Error(ErrorCode::kUnknownAttribute,
                  "unknown attribute '" + raw + "'");
    }
    names.push_back(std::move(name));
  }

  std::unordered_map<std::string, GroupKey> speaker_groups;
  speaker_groups.reserve(metadata.size());
  for (const SpeakerMetadata& speaker : metadata) {
    if (auto key = SpeakerGroup(speaker, names)) {
      speaker_groups.emplace(speaker.speaker_id, std::move(*key));
    }
  }
  const auto lookup = [&](const std::string& id) -> const GroupKey* {
    const auto it = speaker_groups.find(id);
    return it == speaker_groups.end() ? nullptr : &it->second;
  };

  GroupedTrials grouped;
  grouped.policy = policy;
  grouped.all.assign(trials.begin(), trials.end());
  for (const TrialRecord& trial : trials) {
    const GroupKey* enroll = lookup(trial.enroll_id);
    const GroupKey* group = nullptr;
    if (policy == GroupingPolicy::kEnrollmentOnly) {
      group = enroll;
    } else {
      const GroupKey* test = lookup(trial.test_id);
      if (enroll != nullptr && test != nullptr && *enroll == *test) {
        group = enroll;
      }
    }
    if (group == nullptr) {
      grouped.unassigned.push_back(trial);
    } else {
      grouped.groups[*group].push_back(trial);
    }
  }
  return grouped;
}

std::string_view TrialLabelName(TrialLabel label) {
  return label == TrialLabel::kTarget ? "target" : "nontarget";
}

std::string_view GroupingPolicyName(GroupingPolicy policy) {
  return policy == GroupingPolicy::kBothMatch ? "both_match"
                                              : "enrollment_only";
}

GroupingPolicy ParseGroupingPolicy(std::string_view text) {
  const std::string lowered = ToLower(TrimWhitespace(text));
  if (lowered == "both_match" || lowered == "bothmatch" ||
      lowered == "both-match") {
    return GroupingPolicy::kBothMatch;
  }
  if (lowered == "enrollment_only" || lowered == "enrollmentonly" ||
      lowered == "enrollment-only") {
    return GroupingPolicy::kEnrollmentOnly;
  }
  throw Error(ErrorCode::kConfig,
              "unknown grouping policy '" + std::string(text) + "'");
}

void WriteTrials(std::ostream& out, std::span<const TrialRecord> trials) {
  out << "enroll_id,test_id,label,score\n";
  for (const TrialRecord& t : trials) {
    out << t.enroll_id << ',' << t.test_id << ',' << TrialLabelName(t.label)
        << ',' << FormatDouble(t.score) << '\n';
  }
}

void WriteMetadata(std::ostream& out, std::span<const SpeakerMetadata> metadata,
                   const std::vector<std::string>& attribute_names) {
  out << "speaker_id";
  for (const std::string& name : attribute_names) out << ',' << name;
  out << '\n';
  for (const SpeakerMetadata& speaker : metadata) {
    out << speaker.speaker_id;
    for (const std::string& name : attribute_names) {
      out << ',';
      const auto it = speaker.attributes.find(name);
      if (it != speaker.attributes.end()) out << it->second;
    }
    out << '\n';
  }
}

}  // namespace svbias

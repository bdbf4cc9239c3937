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

#ifndef SVBIAS_TRIAL_STORE_H_
#define SVBIAS_TRIAL_STORE_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace svbias {

// One speaker and its demographic attributes. Attribute names are lowercased
// on load; values are kept verbatim.
struct SpeakerMetadata {
  std::string speaker_id;
  std::map<std::string, std::string> attributes;

  bool operator==(const SpeakerMetadata&) const = default;
};

enum class TrialLabel { kTarget, kNontarget };

// A single verification trial. Higher scores mean "more likely the same
// speaker"; the score is always finite.
struct TrialRecord {
  std::string enroll_id;
  std::string test_id;
  TrialLabel label = TrialLabel::kNontarget;
  double score = 0.0;

  bool is_target() const { return label == TrialLabel::kTarget; }
  bool operator==(const TrialRecord&) const = default;
};

// Identifies a demographic or intersectional group as a set of
// (attribute name, value) pairs kept in name order, so two keys built from
// the same pairs in any order compare equal.
class GroupKey {
 public:
  GroupKey() = default;
  // Throws kInvalidArgument when the lists differ in length or a name
  // repeats.
  GroupKey(std::vector<std::string> names, std::vector<std::string> values);

  const std::vector<std::string>& names() const { return names_; }
  const std::vector<std::string>& values() const { return values_; }
  size_t size() const { return names_.size(); }

  // "male/US": values joined by '/', used in tables and CSVs.
  std::string Label() const;
  // "gender=male,nationality=US".
  std::string ToString() const;

  auto operator<=>(const GroupKey&) const = default;
  bool operator==(const GroupKey&) const = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::string> values_;
};

enum class GroupingPolicy {
  // Both enrollment and test speaker must carry the group's values.
  kBothMatch,
  // The enrollment speaker alone decides the group.
  kEnrollmentOnly,
};

// Trials partitioned into groups. `all` keeps every input trial in input
// order and is what pooled (aggregate) metrics are computed on.
struct GroupedTrials {
  std::map<GroupKey, std::vector<TrialRecord>> groups;
  std::vector<TrialRecord> unassigned;
  std::vector<TrialRecord> all;
  GroupingPolicy policy = GroupingPolicy::kBothMatch;
};

std::vector<SpeakerMetadata> LoadMetadata(std::istream& in);
std::vector<TrialRecord> LoadTrials(std::istream& in);

// File variants; errors carry the path as context.
std::vector<SpeakerMetadata> LoadMetadataFile(const std::filesystem::path& path);
std::vector<TrialRecord> LoadTrialsFile(const std::filesystem::path& path);

GroupedTrials AssignGroups(std::span<const TrialRecord> trials,
                           std::span<const SpeakerMetadata> metadata,
                           const std::vector<std::string>& attribute_names,
                           GroupingPolicy policy);

// Writers producing exactly the formats the loaders accept. Scores use the
// shortest representation that round-trips.
void WriteTrials(std::ostream& out, std::span<const TrialRecord> trials);
// `attribute_names` fixes the column order; speakers lacking an attribute
// get an empty cell.
void WriteMetadata(std::ostream& out, std::span<const SpeakerMetadata> metadata,
                   const std::vector<std::string>& attribute_names);

std::string_view TrialLabelName(TrialLabel label);
std::string_view GroupingPolicyName(GroupingPolicy policy);
GroupingPolicy ParseGroupingPolicy(std::string_view text);

}  // namespace svbias

#endif  // SVBIAS_TRIAL_STORE_H_

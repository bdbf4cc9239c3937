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

#ifndef SVBIAS_AUDIT_CONFIG_H_
#define SVBIAS_AUDIT_CONFIG_H_

#include <filesystem>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "svbias/bias_measures.h"
#include "svbias/detection_metrics.h"
#include "svbias/meta_measures.h"
#include "svbias/trial_store.h"

namespace svbias {

struct AuditConfig {
  std::filesystem::path scores_path;
  std::filesystem::path metadata_path;
  std::vector<std::string> group_attributes = {"gender", "nationality"};
  GroupingPolicy policy = GroupingPolicy::kBothMatch;
  DcfParams dcf;
  std::vector<double> design_fprs = kStandardDesignFprs;
  std::vector<double> alphas = kStandardAlphas;
  ZeroPolicy zero_policy = ZeroPolicy::kError;
  AverageMode average_mode = AverageMode::kPooled;
  std::filesystem::path output_dir = "svbias_out";
  bool emit_figures = true;
  // Degenerate groups abort the audit instead of being dropped.
  bool strict = false;
  double attack_rate = 60.0;      // attempts per hour
  double attack_quantile = 0.5;   // success probability for hours_to_quantile
  size_t max_thresholds = 0;      // 0: exact sweep

  // Throws kConfig naming the first offending field.
  void Validate() const;
  // Validate() minus the input/output paths, for in-memory runs.
  void ValidateSettings() const;
  SweepOptions sweep() const { return {max_thresholds}; }
  BiasOptions bias() const { return {zero_policy, average_mode}; }
};

// Sets one field from its textual form. Keys are the long CLI flag names
// without dashes ("design-fprs"); '_' and '-' are interchangeable.
// Throws kConfig on an unknown key or unparsable value.
void SetConfigValue(AuditConfig& config, std::string_view key,
                    std::string_view value);

// Reads a flat "key = value" file; '#' starts a comment line.
void ApplyConfigStream(AuditConfig& config, std::istream& in);
void ApplyConfigFile(AuditConfig& config, const std::filesystem::path& path);

// "paper": standard grids, DCF defaults, gender + nationality groups and the
// both-match policy.
void ApplyPreset(AuditConfig& config, std::string_view name);

}  // namespace svbias

#endif  // SVBIAS_AUDIT_CONFIG_H_

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

#ifndef SVBIAS_BIAS_MEASURES_H_
#define SVBIAS_BIAS_MEASURES_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "svbias/detection_metrics.h"
#include "svbias/trial_store.h"

namespace svbias {

enum class BiasMeasure { kG2minDiff, kG2avgRatio, kG2avgLogRatio };

// How ratio measures treat a group whose metric is exactly zero.
enum class ZeroPolicy {
  kError,     // throw kZeroGroupValue
  kInfinity,  // let -ln(0) = +inf through
  kSmooth,    // add 0.5 to every error count and trial count, then re-rate
};

// What the ratio measures divide by.
enum class AverageMode {
  kPooled,     // the metric on the pooled population (GroupMetricVector::aggregate)
  kGroupMean,  // unweighted mean of the per-group values
};

struct BiasOptions {
  ZeroPolicy zero_policy = ZeroPolicy::kError;
  AverageMode average_mode = AverageMode::kPooled;
};

struct BiasVector {
  BiasMeasure measure = BiasMeasure::kG2minDiff;
  std::string metric_name;
  std::map<GroupKey, double> per_group;
  // "best_group" for G2min Diff, else the average mode ("pooled" or
  // "group_mean").
  std::string reference;
  // Set for G2min Diff only.
  std::optional<GroupKey> reference_group;
  double reference_value = 0.0;
  // Groups whose log ratio came out infinite under ZeroPolicy::kInfinity.
  std::vector<GroupKey> infinite_groups;
  bool smoothed = false;
};

// b_g - b_m with m the group of smallest value (ties: smallest key).
BiasVector G2minDiff(const GroupMetricVector& v);

// b_g / b_average. Throws kZeroAggregate when b_average is zero.
BiasVector G2avgRatio(const GroupMetricVector& v,
                      const BiasOptions& options = {});

// -ln(b_g / b_average); positive means the group errs less than average.
BiasVector G2avgLogRatio(const GroupMetricVector& v,
                         const BiasOptions& options = {});

BiasVector ComputeBiasMeasure(BiasMeasure measure, const GroupMetricVector& v,
                              const BiasOptions& options = {});

std::string_view BiasMeasureName(BiasMeasure measure);
std::string_view ZeroPolicyName(ZeroPolicy policy);
std::string_view AverageModeName(AverageMode mode);
ZeroPolicy ParseZeroPolicy(std::string_view text);
AverageMode ParseAverageMode(std::string_view text);

inline constexpr BiasMeasure kAllBiasMeasures[] = {
    BiasMeasure::kG2minDiff, BiasMeasure::kG2avgRatio,
    BiasMeasure::kG2avgLogRatio};

}  // namespace svbias

#endif  // SVBIAS_BIAS_MEASURES_H_

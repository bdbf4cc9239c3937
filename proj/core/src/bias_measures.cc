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

#include "svbias/bias_measures.h"

#include <cmath>
#include <limits>
#include <string>

#include "svbias/error.h"
#include "svbias/text.h"

namespace svbias {
namespace {

void RequireUsable(const GroupMetricVector& v) {
  if (v.per_group.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "metric '" + v.metric_name + "' has no groups");
  }
  for (const auto& [group, value] : v.per_group) {
    if (!std::isfinite(value)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "metric '" + v.metric_name + "' is not finite for group '" +
                      group.ToString() + "'");
    }
  }
}

double Smoothed(const RateCounts& counts) {
  return (static_cast<double>(counts.errors) + 0.5) /
         (static_cast<double>(counts.trials) + 0.5);
}

// Applies the smoothing rule when requested; everything else passes through.
GroupMetricVector PrepareForRatio(const GroupMetricVector& v,
                                  const BiasOptions& options, bool* smoothed) {
  *smoothed = false;
  if (options.zero_policy != ZeroPolicy::kSmooth) return v;
  if (v.per_group_counts.size() != v.per_group.size() ||
      !v.aggregate_counts.has_value()) {
    // Without counts there is nothing to smooth; zeros fall back to an error.
    for (const auto& [group, value] : v.per_group) {
      if (value == 0.0) {
        throw Error(ErrorCode::kZeroGroupValue,
                    "metric '" + v.metric_name + "' is zero for group '" +
                        group.ToString() +
                        "' and carries no counts to smooth");
      }
    }
    return v;
  }
  GroupMetricVector out = v;
  for (auto& [group, value] : out.per_group) {
    value = Smoothed(v.per_group_counts.at(group));
  }
  out.aggregate = Smoothed(*v.aggregate_counts);
  *smoothed = true;
  return out;
}

double AverageOf(const GroupMetricVector& v, AverageMode mode) {
  if (mode == AverageMode::kPooled) return v.aggregate;
  double sum = 0.0;
  for (const auto& [group, value] : v.per_group) sum += value;
  return sum / static_cast<double>(v.per_group.size());
}

BiasVector RatioCore(const GroupMetricVector& input, const BiasOptions& options,
                     BiasMeasure measure) {
  RequireUsable(input);
  BiasVector out;
  const GroupMetricVector v = PrepareForRatio(input, options, &out.smoothed);
  out.measure = measure;
  out.metric_name = v.metric_name;
  out.reference = std::string(AverageModeName(options.average_mode));
  out.reference_value = AverageOf(v, options.average_mode);
  if (!(out.reference_value > 0.0) || !std::isfinite(out.reference_value)) {
    throw Error(ErrorCode::kZeroAggregate,
                "average of metric '" + v.metric_name +
                    "' is not positive; ratio measures are undefined");
  }
  for (const auto& [group, value] : v.per_group) {
    if (value < 0.0) {
      throw Error(ErrorCode::kInvalidArgument,
                  "metric '" + v.metric_name + "' is negative for group '" +
                      group.ToString() + "'");
    }
    out.per_group.emplace(group, value / out.reference_value);
  }
  return out;
}

}  // namespace

BiasVector G2minDiff(const GroupMetricVector& v) {
  RequireUsable(v);
  const auto* best = &*v.per_group.begin();
  for (const auto& entry : v.per_group) {
    if (entry.second < best->second) best = &entry;
  }
  BiasVector out;
  out.measure = BiasMeasure::kG2minDiff;
  out.metric_name = v.metric_name;
  out.reference = "best_group";
  out.reference_group = best->first;
  out.reference_value = best->second;
  for (const auto& [group, value] : v.per_group) {
    out.per_group.emplace(group, value - best->second);
  }
  return out;
}

BiasVector G2avgRatio(const GroupMetricVector& v, const BiasOptions& options) {
  return RatioCore(v, options, BiasMeasure::kG2avgRatio);
}

BiasVector G2avgLogRatio(const GroupMetricVector& v,
                         const BiasOptions& options) {
  BiasVector out = RatioCore(v, options, BiasMeasure::kG2avgLogRatio);
  for (auto& [group, value] : out.per_group) {
    if (value == 0.0) {
      if (options.zero_policy == ZeroPolicy::kError) {
        throw Error(ErrorCode::kZeroGroupValue,
                    "metric '" + v.metric_name + "' is zero for group '" +
                        group.ToString() +
                        "'; choose zero policy 'infinity' or 'smooth'");
      }
      out.infinite_groups.push_back(group);
      value = std::numeric_limits<double>::infinity();
      continue;
    }
    value = -std::log(value);
  }
  return out;
}

BiasVector ComputeBiasMeasure(BiasMeasure measure, const GroupMetricVector& v,
                              const BiasOptions& options) {
  switch (measure) {
    case BiasMeasure::kG2minDiff: return G2minDiff(v);
    case BiasMeasure::kG2avgRatio: return G2avgRatio(v, options);
    case BiasMeasure::kG2avgLogRatio: return G2avgLogRatio(v, options);
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown bias measure");
}

std::string_view BiasMeasureName(BiasMeasure measure) {
  switch (measure) {
    case BiasMeasure::kG2minDiff: return "g2min_diff";
    case BiasMeasure::kG2avgRatio: return "g2avg_ratio";
    case BiasMeasure::kG2avgLogRatio: return "g2avg_log_ratio";
  }
  return "unknown";
}

std::string_view ZeroPolicyName(ZeroPolicy policy) {
  switch (policy) {
    case ZeroPolicy::kError: return "error";
    case ZeroPolicy::kInfinity: return "infinity";
    case ZeroPolicy::kSmooth: return "smooth";
  }
  return "unknown";
}

std::string_view AverageModeName(AverageMode mode) {
  return mode == AverageMode::kPooled ? "pooled" : "group_mean";
}

ZeroPolicy ParseZeroPolicy(std::string_view text) {
  const std::string lowered = ToLower(TrimWhitespace(text));
  if (lowered == "error") return ZeroPolicy::kError;
  if (lowered == "infinity") return ZeroPolicy::kInfinity;
  if (lowered == "smooth") return ZeroPolicy::kSmooth;
  throw Error(ErrorCode::kConfig,
              "unknown zero policy '" + std::string(text) + "'");
}

AverageMode ParseAverageMode(std::string_view text) {
  const std::string lowered = ToLower(TrimWhitespace(text));
  if (lowered == "pooled") return AverageMode::kPooled;
  if (lowered == "group_mean" || lowered == "group-mean") {
    return AverageMode::kGroupMean;
  }
  throw Error(ErrorCode::kConfig,
              "unknown average mode '" + std::string(text) + "'");
}

}  // namespace svbias

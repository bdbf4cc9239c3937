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

#ifndef SVBIAS_DETECTION_METRICS_H_
#define SVBIAS_DETECTION_METRICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "svbias/trial_store.h"

namespace svbias {

// Error rates of one trial population as a function of the decision
// threshold. A trial is accepted iff score >= threshold.
//
// thresholds[i] runs over the distinct observed scores in ascending order,
// followed by +infinity. So fpr starts at 1 and fnr at 0, and the sentinel
// gives fpr = 0, fnr = 1. The integer counts are kept next to the rates so
// callers can smooth or re-derive them without rounding.
struct SweepCurve {
  std::vector<double> thresholds;
  std::vector<double> fpr;
  std::vector<double> fnr;
  std::vector<int64_t> false_accepts;  // nontargets with score >= threshold
  std::vector<int64_t> misses;         // targets with score < threshold
  int64_t n_target = 0;
  int64_t n_nontarget = 0;

  size_t size() const { return thresholds.size(); }
};

struct SweepOptions {
  // When nonzero and the number of distinct scores exceeds it, thresholds are
  // subsampled at evenly spaced ranks of the distinct scores (the lowest
  // score and the sentinel are always kept). Zero means the exact sweep.
  size_t max_thresholds = 0;
};

struct OperatingPoint {
  double threshold = 0.0;
  double fpr = 0.0;
  double fnr = 0.0;
};

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
};

struct DcfParams {
  double c_miss = 1.0;
  double c_fa = 1.0;
  double p_target = 0.05;
  bool normalize = true;

  // Throws kInvalidArgument unless c_miss > 0, c_fa > 0, 0 < p_target < 1.
  void Validate() const;
};

struct CostResult {
  double cost = 0.0;
  double threshold = 0.0;
};

// Throws kEmptyPopulation if either list is empty and kInvalidArgument on a
// non-finite score.
SweepCurve ComputeSweep(std::span<const double> target_scores,
                        std::span<const double> nontarget_scores,
                        const SweepOptions& options = {});

// Convenience overload splitting trials by label.
SweepCurve ComputeSweep(std::span<const TrialRecord> trials,
                        const SweepOptions& options = {});

// Equal error rate. Finds the first grid point where fnr - fpr becomes
// nonnegative; an exact tie is returned as is, otherwise both rates are
// interpolated linearly between the bracketing grid points and the common
// value at the crossing is returned. Next to the +infinity sentinel the
// reported threshold is the last finite one.
EerResult ComputeEer(const SweepCurve& curve);

// Minimum of c_miss * p_target * fnr + c_fa * (1 - p_target) * fpr over the
// grid, optionally divided by min(c_miss * p_target, c_fa * (1 - p_target)).
// Ties go to the smallest threshold.
CostResult ComputeMinCdet(const SweepCurve& curve, const DcfParams& params);

// Smallest grid threshold whose fpr does not exceed `target_fpr`, which must
// lie in (0, 1]. The achieved fpr may be below the target on finite data.
OperatingPoint ThresholdForFpr(const SweepCurve& curve, double target_fpr);

// Error counts behind a rate, kept so zero rates can be smoothed later.
struct RateCounts {
  int64_t errors = 0;
  int64_t trials = 0;
};

// One base metric evaluated per group, plus the same metric on the pooled
// population.
struct GroupMetricVector {
  std::string metric_name;
  std::map<GroupKey, double> per_group;
  double aggregate = 0.0;
  // Only filled for rates read at a threshold (FPR/FNR).
  std::map<GroupKey, RateCounts> per_group_counts;
  std::optional<RateCounts> aggregate_counts;

  // Returns a copy with every value (group and aggregate) multiplied by
  // `factor`; counts are dropped since they no longer describe the values.
  GroupMetricVector Scaled(double factor) const;
};

struct EerMetric {};
struct MinCdetMetric {
  DcfParams params;
};
using TrialMetric = std::variant<EerMetric, MinCdetMetric>;

std::string TrialMetricName(const TrialMetric& metric);

// Per-group EER or minCDet, each group at its own optimal threshold. The
// aggregate is the same metric on `grouped.all`. Throws kDegenerateGroup when
// a group lacks target or nontarget trials.
GroupMetricVector DisaggregateTrialMetric(const GroupedTrials& grouped,
                                          const TrialMetric& metric,
                                          const SweepOptions& options = {});

enum class ErrorRate { kFpr, kFnr };

// Each group's FPR or FNR at one shared threshold; the aggregate is the
// pooled rate at that threshold. `metric_name` defaults to "fpr@<threshold>"
// or "fnr@<threshold>".
GroupMetricVector DisaggregateAtThreshold(const GroupedTrials& grouped,
                                          double threshold, ErrorRate which,
                                          std::string metric_name = {});

// Groups lacking targets or nontargets, in key order.
std::vector<GroupKey> FindDegenerateGroups(const GroupedTrials& grouped);

}  // namespace svbias

#endif  // SVBIAS_DETECTION_METRICS_H_

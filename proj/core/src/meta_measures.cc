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

#include "svbias/meta_measures.h"

#include <algorithm>
#include <cmath>
#include <functional>

#include "svbias/error.h"
#include "svbias/text.h"

namespace svbias {
namespace {

double MaxGap(const GroupMetricVector& v) {
  double lo = v.per_group.begin()->second;
  double hi = lo;
  for (const auto& [group, value] : v.per_group) {
    if (!(value >= 0.0 && value <= 1.0)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "rate '" + v.metric_name + "' out of [0, 1] for group '" +
                      group.ToString() + "'");
    }
    lo = std::min(lo, value);
    hi = std::max(hi, value);
  }
  return hi - lo;
}

bool SameGroups(const GroupMetricVector& a, const GroupMetricVector& b) {
  return std::equal(a.per_group.begin(), a.per_group.end(),
                    b.per_group.begin(), b.per_group.end(),
                    [](const auto& x, const auto& y) { return x.first == y.first; });
}

}  // namespace

std::string DesignRateName(ErrorRate which, double design_fpr) {
  return std::string(which == ErrorRate::kFpr ? "fpr@" : "fnr@") +
         FormatDouble(design_fpr);
}

FdrResult ComputeFdr(const GroupMetricVector& group_fprs,
                     const GroupMetricVector& group_fnrs, double alpha,
                     double design_fpr, double threshold) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must lie in [0, 1]");
  }
  if (group_fprs.per_group.empty() || !SameGroups(group_fprs, group_fnrs)) {
    throw Error(ErrorCode::kGroupSetMismatch,
                "FPR and FNR vectors cover different groups");
  }
  FdrResult r;
  r.alpha = alpha;
  r.design_fpr = design_fpr;
  r.threshold = threshold;
  r.max_delta_fpr = MaxGap(group_fprs);
  r.max_delta_fnr = MaxGap(group_fnrs);
  r.discrepancy = alpha * r.max_delta_fpr + (1.0 - alpha) * r.max_delta_fnr;
  r.fdr = 1.0 - r.discrepancy;
  return r;
}

std::vector<FdrResult> ComputeFdrGrid(const GroupedTrials& grouped,
                                      std::span<const double> design_fprs,
                                      std::span<const double> alphas,
                                      const SweepOptions& sweep) {
  if (design_fprs.empty() || alphas.empty()) {
    throw Error(ErrorCode::kInvalidArgument,
                "FDR grid needs at least one design FPR and one alpha");
  }
  const SweepCurve pooled = ComputeSweep(grouped.all, sweep);
  std::vector<FdrResult> results;
  results.reserve(design_fprs.size() * alphas.size());
  for (double design_fpr : design_fprs) {
    const OperatingPoint op = ThresholdForFpr(pooled, design_fpr);
    const GroupMetricVector fprs = DisaggregateAtThreshold(
        grouped, op.threshold, ErrorRate::kFpr,
        DesignRateName(ErrorRate::kFpr, design_fpr));
    const GroupMetricVector fnrs = DisaggregateAtThreshold(
        grouped, op.threshold, ErrorRate::kFnr,
        DesignRateName(ErrorRate::kFnr, design_fpr));
    for (double alpha : alphas) {
      results.push_back(ComputeFdr(fprs, fnrs, alpha, design_fpr, op.threshold));
    }
  }
  return results;
}

NrbResult ComputeNrb(const GroupMetricVector& v, const BiasOptions& options) {
  const BiasVector logs = G2avgLogRatio(v, options);
  NrbResult r;
  r.metric_name = v.metric_name;
  r.group_count = static_cast<int>(logs.per_group.size());
  r.per_group_log_ratios = logs.per_group;
  r.infinite_groups = logs.infinite_groups;
  r.smoothed = logs.smoothed;
  double sum = 0.0;
  for (const auto& [group, value] : logs.per_group) sum += std::abs(value);
  r.nrb = sum / static_cast<double>(r.group_count);
  return r;
}

std::vector<NrbResult> ComputeNrbSuite(const GroupedTrials& grouped,
                                       std::span<const double> design_fprs,
                                       const DcfParams& dcf,
                                       const BiasOptions& options,
                                       const SweepOptions& sweep) {
  std::vector<NrbResult> suite;
  suite.push_back(ComputeNrb(
      DisaggregateTrialMetric(grouped, EerMetric{}, sweep), options));
  suite.push_back(ComputeNrb(
      DisaggregateTrialMetric(grouped, MinCdetMetric{dcf}, sweep), options));

  std::vector<double> descending(design_fprs.begin(), design_fprs.end());
  std::sort(descending.begin(), descending.end(), std::greater<>());
  const SweepCurve pooled = ComputeSweep(grouped.all, sweep);
  for (double design_fpr : descending) {
    const OperatingPoint op = ThresholdForFpr(pooled, design_fpr);
    for (ErrorRate which : {ErrorRate::kFpr, ErrorRate::kFnr}) {
      suite.push_back(ComputeNrb(
          DisaggregateAtThreshold(grouped, op.threshold, which,
                                  DesignRateName(which, design_fpr)),
          options));
    }
  }
  return suite;
}

}  // namespace svbias

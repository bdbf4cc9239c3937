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

#include "svbias/detection_metrics.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "svbias/error.h"
#include "svbias/text.h"

namespace svbias {
namespace {

struct ScoreSplit {
  std::vector<double> targets;
  std::vector<double> nontargets;
};

ScoreSplit SplitScores(std::span<const TrialRecord> trials) {
  ScoreSplit split;
  for (const TrialRecord& t : trials) {
    (t.is_target() ? split.targets : split.nontargets).push_back(t.score);
  }
  return split;
}

std::vector<double> SortedFinite(std::span<const double> scores,
                                 const char* which) {
  std::vector<double> sorted(scores.begin(), scores.end());
  for (double s : sorted) {
    if (!std::isfinite(s)) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("non-finite ") + which + " score");
    }
  }
  std::sort(sorted.begin(), sorted.end());
  return sorted;
}

std::vector<double> CandidateThresholds(const std::vector<double>& targets,
                                        const std::vector<double>& nontargets,
                                        size_t max_thresholds) {
  std::vector<double> distinct;
  distinct.reserve(targets.size() + nontargets.size());
  std::merge(targets.begin(), targets.end(), nontargets.begin(),
             nontargets.end(), std::back_inserter(distinct));
  distinct.erase(std::unique(distinct.begin(), distinct.end()),
                 distinct.end());
  if (max_thresholds >= 2 && distinct.size() > max_thresholds) {
    std::vector<double> sampled;
    sampled.reserve(max_thresholds);
    const double step = static_cast<double>(distinct.size() - 1) /
                        static_cast<double>(max_thresholds - 1);
    for (size_t k = 0; k < max_thresholds; ++k) {
      const auto rank = static_cast<size_t>(std::llround(step * k));
      if (sampled.empty() || sampled.back() != distinct[rank]) {
        sampled.push_back(distinct[rank]);
      }
    }
    distinct = std::move(sampled);
  }
  distinct.push_back(std::numeric_limits<double>::infinity());
  return distinct;
}

void RequireNonDegenerate(const GroupedTrials& grouped) {
  if (grouped.groups.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no groups to disaggregate over");
  }
  const auto degenerate = FindDegenerateGroups(grouped);
  if (!degenerate.empty()) {
    throw Error(ErrorCode::kDegenerateGroup,
                "group '" + degenerate.front().ToString() +
                    "' lacks target or nontarget trials");
  }
}

double EvaluateTrialMetric(std::span<const TrialRecord> trials,
                           const TrialMetric& metric,
                           const SweepOptions& options) {
  const SweepCurve curve = ComputeSweep(trials, options);
  if (const auto* cdet = std::get_if<MinCdetMetric>(&metric)) {
    return ComputeMinCdet(curve, cdet->params).cost;
  }
  return ComputeEer(curve).eer;
}

RateCounts CountAtThreshold(std::span<const TrialRecord> trials,
                            double threshold, ErrorRate which) {
  RateCounts counts;
  const bool want_target = which == ErrorRate::kFnr;
  for (const TrialRecord& t : trials) {
    if (t.is_target() != want_target) continue;
    ++counts.trials;
    const bool accepted = t.score >= threshold;
    if (want_target ? !accepted : accepted) ++counts.errors;
  }
  return counts;
}

}  // namespace

void DcfParams::Validate() const {
  if (!(c_miss > 0.0) || !(c_fa > 0.0) || !std::isfinite(c_miss) ||
      !std::isfinite(c_fa)) {
    throw Error(ErrorCode::kInvalidArgument,
                "detection costs must be positive and finite");
  }
  if (!(p_target > 0.0 && p_target < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "target prior must lie strictly between 0 and 1");
  }
}

SweepCurve ComputeSweep(std::span<const double> target_scores,
                        std::span<const double> nontarget_scores,
                        const SweepOptions& options) {
  if (target_scores.empty()) {
    throw Error(ErrorCode::kEmptyPopulation, "no target scores");
  }
  if (nontarget_scores.empty()) {
    throw Error(ErrorCode::kEmptyPopulation, "no nontarget scores");
  }
  const std::vector<double> targets = SortedFinite(target_scores, "target");
  const std::vector<double> nontargets =
      SortedFinite(nontarget_scores, "nontarget");

  SweepCurve curve;
  curve.n_target = static_cast<int64_t>(targets.size());
  curve.n_nontarget = static_cast<int64_t>(nontargets.size());
  curve.thresholds =
      CandidateThresholds(targets, nontargets, options.max_thresholds);

  const size_t n = curve.thresholds.size();
  curve.fpr.resize(n);
  curve.fnr.resize(n);
  curve.false_accepts.resize(n);
  curve.misses.resize(n);
  // Both pointers only move forward because thresholds ascend.
  size_t below_t = 0;
  size_t below_n = 0;
  for (size_t i = 0; i < n; ++i) {
    const double tau = curve.thresholds[i];
    while (below_t < targets.size() && targets[below_t] < tau) ++below_t;
    while (below_n < nontargets.size() && nontargets[below_n] < tau) ++below_n;
    curve.misses[i] = static_cast<int64_t>(below_t);
    curve.false_accepts[i] = static_cast<int64_t>(nontargets.size() - below_n);
    curve.fnr[i] = static_cast<double>(curve.misses[i]) /
                   static_cast<double>(curve.n_target);
    curve.fpr[i] = static_cast<double>(curve.false_accepts[i]) /
                   static_cast<double>(curve.n_nontarget);
  }
  return curve;
}

SweepCurve ComputeSweep(std::span<const TrialRecord> trials,
                        const SweepOptions& options) {
  const ScoreSplit split = SplitScores(trials);
  return ComputeSweep(split.targets, split.nontargets, options);
}

EerResult ComputeEer(const SweepCurve& curve) {
  if (curve.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty sweep curve");
  }
  size_t i = 0;
  while (i < curve.size() && curve.fnr[i] - curve.fpr[i] < 0.0) ++i;
  if (i == curve.size()) {
    // Not reachable for a well-formed curve: the sentinel has fnr - fpr = 1.
    throw Error(ErrorCode::kInvalidArgument, "sweep curve never crosses");
  }
  const double d_hi = curve.fnr[i] - curve.fpr[i];
  if (d_hi == 0.0 || i == 0) {
    return {curve.fpr[i], curve.thresholds[i]};
  }
  const double d_lo = curve.fnr[i - 1] - curve.fpr[i - 1];
  const double t = -d_lo / (d_hi - d_lo);
  const double eer = curve.fpr[i - 1] + t * (curve.fpr[i] - curve.fpr[i - 1]);
  const double lo = curve.thresholds[i - 1];
  const double hi = curve.thresholds[i];
  const double threshold = std::isinf(hi) ? lo : lo + t * (hi - lo);
  return {eer, threshold};
}

CostResult ComputeMinCdet(const SweepCurve& curve, const DcfParams& params) {
  params.Validate();
  if (curve.size() == 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty sweep curve");
  }
  const double w_miss = params.c_miss * params.p_target;
  const double w_fa = params.c_fa * (1.0 - params.p_target);
  CostResult best{std::numeric_limits<double>::infinity(), 0.0};
  for (size_t i = 0; i < curve.size(); ++i) {
    const double cost = w_miss * curve.fnr[i] + w_fa * curve.fpr[i];
    if (cost < best.cost) best = {cost, curve.thresholds[i]};
  }
  if (params.normalize) best.cost /= std::min(w_miss, w_fa);
  return best;
}

OperatingPoint ThresholdForFpr(const SweepCurve& curve, double target_fpr) {
  if (!(target_fpr > 0.0 && target_fpr <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "design FPR must lie in (0, 1], got " +
                    FormatDouble(target_fpr));
  }
  const auto it = std::partition_point(
      curve.fpr.begin(), curve.fpr.end(),
      [target_fpr](double fpr) { return fpr > target_fpr; });
  if (it == curve.fpr.end()) {
    throw Error(ErrorCode::kInvalidArgument, "sweep curve lacks a sentinel");
  }
  const size_t i = static_cast<size_t>(it - curve.fpr.begin());
  return {curve.thresholds[i], curve.fpr[i], curve.fnr[i]};
}

GroupMetricVector GroupMetricVector::Scaled(double factor) const {
  GroupMetricVector out;
  out.metric_name = metric_name;
  out.aggregate = aggregate * factor;
  for (const auto& [group, value] : per_group) {
    out.per_group.emplace(group, value * factor);
  }
  return out;
}

std::string TrialMetricName(const TrialMetric& metric) {
  return std::holds_alternative<EerMetric>(metric) ? "eer" : "min_cdet";
}

std::vector<GroupKey> FindDegenerateGroups(const GroupedTrials& grouped) {
  std::vector<GroupKey> degenerate;
  for (const auto& [group, trials] : grouped.groups) {
    bool has_target = false;
    bool has_nontarget = false;
    for (const TrialRecord& t : trials) {
      (t.is_target() ? has_target : has_nontarget) = true;
    }
    if (!has_target || !has_nontarget) degenerate.push_back(group);
  }
  return degenerate;
}

GroupMetricVector DisaggregateTrialMetric(const GroupedTrials& grouped,
                                          const TrialMetric& metric,
                                          const SweepOptions& options) {
  RequireNonDegenerate(grouped);
  GroupMetricVector out;
  out.metric_name = TrialMetricName(metric);
  for (const auto& [group, trials] : grouped.groups) {
    out.per_group.emplace(group, EvaluateTrialMetric(trials, metric, options));
  }
  out.aggregate = EvaluateTrialMetric(grouped.all, metric, options);
  return out;
}

GroupMetricVector DisaggregateAtThreshold(const GroupedTrials& grouped,
                                          double threshold, ErrorRate which,
                                          std::string metric_name) {
  if (grouped.groups.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no groups to disaggregate over");
  }
  GroupMetricVector out;
  out.metric_name =
      metric_name.empty()
          ? std::string(which == ErrorRate::kFpr ? "fpr@" : "fnr@") +
                FormatDouble(threshold)
          : std::move(metric_name);
  const char* population = which == ErrorRate::kFpr ? "nontarget" : "target";
  for (const auto& [group, trials] : grouped.groups) {
    const RateCounts counts = CountAtThreshold(trials, threshold, which);
    if (counts.trials == 0) {
      throw Error(ErrorCode::kDegenerateGroup,
                  "group '" + group.ToString() + "' has no " + population +
                      " trials");
    }
    out.per_group.emplace(group, static_cast<double>(counts.errors) /
                                     static_cast<double>(counts.trials));
    out.per_group_counts.emplace(group, counts);
  }
  const RateCounts pooled = CountAtThreshold(grouped.all, threshold, which);
  if (pooled.trials == 0) {
    throw Error(ErrorCode::kEmptyPopulation,
                std::string("no ") + population + " trials in pooled list");
  }
  out.aggregate =
      static_cast<double>(pooled.errors) / static_cast<double>(pooled.trials);
  out.aggregate_counts = pooled;
  return out;
}

}  // namespace svbias

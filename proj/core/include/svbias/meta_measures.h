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

#ifndef SVBIAS_META_MEASURES_H_
#define SVBIAS_META_MEASURES_H_

#include <map>
#include <span>
#include <string>
#include <vector>

#include "svbias/bias_measures.h"
#include "svbias/detection_metrics.h"
#include "svbias/trial_store.h"

namespace svbias {

// Fairness Discrepancy Rate at one threshold. 1 is least biased.
struct FdrResult {
  double alpha = 0.0;
  double design_fpr = 0.0;
  double threshold = 0.0;
  double max_delta_fpr = 0.0;
  double max_delta_fnr = 0.0;
  // alpha * max_delta_fpr + (1 - alpha) * max_delta_fnr; fdr = 1 - discrepancy.
  double discrepancy = 0.0;
  double fdr = 1.0;
};

// Normalised Reliability Bias: mean absolute G2avg log ratio. 0 is unbiased.
struct NrbResult {
  std::string metric_name;
  int group_count = 0;
  double nrb = 0.0;
  std::map<GroupKey, double> per_group_log_ratios;
  // Groups whose log ratio is infinite (zero policy "infinity").
  std::vector<GroupKey> infinite_groups;
  bool smoothed = false;
};

// `group_fprs` and `group_fnrs` must come from the same shared threshold and
// cover the same groups (kGroupSetMismatch otherwise). The largest pairwise
// gap of a rate is its max minus its min.
FdrResult ComputeFdr(const GroupMetricVector& group_fprs,
                     const GroupMetricVector& group_fnrs, double alpha,
                     double design_fpr, double threshold);

inline const std::vector<double> kStandardDesignFprs = {0.001, 0.01, 0.025, 0.05,
                                                     0.1};
inline const std::vector<double> kStandardAlphas = {0.0, 0.25, 0.5, 0.75, 1.0};

// For every design FPR (in the given order) the threshold is calibrated on
// the pooled trials, groups are read at it, and the FDR is evaluated for
// every alpha. Results are ordered by (design_fpr, alpha) as given.
std::vector<FdrResult> ComputeFdrGrid(const GroupedTrials& grouped,
                                      std::span<const double> design_fprs,
                                      std::span<const double> alphas,
                                      const SweepOptions& sweep = {});

NrbResult ComputeNrb(const GroupMetricVector& v,
                     const BiasOptions& options = {});

// NRB for EER, minCDet, then FPR@t and FNR@t for each design FPR in
// descending order of design FPR.
std::vector<NrbResult> ComputeNrbSuite(const GroupedTrials& grouped,
                                       std::span<const double> design_fprs,
                                       const DcfParams& dcf,
                                       const BiasOptions& options = {},
                                       const SweepOptions& sweep = {});

// Names used for the threshold-read metrics, e.g. "fpr@0.001".
std::string DesignRateName(ErrorRate which, double design_fpr);

}  // namespace svbias

#endif  // SVBIAS_META_MEASURES_H_

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

#ifndef SVBIAS_ATTACK_SCENARIO_H_
#define SVBIAS_ATTACK_SCENARIO_H_

#include <cstdint>
#include <vector>

#include "svbias/detection_metrics.h"
#include "svbias/trial_store.h"

namespace svbias {

// An impostor retrying against a system with false-positive rate `fpr`,
// `attempts_per_hour` times an hour. Attempts are independent.
struct AttackScenario {
  double fpr = 0.001;
  double attempts_per_hour = 60.0;

  // Throws kInvalidArgument unless 0 < fpr <= 1 and attempts_per_hour > 0.
  void Validate() const;
};

// Probability of at least one false accept in `attempts` tries.
double SuccessProbability(const AttackScenario& s, int64_t attempts);

struct ExpectedTime {
  double attempts = 0.0;
  double hours = 0.0;
};

// Mean of the geometric distribution: 1 / fpr attempts.
ExpectedTime ExpectedTimeToSuccess(const AttackScenario& s);

// Smallest n with SuccessProbability(s, n) >= q, for q in (0, 1). Returns 1
// when fpr is 1.
int64_t AttemptsForProbability(const AttackScenario& s, double q);

struct GroupExposure {
  GroupKey group;
  double fpr = 0.0;
  // False when the group's FPR is zero: nothing can be expected in finite
  // time and the numeric fields hold +infinity.
  bool finite = true;
  double expected_attempts = 0.0;
  double expected_hours = 0.0;
  int64_t attempts_to_quantile = 0;
  double hours_to_quantile = 0.0;
};

// Per-group exposure, most exposed (highest FPR) first; ties in key order;
// zero-FPR groups are flagged and listed last.
std::vector<GroupExposure> CompareGroupExposure(
    const GroupMetricVector& group_fprs, double attempts_per_hour,
    double quantile = 0.5);

}  // namespace svbias

#endif  // SVBIAS_ATTACK_SCENARIO_H_

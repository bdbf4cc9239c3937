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

#include "svbias/attack_scenario.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "svbias/error.h"

namespace svbias {

void AttackScenario::Validate() const {
  if (!(fpr > 0.0 && fpr <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "attack FPR must lie in (0, 1]");
  }
  if (!(attempts_per_hour > 0.0) || !std::isfinite(attempts_per_hour)) {
    throw Error(ErrorCode::kInvalidArgument,
                "attempt rate must be positive and finite");
  }
}

double SuccessProbability(const AttackScenario& s, int64_t attempts) {
  s.Validate();
  if (attempts < 0) {
    throw Error(ErrorCode::kInvalidArgument, "attempt count is negative");
  }
  if (attempts == 0) return 0.0;
  if (s.fpr == 1.0) return 1.0;
  // 1 - (1 - fpr)^n in the log domain.
  return -std::expm1(static_cast<double>(attempts) * std::log1p(-s.fpr));
}

ExpectedTime ExpectedTimeToSuccess(const AttackScenario& s) {
  s.Validate();
  const double attempts = 1.0 / s.fpr;
  return {attempts, attempts / s.attempts_per_hour};
}

int64_t AttemptsForProbability(const AttackScenario& s, double q) {
  s.Validate();
  if (!(q > 0.0 && q < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "success probability must lie in (0, 1)");
  }
  if (s.fpr == 1.0) return 1;
  auto n = static_cast<int64_t>(
      std::ceil(std::log1p(-q) / std::log1p(-s.fpr)));
  n = std::max<int64_t>(n, 1);
  // The closed form can land one off when the ratio is within rounding of an
  // integer; settle it against the forward model.
  while (n > 1 && SuccessProbability(s, n - 1) >= q) --n;
  while (SuccessProbability(s, n) < q) ++n;
  return n;
}

std::vector<GroupExposure> CompareGroupExposure(
    const GroupMetricVector& group_fprs, double attempts_per_hour,
    double quantile) {
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<GroupExposure> out;
  out.reserve(group_fprs.per_group.size());
  for (const auto& [group, fpr] : group_fprs.per_group) {
    GroupExposure e;
    e.group = group;
    e.fpr = fpr;
    if (fpr == 0.0) {
      AttackScenario{1.0, attempts_per_hour}.Validate();
      e.finite = false;
      e.expected_attempts = kInf;
      e.expected_hours = kInf;
      e.attempts_to_quantile = std::numeric_limits<int64_t>::max();
      e.hours_to_quantile = kInf;
    } else {
      const AttackScenario s{fpr, attempts_per_hour};
      const ExpectedTime t = ExpectedTimeToSuccess(s);
      e.expected_attempts = t.attempts;
      e.expected_hours = t.hours;
      e.attempts_to_quantile = AttemptsForProbability(s, quantile);
      e.hours_to_quantile =
          static_cast<double>(e.attempts_to_quantile) / attempts_per_hour;
    }
    out.push_back(std::move(e));
  }
  // Map order already sorts keys, so a stable sort keeps ties in key order.
  std::stable_sort(out.begin(), out.end(),
                   [](const GroupExposure& a, const GroupExposure& b) {
                     return a.fpr > b.fpr;
                   });
  return out;
}

}  // namespace svbias

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

#include <cmath>
#include <limits>

#include "gtest/gtest.h"
#include "test_util.h"

namespace svbias {
namespace {

using testing_util::CodeOf;
using testing_util::Key;

TEST(AttackScenario, ExpectedTimeExamples) {
  const ExpectedTime t = ExpectedTimeToSuccess({0.001, 60.0});
  EXPECT_NEAR(t.attempts, 1000.0, 1e-9);
  EXPECT_NEAR(t.hours, 16.6667, 1e-4);
  const ExpectedTime u = ExpectedTimeToSuccess({0.005, 60.0});
  EXPECT_NEAR(u.attempts, 200.0, 1e-9);
  EXPECT_NEAR(u.hours, 3.3333, 1e-4);
}

TEST(AttackScenario, SuccessProbabilityExamples) {
  EXPECT_NEAR(SuccessProbability({0.001, 60.0}, 1020), 0.639589, 1e-6);
  EXPECT_EQ(SuccessProbability({0.001, 60.0}, 0), 0.0);
  EXPECT_EQ(SuccessProbability({1.0, 60.0}, 1), 1.0);
  EXPECT_NEAR(SuccessProbability({0.3, 1.0}, 1), 0.3, 1e-15);
}

TEST(AttackScenario, AttemptsForProbability) {
  const AttackScenario s{0.001, 60.0};
  EXPECT_EQ(AttemptsForProbability(s, 0.5), 693);
  EXPECT_LT(SuccessProbability(s, 692), 0.5);
  EXPECT_GE(SuccessProbability(s, 693), 0.5);
  EXPECT_EQ(AttemptsForProbability({1.0, 60.0}, 0.99), 1);
  EXPECT_EQ(AttemptsForProbability({0.5, 60.0}, 0.75), 2);
}

TEST(AttackScenario, Validation) {
  EXPECT_EQ(CodeOf([] { AttackScenario{0.0, 60.0}.Validate(); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { AttackScenario{1.5, 60.0}.Validate(); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { AttackScenario{0.1, 0.0}.Validate(); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { AttemptsForProbability({0.1, 1.0}, 1.0); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([] { SuccessProbability({0.1, 1.0}, -1); }),
            ErrorCode::kInvalidArgument);
}

TEST(AttackScenarioProperty, Monotonicity) {
  const std::vector<double> fprs = {1e-6, 1e-4, 1e-3, 0.01, 0.1, 0.5, 1.0};
  for (size_t i = 0; i + 1 < fprs.size(); ++i) {
    const AttackScenario lo{fprs[i], 60.0};
    const AttackScenario hi{fprs[i + 1], 60.0};
    EXPECT_GT(ExpectedTimeToSuccess(lo).hours, ExpectedTimeToSuccess(hi).hours);
    EXPECT_GE(AttemptsForProbability(lo, 0.5), AttemptsForProbability(hi, 0.5));
    for (int64_t n : {1, 10, 1000}) {
      EXPECT_LE(SuccessProbability(lo, n), SuccessProbability(hi, n));
    }
  }
  const AttackScenario s{0.01, 60.0};
  double previous = 0.0;
  for (int64_t n = 1; n < 2000; n += 37) {
    const double p = SuccessProbability(s, n);
    EXPECT_GT(p, previous);
    previous = p;
  }
  for (double q : {0.1, 0.5, 0.9, 0.99}) {
    const int64_t n = AttemptsForProbability(s, q);
    EXPECT_GE(SuccessProbability(s, n), q);
    EXPECT_LT(SuccessProbability(s, n - 1), q);
  }
}

GroupMetricVector Fprs(const std::vector<std::pair<std::string, double>>& values) {
  GroupMetricVector v;
  v.metric_name = "fpr@0.001";
  for (const auto& [g, x] : values) v.per_group.emplace(Key(g), x);
  return v;
}

TEST(CompareGroupExposure, FiveFoldRatio) {
  const auto exposure = CompareGroupExposure(Fprs({{"a", 0.001}, {"b", 0.005}}), 60.0);
  ASSERT_EQ(exposure.size(), 2u);
  EXPECT_EQ(exposure[0].group, Key("b"));
  EXPECT_NEAR(exposure[1].expected_attempts / exposure[0].expected_attempts, 5.0, 1e-12);
  EXPECT_NEAR(exposure[0].expected_hours, 3.3333, 1e-4);
  EXPECT_NEAR(exposure[1].expected_hours, 16.6667, 1e-4);
  EXPECT_EQ(exposure[1].attempts_to_quantile, 693);
}

TEST(CompareGroupExposure, OrderingTiesAndZeroFpr) {
  const auto exposure = CompareGroupExposure(
      Fprs({{"d", 0.0}, {"c", 0.01}, {"a", 0.01}, {"b", 0.02}}), 10.0, 0.9);
  ASSERT_EQ(exposure.size(), 4u);
  EXPECT_EQ(exposure[0].group, Key("b"));
  EXPECT_EQ(exposure[1].group, Key("a"));
  EXPECT_EQ(exposure[2].group, Key("c"));
  EXPECT_EQ(exposure[3].group, Key("d"));
  EXPECT_TRUE(exposure[2].finite);
  EXPECT_FALSE(exposure[3].finite);
  EXPECT_TRUE(std::isinf(exposure[3].expected_attempts));
  EXPECT_TRUE(std::isinf(exposure[3].expected_hours));
  EXPECT_TRUE(std::isinf(exposure[3].hours_to_quantile));
  EXPECT_EQ(exposure[0].attempts_to_quantile, AttemptsForProbability({0.02, 10.0}, 0.9));
}

}  // namespace
}  // namespace svbias

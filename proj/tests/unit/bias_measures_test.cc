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

#include <algorithm>
#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "test_util.h"

namespace svbias {
namespace {

using testing_util::CodeOf;
using testing_util::Key;

// Agreement with values printed to three decimals.
constexpr double kReferenceTolerance = 0.002;

GroupMetricVector Vector(std::initializer_list<std::pair<const char*, double>> values,
                         double aggregate, const char* name = "eer") {
  GroupMetricVector v;
  v.metric_name = name;
  for (const auto& [group, value] : values) v.per_group.emplace(Key(group), value);
  v.aggregate = aggregate;
  return v;
}

TEST(G2minDiff, GenderEer) {
  const BiasVector b = G2minDiff(Vector({{"male", 3.581}, {"female", 3.757}}, 3.657));
  EXPECT_NEAR(b.per_group.at(Key("male")), 0.000, kReferenceTolerance);
  EXPECT_NEAR(b.per_group.at(Key("female")), 0.176, kReferenceTolerance);
  EXPECT_EQ(b.reference_group, Key("male"));
  EXPECT_EQ(b.reference_value, 3.581);
}

TEST(G2minDiff, FemaleNationalityEer) {
  const BiasVector b = G2minDiff(
      Vector({{"IN", 7.028}, {"US", 3.250}, {"AUS", 2.788}, {"DE", 10.641}}, 3.657));
  EXPECT_NEAR(b.per_group.at(Key("IN")), 4.240, kReferenceTolerance);
  EXPECT_NEAR(b.per_group.at(Key("US")), 0.462, kReferenceTolerance);
  EXPECT_EQ(b.per_group.at(Key("AUS")), 0.0);
  EXPECT_NEAR(b.per_group.at(Key("DE")), 7.853, kReferenceTolerance);
}

TEST(G2minDiff, EqualGroupsAllZeroAndLexicographicTie) {
  const BiasVector b = G2minDiff(Vector({{"b", 0.1}, {"a", 0.1}, {"c", 0.1}}, 0.1));
  for (const auto& [g, v] : b.per_group) EXPECT_EQ(v, 0.0);
  EXPECT_EQ(b.reference_group, Key("a"));
}

TEST(G2avgRatio, ReferenceValues) {
  const auto v = Vector({{"male", 3.581}, {"female", 3.757}}, 3.657);
  const BiasVector b = G2avgRatio(v);
  EXPECT_NEAR(b.per_group.at(Key("male")), 0.979, kReferenceTolerance);
  EXPECT_NEAR(b.per_group.at(Key("female")), 1.027, kReferenceTolerance);
  EXPECT_EQ(b.reference, "pooled");
}

TEST(G2avgRatio, GroupMeanModeDiffersFromPooled) {
  const auto v = Vector({{"male", 3.581}, {"female", 3.757}}, 3.657);
  const BiasVector b =
      G2avgRatio(v, BiasOptions{ZeroPolicy::kError, AverageMode::kGroupMean});
  EXPECT_NEAR(b.per_group.at(Key("male")), 3.581 / 3.669, 1e-12);
  EXPECT_NEAR(b.per_group.at(Key("male")), 0.976, 0.0005);
}

TEST(G2avgRatio, AllEqualToAggregateIsOne) {
  const BiasVector b = G2avgRatio(Vector({{"a", 0.02}, {"b", 0.02}}, 0.02));
  for (const auto& [g, v] : b.per_group) EXPECT_EQ(v, 1.0);
}

TEST(G2avgRatio, ZeroAggregate) {
  EXPECT_EQ(CodeOf([] { G2avgRatio(Vector({{"a", 0.0}}, 0.0)); }),
            ErrorCode::kZeroAggregate);
}

TEST(G2avgLogRatio, ReferenceValues) {
  const BiasVector b = G2avgLogRatio(
      Vector({{"female", 3.757}, {"DE", 10.641}, {"same", 3.657}}, 3.657));
  EXPECT_NEAR(b.per_group.at(Key("female")), -0.027, kReferenceTolerance);
  EXPECT_NEAR(b.per_group.at(Key("DE")), -1.068, kReferenceTolerance);
  EXPECT_EQ(b.per_group.at(Key("same")), 0.0);
}

GroupMetricVector WithZeroGroup() {
  GroupMetricVector v = Vector({{"a", 0.0}, {"b", 0.004}}, 0.002, "fpr@0.001");
  v.per_group_counts[Key("a")] = {0, 1000};
  v.per_group_counts[Key("b")] = {4, 1000};
  v.aggregate_counts = RateCounts{4, 2000};
  return v;
}

TEST(ZeroPolicy, ErrorIsDefault) {
  EXPECT_EQ(CodeOf([] { G2avgLogRatio(WithZeroGroup()); }),
            ErrorCode::kZeroGroupValue);
  // The plain ratio of a zero group is well defined.
  EXPECT_EQ(G2avgRatio(WithZeroGroup()).per_group.at(Key("a")), 0.0);
}

TEST(ZeroPolicy, Infinity) {
  const BiasVector b =
      G2avgLogRatio(WithZeroGroup(), BiasOptions{ZeroPolicy::kInfinity, {}});
  EXPECT_TRUE(std::isinf(b.per_group.at(Key("a"))));
  EXPECT_GT(b.per_group.at(Key("a")), 0.0);
  EXPECT_EQ(b.infinite_groups, std::vector<GroupKey>{Key("a")});
}

TEST(ZeroPolicy, SmoothAddsHalfCounts) {
  const BiasVector b =
      G2avgLogRatio(WithZeroGroup(), BiasOptions{ZeroPolicy::kSmooth, {}});
  EXPECT_TRUE(b.smoothed);
  const double avg = 4.5 / 2000.5;
  EXPECT_DOUBLE_EQ(b.per_group.at(Key("a")), -std::log((0.5 / 1000.5) / avg));
  EXPECT_DOUBLE_EQ(b.per_group.at(Key("b")), -std::log((4.5 / 1000.5) / avg));
}

TEST(ZeroPolicy, SmoothWithoutCountsFallsBackToError) {
  EXPECT_EQ(CodeOf([] {
              G2avgLogRatio(Vector({{"a", 0.0}, {"b", 0.1}}, 0.05),
                            BiasOptions{ZeroPolicy::kSmooth, {}});
            }),
            ErrorCode::kZeroGroupValue);
}

TEST(ParseOptions, Names) {
  EXPECT_EQ(ParseZeroPolicy("Smooth"), ZeroPolicy::kSmooth);
  EXPECT_EQ(ParseAverageMode("group_mean"), AverageMode::kGroupMean);
  EXPECT_THROW(ParseZeroPolicy("ignore"), Error);
}

// Random positive vectors with distinct values.
GroupMetricVector RandomVector(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> value(1e-4, 0.5);
  GroupMetricVector v;
  v.metric_name = "m";
  const int groups = 1 + static_cast<int>(rng() % 12);
  double sum = 0.0;
  for (int i = 0; i < groups; ++i) {
    const double x = value(rng);
    v.per_group.emplace(Key("g" + std::to_string(i)), x);
    sum += x;
  }
  v.aggregate = sum / groups * std::uniform_real_distribution<double>(0.8, 1.2)(rng);
  return v;
}

std::vector<GroupKey> OrderBy(const std::map<GroupKey, double>& values, bool ascending) {
  std::vector<GroupKey> keys;
  for (const auto& [k, v] : values) keys.push_back(k);
  std::stable_sort(keys.begin(), keys.end(), [&](const GroupKey& a, const GroupKey& b) {
    return ascending ? values.at(a) < values.at(b) : values.at(a) > values.at(b);
  });
  return keys;
}

TEST(BiasMeasuresProperty, ScaleInvarianceAndLinearity) {
  std::mt19937_64 rng(1234);
  for (int trial = 0; trial < 200; ++trial) {
    const GroupMetricVector v = RandomVector(rng);
    const double c = std::pow(10.0, std::uniform_real_distribution<double>(-3, 3)(rng));
    const GroupMetricVector scaled = v.Scaled(c);
    const BiasVector r1 = G2avgRatio(v), r2 = G2avgRatio(scaled);
    const BiasVector l1 = G2avgLogRatio(v), l2 = G2avgLogRatio(scaled);
    const BiasVector d1 = G2minDiff(v), d2 = G2minDiff(scaled);
    for (const auto& [g, x] : v.per_group) {
      EXPECT_NEAR(r2.per_group.at(g), r1.per_group.at(g), 1e-12 * r1.per_group.at(g));
      EXPECT_NEAR(l2.per_group.at(g), l1.per_group.at(g), 1e-12);
      EXPECT_NEAR(d2.per_group.at(g), c * d1.per_group.at(g),
                  1e-12 * c * v.aggregate * 10);
    }
  }
}

TEST(BiasMeasuresProperty, RankPreservationAndSignCoupling) {
  std::mt19937_64 rng(4321);
  for (int trial = 0; trial < 200; ++trial) {
    const GroupMetricVector v = RandomVector(rng);
    const BiasVector diff = G2minDiff(v);
    const BiasVector ratio = G2avgRatio(v);
    const BiasVector logs = G2avgLogRatio(v);
    const auto raw = OrderBy(v.per_group, true);
    EXPECT_EQ(OrderBy(diff.per_group, true), raw);
    EXPECT_EQ(OrderBy(ratio.per_group, true), raw);
    EXPECT_EQ(OrderBy(logs.per_group, false), raw);
    for (const auto& [g, b] : v.per_group) {
      const double r = ratio.per_group.at(g);
      const double l = logs.per_group.at(g);
      EXPECT_EQ(l > 0, r < 1);
      EXPECT_EQ(r < 1, b < v.aggregate);
      EXPECT_EQ(l, -std::log(r));
    }
    // The best group is an exact zero and nothing is negative.
    EXPECT_EQ(diff.per_group.at(raw.front()), 0.0);
    for (const auto& [g, d] : diff.per_group) EXPECT_GE(d, 0.0);
  }
}

}  // namespace
}  // namespace svbias

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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "test_util.h"

namespace svbias {
namespace {

using testing_util::AddGroup;
using testing_util::CodeOf;
using testing_util::Key;
using testing_util::Normals;

GroupMetricVector Rates(const std::vector<std::pair<std::string, double>>& values,
                        double aggregate = 0.0, const char* name = "fpr") {
  GroupMetricVector v;
  v.metric_name = name;
  for (const auto& [group, value] : values) v.per_group.emplace(Key(group), value);
  v.aggregate = aggregate;
  return v;
}

TEST(ComputeFdr, IdenticalRatesGiveOne) {
  const auto fpr = Rates({{"a", 0.01}, {"b", 0.01}});
  const auto fnr = Rates({{"a", 0.2}, {"b", 0.2}});
  for (double alpha : kStandardAlphas) {
    EXPECT_EQ(ComputeFdr(fpr, fnr, alpha, 0.01, 0.0).fdr, 1.0);
  }
}

TEST(ComputeFdr, MaleFprColumnAtAlphaOne) {
  const auto fpr = Rates({{"IN", 0.005}, {"US", 0.000}, {"AUS", 0.001}, {"DE", 0.002}});
  const auto fnr = Rates({{"IN", 0.3}, {"US", 0.1}, {"AUS", 0.2}, {"DE", 0.25}});
  const FdrResult r = ComputeFdr(fpr, fnr, 1.0, 0.001, 0.0);
  EXPECT_EQ(r.max_delta_fpr, 0.005);
  EXPECT_NEAR(r.fdr, 0.995, 1e-12);
}

TEST(ComputeFdr, ConvexCombination) {
  const auto fpr = Rates({{"a", 0.1}, {"b", 0.3}});
  const auto fnr = Rates({{"a", 0.5}, {"b", 0.1}});
  const FdrResult r = ComputeFdr(fpr, fnr, 0.5, 0.1, 1.25);
  EXPECT_DOUBLE_EQ(r.max_delta_fpr, 0.2);
  EXPECT_DOUBLE_EQ(r.max_delta_fnr, 0.4);
  EXPECT_DOUBLE_EQ(r.fdr, 0.7);
  EXPECT_EQ(r.threshold, 1.25);
}

TEST(ComputeFdr, Errors) {
  const auto ab = Rates({{"a", 0.1}, {"b", 0.3}});
  const auto ac = Rates({{"a", 0.1}, {"c", 0.3}});
  EXPECT_EQ(CodeOf([&] { ComputeFdr(ab, ac, 0.5, 0.1, 0.0); }),
            ErrorCode::kGroupSetMismatch);
  EXPECT_EQ(CodeOf([&] { ComputeFdr(ab, ab, 1.5, 0.1, 0.0); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(CodeOf([&] { ComputeFdr(Rates({{"a", 2.0}}), Rates({{"a", 0.0}}), 0.5, 0.1, 0); }),
            ErrorCode::kInvalidArgument);
}

GroupedTrials TwoGaussianGroups(uint64_t seed, size_t n) {
  std::mt19937_64 rng(seed);
  GroupedTrials g;
  AddGroup(g, Key("A"), Normals(rng, n, 3.0), Normals(rng, n, 0.0));
  AddGroup(g, Key("B"), Normals(rng, n, 2.5), Normals(rng, n, 0.5));
  return g;
}

TEST(ComputeFdrGrid, CardinalityAndOrder) {
  const GroupedTrials g = TwoGaussianGroups(1, 2000);
  const std::vector<double> fprs = {0.01, 0.1};
  const std::vector<double> alphas = {0.0, 0.5, 1.0};
  const auto grid = ComputeFdrGrid(g, fprs, alphas);
  ASSERT_EQ(grid.size(), 6u);
  for (size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(grid[i].design_fpr, fprs[i / 3]);
    EXPECT_EQ(grid[i].alpha, alphas[i % 3]);
  }
}

TEST(ComputeFdrGrid, SingleGroupIsUnbiased) {
  std::mt19937_64 rng(2);
  GroupedTrials g;
  AddGroup(g, Key("only"), Normals(rng, 500, 2.0), Normals(rng, 500, 0.0));
  for (const FdrResult& r : ComputeFdrGrid(g, kStandardDesignFprs, kStandardAlphas)) {
    EXPECT_EQ(r.fdr, 1.0);
  }
}

TEST(ComputeFdrGrid, FprGapsShrinkWithDesignFpr) {
  // Impostor means differ by 0.5.
  const GroupedTrials g = TwoGaussianGroups(3, 100000);
  const std::vector<double> fprs = {0.1, 0.05, 0.025, 0.01, 0.001};
  const auto grid = ComputeFdrGrid(g, fprs, kStandardAlphas);
  double previous = 0.0;
  for (size_t i = 0; i < fprs.size(); ++i) {
    const FdrResult& alpha_one = grid[i * 5 + 4];
    ASSERT_EQ(alpha_one.alpha, 1.0);
    EXPECT_GT(alpha_one.fdr, previous) << "design fpr " << fprs[i];
    previous = alpha_one.fdr;
  }
  const auto at = [&](size_t fpr_index, size_t alpha_index) {
    return grid[fpr_index * 5 + alpha_index].fdr;
  };
  for (size_t a = 1; a < 5; ++a) {
    EXPECT_GT(at(4, a), at(4, a - 1));  // design 0.001
  }
  EXPECT_GT(previous, 0.99);
}

TEST(ComputeNrb, AllEqualIsZero) {
  const NrbResult r = ComputeNrb(Rates({{"a", 0.02}, {"b", 0.02}}, 0.02));
  EXPECT_EQ(r.nrb, 0.0);
  EXPECT_EQ(r.group_count, 2);
}

TEST(ComputeNrb, MaleLogRatioMagnitudes) {
  // Values whose log ratios are exactly the printed ones.
  const double agg = 0.001;
  const auto v = Rates({{"IN", agg * std::exp(-1.659)},
                        {"US", agg * std::exp(0.912)},
                        {"AUS", agg},
                        {"DE", agg * std::exp(-0.654)}},
                       agg);
  // (1.659 + 0.912 + 0 + 0.654) / 4
  EXPECT_NEAR(ComputeNrb(v).nrb, 0.80625, 1e-12);
}

TEST(ComputeNrb, ReciprocalPair) {
  const double r = 3.7;
  const NrbResult n = ComputeNrb(Rates({{"a", 0.1 * r}, {"b", 0.1 / r}}, 0.1));
  EXPECT_NEAR(n.nrb, std::log(r), 1e-14);
}

TEST(ComputeNrb, InfiniteUnderInfinityPolicy) {
  GroupMetricVector v = Rates({{"a", 0.0}, {"b", 0.01}}, 0.005);
  const NrbResult n = ComputeNrb(v, BiasOptions{ZeroPolicy::kInfinity, {}});
  EXPECT_TRUE(std::isinf(n.nrb));
  EXPECT_EQ(n.infinite_groups, std::vector<GroupKey>{Key("a")});
  EXPECT_EQ(CodeOf([&] { ComputeNrb(v); }), ErrorCode::kZeroGroupValue);
}

TEST(ComputeNrbSuite, IdenticalGroupsAllZero) {
  std::mt19937_64 rng(4);
  const auto t = Normals(rng, 3000, 2.0);
  const auto nt = Normals(rng, 3000, 0.0);
  GroupedTrials g;
  AddGroup(g, Key("a"), t, nt);
  AddGroup(g, Key("b"), t, nt);
  for (const NrbResult& r : ComputeNrbSuite(g, kStandardDesignFprs, DcfParams{})) {
    EXPECT_EQ(r.nrb, 0.0) << r.metric_name;
  }
}

TEST(ComputeNrbSuite, CardinalityAndOrder) {
  const GroupedTrials g = TwoGaussianGroups(5, 5000);
  const std::vector<double> fprs = {0.01, 0.1};
  const auto suite = ComputeNrbSuite(g, fprs, DcfParams{});
  ASSERT_EQ(suite.size(), 6u);
  const std::vector<std::string> names = {"eer", "min_cdet", "fpr@0.1",
                                          "fnr@0.1", "fpr@0.01", "fnr@0.01"};
  for (size_t i = 0; i < names.size(); ++i) EXPECT_EQ(suite[i].metric_name, names[i]);
}

// Impostor scores with exponential tails, group B shifted by ln 5: above
// ln 5 the FPR of B is exactly five times that of A at every threshold.
// Scores are evenly spaced quantiles, so no sampling noise.
GroupedTrials ConstantRatioGroups(size_t n) {
  std::vector<double> a(n);
  std::vector<double> b(n);
  std::vector<double> targets(n / 10);
  for (size_t i = 0; i < n; ++i) {
    a[i] = -std::log(1.0 - (i + 0.5) / n);
    b[i] = a[i] + std::log(5.0);
  }
  for (size_t i = 0; i < targets.size(); ++i) {
    targets[i] = 2.0 - std::log(1.0 - (i + 0.5) / targets.size());
  }
  GroupedTrials g;
  AddGroup(g, Key("A"), targets, a);
  AddGroup(g, Key("B"), targets, b);
  return g;
}

TEST(ComputeNrbSuite, ConstantFprRatioKeepsNrbWhileFdrDrifts) {
  const GroupedTrials g = ConstantRatioGroups(200000);
  const std::vector<double> fprs = {0.1, 0.01, 0.001};
  const auto suite = ComputeNrbSuite(g, fprs, DcfParams{});
  const auto grid = ComputeFdrGrid(g, fprs, std::vector<double>{1.0});
  // Pooled rate 3q with groups at 5q and q: |ln(5/3)| + |ln(1/3)| = ln 5.
  const double expected = std::log(5.0) / 2.0;
  for (const NrbResult& r : suite) {
    if (r.metric_name.rfind("fpr@", 0) == 0) {
      EXPECT_NEAR(r.nrb, expected, 0.01) << r.metric_name;
    }
  }
  // Absolute gaps (4q = 4/3 of the pooled rate) vanish with the design FPR.
  for (size_t i = 0; i < fprs.size(); ++i) {
    EXPECT_NEAR(grid[i].max_delta_fpr, 4.0 / 3.0 * fprs[i], 0.05 * fprs[i]);
  }
  EXPECT_GT(grid[2].fdr, 0.998);
  EXPECT_LT(grid[0].fdr, 0.9);
}

TEST(MetaMeasuresProperty, FdrAffineInAlphaAndMagnitudeSensitive) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> rate(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::pair<std::string, double>> f, n;
    const int groups = 1 + static_cast<int>(rng() % 8);
    for (int i = 0; i < groups; ++i) {
      f.emplace_back("g" + std::to_string(i), rate(rng));
      n.emplace_back("g" + std::to_string(i), rate(rng));
    }
    const auto fpr = Rates(f);
    const auto fnr = Rates(n);
    const double alpha = rate(rng);
    const FdrResult r = ComputeFdr(fpr, fnr, alpha, 0.1, 0.0);
    const double at0 = ComputeFdr(fpr, fnr, 0.0, 0.1, 0.0).fdr;
    const double at1 = ComputeFdr(fpr, fnr, 1.0, 0.1, 0.0).fdr;
    EXPECT_NEAR(r.fdr, (1 - alpha) * at0 + alpha * at1, 1e-14);
    EXPECT_EQ(at0, 1.0 - r.max_delta_fnr);
    EXPECT_EQ(at1, 1.0 - r.max_delta_fpr);

    const double c = rate(rng);
    const FdrResult scaled = ComputeFdr(fpr.Scaled(c), fnr.Scaled(c), alpha, 0.1, 0.0);
    EXPECT_NEAR(scaled.discrepancy, c * r.discrepancy, 1e-12 * std::max(1.0, r.discrepancy));
    EXPECT_NEAR(1.0 - scaled.fdr, c * (1.0 - r.fdr), 1e-12);
  }
}

TEST(MetaMeasuresProperty, NrbScaleInvarianceZeroCharacterizationPermutation) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> value(1e-4, 0.5);
  for (int trial = 0; trial < 200; ++trial) {
    const int groups = 1 + static_cast<int>(rng() % 10);
    std::vector<std::pair<std::string, double>> values;
    std::vector<std::pair<std::string, double>> renamed;
    for (int i = 0; i < groups; ++i) {
      const double x = value(rng);
      values.emplace_back("g" + std::to_string(i), x);
      // Renaming reverses the key order.
      renamed.emplace_back("h" + std::to_string(groups - i), x);
    }
    const double agg = value(rng);
    const auto v = Rates(values, agg);
    const double nrb = ComputeNrb(v).nrb;
    EXPECT_GT(nrb, 0.0);
    const double c = std::pow(10.0, std::uniform_real_distribution<double>(-3, 3)(rng));
    EXPECT_NEAR(ComputeNrb(v.Scaled(c)).nrb, nrb, 1e-12 * std::max(1.0, nrb));
    EXPECT_NEAR(ComputeNrb(Rates(renamed, agg)).nrb, nrb, 1e-15);

    std::vector<std::pair<std::string, double>> flat;
    for (int i = 0; i < groups; ++i) flat.emplace_back("g" + std::to_string(i), agg);
    EXPECT_EQ(ComputeNrb(Rates(flat, agg)).nrb, 0.0);
  }
}

}  // namespace
}  // namespace svbias

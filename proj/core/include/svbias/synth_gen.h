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

#ifndef SVBIAS_SYNTH_GEN_H_
#define SVBIAS_SYNTH_GEN_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "svbias/trial_store.h"

namespace svbias {

// Equal-variance Gaussian score model of one group.
struct GroupScoreModel {
  GroupKey group;
  double mu_target = 2.0;
  double mu_nontarget = 0.0;
  double sigma = 1.0;
  int64_t n_target = 1;
  int64_t n_nontarget = 1;
};

struct SynthSpec {
  std::vector<GroupScoreModel> models;
  uint64_t seed = 0;

  // Throws kInvalidArgument on an empty model list, repeated groups, groups
  // over different attribute names, sigma <= 0 or counts < 1.
  void Validate() const;
};

struct SynthData {
  std::vector<TrialRecord> trials;
  std::vector<SpeakerMetadata> metadata;
  std::vector<std::string> attribute_names;
};

// Draws every group's scores from its model.
//
// Generator: group i (in spec order) gets its own std::mt19937_64 seeded
// with SplitMix64(seed + (i + 1) * 0x9E3779B97F4A7C15). Uniforms are the top
// 53 bits of a draw times 2^-53; normals come in pairs from the Box-Muller
// transform sqrt(-2 ln(1 - u1)) * {cos, sin}(2 pi u2). Target scores are
// drawn before nontarget scores. Every trial gets two fresh speaker ids, so
// all trials satisfy the both-match grouping policy.
SynthData Generate(const SynthSpec& spec);

// Standard normal CDF.
double NormalCdf(double x);

// EER of the model's two Gaussians: Phi(-(mu_t - mu_n) / (2 sigma)).
double AnalyticEer(const GroupScoreModel& model);

struct AnalyticRates {
  double fpr = 0.0;
  double fnr = 0.0;
};
AnalyticRates AnalyticRatesAt(const GroupScoreModel& model, double threshold);

// Parses "VALUE[/VALUE...]:MU_T:MU_N:SIGMA:N_T:N_N", the values matching
// `attribute_names` in order.
GroupScoreModel ParseGroupScoreModel(
    const std::vector<std::string>& attribute_names, std::string_view text);

uint64_t SplitMix64(uint64_t x);

}  // namespace svbias

#endif  // SVBIAS_SYNTH_GEN_H_

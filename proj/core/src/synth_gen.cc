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

#include "svbias/synth_gen.h"

#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "svbias/error.h"
#include "svbias/text.h"

namespace svbias {
namespace {

class NormalStream {
 public:
  explicit NormalStream(uint64_t seed) : engine_(seed) {}

  double Next() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = Uniform();
    const double u2 = Uniform();
    const double radius = std::sqrt(-2.0 * std::log(1.0 - u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
  }

 private:
  double Uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::string SpeakerId(size_t group_index, int64_t trial, char side) {
  return "g" + std::to_string(group_index) + "_" + std::to_string(trial) +
         "_" + side;
}

SpeakerMetadata MakeSpeaker(std::string id, const GroupKey& group) {
  SpeakerMetadata speaker;
  speaker.speaker_id = std::move(id);
  for (size_t i = 0; i < group.size(); ++i) {
    speaker.attributes.emplace(group.names()[i], group.values()[i]);
  }
  return speaker;
}

int64_t ParseCount(const std::string& text) {
  const auto value = ParseDouble(text);
  if (!value || *value < 1 || *value != std::floor(*value) || *value > 1e12) {
    throw Error(ErrorCode::kInvalidArgument,
                "trial count must be a positive integer, got '" + text + "'");
  }
  return static_cast<int64_t>(*value);
}

double ParseReal(const std::string& text) {
  const auto value = ParseDouble(text);
  if (!value || !std::isfinite(*value)) {
    throw Error(ErrorCode::kInvalidArgument,
                "expected a finite number, got '" + text + "'");
  }
  return *value;
}

}  // namespace

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

void SynthSpec::Validate() const {
  if (models.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "synthetic spec has no groups");
  }
  std::set<GroupKey> seen;
  for (const GroupScoreModel& m : models) {
    if (m.group.size() == 0 || m.group.names() != models.front().group.names()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "all synthetic groups must use the same attribute names");
    }
    if (!seen.insert(m.group).second) {
      throw Error(ErrorCode::kInvalidArgument,
                  "synthetic group '" + m.group.ToString() + "' repeated");
    }
    if (!(m.sigma > 0.0) || !std::isfinite(m.sigma) ||
        !std::isfinite(m.mu_target) || !std::isfinite(m.mu_nontarget)) {
      throw Error(ErrorCode::kInvalidArgument,
                  "group '" + m.group.ToString() +
                      "' needs finite means and a positive sigma");
    }
    if (m.n_target < 1 || m.n_nontarget < 1) {
      throw Error(ErrorCode::kInvalidArgument,
                  "group '" + m.group.ToString() +
                      "' needs at least one trial of each kind");
    }
  }
}

SynthData Generate(const SynthSpec& spec) {
  spec.Validate();
  SynthData data;
  data.attribute_names = spec.models.front().group.names();
  for (size_t gi = 0; gi < spec.models.size(); ++gi) {
    const GroupScoreModel& model = spec.models[gi];
    NormalStream normals(
        SplitMix64(spec.seed + (gi + 1) * 0x9E3779B97F4A7C15ull));
    const int64_t total = model.n_target + model.n_nontarget;
    for (int64_t k = 0; k < total; ++k) {
      const bool target = k < model.n_target;
      TrialRecord trial;
      trial.enroll_id = SpeakerId(gi, k, 'e');
      trial.test_id = SpeakerId(gi, k, 't');
      trial.label = target ? TrialLabel::kTarget : TrialLabel::kNontarget;
      trial.score = (target ? model.mu_target : model.mu_nontarget) +
                    model.sigma * normals.Next();
      data.metadata.push_back(MakeSpeaker(trial.enroll_id, model.group));
      data.metadata.push_back(MakeSpeaker(trial.test_id, model.group));
      data.trials.push_back(std::move(trial));
    }
  }
  return data;
}

double NormalCdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double AnalyticEer(const GroupScoreModel& model) {
  return NormalCdf(-(model.mu_target - model.mu_nontarget) /
                   (2.0 * model.sigma));
}

AnalyticRates AnalyticRatesAt(const GroupScoreModel& model, double threshold) {
  // 1 - Phi(z) = Phi(-z) keeps precision in the upper tail.
  return {NormalCdf(-(threshold - model.mu_nontarget) / model.sigma),
          NormalCdf((threshold - model.mu_target) / model.sigma)};
}

GroupScoreModel ParseGroupScoreModel(
    const std::vector<std::string>& attribute_names, std::string_view text) {
  const std::vector<std::string> parts = SplitFields(text, ':');
  if (parts.size() != 6) {
    throw Error(ErrorCode::kInvalidArgument,
                "group model must be VALUES:MU_T:MU_N:SIGMA:N_T:N_N, got '" +
                    std::string(text) + "'");
  }
  std::vector<std::string> values = SplitFields(parts[0], '/');
  if (values.size() != attribute_names.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "group model '" + std::string(text) + "' needs " +
                    std::to_string(attribute_names.size()) +
                    " '/'-separated attribute values");
  }
  std::vector<std::string> names;
  for (const std::string& name : attribute_names) names.push_back(ToLower(name));
  GroupScoreModel model;
  model.group = GroupKey(std::move(names), std::move(values));
  model.mu_target = ParseReal(parts[1]);
  model.mu_nontarget = ParseReal(parts[2]);
  model.sigma = ParseReal(parts[3]);
  model.n_target = ParseCount(parts[4]);
  model.n_nontarget = ParseCount(parts[5]);
  return model;
}

}  // namespace svbias

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

#include "svbias/audit_config.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "svbias/error.h"
#include "svbias/text.h"

namespace svbias {
namespace {

std::string NormalizeKey(std::string_view key) {
  std::string out = ToLower(TrimWhitespace(key));
  std::replace(out.begin(), out.end(), '_', '-');
  return out;
}

double ParseNumber(std::string_view key, std::string_view value) {
  const auto parsed = ParseDouble(value);
  if (!parsed || !std::isfinite(*parsed)) {
    throw Error(ErrorCode::kConfig, "'" + std::string(key) +
                                        "' expects a number, got '" +
                                        std::string(value) + "'");
  }
  return *parsed;
}

bool ParseBool(std::string_view key, std::string_view value) {
  const std::string v = ToLower(TrimWhitespace(value));
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw Error(ErrorCode::kConfig, "'" + std::string(key) +
                                      "' expects true/false, got '" +
                                      std::string(value) + "'");
}

std::vector<double> ParseList(std::string_view key, std::string_view value) {
  try {
    return ParseDoubleList(value);
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, "'" + std::string(key) + "': " + e.what());
  }
}

}  // namespace

void AuditConfig::Validate() const {
  if (scores_path.empty()) throw Error(ErrorCode::kConfig, "no scores file given");
  if (metadata_path.empty()) {
    throw Error(ErrorCode::kConfig, "no metadata file given");
  }
  if (output_dir.empty()) throw Error(ErrorCode::kConfig, "no output directory");
  ValidateSettings();
}

void AuditConfig::ValidateSettings() const {
  if (group_attributes.empty()) {
    throw Error(ErrorCode::kConfig, "no group attributes given");
  }
  try {
    dcf.Validate();
  } catch (const Error& e) {
    throw Error(ErrorCode::kConfig, e.what());
  }
  if (design_fprs.empty()) throw Error(ErrorCode::kConfig, "design-fprs is empty");
  for (double f : design_fprs) {
    if (!(f > 0.0 && f <= 1.0)) {
      throw Error(ErrorCode::kConfig,
                  "design FPR " + FormatDouble(f) + " outside (0, 1]");
    }
  }
  if (alphas.empty()) throw Error(ErrorCode::kConfig, "alphas is empty");
  for (double a : alphas) {
    if (!(a >= 0.0 && a <= 1.0)) {
      throw Error(ErrorCode::kConfig,
                  "alpha " + FormatDouble(a) + " outside [0, 1]");
    }
  }
  if (!(attack_rate > 0.0)) {
    throw Error(ErrorCode::kConfig, "attack-rate must be positive");
  }
  if (!(attack_quantile > 0.0 && attack_quantile < 1.0)) {
    throw Error(ErrorCode::kConfig, "attack-quantile must lie in (0, 1)");
  }
  if (max_thresholds == 1) {
    throw Error(ErrorCode::kConfig, "max-thresholds must be 0 or at least 2");
  }
}

void SetConfigValue(AuditConfig& config, std::string_view raw_key,
                    std::string_view raw_value) {
  const std::string key = NormalizeKey(raw_key);
  const std::string value(TrimWhitespace(raw_value));
  if (key == "scores") {
    config.scores_path = value;
  } else if (key == "metadata") {
    config.metadata_path = value;
  } else if (key == "groups") {
    config.group_attributes.clear();
    for (const std::string& item : SplitFields(value, ',')) {
      const std::string name = ToLower(TrimWhitespace(item));
      if (!name.empty()) config.group_attributes.push_back(name);
    }
  } else if (key == "policy") {
    config.policy = ParseGroupingPolicy(value);
  } else if (key == "design-fprs") {
    config.design_fprs = ParseList(key, value);
  } else if (key == "alphas") {
    config.alphas = ParseList(key, value);
  } else if (key == "dcf-pt") {
    config.dcf.p_target = ParseNumber(key, value);
  } else if (key == "dcf-cmiss") {
    config.dcf.c_miss = ParseNumber(key, value);
  } else if (key == "dcf-cfa") {
    config.dcf.c_fa = ParseNumber(key, value);
  } else if (key == "dcf-normalize") {
    config.dcf.normalize = ParseBool(key, value);
  } else if (key == "zero-policy") {
    config.zero_policy = ParseZeroPolicy(value);
  } else if (key == "average-mode") {
    config.average_mode = ParseAverageMode(value);
  } else if (key == "out") {
    config.output_dir = value;
  } else if (key == "emit-figures") {
    config.emit_figures = ParseBool(key, value);
  } else if (key == "strict") {
    config.strict = ParseBool(key, value);
  } else if (key == "attack-rate") {
    config.attack_rate = ParseNumber(key, value);
  } else if (key == "attack-quantile") {
    config.attack_quantile = ParseNumber(key, value);
  } else if (key == "max-thresholds") {
    const double n = ParseNumber(key, value);
    if (n < 0 || n != std::floor(n)) {
      throw Error(ErrorCode::kConfig, "max-thresholds expects a count");
    }
    config.max_thresholds = static_cast<size_t>(n);
  } else if (key == "preset") {
    ApplyPreset(config, value);
  } else {
    throw Error(ErrorCode::kConfig, "unknown config key '" +
                                        std::string(raw_key) + "'");
  }
}

void ApplyConfigStream(AuditConfig& config, std::istream& in) {
  std::string line;
  int line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    const std::string_view text = TrimWhitespace(line);
    if (text.empty() || text.front() == '#') continue;
    const size_t eq = text.find('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorCode::kConfig, "line " + std::to_string(line_number) +
                                          ": expected key = value");
    }
    try {
      SetConfigValue(config, text.substr(0, eq), text.substr(eq + 1));
    } catch (const Error& e) {
      throw WithContext(e, "line " + std::to_string(line_number));
    }
  }
}

void ApplyConfigFile(AuditConfig& config, const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw Error(ErrorCode::kConfig, path.string() + ": cannot open config");
  }
  try {
    ApplyConfigStream(config, in);
  } catch (const Error& e) {
    throw WithContext(e, path.string());
  }
}

void ApplyPreset(AuditConfig& config, std::string_view name) {
  if (ToLower(TrimWhitespace(name)) != "paper") {
    throw Error(ErrorCode::kConfig,
                "unknown preset '" + std::string(name) + "'");
  }
  config.design_fprs = kStandardDesignFprs;
  config.alphas = kStandardAlphas;
  config.dcf = DcfParams{};
  config.group_attributes = {"gender", "nationality"};
  config.policy = GroupingPolicy::kBothMatch;
}

}  // namespace svbias

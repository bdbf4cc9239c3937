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

#ifndef SVBIAS_REPORT_H_
#define SVBIAS_REPORT_H_

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "svbias/attack_scenario.h"
#include "svbias/audit_config.h"
#include "svbias/bias_measures.h"
#include "svbias/detection_metrics.h"
#include "svbias/error.h"
#include "svbias/meta_measures.h"
#include "svbias/trial_store.h"

namespace svbias {

inline constexpr char kReportSchemaVersion[] = "svbias.report/1";

// Which parts of the pipeline to run. Subcommands other than `audit` turn
// some of them off.
struct AuditSections {
  bool base_metrics = true;
  bool bias_measures = true;
  bool fdr_grid = true;
  bool nrb_suite = true;
  bool scenarios = true;

  static AuditSections All() { return {}; }
  static AuditSections MetricsOnly() { return {true, false, false, false, false}; }
  static AuditSections FdrOnly() { return {false, false, true, false, false}; }
  static AuditSections NrbOnly() { return {false, false, false, true, false}; }
  static AuditSections ScenariosOnly() { return {false, false, false, false, true}; }
};

struct GroupSize {
  int64_t n_target = 0;
  int64_t n_nontarget = 0;
};

// Everything read at the threshold calibrated to one design FPR on the
// pooled trials.
struct DesignPoint {
  double design_fpr = 0.0;
  OperatingPoint pooled;
  GroupMetricVector fpr;
  GroupMetricVector fnr;
  std::vector<GroupExposure> exposure;
};

struct BiasReport {
  AuditConfig config;
  AuditSections sections;
  int64_t n_trials = 0;
  int64_t n_unassigned = 0;
  std::map<GroupKey, GroupSize> group_sizes;
  std::vector<GroupKey> dropped_groups;

  // Per-group EER and minCDet; set when base metrics or bias measures ran.
  std::optional<GroupMetricVector> eer;
  std::optional<GroupMetricVector> min_cdet;
  std::vector<DesignPoint> design_points;
  // Every (metric, measure) pair, metric-major in the order eer, min_cdet,
  // then fpr/fnr per design point.
  std::vector<BiasVector> bias_vectors;
  std::vector<FdrResult> fdr_grid;
  std::vector<NrbResult> nrb_suite;
  std::vector<std::string> warnings;

  const BiasVector* FindBias(const std::string& metric, BiasMeasure measure) const;
};

// Runs the pipeline on already loaded data. Degenerate groups are dropped
// with a warning, or raise kDegenerateGroup when config.strict is set.
BiasReport RunAudit(const AuditConfig& config,
                    const std::vector<TrialRecord>& trials,
                    const std::vector<SpeakerMetadata>& metadata,
                    const AuditSections& sections = AuditSections::All());

// Validates the config, loads both files and runs the pipeline.
BiasReport RunAudit(const AuditConfig& config,
                    const AuditSections& sections = AuditSections::All());

// Deterministic serializations.
std::string ReportJson(const BiasReport& report);
std::string BaseMetricsCsv(const BiasReport& report);
std::string BiasMeasuresCsv(const BiasReport& report);
std::string ThresholdDecompositionCsv(const BiasReport& report);
std::string FdrGridCsv(const BiasReport& report);
std::string NrbSuiteCsv(const BiasReport& report);

// Writes report.json plus the tables/figure data for the sections present.
// Returns the written paths in write order. Throws kIo with the path.
std::vector<std::filesystem::path> Emit(const BiasReport& report,
                                        const std::filesystem::path& output_dir);

// 1 usage/config, 2 data, 3 degenerate group (only raised in strict mode).
int ExitCodeFor(ErrorCode code);

}  // namespace svbias

#endif  // SVBIAS_REPORT_H_

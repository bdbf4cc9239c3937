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

#include "svbias/report.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "json.hpp"
#include "svbias/text.h"

namespace svbias {
namespace {

using Json = nlohmann::ordered_json;

constexpr char kPooledLabel[] = "(pooled)";

std::string MetricUnit(const std::string& metric) {
  return metric == "min_cdet" ? "cost" : "fraction";
}

std::string BiasUnit(const BiasVector& v) {
  switch (v.measure) {
    case BiasMeasure::kG2minDiff: return MetricUnit(v.metric_name);
    case BiasMeasure::kG2avgRatio: return "ratio";
    case BiasMeasure::kG2avgLogRatio: return "nats";
  }
  return "";
}

// Non-finite numbers have no JSON spelling; they are written as strings.
Json Number(double value) {
  if (std::isfinite(value)) return Json(value);
  return Json(FormatDouble(value));
}

Json Quantity(double value, const std::string& unit) {
  Json q = Json::object();
  q["value"] = Number(value);
  q["unit"] = unit;
  return q;
}

Json MetricQuantity(double value, const std::string& metric) {
  Json q = Quantity(value, MetricUnit(metric));
  if (metric == "eer") {
    q["display"] = Number(value * 100.0);
    q["display_unit"] = "percent";
  }
  return q;
}

Json GroupJson(const GroupKey& group) {
  Json attrs = Json::object();
  for (size_t i = 0; i < group.size(); ++i) {
    attrs[group.names()[i]] = group.values()[i];
  }
  return attrs;
}

Json MetricVectorJson(const GroupMetricVector& v) {
  Json out = Json::object();
  out["metric"] = v.metric_name;
  out["aggregate"] = MetricQuantity(v.aggregate, v.metric_name);
  if (v.aggregate_counts) {
    out["aggregate_errors"] = Quantity(v.aggregate_counts->errors, "count");
    out["aggregate_trials"] = Quantity(v.aggregate_counts->trials, "count");
  }
  Json groups = Json::array();
  for (const auto& [group, value] : v.per_group) {
    Json g = Json::object();
    g["group"] = group.Label();
    g["value"] = MetricQuantity(value, v.metric_name);
    const auto counts = v.per_group_counts.find(group);
    if (counts != v.per_group_counts.end()) {
      g["errors"] = Quantity(counts->second.errors, "count");
      g["trials"] = Quantity(counts->second.trials, "count");
    }
    groups.push_back(std::move(g));
  }
  out["per_group"] = std::move(groups);
  return out;
}

Json ConfigJson(const AuditConfig& c) {
  Json out = Json::object();
  out["scores"] = c.scores_path.string();
  out["metadata"] = c.metadata_path.string();
  out["groups"] = c.group_attributes;
  out["policy"] = std::string(GroupingPolicyName(c.policy));
  Json dcf = Json::object();
  dcf["c_miss"] = Quantity(c.dcf.c_miss, "cost");
  dcf["c_fa"] = Quantity(c.dcf.c_fa, "cost");
  dcf["p_target"] = Quantity(c.dcf.p_target, "probability");
  dcf["normalize"] = c.dcf.normalize;
  out["dcf"] = std::move(dcf);
  Json fprs = Json::array();
  for (double f : c.design_fprs) fprs.push_back(Quantity(f, "fraction"));
  out["design_fprs"] = std::move(fprs);
  Json alphas = Json::array();
  for (double a : c.alphas) alphas.push_back(Quantity(a, "weight"));
  out["alphas"] = std::move(alphas);
  out["zero_policy"] = std::string(ZeroPolicyName(c.zero_policy));
  out["average_mode"] = std::string(AverageModeName(c.average_mode));
  out["strict"] = c.strict;
  out["attack_rate"] = Quantity(c.attack_rate, "attempts_per_hour");
  out["attack_quantile"] = Quantity(c.attack_quantile, "probability");
  out["max_thresholds"] = Quantity(static_cast<double>(c.max_thresholds), "count");
  return out;
}

Json ExposureJson(const GroupExposure& e) {
  Json out = Json::object();
  out["group"] = e.group.Label();
  out["fpr"] = Quantity(e.fpr, "fraction");
  out["finite"] = e.finite;
  out["expected_attempts"] = Quantity(e.expected_attempts, "attempts");
  out["expected_hours"] = Quantity(e.expected_hours, "hours");
  out["attempts_to_quantile"] = Quantity(
      e.finite ? static_cast<double>(e.attempts_to_quantile)
               : std::numeric_limits<double>::infinity(),
      "attempts");
  out["hours_to_quantile"] = Quantity(e.hours_to_quantile, "hours");
  return out;
}

// Fixed column order; numbers use the round-trip format.
class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<std::string_view> header) {
    Row(header);
  }
  void Row(std::initializer_list<std::string_view> cells) {
    bool first = true;
    for (std::string_view cell : cells) {
      if (!first) out_ << ',';
      out_ << cell;
      first = false;
    }
    out_ << '\n';
  }
  std::string str() const { return out_.str(); }

 private:
  std::ostringstream out_;
};

std::string Cell(double value) { return FormatDouble(value); }

std::string OptionalCell(const BiasVector* v, const GroupKey& group) {
  if (v == nullptr) return "";
  const auto it = v->per_group.find(group);
  return it == v->per_group.end() ? "" : FormatDouble(it->second);
}

void WriteFile(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kIo, path.string() + ": cannot write file");
  out << content;
  out.close();
  if (!out) throw Error(ErrorCode::kIo, path.string() + ": write failed");
}

}  // namespace

const BiasVector* BiasReport::FindBias(const std::string& metric,
                                       BiasMeasure measure) const {
  for (const BiasVector& v : bias_vectors) {
    if (v.metric_name == metric && v.measure == measure) return &v;
  }
  return nullptr;
}

BiasReport RunAudit(const AuditConfig& config,
                    const std::vector<TrialRecord>& trials,
                    const std::vector<SpeakerMetadata>& metadata,
                    const AuditSections& sections) {
  config.ValidateSettings();
  BiasReport report;
  report.config = config;
  report.sections = sections;

  GroupedTrials grouped =
      AssignGroups(trials, metadata, config.group_attributes, config.policy);
  report.n_trials = static_cast<int64_t>(grouped.all.size());
  report.n_unassigned = static_cast<int64_t>(grouped.unassigned.size());
  if (report.n_unassigned > 0) {
    report.warnings.push_back(
        std::to_string(report.n_unassigned) +
        " trial(s) matched no group; they count toward pooled metrics only");
  }

  for (const GroupKey& group : FindDegenerateGroups(grouped)) {
    if (config.strict) {
      throw Error(ErrorCode::kDegenerateGroup,
                  "group '" + group.ToString() +
                      "' lacks target or nontarget trials");
    }
    report.warnings.push_back("dropped group '" + group.ToString() +
                              "': it lacks target or nontarget trials");
    report.dropped_groups.push_back(group);
    grouped.groups.erase(group);
  }
  if (grouped.groups.empty()) {
    throw Error(ErrorCode::kEmptyPopulation,
                "no group has both target and nontarget trials");
  }
  for (const auto& [group, group_trials] : grouped.groups) {
    GroupSize size;
    for (const TrialRecord& t : group_trials) {
      ++(t.is_target() ? size.n_target : size.n_nontarget);
    }
    report.group_sizes.emplace(group, size);
  }

  const SweepOptions sweep = config.sweep();
  const BiasOptions bias = config.bias();

  if (sections.base_metrics || sections.bias_measures || sections.nrb_suite) {
    report.eer = DisaggregateTrialMetric(grouped, EerMetric{}, sweep);
    report.min_cdet =
        DisaggregateTrialMetric(grouped, MinCdetMetric{config.dcf}, sweep);
  }

  const SweepCurve pooled = ComputeSweep(grouped.all, sweep);
  for (double design_fpr : config.design_fprs) {
    DesignPoint dp;
    dp.design_fpr = design_fpr;
    dp.pooled = ThresholdForFpr(pooled, design_fpr);
    dp.fpr = DisaggregateAtThreshold(grouped, dp.pooled.threshold,
                                     ErrorRate::kFpr,
                                     DesignRateName(ErrorRate::kFpr, design_fpr));
    dp.fnr = DisaggregateAtThreshold(grouped, dp.pooled.threshold,
                                     ErrorRate::kFnr,
                                     DesignRateName(ErrorRate::kFnr, design_fpr));
    if (sections.scenarios) {
      dp.exposure = CompareGroupExposure(dp.fpr, config.attack_rate,
                                         config.attack_quantile);
      for (const GroupExposure& e : dp.exposure) {
        if (!e.finite) {
          report.warnings.push_back("group '" + e.group.ToString() +
                                    "' has zero FPR at design FPR " +
                                    FormatDouble(design_fpr) +
                                    "; exposure is unbounded");
        }
      }
    }
    report.design_points.push_back(std::move(dp));
  }

  // Metric vectors in report order: eer, min_cdet, then per design point.
  std::vector<const GroupMetricVector*> metrics;
  if (report.eer) metrics.push_back(&*report.eer);
  if (report.min_cdet) metrics.push_back(&*report.min_cdet);
  for (const DesignPoint& dp : report.design_points) {
    metrics.push_back(&dp.fpr);
    metrics.push_back(&dp.fnr);
  }

  const auto note_ratio = [&](const std::string& metric, bool smoothed,
                              const std::vector<GroupKey>& infinite) {
    if (smoothed) {
      report.warnings.push_back("metric '" + metric +
                                "' was smoothed for ratio measures");
    }
    for (const GroupKey& g : infinite) {
      report.warnings.push_back("metric '" + metric + "' is zero for group '" +
                                g.ToString() + "'; log ratio is infinite");
    }
  };

  if (sections.bias_measures) {
    for (const GroupMetricVector* v : metrics) {
      for (BiasMeasure measure : kAllBiasMeasures) {
        try {
          report.bias_vectors.push_back(ComputeBiasMeasure(measure, *v, bias));
        } catch (const Error& e) {
          throw WithContext(e, std::string(BiasMeasureName(measure)) + " of " +
                                   v->metric_name);
        }
      }
      const BiasVector& logs = report.bias_vectors.back();
      note_ratio(v->metric_name, logs.smoothed, logs.infinite_groups);
    }
  }

  if (sections.fdr_grid) {
    for (const DesignPoint& dp : report.design_points) {
      for (double alpha : config.alphas) {
        report.fdr_grid.push_back(ComputeFdr(dp.fpr, dp.fnr, alpha,
                                             dp.design_fpr,
                                             dp.pooled.threshold));
      }
    }
  }

  if (sections.nrb_suite) {
    std::vector<const GroupMetricVector*> suite;
    suite.push_back(&*report.eer);
    suite.push_back(&*report.min_cdet);
    std::vector<const DesignPoint*> by_fpr;
    for (const DesignPoint& dp : report.design_points) by_fpr.push_back(&dp);
    std::stable_sort(by_fpr.begin(), by_fpr.end(),
                     [](const DesignPoint* a, const DesignPoint* b) {
                       return a->design_fpr > b->design_fpr;
                     });
    for (const DesignPoint* dp : by_fpr) {
      suite.push_back(&dp->fpr);
      suite.push_back(&dp->fnr);
    }
    for (const GroupMetricVector* v : suite) {
      try {
        report.nrb_suite.push_back(ComputeNrb(*v, bias));
      } catch (const Error& e) {
        throw WithContext(e, "nrb of " + v->metric_name);
      }
      if (!sections.bias_measures) {
        const NrbResult& r = report.nrb_suite.back();
        note_ratio(v->metric_name, r.smoothed, r.infinite_groups);
      }
    }
  }

  return report;
}

BiasReport RunAudit(const AuditConfig& config, const AuditSections& sections) {
  config.Validate();
  const std::vector<TrialRecord> trials = LoadTrialsFile(config.scores_path);
  const std::vector<SpeakerMetadata> metadata =
      LoadMetadataFile(config.metadata_path);
  return RunAudit(config, trials, metadata, sections);
}

std::string ReportJson(const BiasReport& r) {
  Json out = Json::object();
  out["schema_version"] = kReportSchemaVersion;
  out["config"] = ConfigJson(r.config);

  Json population = Json::object();
  population["n_trials"] = Quantity(static_cast<double>(r.n_trials), "count");
  population["n_unassigned"] =
      Quantity(static_cast<double>(r.n_unassigned), "count");
  Json groups = Json::array();
  for (const auto& [group, size] : r.group_sizes) {
    Json g = Json::object();
    g["group"] = group.Label();
    g["attributes"] = GroupJson(group);
    g["n_target"] = Quantity(static_cast<double>(size.n_target), "count");
    g["n_nontarget"] = Quantity(static_cast<double>(size.n_nontarget), "count");
    groups.push_back(std::move(g));
  }
  population["groups"] = std::move(groups);
  Json dropped = Json::array();
  for (const GroupKey& g : r.dropped_groups) dropped.push_back(g.Label());
  population["dropped_groups"] = std::move(dropped);
  out["population"] = std::move(population);

  if (r.sections.base_metrics && r.eer && r.min_cdet) {
    Json base = Json::array();
    base.push_back(MetricVectorJson(*r.eer));
    base.push_back(MetricVectorJson(*r.min_cdet));
    out["base_metrics"] = std::move(base);
  }

  if (r.sections.base_metrics || r.sections.bias_measures ||
      r.sections.fdr_grid) {
    Json points = Json::array();
    for (const DesignPoint& dp : r.design_points) {
      Json p = Json::object();
      p["design_fpr"] = Quantity(dp.design_fpr, "fraction");
      p["threshold"] = Quantity(dp.pooled.threshold, "score");
      p["pooled_fpr"] = Quantity(dp.pooled.fpr, "fraction");
      p["pooled_fnr"] = Quantity(dp.pooled.fnr, "fraction");
      p["fpr"] = MetricVectorJson(dp.fpr);
      p["fnr"] = MetricVectorJson(dp.fnr);
      points.push_back(std::move(p));
    }
    out["threshold_decomposition"] = std::move(points);
  }

  if (r.sections.bias_measures) {
    Json measures = Json::array();
    for (const BiasVector& v : r.bias_vectors) {
      Json m = Json::object();
      m["measure"] = std::string(BiasMeasureName(v.measure));
      m["metric"] = v.metric_name;
      m["reference"] = v.reference;
      if (v.reference_group) m["reference_group"] = v.reference_group->Label();
      m["reference_value"] = MetricQuantity(v.reference_value, v.metric_name);
      m["smoothed"] = v.smoothed;
      Json groups_out = Json::array();
      for (const auto& [group, value] : v.per_group) {
        Json g = Json::object();
        g["group"] = group.Label();
        g["value"] = Quantity(value, BiasUnit(v));
        groups_out.push_back(std::move(g));
      }
      m["per_group"] = std::move(groups_out);
      measures.push_back(std::move(m));
    }
    out["bias_measures"] = std::move(measures);
  }

  if (r.sections.fdr_grid) {
    Json grid = Json::array();
    for (const FdrResult& f : r.fdr_grid) {
      Json cell = Json::object();
      cell["design_fpr"] = Quantity(f.design_fpr, "fraction");
      cell["alpha"] = Quantity(f.alpha, "weight");
      cell["threshold"] = Quantity(f.threshold, "score");
      cell["max_delta_fpr"] = Quantity(f.max_delta_fpr, "fraction");
      cell["max_delta_fnr"] = Quantity(f.max_delta_fnr, "fraction");
      cell["fdr"] = Quantity(f.fdr, "fraction");
      grid.push_back(std::move(cell));
    }
    out["fdr_grid"] = std::move(grid);
  }

  if (r.sections.nrb_suite) {
    Json suite = Json::array();
    for (const NrbResult& n : r.nrb_suite) {
      Json entry = Json::object();
      entry["metric"] = n.metric_name;
      entry["group_count"] = Quantity(n.group_count, "count");
      entry["nrb"] = Quantity(n.nrb, "nats");
      Json infinite = Json::array();
      for (const GroupKey& g : n.infinite_groups) infinite.push_back(g.Label());
      entry["infinite_groups"] = std::move(infinite);
      entry["smoothed"] = n.smoothed;
      suite.push_back(std::move(entry));
    }
    out["nrb_suite"] = std::move(suite);
  }

  if (r.sections.scenarios) {
    Json scenarios = Json::array();
    for (const DesignPoint& dp : r.design_points) {
      Json s = Json::object();
      s["design_fpr"] = Quantity(dp.design_fpr, "fraction");
      s["attempts_per_hour"] = Quantity(r.config.attack_rate, "attempts_per_hour");
      s["quantile"] = Quantity(r.config.attack_quantile, "probability");
      Json groups_out = Json::array();
      for (const GroupExposure& e : dp.exposure) groups_out.push_back(ExposureJson(e));
      s["groups"] = std::move(groups_out);
      scenarios.push_back(std::move(s));
    }
    out["scenarios"] = std::move(scenarios);
  }

  out["warnings"] = r.warnings;
  return out.dump(2) + "\n";
}

std::string BaseMetricsCsv(const BiasReport& r) {
  CsvWriter csv({"metric", "group", "value", "unit", "display_value",
                 "display_unit"});
  for (const auto* v : {r.eer ? &*r.eer : nullptr,
                        r.min_cdet ? &*r.min_cdet : nullptr}) {
    if (v == nullptr) continue;
    const bool percent = v->metric_name == "eer";
    const std::string unit = MetricUnit(v->metric_name);
    const auto row = [&](const std::string& label, double value) {
      csv.Row({v->metric_name, label, Cell(value), unit,
               Cell(percent ? value * 100.0 : value),
               percent ? "percent" : unit});
    };
    for (const auto& [group, value] : v->per_group) row(group.Label(), value);
    row(kPooledLabel, v->aggregate);
  }
  return csv.str();
}

std::string BiasMeasuresCsv(const BiasReport& r) {
  CsvWriter csv({"measure", "metric", "group", "value", "unit", "reference"});
  for (const BiasVector& v : r.bias_vectors) {
    const std::string reference =
        v.reference_group ? v.reference_group->Label() : v.reference;
    for (const auto& [group, value] : v.per_group) {
      csv.Row({BiasMeasureName(v.measure), v.metric_name, group.Label(),
               Cell(value), BiasUnit(v), reference});
    }
  }
  return csv.str();
}

std::string ThresholdDecompositionCsv(const BiasReport& r) {
  CsvWriter csv({"design_fpr", "threshold", "group", "fpr", "fnr",
                 "fpr_g2min_diff", "fpr_g2avg_log_ratio", "fnr_g2min_diff",
                 "fnr_g2avg_log_ratio"});
  for (const DesignPoint& dp : r.design_points) {
    const std::string design = Cell(dp.design_fpr);
    const std::string threshold = Cell(dp.pooled.threshold);
    const BiasVector* fpr_diff =
        r.FindBias(dp.fpr.metric_name, BiasMeasure::kG2minDiff);
    const BiasVector* fpr_log =
        r.FindBias(dp.fpr.metric_name, BiasMeasure::kG2avgLogRatio);
    const BiasVector* fnr_diff =
        r.FindBias(dp.fnr.metric_name, BiasMeasure::kG2minDiff);
    const BiasVector* fnr_log =
        r.FindBias(dp.fnr.metric_name, BiasMeasure::kG2avgLogRatio);
    for (const auto& [group, fpr] : dp.fpr.per_group) {
      csv.Row({design, threshold, group.Label(), Cell(fpr),
               Cell(dp.fnr.per_group.at(group)), OptionalCell(fpr_diff, group),
               OptionalCell(fpr_log, group), OptionalCell(fnr_diff, group),
               OptionalCell(fnr_log, group)});
    }
    csv.Row({design, threshold, kPooledLabel, Cell(dp.fpr.aggregate),
             Cell(dp.fnr.aggregate), "", "", "", ""});
  }
  return csv.str();
}

std::string FdrGridCsv(const BiasReport& r) {
  CsvWriter csv({"design_fpr", "alpha", "fdr"});
  for (const FdrResult& f : r.fdr_grid) {
    csv.Row({Cell(f.design_fpr), Cell(f.alpha), Cell(f.fdr)});
  }
  return csv.str();
}

std::string NrbSuiteCsv(const BiasReport& r) {
  CsvWriter csv({"metric_name", "nrb"});
  for (const NrbResult& n : r.nrb_suite) csv.Row({n.metric_name, Cell(n.nrb)});
  return csv.str();
}

std::vector<std::filesystem::path> Emit(const BiasReport& report,
                                        const std::filesystem::path& output_dir) {
  std::error_code ec;
  std::filesystem::create_directories(output_dir, ec);
  if (ec) {
    throw Error(ErrorCode::kIo,
                output_dir.string() + ": cannot create directory: " + ec.message());
  }
  // Everything is rendered before the first write.
  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("report.json", ReportJson(report));
  const AuditSections& s = report.sections;
  if (s.base_metrics) {
    files.emplace_back("table_base_metrics.csv", BaseMetricsCsv(report));
  }
  if (s.bias_measures) {
    files.emplace_back("table_bias_measures.csv", BiasMeasuresCsv(report));
  }
  if (s.base_metrics || s.bias_measures) {
    files.emplace_back("table_threshold_decomposition.csv",
                       ThresholdDecompositionCsv(report));
  }
  if (report.config.emit_figures && s.fdr_grid) {
    files.emplace_back("fig_fdr_grid.csv", FdrGridCsv(report));
  }
  if (report.config.emit_figures && s.nrb_suite) {
    files.emplace_back("fig_nrb_suite.csv", NrbSuiteCsv(report));
  }
  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : files) {
    const std::filesystem::path path = output_dir / name;
    WriteFile(path, content);
    written.push_back(path);
  }
  return written;
}

int ExitCodeFor(ErrorCode code) {
  switch (code) {
    case ErrorCode::kConfig:
      return 1;
    case ErrorCode::kDegenerateGroup:
      return 3;
    default:
      return 2;
  }
}

}  // namespace svbias

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

// svbias: audits verification score files for group bias.
//
//   svbias audit    --scores s.csv --metadata m.csv --groups gender,nationality
//   svbias metrics  ...           base metrics and threshold decomposition
//   svbias fdr      ...           FDR grid only
//   svbias nrb      ...           NRB suite only
//   svbias scenario --fpr 0.005   repeated-attack exposure
//   svbias synth    --demo --out data/
//
// Exit codes: 0 success, 1 usage/config error, 2 data error, 3 degenerate
// group under --strict.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "svbias/attack_scenario.h"
#include "svbias/audit_config.h"
#include "svbias/error.h"
#include "svbias/report.h"
#include "svbias/synth_gen.h"
#include "svbias/text.h"
#include "svbias/trial_store.h"

namespace {

using svbias::AuditConfig;
using svbias::AuditSections;
using svbias::BiasReport;

// Command-line overrides for the config keys. Only options actually given
// are applied, after the config file.
class AuditOptions {
 public:
  explicit AuditOptions(CLI::App* app) {
    app->add_option("--config", config_path_, "Flat key=value config file");
    Add(app, "scores", "Scores CSV (enroll_id,test_id,label,score)");
    Add(app, "metadata", "Metadata CSV (speaker_id,<attributes>...)");
    Add(app, "groups", "Comma-separated attributes forming groups");
    Add(app, "policy", "both_match | enrollment_only");
    Add(app, "design-fprs", "Comma-separated design FPRs");
    Add(app, "alphas", "Comma-separated FDR weights");
    Add(app, "dcf-pt", "Target prior of the detection cost");
    Add(app, "dcf-cmiss", "Miss cost");
    Add(app, "dcf-cfa", "False-alarm cost");
    Add(app, "dcf-normalize", "Normalize the detection cost (true/false)");
    Add(app, "zero-policy", "error | infinity | smooth");
    Add(app, "average-mode", "pooled | group_mean");
    Add(app, "out", "Output directory");
    Add(app, "attack-rate", "Attack attempts per hour");
    Add(app, "attack-quantile", "Success probability for time-to-success");
    Add(app, "max-thresholds", "Subsample the threshold grid (0 = exact)");
    app->add_option("--preset", preset_, "Pin grids and defaults (paper)");
    app->add_flag("--strict", strict_, "Fail on degenerate groups");
    app->add_flag("--no-figures", no_figures_, "Skip fig_*.csv outputs");
  }

  AuditConfig Build() const {
    AuditConfig config;
    if (!config_path_.empty()) svbias::ApplyConfigFile(config, config_path_);
    for (const auto& [key, slot] : values_) {
      if (slot.first->count() > 0) {
        svbias::SetConfigValue(config, key, *slot.second);
      }
    }
    if (strict_) config.strict = true;
    if (no_figures_) config.emit_figures = false;
    if (!preset_.empty()) svbias::ApplyPreset(config, preset_);
    return config;
  }

 private:
  void Add(CLI::App* app, const std::string& key, const std::string& help) {
    auto value = std::make_unique<std::string>();
    CLI::Option* opt = app->add_option("--" + key, *value, help);
    values_.emplace_back(key, std::make_pair(opt, value.get()));
    storage_.push_back(std::move(value));
  }

  std::string config_path_;
  std::string preset_;
  bool strict_ = false;
  bool no_figures_ = false;
  std::vector<std::pair<std::string, std::pair<CLI::Option*, std::string*>>>
      values_;
  std::vector<std::unique_ptr<std::string>> storage_;
};

std::string Fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, value);
  return buf;
}

void PrintBaseMetrics(const BiasReport& r) {
  if (!r.eer || !r.min_cdet) return;
  std::cout << "group\tEER(%)\tminCDet\n";
  for (const auto& [group, eer] : r.eer->per_group) {
    std::cout << group.Label() << '\t' << Fixed(eer * 100.0, 3) << '\t'
              << Fixed(r.min_cdet->per_group.at(group), 4) << '\n';
  }
  std::cout << "(pooled)\t" << Fixed(r.eer->aggregate * 100.0, 3) << '\t'
            << Fixed(r.min_cdet->aggregate, 4) << '\n';
}

void PrintSummary(const BiasReport& r) {
  std::cout << "trials: " << r.n_trials << " (unassigned " << r.n_unassigned
            << "), groups: " << r.group_sizes.size() << '\n';
  if (r.sections.base_metrics) PrintBaseMetrics(r);
  if (!r.fdr_grid.empty()) {
    std::cout << "FDR (design_fpr, alpha -> fdr):\n";
    for (const auto& f : r.fdr_grid) {
      std::cout << "  " << svbias::FormatDouble(f.design_fpr) << ", "
                << svbias::FormatDouble(f.alpha) << " -> " << Fixed(f.fdr, 4)
                << '\n';
    }
  }
  if (!r.nrb_suite.empty()) {
    std::cout << "NRB:\n";
    for (const auto& n : r.nrb_suite) {
      std::cout << "  " << n.metric_name << " = " << Fixed(n.nrb, 4) << '\n';
    }
  }
  for (const std::string& w : r.warnings) std::cerr << "warning: " << w << '\n';
}

void PrintExposure(const BiasReport& r) {
  for (const auto& dp : r.design_points) {
    std::cout << "design FPR " << svbias::FormatDouble(dp.design_fpr)
              << " (threshold " << svbias::FormatDouble(dp.pooled.threshold)
              << ", " << svbias::FormatDouble(r.config.attack_rate)
              << " attempts/h)\n";
    std::cout << "  group\tfpr\texpected_h\th_to_q" << '\n';
    for (const auto& e : dp.exposure) {
      std::cout << "  " << e.group.Label() << '\t' << Fixed(e.fpr, 5) << '\t'
                << (e.finite ? Fixed(e.expected_hours, 2) : "inf") << '\t'
                << (e.finite ? Fixed(e.hours_to_quantile, 2) : "inf") << '\n';
    }
  }
}

int RunPipeline(const AuditOptions& options, const AuditSections& sections,
                bool print_exposure) {
  const AuditConfig config = options.Build();
  const BiasReport report = svbias::RunAudit(config, sections);
  const auto written = svbias::Emit(report, config.output_dir);
  if (print_exposure) {
    PrintExposure(report);
  } else {
    PrintSummary(report);
  }
  for (const auto& path : written) std::cout << "wrote " << path.string() << '\n';
  return 0;
}

int RunSingleScenario(double fpr, double rate, long long attempts,
                      double quantile) {
  const svbias::AttackScenario s{fpr, rate};
  const auto expected = svbias::ExpectedTimeToSuccess(s);
  std::cout << "fpr " << svbias::FormatDouble(fpr) << ", "
            << svbias::FormatDouble(rate) << " attempts/hour\n";
  std::cout << "expected attempts (1/fpr): " << Fixed(expected.attempts, 2)
            << "\nexpected hours: " << Fixed(expected.hours, 2) << '\n';
  const auto n = svbias::AttemptsForProbability(s, quantile);
  std::cout << "attempts for P(success) >= " << svbias::FormatDouble(quantile)
            << ": " << n << " (" << Fixed(static_cast<double>(n) / rate, 2)
            << " h)\n";
  if (attempts >= 0) {
    std::cout << "P(success within " << attempts
              << " attempts): " << Fixed(svbias::SuccessProbability(s, attempts), 4)
              << '\n';
  }
  return 0;
}

svbias::SynthSpec DemoSpec() {
  // Four gender x nationality groups with different separations and
  // impostor score offsets.
  const std::vector<std::string> names = {"gender", "nationality"};
  svbias::SynthSpec spec;
  const auto add = [&](const char* g, const char* n, double mu_t, double mu_n) {
    svbias::GroupScoreModel m;
    m.group = svbias::GroupKey(names, {g, n});
    m.mu_target = mu_t;
    m.mu_nontarget = mu_n;
    m.sigma = 1.0;
    m.n_target = 5000;
    m.n_nontarget = 20000;
    spec.models.push_back(m);
  };
  add("female", "DE", 3.0, 0.4);
  add("female", "US", 3.6, 0.0);
  add("male", "IN", 3.2, 0.6);
  add("male", "US", 3.8, 0.0);
  return spec;
}

int RunSynth(const std::vector<std::string>& models,
             const std::string& attributes, unsigned long long seed, bool demo,
             const std::string& out_dir) {
  svbias::SynthSpec spec;
  if (demo) {
    spec = DemoSpec();
  } else {
    std::vector<std::string> names;
    for (const auto& n : svbias::SplitFields(attributes, ',')) {
      names.push_back(svbias::ToLower(svbias::TrimWhitespace(n)));
    }
    for (const std::string& m : models) {
      spec.models.push_back(svbias::ParseGroupScoreModel(names, m));
    }
  }
  spec.seed = seed;
  const svbias::SynthData data = svbias::Generate(spec);
  std::filesystem::create_directories(out_dir);
  const auto scores = std::filesystem::path(out_dir) / "scores.csv";
  const auto metadata = std::filesystem::path(out_dir) / "metadata.csv";
  {
    std::ofstream out(scores, std::ios::binary);
    if (!out) throw svbias::Error(svbias::ErrorCode::kIo, scores.string() + ": cannot write");
    svbias::WriteTrials(out, data.trials);
  }
  {
    std::ofstream out(metadata, std::ios::binary);
    if (!out) throw svbias::Error(svbias::ErrorCode::kIo, metadata.string() + ": cannot write");
    svbias::WriteMetadata(out, data.metadata, data.attribute_names);
  }
  std::cout << "wrote " << data.trials.size() << " trials to " << scores.string()
            << "\nwrote " << data.metadata.size() << " speakers to "
            << metadata.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"svbias: group bias audits for verification scores"};
  app.require_subcommand(1);

  auto* audit = app.add_subcommand("audit", "Full audit: tables, FDR grid, NRB suite, scenarios");
  AuditOptions audit_options(audit);
  auto* metrics = app.add_subcommand("metrics", "Disaggregated base metrics only");
  AuditOptions metrics_options(metrics);
  auto* fdr = app.add_subcommand("fdr", "FDR grid only");
  AuditOptions fdr_options(fdr);
  auto* nrb = app.add_subcommand("nrb", "NRB suite only");
  AuditOptions nrb_options(nrb);

  auto* scenario = app.add_subcommand("scenario", "Repeated-attack exposure");
  AuditOptions scenario_options(scenario);
  double scenario_fpr = -1.0;
  double scenario_rate = 60.0;
  long long scenario_attempts = -1;
  double scenario_quantile = 0.5;
  scenario->add_option("--fpr", scenario_fpr,
                       "Evaluate one FPR instead of the groups of a score file");
  scenario->add_option("--rate", scenario_rate, "Attempts per hour (with --fpr)");
  scenario->add_option("--attempts", scenario_attempts,
                       "Also report P(success) after this many attempts");
  scenario->add_option("--quantile", scenario_quantile,
                       "Success probability for the attempts count (with --fpr)");

  auto* synth = app.add_subcommand("synth", "Write a synthetic Gaussian score set");
  std::vector<std::string> synth_models;
  std::string synth_attributes = "gender,nationality";
  unsigned long long synth_seed = 0;
  bool synth_demo = false;
  std::string synth_out = ".";
  synth->add_option("--model", synth_models,
                    "VALUES:MU_T:MU_N:SIGMA:N_T:N_N, e.g. female/DE:2:0:1:1000:4000");
  synth->add_option("--attributes", synth_attributes, "Attribute names of --model values");
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_flag("--demo", synth_demo, "Use the built-in four-group demo model");
  synth->add_option("--out", synth_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (audit->parsed()) return RunPipeline(audit_options, AuditSections::All(), false);
    if (metrics->parsed()) {
      return RunPipeline(metrics_options, AuditSections::MetricsOnly(), false);
    }
    if (fdr->parsed()) return RunPipeline(fdr_options, AuditSections::FdrOnly(), false);
    if (nrb->parsed()) return RunPipeline(nrb_options, AuditSections::NrbOnly(), false);
    if (scenario->parsed()) {
      if (scenario_fpr >= 0.0) {
        return RunSingleScenario(scenario_fpr, scenario_rate, scenario_attempts,
                                 scenario_quantile);
      }
      return RunPipeline(scenario_options, AuditSections::ScenariosOnly(), true);
    }
    if (synth->parsed()) {
      if (!synth_demo && synth_models.empty()) {
        std::cerr << "error: synth needs --model or --demo\n";
        return 1;
      }
      return RunSynth(synth_models, synth_attributes, synth_seed, synth_demo,
                      synth_out);
    }
  } catch (const svbias::Error& e) {
    std::cerr << "error [" << svbias::ErrorCodeName(e.code()) << "]: " << e.what()
              << '\n';
    return svbias::ExitCodeFor(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error [Io]: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

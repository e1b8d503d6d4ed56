// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "ebm/experiments/experiment.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>

#include "internal.hpp"

namespace ebm {

SummaryRow SummaryRow::param(std::string name, double value) {
  return {SummaryKind::kParam, std::move(name), value, std::nullopt, std::nullopt};
}
SummaryRow SummaryRow::record(std::string name, double value) {
  return {SummaryKind::kRecord, std::move(name), value, std::nullopt, std::nullopt};
}
SummaryRow SummaryRow::within(std::string name, double value, double target, double tolerance) {
  return {SummaryKind::kWithin, std::move(name), value, target, tolerance};
}
SummaryRow SummaryRow::at_most(std::string name, double value, double bound) {
  return {SummaryKind::kAtMost, std::move(name), value, bound, std::nullopt};
}
SummaryRow SummaryRow::above(std::string name, double value, double bound) {
  return {SummaryKind::kAbove, std::move(name), value, bound, std::nullopt};
}
SummaryRow SummaryRow::flag(std::string name, bool holds) {
  return {SummaryKind::kFlag, std::move(name), holds ? 1.0 : 0.0, 1.0, std::nullopt};
}

std::optional<bool> SummaryRow::pass() const {
  switch (kind) {
    case SummaryKind::kParam:
    case SummaryKind::kRecord:
      return std::nullopt;
    case SummaryKind::kWithin:
      return std::abs(value - *target) < *tolerance;
    case SummaryKind::kAtMost:
      return value <= *target;
    case SummaryKind::kAbove:
      return value > *target;
    case SummaryKind::kFlag:
      return value == 1.0;
  }
  return false;
}

const char* summary_kind_name(SummaryKind kind) {
  switch (kind) {
    case SummaryKind::kParam: return "param";
    case SummaryKind::kRecord: return "record";
    case SummaryKind::kWithin: return "within";
    case SummaryKind::kAtMost: return "at_most";
    case SummaryKind::kAbove: return "above";
    case SummaryKind::kFlag: return "flag";
  }
  return "?";
}

CsvTable ExperimentResult::summary_table() const {
  CsvTable table({"kind", "name", "value", "target", "tolerance", "pass"});
  for (const auto& row : summary) {
    const auto pass = row.pass();
    table.add_row({summary_kind_name(row.kind), row.name, format_number(row.value),
                   row.target ? format_number(*row.target) : "", row.tolerance ? format_number(*row.tolerance) : "",
                   pass ? format_bool(*pass) : ""});
  }
  return table;
}

bool ExperimentResult::passed() const {
  for (const auto& row : summary) {
    if (row.pass() == false) return false;
  }
  return true;
}

const SummaryRow* ExperimentResult::find(const std::string& name) const {
  for (const auto& row : summary) {
    if (row.name == name) return &row;
  }
  return nullptr;
}

namespace {

struct Entry {
  const char* name;
  std::function<void(const ExperimentConfig&)> validate;
  std::function<ExperimentResult(const ExperimentConfig&)> run;
};

void check_family_spec(const ExperimentConfig& cfg) { family_from_spec(cfg.get_string("family")); }

const std::vector<Entry>& registry() {
  using namespace detail;
  static const std::vector<Entry> entries = {
      {"gaussian_recovery", validate_gaussian_recovery, run_gaussian_recovery},
      {"mode_weight", validate_mode_weight, run_mode_weight},
      {"cd_sm_connection", check_family_spec, run_cd_sm_connection},
      {"de_bruijn", check_family_spec, run_de_bruijn},
      {"ssm_nce_equiv", check_family_spec, run_ssm_nce_equiv},
      {"nce_partition", validate_nce_partition, run_nce_partition},
      {"dsm_control_variate", check_family_spec, run_dsm_control_variate},
      {"ssm_unbiased", validate_ssm_unbiased, run_ssm_unbiased},
      {"ksd_test", check_family_spec, run_ksd_test},
      {"sampler_moments", check_family_spec, run_sampler_moments},
  };
  return entries;
}

const Entry& entry_for(const std::string& name) {
  for (const auto& e : registry()) {
    if (name == e.name) return e;
  }
  std::string all;
  for (const auto& e : registry()) all += (all.empty() ? "" : ", ") + std::string(e.name);
  throw ConfigError("unknown experiment '" + name + "'; available: " + all);
}

}  // namespace

void validate_experiment(const ExperimentConfig& cfg) {
  entry_for(cfg.experiment()).validate(cfg);
}

ExperimentResult evaluate_experiment(const ExperimentConfig& cfg) {
  validate_experiment(cfg);
  return entry_for(cfg.experiment()).run(cfg);
}

std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg) {
  const std::string out = cfg.get_string("out");
  if (!out.empty()) return out;
  const std::string leaf = cfg.experiment() + "_seed" + std::to_string(cfg.seed());
  if (const char* root = std::getenv("EBM_OUT"); root && *root) return std::filesystem::path(root) / leaf;
  return std::filesystem::path("runs") / leaf;
}

RunArtifacts run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult result = evaluate_experiment(cfg);
  const auto dir = resolve_output_dir(cfg);
  std::filesystem::create_directories(dir);
  RunArtifacts out{dir / "run.csv", dir / "summary.csv", std::move(result)};
  out.result.run.write(out.run_csv);
  out.result.summary_table().write(out.summary_csv);
  for (const auto& [file, table] : out.result.extras) table.write(dir / file);
  return out;
}

}  // namespace ebm

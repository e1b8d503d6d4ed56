// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_EXPERIMENTS_EXPERIMENT_HPP_
#define EBM_EXPERIMENTS_EXPERIMENT_HPP_

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ebm/experiments/config.hpp"
#include "ebm/experiments/csv.hpp"

namespace ebm {

/// How a summary row is judged.
///   kParam   final parameter value, no check
///   kRecord  measured value kept for comparison, no check
///   kWithin  pass iff |value - target| < tolerance
///   kAtMost  pass iff value <= target
///   kAbove   pass iff value > target
///   kFlag    pass iff value == 1 (boolean property, e.g. monotonicity)
enum class SummaryKind { kParam, kRecord, kWithin, kAtMost, kAbove, kFlag };

struct SummaryRow {
  SummaryKind kind = SummaryKind::kRecord;
  std::string name;
  double value = 0.0;
  std::optional<double> target;
  std::optional<double> tolerance;

  static SummaryRow param(std::string name, double value);
  static SummaryRow record(std::string name, double value);
  static SummaryRow within(std::string name, double value, double target, double tolerance);
  static SummaryRow at_most(std::string name, double value, double bound);
  static SummaryRow above(std::string name, double value, double bound);
  static SummaryRow flag(std::string name, bool holds);

  bool is_check() const { return kind != SummaryKind::kParam && kind != SummaryKind::kRecord; }
  /// Empty for parameter and record rows.
  std::optional<bool> pass() const;
};

const char* summary_kind_name(SummaryKind kind);

struct ExperimentResult {
  /// Per-step training log, or the experiment's own table for evaluation runs.
  CsvTable run;
  std::vector<SummaryRow> summary;
  /// Additional tables written next to run.csv, by file name.
  std::vector<std::pair<std::string, CsvTable>> extras;

  /// kind,name,value,target,tolerance,pass
  CsvTable summary_table() const;
  /// True when every check row passes.
  bool passed() const;
  const SummaryRow* find(const std::string& name) const;
};

/// Validates experiment-specific requirements (family kind, dimensions,
/// parameter limits). Throws ConfigError; does no numerical work.
void validate_experiment(const ExperimentConfig& cfg);

/// Runs the configured experiment without touching the filesystem.
ExperimentResult evaluate_experiment(const ExperimentConfig& cfg);

/// `out` from the config when set, else $EBM_OUT/<experiment>_seed<seed>,
/// else runs/<experiment>_seed<seed>.
std::filesystem::path resolve_output_dir(const ExperimentConfig& cfg);

struct RunArtifacts {
  std::filesystem::path run_csv;
  std::filesystem::path summary_csv;
  ExperimentResult result;
};

/// evaluate_experiment, then writes run.csv and summary.csv under
/// resolve_output_dir(cfg).
RunArtifacts run_experiment(const ExperimentConfig& cfg);

}  // namespace ebm

#endif  // EBM_EXPERIMENTS_EXPERIMENT_HPP_

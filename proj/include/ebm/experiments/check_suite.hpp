// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_EXPERIMENTS_CHECK_SUITE_HPP_
#define EBM_EXPERIMENTS_CHECK_SUITE_HPP_

#include <string>
#include <vector>

#include "ebm/experiments/csv.hpp"

namespace ebm {

struct CheckOptions {
  /// Runs only properties whose name or module contains this text.
  std::string filter;
  /// Debug: score matching with the Hessian term's sign flipped. The
  /// Fisher-oracle gradient check is expected to fail.
  bool flip_sm_sign = false;
};

struct CheckRow {
  std::string property;
  std::string module;
  double measured = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

/// Every property the suite checks, in report order.
const std::vector<std::string>& check_property_names();

/// Runs the invariant suites; failures are rows, not exceptions.
std::vector<CheckRow> run_check_suite(const CheckOptions& options = {});

/// property,module,measured,tolerance,pass
CsvTable check_report(const std::vector<CheckRow>& rows);

}  // namespace ebm

#endif  // EBM_EXPERIMENTS_CHECK_SUITE_HPP_

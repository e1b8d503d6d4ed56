// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_ESTIMATORS_LOSS_REPORT_HPP_
#define EBM_ESTIMATORS_LOSS_REPORT_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ebm/numerics/real_vector.hpp"

namespace ebm {

using Batch = std::vector<RealVector>;

/// Result of every estimator. All losses are minimized.
struct LossReport {
  double loss = 0.0;
  RealVector grad_theta{0.0};
  /// Named diagnostics, e.g. "loss_var" (per-sample variance of the loss).
  std::map<std::string, double> aux;
  /// Per-coordinate standard error of grad_theta when it is a sample mean of
  /// analytic per-sample gradients; empty on the finite-difference path.
  std::optional<RealVector> grad_theta_se;
};

/// Throws InvalidArgument for an empty batch or points of the wrong dim.
void check_batch(const Batch& batch, std::size_t dim, const char* what);

}  // namespace ebm

#endif  // EBM_ESTIMATORS_LOSS_REPORT_HPP_

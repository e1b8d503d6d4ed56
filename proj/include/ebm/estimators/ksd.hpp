// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_ESTIMATORS_KSD_HPP_
#define EBM_ESTIMATORS_KSD_HPP_

#include "ebm/energy/family.hpp"
#include "ebm/estimators/loss_report.hpp"
#include "ebm/numerics/param_vector.hpp"

namespace ebm {

struct KsdResult {
  double value = 0.0;
  /// Standard error of the U-statistic from its Hoeffding decomposition.
  double se = 0.0;
};

/// Kernelized Stein discrepancy U-statistic with the RBF kernel
/// k(x, y) = exp(-|x - y|^2 / (2 h^2)) and model score s = -grad_x E:
///   u(x, y) = k [s_x.s_y + (s_x - s_y).(x - y) / h^2 + d / h^2 - |x - y|^2 / h^4]
/// averaged over ordered pairs i != j. Needs at least two points.
KsdResult ksd(const EnergyFamily& family, const ParamVector& theta, const Batch& batch,
              double bandwidth);

}  // namespace ebm

#endif  // EBM_ESTIMATORS_KSD_HPP_

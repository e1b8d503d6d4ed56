// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_ESTIMATORS_NCE_HPP_
#define EBM_ESTIMATORS_NCE_HPP_

#include "ebm/energy/family.hpp"
#include "ebm/energy/gaussian_oracle.hpp"
#include "ebm/estimators/loss_report.hpp"
#include "ebm/numerics/param_vector.hpp"

namespace ebm {

inline constexpr const char* kLogZBlock = "log_z";

struct NceConfig {
  /// nu = p(y = 1) / p(y = 0). Zero means N / M from the batch sizes.
  double nu = 0.0;
  GaussianDensity noise = GaussianDensity::standard(1);
  /// When false, c is fixed at 0 and theta has no "log_z" block.
  bool learn_log_z = true;
};

/// theta followed by a one-entry "log_z" block holding c.
ParamVector append_log_z(const ParamVector& theta, double c);
/// theta without its trailing "log_z" block.
ParamVector strip_log_z(const ParamVector& theta_with_logz);

/// Binary cross-entropy of the data-vs-noise classifier with
///   logit(y = 1 | x) = log nu - E(x) - c - log p_n(x),
/// averaged over all N + M points. Gradient is exact; it covers the "log_z"
/// entry when learn_log_z is set. Throws NumericError naming the point when
/// the noise log-density is not finite there.
LossReport nce_loss(const EnergyFamily& family, const ParamVector& theta_with_logz,
                    const Batch& data, const Batch& noise, const NceConfig& cfg);

/// Mean over the batch of softplus(E(x) - E(x - v)) + softplus(E(x) - E(x + v)).
/// Throws InvalidArgument when v = 0.
LossReport shifted_nce_loss(const EnergyFamily& family, const ParamVector& theta,
                            const Batch& batch, const RealVector& v);

}  // namespace ebm

#endif  // EBM_ESTIMATORS_NCE_HPP_

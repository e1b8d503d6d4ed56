// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "ebm/estimators/fd_gradient.hpp"

#include <cmath>
#include <string>

#include "ebm/estimators/loss_report.hpp"
#include "ebm/numerics/errors.hpp"

namespace ebm {

void check_batch(const Batch& batch, std::size_t dim, const char* what) {
  if (batch.empty()) throw InvalidArgument(std::string(what) + ": empty batch");
  for (const auto& x : batch) {
    if (x.dim() != dim) {
      throw InvalidArgument(std::string(what) + ": batch point has dim " + std::to_string(x.dim()) +
                            ", expected " + std::to_string(dim));
    }
  }
}

RealVector estimator_grad_theta(const EnergyFamily& family, const ParamVector& theta,
                                const LossClosure& loss, const RngStream& rng, double h) {
  family.check_params(theta);
  if (family.param_count() > kMaxFdParams) {
    throw InvalidArgument("estimator_grad_theta: " + family.name() + " has " +
                          std::to_string(family.param_count()) + " parameters, over the limit of " +
                          std::to_string(kMaxFdParams) + "; use the analytic gradient path");
  }
  if (!(h > 0.0)) throw InvalidArgument("estimator_grad_theta: step must be positive");
  RealVector grad(theta.size(), 0.0);
  ParamVector probe = theta;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    const double step = fd_step(h, theta[i]);
    probe[i] = theta[i] + step;
    RngStream plus_rng = rng;
    const double plus = loss(probe, plus_rng);
    probe[i] = theta[i] - step;
    RngStream minus_rng = rng;
    const double minus = loss(probe, minus_rng);
    probe[i] = theta[i];
    if (!std::isfinite(plus) || !std::isfinite(minus)) {
      throw NumericError("estimator_grad_theta: non-finite loss at coordinate " + std::to_string(i), i);
    }
    grad[i] = (plus - minus) / (2.0 * step);
  }
  return grad;
}

}  // namespace ebm

// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "ebm/numerics/optimizer.hpp"

#include <cmath>

#include "ebm/numerics/errors.hpp"

namespace ebm {

void AdamConfig::validate() const {
  if (!(learning_rate > 0.0)) throw InvalidArgument("optimizer: learning_rate must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0)) throw InvalidArgument("optimizer: beta1 must be in [0, 1)");
  if (!(beta2 >= 0.0 && beta2 < 1.0)) throw InvalidArgument("optimizer: beta2 must be in [0, 1)");
  if (!(epsilon > 0.0)) throw InvalidArgument("optimizer: epsilon must be > 0");
}

OptimizerState OptimizerState::init(std::size_t dim, const AdamConfig& config) {
  config.validate();
  return OptimizerState{RealVector(dim, 0.0), RealVector(dim, 0.0), 0, config};
}

std::pair<OptimizerState, ParamVector> optimizer_step(const OptimizerState& state,
                                                      const ParamVector& params,
                                                      const RealVector& gradient) {
  const std::size_t n = params.size();
  if (gradient.dim() != n || state.first_moment.dim() != n || state.second_moment.dim() != n) {
    throw InvalidArgument("optimizer_step: gradient/state/params dimension mismatch");
  }
  const AdamConfig& c = state.config;
  OptimizerState next = state;
  next.step_count = state.step_count + 1;
  const double t = static_cast<double>(next.step_count);
  const double bias1 = 1.0 - std::pow(c.beta1, t);
  const double bias2 = 1.0 - std::pow(c.beta2, t);

  RealVector values = params.values();
  for (std::size_t i = 0; i < n; ++i) {
    const double g = gradient[i];
    next.first_moment[i] = c.beta1 * state.first_moment[i] + (1.0 - c.beta1) * g;
    next.second_moment[i] = c.beta2 * state.second_moment[i] + (1.0 - c.beta2) * g * g;
    const double m_hat = next.first_moment[i] / bias1;
    const double v_hat = next.second_moment[i] / bias2;
    values[i] -= c.learning_rate * m_hat / (std::sqrt(v_hat) + c.epsilon);
  }
  return {std::move(next), params.with_values(std::move(values))};
}

}  // namespace ebm

// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_NUMERICS_OPTIMIZER_HPP_
#define EBM_NUMERICS_OPTIMIZER_HPP_

#include <cstdint>
#include <utility>

#include "ebm/numerics/param_vector.hpp"
#include "ebm/numerics/real_vector.hpp"

namespace ebm {

struct AdamConfig {
  double learning_rate = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;

  void validate() const;
  friend bool operator==(const AdamConfig&, const AdamConfig&) = default;
};

/// Adam moments. Every estimator reports a loss to minimise, so updates move
/// against the gradient.
struct OptimizerState {
  RealVector first_moment;
  RealVector second_moment;
  std::uint64_t step_count = 0;
  AdamConfig config;

  static OptimizerState init(std::size_t dim, const AdamConfig& config = {});

  friend bool operator==(const OptimizerState&, const OptimizerState&) = default;
};

/// One bias-corrected Adam update. Throws InvalidArgument on dim mismatch.
std::pair<OptimizerState, ParamVector> optimizer_step(const OptimizerState& state,
                                                      const ParamVector& params,
                                                      const RealVector& gradient);

}  // namespace ebm

#endif  // EBM_NUMERICS_OPTIMIZER_HPP_

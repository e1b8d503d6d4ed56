// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_ESTIMATORS_FD_GRADIENT_HPP_
#define EBM_ESTIMATORS_FD_GRADIENT_HPP_

#include <cstddef>
#include <functional>

#include "ebm/energy/family.hpp"
#include "ebm/numerics/finite_diff.hpp"
#include "ebm/numerics/param_vector.hpp"
#include "ebm/numerics/rng.hpp"

namespace ebm {

inline constexpr std::size_t kMaxFdParams = 64;

/// A loss evaluated at theta that draws its noise from the given stream.
using LossClosure = std::function<double(const ParamVector&, RngStream&)>;

/// Central differences over theta with common random numbers: every
/// evaluation receives a copy of `rng` in its current state, so both sides of
/// each difference see identical noise. `rng` itself is not advanced.
/// Throws InvalidArgument when the family has more than kMaxFdParams
/// parameters; use an analytic gradient there.
RealVector estimator_grad_theta(const EnergyFamily& family, const ParamVector& theta,
                                const LossClosure& loss, const RngStream& rng,
                                double h = kDefaultFdStep);

}  // namespace ebm

#endif  // EBM_ESTIMATORS_FD_GRADIENT_HPP_

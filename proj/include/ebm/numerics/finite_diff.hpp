// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_NUMERICS_FINITE_DIFF_HPP_
#define EBM_NUMERICS_FINITE_DIFF_HPP_

#include <cmath>
#include <cstddef>
#include <string>

#include "ebm/numerics/errors.hpp"
#include "ebm/numerics/real_vector.hpp"

namespace ebm {

/// Default relative step for central differences at 64-bit precision.
inline constexpr double kDefaultFdStep = 1e-5;

/// Step actually used for coordinate value `xi`: h * (1 + |xi|).
inline double fd_step(double h, double xi) { return h * (1.0 + std::abs(xi)); }

/// Central-difference gradient of a scalar function:
///   g_i = (f(x + s_i e_i) - f(x - s_i e_i)) / (2 s_i),  s_i = h (1 + |x_i|).
/// Throws InvalidArgument for h <= 0 and NumericError naming the coordinate
/// when an evaluation is not finite.
template <typename F>
RealVector finite_diff_gradient(F&& f, const RealVector& x, double h = kDefaultFdStep) {
  if (!(h > 0.0)) throw InvalidArgument("finite_diff_gradient: step must be positive");
  RealVector grad(x.dim(), 0.0);
  RealVector probe = x;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double step = fd_step(h, x[i]);
    probe[i] = x[i] + step;
    const double plus = f(static_cast<const RealVector&>(probe));
    probe[i] = x[i] - step;
    const double minus = f(static_cast<const RealVector&>(probe));
    probe[i] = x[i];
    if (!std::isfinite(plus) || !std::isfinite(minus)) {
      throw NumericError("finite_diff_gradient: non-finite evaluation at coordinate " +
                             std::to_string(i),
                         i);
    }
    grad[i] = (plus - minus) / (2.0 * step);
  }
  return grad;
}

}  // namespace ebm

#endif  // EBM_NUMERICS_FINITE_DIFF_HPP_

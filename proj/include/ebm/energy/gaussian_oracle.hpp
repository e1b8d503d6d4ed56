// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_ENERGY_GAUSSIAN_ORACLE_HPP_
#define EBM_ENERGY_GAUSSIAN_ORACLE_HPP_

#include "ebm/energy/family.hpp"
#include "ebm/numerics/real_vector.hpp"
#include "ebm/numerics/rng.hpp"

namespace ebm {

/// Axis-aligned Gaussian density N(mean, diag(variance)).
struct GaussianDensity {
  RealVector mean;
  RealVector variance;

  /// Throws InvalidArgument unless dims agree and every variance is > 0.
  void validate() const;
  std::size_t dim() const { return mean.dim(); }

  double log_density(const RealVector& x) const;
  RealVector score(const RealVector& x) const;
  RealVector sample(RngStream& rng) const;

  /// Result of adding N(0, t I) noise.
  GaussianDensity smoothed(double t) const;

  static GaussianDensity isotropic(const RealVector& mean, double variance);
  static GaussianDensity standard(std::size_t dim);
};

/// KL(p || q), closed form.
double gaussian_kl(const GaussianDensity& p, const GaussianDensity& q);

/// D_F(p || q) = 1/2 E_p |grad log p - grad log q|^2, closed form per dimension.
double gaussian_fisher_divergence(const GaussianDensity& p, const GaussianDensity& q);

/// Density of a Gaussian(d) family member with diagonal precision. Throws
/// InvalidArgument when theta has non-zero off-diagonal Cholesky entries.
GaussianDensity gaussian_family_density(const EnergyFamily& family, const ParamVector& theta);

/// grad_theta D_F(data || p_theta) for a Gaussian(d) family member with any
/// (full) precision and a diagonal data density. Gradient is over the
/// family's layout (mu, chol_log_diag, chol_offdiag).
RealVector gaussian_family_fisher_gradient(const GaussianDensity& data, const EnergyFamily& family,
                                           const ParamVector& theta);

}  // namespace ebm

#endif  // EBM_ENERGY_GAUSSIAN_ORACLE_HPP_

// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "ebm/energy/gaussian_oracle.hpp"

#include <cmath>
#include <numbers>
#include <variant>

#include "ebm/numerics/errors.hpp"

namespace ebm {

void GaussianDensity::validate() const {
  require_same_dim(mean, variance, "GaussianDensity");
  for (double v : variance) {
    if (!(v > 0.0)) throw InvalidArgument("GaussianDensity: variance must be positive definite");
  }
}

double GaussianDensity::log_density(const RealVector& x) const {
  require_same_dim(mean, x, "GaussianDensity::log_density");
  double acc = 0.0;
  for (std::size_t i = 0; i < x.dim(); ++i) {
    const double r = x[i] - mean[i];
    acc -= 0.5 * (std::log(2.0 * std::numbers::pi * variance[i]) + r * r / variance[i]);
  }
  return acc;
}

RealVector GaussianDensity::score(const RealVector& x) const {
  require_same_dim(mean, x, "GaussianDensity::score");
  RealVector s(x.dim());
  for (std::size_t i = 0; i < x.dim(); ++i) s[i] = -(x[i] - mean[i]) / variance[i];
  return s;
}

RealVector GaussianDensity::sample(RngStream& rng) const {
  RealVector z = gaussian_vector(rng, dim());
  for (std::size_t i = 0; i < dim(); ++i) z[i] = mean[i] + std::sqrt(variance[i]) * z[i];
  return z;
}

GaussianDensity GaussianDensity::smoothed(double t) const {
  if (!(t >= 0.0)) throw InvalidArgument("GaussianDensity::smoothed: t must be >= 0");
  RealVector var = variance;
  for (double& v : var) v += t;
  return {mean, var};
}

GaussianDensity GaussianDensity::isotropic(const RealVector& mean, double variance) {
  GaussianDensity g{mean, RealVector(mean.dim(), variance)};
  g.validate();
  return g;
}

GaussianDensity GaussianDensity::standard(std::size_t dim) {
  return {RealVector(dim, 0.0), RealVector(dim, 1.0)};
}

double gaussian_kl(const GaussianDensity& p, const GaussianDensity& q) {
  p.validate();
  q.validate();
  require_same_dim(p.mean, q.mean, "gaussian_kl");
  double acc = 0.0;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    const double dm = q.mean[i] - p.mean[i];
    acc += p.variance[i] / q.variance[i] + dm * dm / q.variance[i] - 1.0 +
           std::log(q.variance[i] / p.variance[i]);
  }
  return 0.5 * acc;
}

double gaussian_fisher_divergence(const GaussianDensity& p, const GaussianDensity& q) {
  p.validate();
  q.validate();
  require_same_dim(p.mean, q.mean, "gaussian_fisher_divergence");
  // Per dimension the score gap is a x + b with a = 1/vq - 1/vp; its mean
  // under p is (mp - mq)/vq and its variance a^2 vp.
  double acc = 0.0;
  for (std::size_t i = 0; i < p.dim(); ++i) {
    const double a = 1.0 / q.variance[i] - 1.0 / p.variance[i];
    const double shift = (p.mean[i] - q.mean[i]) / q.variance[i];
    acc += shift * shift + a * a * p.variance[i];
  }
  return 0.5 * acc;
}

GaussianDensity gaussian_family_density(const EnergyFamily& family, const ParamVector& theta) {
  const auto p = gaussian_precision(family, theta);
  const std::size_t d = family.dim();
  RealVector mean(d), var(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      if (i != j && p[i * d + j] != 0.0) {
        throw InvalidArgument("gaussian_family_density: precision is not diagonal");
      }
    }
    mean[i] = theta.block("mu")[i];
    var[i] = 1.0 / p[i * d + i];
  }
  return {mean, var};
}

RealVector gaussian_family_fisher_gradient(const GaussianDensity& data, const EnergyFamily& family,
                                           const ParamVector& theta) {
  data.validate();
  if (data.dim() != family.dim()) throw InvalidArgument("gaussian_family_fisher_gradient: dim mismatch");
  const std::size_t d = family.dim();
  const auto p = gaussian_precision(family, theta);
  const auto mu = theta.block("mu");
  const auto log_diag = theta.block("chol_log_diag");

  // D = 1/2 |P delta|^2 + 1/2 tr(A S A), delta = m - mu, A = P - S^-1.
  std::vector<double> delta(d), p_delta(d, 0.0);
  for (std::size_t i = 0; i < d; ++i) delta[i] = data.mean[i] - mu[i];
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) p_delta[i] += p[i * d + j] * delta[j];
  }

  RealVector grad(family.param_count(), 0.0);
  // dD/dmu = -P^2 delta
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) grad[i] -= p[i * d + j] * p_delta[j];
  }

  // G = dD/dP = 1/2 (P delta delta^T + delta delta^T P) + 1/2 (A S + S A)
  std::vector<double> g(d * d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      const double a_ij = p[i * d + j] - (i == j ? 1.0 / data.variance[i] : 0.0);
      g[i * d + j] = 0.5 * (p_delta[i] * delta[j] + delta[i] * p_delta[j]) +
                     0.5 * a_ij * (data.variance[j] + data.variance[i]);
    }
  }
  // dD/dL = 2 G L, restricted to the lower triangle.
  std::vector<double> l(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    l[i * d + i] = std::exp(log_diag[i]);
    for (std::size_t j = 0; j < i; ++j) l[i * d + j] = theta.block("chol_offdiag")[i * (i - 1) / 2 + j];
  }
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double dl = 0.0;
      for (std::size_t k = 0; k < d; ++k) dl += 2.0 * g[i * d + k] * l[k * d + j];
      if (i == j) {
        grad[d + i] = dl * l[i * d + i];
      } else {
        grad[2 * d + i * (i - 1) / 2 + j] = dl;
      }
    }
  }
  return grad;
}

}  // namespace ebm

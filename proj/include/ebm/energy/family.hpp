// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_ENERGY_FAMILY_HPP_
#define EBM_ENERGY_FAMILY_HPP_

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "ebm/numerics/param_vector.hpp"
#include "ebm/numerics/real_vector.hpp"

namespace ebm {

/// E(x) = 1/2 (x - mu)^T P (x - mu), P = L L^T with L lower triangular.
/// Blocks: "mu" (d), "chol_log_diag" (d, log of L's diagonal),
/// "chol_offdiag" (d(d-1)/2, row-major strict lower triangle; absent for d = 1).
/// No additive constant.
struct GaussianEnergy {
  std::size_t dim;
  friend bool operator==(const GaussianEnergy&, const GaussianEnergy&) = default;
};

/// E(x) = -log sum_k softmax(w)_k N(x; mu_k, exp(2 log_sigma_k) I).
/// Blocks: "logits" (K), "means" (K*d, component-major), "log_sigma" (K).
struct MixtureRbfEnergy {
  std::size_t components;
  std::size_t dim;
  friend bool operator==(const MixtureRbfEnergy&, const MixtureRbfEnergy&) = default;
};

/// E(x) = sum_{j<n} a_j x^j + exp(b) x^n for even n >= 2.
/// Blocks: "coef" (a_0..a_{n-1}), "log_lead" (b).
struct Poly1DEnergy {
  unsigned degree;
  friend bool operator==(const Poly1DEnergy&, const Poly1DEnergy&) = default;
};

/// Fully connected softplus network R^d -> R. layer_sizes = {d, h_1, ..., h_m, 1}.
/// Blocks "W<l>" (row-major out x in) and "b<l>" per layer; the last layer is linear.
struct MlpEnergy {
  std::vector<std::size_t> layer_sizes;
  friend bool operator==(const MlpEnergy&, const MlpEnergy&) = default;
};

using EnergyKind = std::variant<GaussianEnergy, MixtureRbfEnergy, Poly1DEnergy, MlpEnergy>;

/// A parametric energy E_theta(x). Parameters live in a ParamVector whose
/// layout is fixed by the family; scale-like quantities are stored as logs, so
/// every real vector of the right size is a valid theta.
class EnergyFamily {
 public:
  static EnergyFamily gaussian(std::size_t dim);
  static EnergyFamily mixture_rbf(std::size_t components, std::size_t dim);
  static EnergyFamily poly1d(unsigned degree);
  static EnergyFamily mlp(std::vector<std::size_t> layer_sizes);

  const EnergyKind& kind() const { return kind_; }
  std::size_t dim() const { return dim_; }
  std::size_t param_count() const { return param_count_; }
  std::string name() const;

  /// Zero-valued parameters in this family's layout.
  ParamVector zero_params() const;

  /// Throws InvalidArgument unless theta has this family's layout.
  void check_params(const ParamVector& theta) const;
  /// Throws InvalidArgument unless theta matches and x.dim() == dim().
  void check_point(const ParamVector& theta, const RealVector& x) const;

  /// True when grad_theta_directional_derivative / curvature are analytic.
  bool has_mixed_derivatives() const;

  friend bool operator==(const EnergyFamily&, const EnergyFamily&) = default;

 private:
  EnergyFamily(EnergyKind kind, std::size_t dim, std::size_t param_count,
               std::vector<ParamBlock> layout);

  EnergyKind kind_;
  std::size_t dim_;
  std::size_t param_count_;
  std::vector<ParamBlock> layout_;
};

/// E_theta(x).
double energy(const EnergyFamily& family, const ParamVector& theta, const RealVector& x);
/// grad_x E_theta(x).
RealVector grad_x_energy(const EnergyFamily& family, const ParamVector& theta, const RealVector& x);
/// grad_x log p_theta(x) = -grad_x E_theta(x).
RealVector score(const EnergyFamily& family, const ParamVector& theta, const RealVector& x);
/// grad_theta E_theta(x), including the chain rule through log-space blocks.
RealVector grad_theta_energy(const EnergyFamily& family, const ParamVector& theta,
                             const RealVector& x);
/// (Hessian_x E_theta(x)) v. For the MLP this is forward-mode tangent
/// propagation through the backward pass.
RealVector hvp_x(const EnergyFamily& family, const ParamVector& theta, const RealVector& x,
                 const RealVector& v);
/// Trace of Hessian_x E_theta(x).
double laplacian_x(const EnergyFamily& family, const ParamVector& theta, const RealVector& x);

/// grad_theta (v^T grad_x E_theta(x)) with v held fixed. Empty when the family
/// has no analytic mixed derivatives.
std::optional<RealVector> grad_theta_directional_derivative(const EnergyFamily& family,
                                                            const ParamVector& theta,
                                                            const RealVector& x,
                                                            const RealVector& v);
/// grad_theta (v^T Hessian_x E_theta(x) v) with v held fixed. Empty when the
/// family has no analytic mixed derivatives.
std::optional<RealVector> grad_theta_directional_curvature(const EnergyFamily& family,
                                                           const ParamVector& theta,
                                                           const RealVector& x,
                                                           const RealVector& v);

// Parameter builders.

/// Gaussian(d) parameters from a mean and the Cholesky factor of the
/// precision given as log-diagonal and strict lower triangle (row-major).
ParamVector gaussian_params(const std::vector<double>& mu, const std::vector<double>& chol_log_diag,
                            const std::vector<double>& chol_offdiag = {});
/// Gaussian(d) with diagonal precision.
ParamVector gaussian_params_diag(const std::vector<double>& mu,
                                 const std::vector<double>& precision_diag);
/// Dense precision matrix P = L L^T (row-major d x d) for a Gaussian(d) theta.
std::vector<double> gaussian_precision(const EnergyFamily& family, const ParamVector& theta);

/// Poly1D parameters from a full coefficient list a_0..a_n; a_n must be > 0.
ParamVector poly1d_params(const std::vector<double>& coefficients);

}  // namespace ebm

#endif  // EBM_ENERGY_FAMILY_HPP_

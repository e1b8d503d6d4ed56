// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_ESTIMATORS_SCORE_MATCHING_HPP_
#define EBM_ESTIMATORS_SCORE_MATCHING_HPP_

#include <cstddef>

#include "ebm/energy/family.hpp"
#include "ebm/estimators/loss_report.hpp"
#include "ebm/numerics/param_vector.hpp"
#include "ebm/numerics/rng.hpp"

namespace ebm {

/// Sign of the second-derivative term in the implicit objectives. Only
/// kMinus is correct; kPlus exists so the check suite can show that the
/// Fisher-oracle test detects the wrong sign.
enum class HessianSign { kMinus, kPlus };

/// Implicit score matching: mean of 1/2 |grad_x E|^2 - laplacian_x E.
/// Equals D_F(data || model) minus a model-independent constant.
LossReport sm_loss(const EnergyFamily& family, const ParamVector& theta, const Batch& batch,
                   HessianSign sign = HessianSign::kMinus);

/// Denoising score matching: per sample 1/2 |z / sigma - grad_x E(x + sigma z)|^2
/// with one fresh z ~ N(0, I) per point drawn from `rng` (d blocks each).
LossReport dsm_loss(const EnergyFamily& family, const ParamVector& theta, const Batch& batch,
                    double sigma, RngStream& rng);

/// c(x, z) = (2 / sigma) z^T s(x) + |z|^2 / sigma^2 - d / sigma^2, which has
/// mean zero over z.
double dsm_control_variate(const RealVector& z, const RealVector& score_at_x, double sigma);

/// DSM with half the control variate subtracted per sample, using the same z
/// as the DSM term. aux: "loss_var" (with), "loss_var_plain" (without),
/// "cv_mean", "cv_se", "plain_loss".
LossReport dsm_cv_loss(const EnergyFamily& family, const ParamVector& theta, const Batch& batch,
                       double sigma, RngStream& rng);

enum class Projection { kGaussian, kRademacher };

struct SliceConfig {
  Projection projection = Projection::kGaussian;
  std::size_t num_slices = 1;
  bool variance_reduced = false;

  void validate() const;
};

/// Sliced score matching. Per sample and slice v:
///   1/2 (v^T grad_x E)^2 - v^T H v   (plain)
///   1/2 |grad_x E|^2     - v^T H v   (variance reduced)
/// One hvp_x call per (sample, slice). Slices for each sample are drawn in
/// order from `rng`. aux: "loss_se", the standard error over slices with the
/// batch held fixed.
LossReport ssm_loss(const EnergyFamily& family, const ParamVector& theta, const Batch& batch,
                    const SliceConfig& cfg, RngStream& rng, HessianSign sign = HessianSign::kMinus);

/// Mean over the batch of 1/2 (v^T grad_x E)^2 - v^T H v for one fixed v.
LossReport ssm_fixed_direction(const EnergyFamily& family, const ParamVector& theta,
                               const Batch& batch, const RealVector& v);

}  // namespace ebm

#endif  // EBM_ESTIMATORS_SCORE_MATCHING_HPP_

// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_ESTIMATORS_CONTRASTIVE_HPP_
#define EBM_ESTIMATORS_CONTRASTIVE_HPP_

#include "ebm/energy/family.hpp"
#include "ebm/estimators/loss_report.hpp"
#include "ebm/numerics/param_vector.hpp"
#include "ebm/numerics/rng.hpp"
#include "ebm/samplers/langevin.hpp"
#include "ebm/samplers/replay_buffer.hpp"

namespace ebm {

enum class ChainInit { kData, kBuffer };

/// mean grad_theta E(data) - mean grad_theta E(samples). The loss field is
/// the energy gap mean E(data) - mean E(samples). grad_theta_se treats the
/// two sets as independent samples.
LossReport contrastive_gradient(const EnergyFamily& family, const ParamVector& theta,
                                const Batch& data, const Batch& samples);

/// CD-K (kData) or persistent CD (kBuffer). One chain per batch point, each on
/// its own stream split from `rng`. With kBuffer, chains start from
/// buffer->init_sample with fresh draws from N(0, 4 I) and their finals are
/// pushed back. The loss is a diagnostic only. aux: "accept_rate" when
/// adjusted.
LossReport cd_gradient(const EnergyFamily& family, const ParamVector& theta, const Batch& batch,
                       const LangevinConfig& sampler, ChainInit init, ReplayBuffer* buffer,
                       RngStream& rng);

}  // namespace ebm

#endif  // EBM_ESTIMATORS_CONTRASTIVE_HPP_

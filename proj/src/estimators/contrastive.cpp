// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "ebm/estimators/contrastive.hpp"

#include <cmath>

#include "accumulate.hpp"
#include "ebm/numerics/errors.hpp"
#include "ebm/numerics/stats.hpp"

namespace ebm {

LossReport contrastive_gradient(const EnergyFamily& family, const ParamVector& theta,
                                const Batch& data, const Batch& samples) {
  family.check_params(theta);
  check_batch(data, family.dim(), "contrastive_gradient (data)");
  check_batch(samples, family.dim(), "contrastive_gradient (samples)");
  detail::VectorStats pos(family.param_count()), neg(family.param_count());
  RunningStats e_pos, e_neg;
  for (const auto& x : data) {
    pos.add(grad_theta_energy(family, theta, x));
    e_pos.add(energy(family, theta, x));
  }
  for (const auto& x : samples) {
    neg.add(grad_theta_energy(family, theta, x));
    e_neg.add(energy(family, theta, x));
  }
  LossReport report;
  report.loss = e_pos.mean() - e_neg.mean();
  report.grad_theta = pos.mean() - neg.mean();
  RealVector se = pos.mean_variance() + neg.mean_variance();
  for (double& s : se) s = std::sqrt(s);
  report.grad_theta_se = std::move(se);
  return report;
}

LossReport cd_gradient(const EnergyFamily& family, const ParamVector& theta, const Batch& batch,
                       const LangevinConfig& sampler, ChainInit init, ReplayBuffer* buffer,
                       RngStream& rng) {
  family.check_params(theta);
  check_batch(batch, family.dim(), "cd_gradient");
  sampler.validate();
  if (init == ChainInit::kBuffer && buffer == nullptr) {
    throw InvalidArgument("cd_gradient: persistent chains need a replay buffer");
  }
  const ScoreFn score_fn = [&](const RealVector& x) { return score(family, theta, x); };
  EnergyFn energy_fn;
  if (sampler.adjust) energy_fn = [&](const RealVector& x) { return energy(family, theta, x); };
  const std::size_t d = family.dim();
  auto fresh = [d](RngStream& r) { return fresh_gaussian(r, d); };

  Batch samples;
  samples.reserve(batch.size());
  std::size_t accepted = 0, proposed = 0;
  for (const auto& x : batch) {
    RngStream chain_rng = rng.split();
    const RealVector x0 = init == ChainInit::kData ? x : buffer->init_sample(chain_rng, fresh);
    auto result = langevin_chain(score_fn, x0, sampler, chain_rng, energy_fn);
    accepted += result.accepted;
    proposed += result.proposed;
    if (init == ChainInit::kBuffer) buffer->push(result.final, chain_rng);
    samples.push_back(std::move(result.final));
  }
  LossReport report = contrastive_gradient(family, theta, batch, samples);
  if (sampler.adjust) {
    report.aux["accept_rate"] = proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 1.0;
  }
  return report;
}

}  // namespace ebm

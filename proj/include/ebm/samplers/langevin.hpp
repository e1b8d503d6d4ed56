// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_SAMPLERS_LANGEVIN_HPP_
#define EBM_SAMPLERS_LANGEVIN_HPP_

#include <cstddef>
#include <functional>
#include <vector>

#include "ebm/numerics/real_vector.hpp"
#include "ebm/numerics/rng.hpp"

namespace ebm {

using ScoreFn = std::function<RealVector(const RealVector&)>;
using EnergyFn = std::function<double(const RealVector&)>;
/// Score of the model perturbed at noise level sigma.
using NoisyScoreFn = std::function<RealVector(const RealVector&, double)>;

struct LangevinConfig {
  double step_size = 0.1;
  std::size_t num_steps = 1;
  /// Metropolis-adjusted (MALA) when true; needs an energy function.
  bool adjust = false;
  bool record_trajectory = false;

  /// Throws InvalidArgument unless step_size > 0 and num_steps >= 1.
  void validate() const;
};

struct ChainResult {
  RealVector final;
  /// x_1 .. x_K when recording; empty otherwise.
  std::vector<RealVector> trajectory;
  std::size_t accepted = 0;
  std::size_t proposed = 0;

  double accept_rate() const {
    return proposed ? static_cast<double>(accepted) / static_cast<double>(proposed) : 1.0;
  }
};

/// K steps of x <- x + (eps^2 / 2) s(x) + eps z.
///
/// Each step draws d normals, plus one uniform when adjusted, so the stream
/// advances by K * (d + adjust) blocks. With adjust = true the proposal is
/// accepted with probability min(1, exp(mala_log_accept_ratio)). A non-finite
/// score, energy or state raises ChainDivergence carrying the step index.
ChainResult langevin_chain(const ScoreFn& score_fn, const RealVector& x0, const LangevinConfig& cfg,
                           RngStream& rng, const EnergyFn& energy_fn = {});

/// log alpha = [-E(x') + log q(x | x')] - [-E(x) + log q(x' | x)] with
/// q(b | a) = N(b; a + (eps^2 / 2) s(a), eps^2 I).
double mala_log_accept_ratio(const EnergyFn& energy_fn, const ScoreFn& score_fn, const RealVector& x,
                             const RealVector& x_prop, double step_size);

/// Strictly decreasing positive noise levels sigma_1 > ... > sigma_L.
struct NoiseSchedule {
  std::vector<double> sigmas;

  void validate() const;
  std::size_t levels() const { return sigmas.size(); }

  /// L levels spaced geometrically from sigma_max down to sigma_min.
  static NoiseSchedule geometric(double sigma_max, double sigma_min, std::size_t levels);
};

struct AnnealedResult {
  RealVector final;
  /// Level index of every recorded state, parallel to `trajectory`.
  std::vector<std::size_t> level_tags;
  std::vector<RealVector> trajectory;
};

/// Runs langevin_chain at every level from the largest sigma to the smallest,
/// chaining final states. Level l uses step size eps * sigma_l / sigma_L.
AnnealedResult annealed_langevin(const NoisyScoreFn& score_fn, const NoiseSchedule& schedule,
                                 const LangevinConfig& per_level, const RealVector& x0,
                                 RngStream& rng);

}  // namespace ebm

#endif  // EBM_SAMPLERS_LANGEVIN_HPP_

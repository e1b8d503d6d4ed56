// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "ebm/samplers/langevin.hpp"

#include <cmath>
#include <string>

#include "ebm/numerics/errors.hpp"

namespace ebm {

namespace {

void check_finite_state(const RealVector& v, const char* what, std::size_t step) {
  if (!v.all_finite()) {
    throw ChainDivergence(std::string("langevin_chain: non-finite ") + what + " at step " +
                              std::to_string(step),
                          step);
  }
}

// log q(to | from) up to the shared normalizing constant.
double log_proposal(const RealVector& to, const RealVector& from, const RealVector& score_from,
                    double step_size) {
  const double half_eps2 = 0.5 * step_size * step_size;
  double acc = 0.0;
  for (std::size_t i = 0; i < to.dim(); ++i) {
    const double r = to[i] - from[i] - half_eps2 * score_from[i];
    acc += r * r;
  }
  return -acc / (2.0 * step_size * step_size);
}

}  // namespace

void LangevinConfig::validate() const {
  if (!(step_size > 0.0) || !std::isfinite(step_size)) {
    throw InvalidArgument("LangevinConfig: step_size must be positive");
  }
  if (num_steps == 0) throw InvalidArgument("LangevinConfig: num_steps must be >= 1");
}

double mala_log_accept_ratio(const EnergyFn& energy_fn, const ScoreFn& score_fn, const RealVector& x,
                             const RealVector& x_prop, double step_size) {
  require_same_dim(x, x_prop, "mala_log_accept_ratio");
  const double e_x = energy_fn(x);
  const double e_prop = energy_fn(x_prop);
  if (!std::isfinite(e_x) || !std::isfinite(e_prop)) {
    throw NumericError("mala_log_accept_ratio: non-finite energy");
  }
  const RealVector s_x = score_fn(x);
  const RealVector s_prop = score_fn(x_prop);
  return (-e_prop + log_proposal(x, x_prop, s_prop, step_size)) -
         (-e_x + log_proposal(x_prop, x, s_x, step_size));
}

ChainResult langevin_chain(const ScoreFn& score_fn, const RealVector& x0, const LangevinConfig& cfg,
                           RngStream& rng, const EnergyFn& energy_fn) {
  cfg.validate();
  if (cfg.adjust && !energy_fn) throw InvalidArgument("langevin_chain: MALA needs an energy function");
  const double eps = cfg.step_size;
  const double half_eps2 = 0.5 * eps * eps;
  const std::size_t d = x0.dim();

  ChainResult out{x0, {}, 0, 0};
  RealVector& x = out.final;
  RealVector s = score_fn(x);
  check_finite_state(s, "score", 0);
  double e = cfg.adjust ? energy_fn(x) : 0.0;
  if (cfg.record_trajectory) out.trajectory.reserve(cfg.num_steps);

  RealVector prop(d);
  for (std::size_t k = 0; k < cfg.num_steps; ++k) {
    for (std::size_t i = 0; i < d; ++i) prop[i] = x[i] + half_eps2 * s[i] + eps * rng.normal();
    check_finite_state(prop, "state", k + 1);
    RealVector s_prop = score_fn(prop);
    check_finite_state(s_prop, "score", k + 1);
    if (cfg.adjust) {
      ++out.proposed;
      const double e_prop = energy_fn(prop);
      if (!std::isfinite(e_prop)) {
        throw ChainDivergence("langevin_chain: non-finite energy at step " + std::to_string(k + 1), k + 1);
      }
      const double log_alpha = (-e_prop + log_proposal(x, prop, s_prop, eps)) -
                               (-e + log_proposal(prop, x, s, eps));
      if (std::log(rng.uniform()) < log_alpha) {
        ++out.accepted;
        x = prop;
        s = std::move(s_prop);
        e = e_prop;
      }
    } else {
      x = prop;
      s = std::move(s_prop);
    }
    if (cfg.record_trajectory) out.trajectory.push_back(x);
  }
  return out;
}

void NoiseSchedule::validate() const {
  if (sigmas.empty()) throw InvalidArgument("NoiseSchedule: needs at least one level");
  for (std::size_t i = 0; i < sigmas.size(); ++i) {
    if (!(sigmas[i] > 0.0) || !std::isfinite(sigmas[i])) {
      throw InvalidArgument("NoiseSchedule: sigmas must be positive");
    }
    if (i > 0 && !(sigmas[i] < sigmas[i - 1])) {
      throw InvalidArgument("NoiseSchedule: sigmas must be strictly decreasing");
    }
  }
}

NoiseSchedule NoiseSchedule::geometric(double sigma_max, double sigma_min, std::size_t levels) {
  if (levels == 0) throw InvalidArgument("NoiseSchedule::geometric: levels must be >= 1");
  if (!(sigma_max > 0.0) || !(sigma_min > 0.0)) {
    throw InvalidArgument("NoiseSchedule::geometric: sigmas must be positive");
  }
  NoiseSchedule out;
  if (levels == 1) {
    out.sigmas = {sigma_min};
  } else {
    const double ratio = std::pow(sigma_min / sigma_max, 1.0 / static_cast<double>(levels - 1));
    for (std::size_t l = 0; l < levels; ++l) {
      out.sigmas.push_back(l + 1 == levels ? sigma_min : sigma_max * std::pow(ratio, static_cast<double>(l)));
    }
  }
  out.validate();
  return out;
}

AnnealedResult annealed_langevin(const NoisyScoreFn& score_fn, const NoiseSchedule& schedule,
                                 const LangevinConfig& per_level, const RealVector& x0,
                                 RngStream& rng) {
  schedule.validate();
  per_level.validate();
  if (per_level.adjust) throw InvalidArgument("annealed_langevin: only unadjusted steps are supported");
  const double sigma_last = schedule.sigmas.back();
  AnnealedResult out{x0, {}, {}};
  for (std::size_t l = 0; l < schedule.levels(); ++l) {
    const double sigma = schedule.sigmas[l];
    LangevinConfig cfg = per_level;
    cfg.step_size = per_level.step_size * sigma / sigma_last;
    auto result = langevin_chain([&](const RealVector& x) { return score_fn(x, sigma); }, out.final,
                                 cfg, rng);
    out.final = std::move(result.final);
    for (auto& state : result.trajectory) {
      out.trajectory.push_back(std::move(state));
      out.level_tags.push_back(l);
    }
  }
  return out;
}

}  // namespace ebm

// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <optional>

#include "ebm/estimators/contrastive.hpp"
#include "ebm/estimators/fd_gradient.hpp"
#include "ebm/estimators/nce.hpp"
#include "ebm/estimators/score_matching.hpp"
#include "ebm/numerics/errors.hpp"
#include "ebm/samplers/replay_buffer.hpp"
#include "internal.hpp"

namespace ebm::detail {

RunStreams::RunStreams(std::uint64_t seed) : data(0), train(0), eval(0) {
  RngStream root(seed);
  data = root.split();
  train = root.split();
  eval = root.split();
}

GaussianDensity data_density(const ExperimentConfig& cfg) {
  const std::size_t d = cfg.get_size("data.dim");
  return GaussianDensity::isotropic(RealVector(d, cfg.get_double("data.mean")), cfg.get_double("data.var"));
}

Batch sample_batch(const GaussianDensity& p, std::size_t n, RngStream& rng) {
  Batch out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(p.sample(rng));
  return out;
}

void require_gaussian(const EnergyFamily& family, const std::string& experiment) {
  if (!std::holds_alternative<GaussianEnergy>(family.kind())) {
    throw ConfigError(experiment + ": family must be gaussian(d), got " + family.name());
  }
}

void require_dim(const EnergyFamily& family, std::size_t dim, const std::string& what) {
  if (family.dim() != dim) {
    throw ConfigError(what + ": family " + family.name() + " has dimension " + std::to_string(family.dim()) +
                      " but data.dim is " + std::to_string(dim));
  }
}

ParamVector gaussian_init(const EnergyFamily& family, const ExperimentConfig& cfg) {
  const std::size_t d = family.dim();
  return gaussian_params_diag(std::vector<double>(d, cfg.get_double("init.mean")),
                              std::vector<double>(d, cfg.get_double("init.precision")));
}

std::vector<double> gaussian_marginal_variances(const EnergyFamily& family, const ParamVector& theta) {
  // Gauss-Jordan inverse of the (small, SPD) precision matrix.
  const std::size_t d = family.dim();
  std::vector<double> a = gaussian_precision(family, theta);
  std::vector<double> inv(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) inv[i * d + i] = 1.0;
  for (std::size_t c = 0; c < d; ++c) {
    const double pivot = a[c * d + c];
    for (std::size_t j = 0; j < d; ++j) {
      a[c * d + j] /= pivot;
      inv[c * d + j] /= pivot;
    }
    for (std::size_t r = 0; r < d; ++r) {
      if (r == c) continue;
      const double f = a[r * d + c];
      for (std::size_t j = 0; j < d; ++j) {
        a[r * d + j] -= f * a[c * d + j];
        inv[r * d + j] -= f * inv[c * d + j];
      }
    }
  }
  std::vector<double> var(d);
  for (std::size_t i = 0; i < d; ++i) var[i] = inv[i * d + i];
  return var;
}

TrainOptions train_options(const ExperimentConfig& cfg) {
  TrainOptions o;
  o.estimator = cfg.get_string("estimator");
  o.steps = cfg.get_size("steps");
  o.batch_size = cfg.get_size("estimator.batch_size");
  o.adam.learning_rate = cfg.get_double("optimizer.lr");
  o.adam.beta1 = cfg.get_double("optimizer.beta1");
  o.adam.beta2 = cfg.get_double("optimizer.beta2");
  o.adam.epsilon = cfg.get_double("optimizer.epsilon");
  o.linear_decay = cfg.get_string("optimizer.decay") == "linear";
  o.log_every = cfg.get_size("log.every");
  o.wall_clock = cfg.get_bool("log.wall_clock");
  o.seed = cfg.seed();
  return o;
}

TrainResult train(const ParamVector& theta0, const Batch& data, const StepFn& step,
                  const TrainOptions& options, RngStream& rng) {
  if (data.empty()) throw InvalidArgument("train: empty data");
  const std::size_t n = theta0.size();
  std::vector<bool> frozen(n, false);
  for (const auto& name : options.frozen) {
    const ParamBlock& b = theta0.block_info(name);
    for (std::size_t i = 0; i < b.length; ++i) frozen[b.offset + i] = true;
  }

  ParamVector theta = theta0;
  OptimizerState state = OptimizerState::init(n, options.adam);
  const auto start = std::chrono::steady_clock::now();
  std::optional<CsvTable> log;
  std::vector<std::string> aux_keys;
  const bool minibatch = options.batch_size > 0 && options.batch_size < data.size();
  Batch mb;

  for (std::size_t k = 1; k <= options.steps; ++k) {
    RngStream step_rng = rng.split();
    const Batch* batch = &data;
    if (minibatch) {
      mb.clear();
      for (std::size_t i = 0; i < options.batch_size; ++i) mb.push_back(data[step_rng.uniform_index(data.size())]);
      batch = &mb;
    }
    const LossReport report = step(theta, *batch, step_rng);
    if (!std::isfinite(report.loss)) {
      throw NumericError("training diverged: non-finite loss at step " + std::to_string(k));
    }
    RealVector grad = report.grad_theta;
    for (std::size_t i = 0; i < n; ++i) {
      if (frozen[i]) grad[i] = 0.0;
    }
    if (options.linear_decay) {
      state.config.learning_rate =
          options.adam.learning_rate * (1.0 - static_cast<double>(k - 1) / static_cast<double>(options.steps));
    }
    std::tie(state, theta) = optimizer_step(state, theta, grad);

    if (!log) {
      std::vector<std::string> header = {"step", "estimator", "loss"};
      for (auto& name : theta.coordinate_names()) header.push_back(std::move(name));
      header.push_back("grad_norm");
      for (const auto& [key, _] : report.aux) {
        aux_keys.push_back(key);
        header.push_back(key);
      }
      header.push_back("wall_ms");
      header.push_back("seed");
      log.emplace(std::move(header));
    }
    if (k % options.log_every == 0 || k == options.steps) {
      std::vector<std::string> row = {format_number(k), options.estimator, format_number(report.loss)};
      for (std::size_t i = 0; i < n; ++i) row.push_back(format_number(theta[i]));
      row.push_back(format_number(norm(grad)));
      for (const auto& key : aux_keys) {
        const auto it = report.aux.find(key);
        row.push_back(it == report.aux.end() ? "" : format_number(it->second));
      }
      std::int64_t wall_ms = 0;
      if (options.wall_clock) {
        wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start)
                      .count();
      }
      row.push_back(format_number(wall_ms));
      row.push_back(format_number(static_cast<std::int64_t>(options.seed)));
      log->add_row(std::move(row));
    }
  }
  return {std::move(theta), std::move(*log)};
}

EstimatorSetup make_estimator(const ExperimentConfig& cfg, const EnergyFamily& family,
                              const ParamVector& theta0, std::size_t data_count, RngStream& rng) {
  const std::string name = cfg.get_string("estimator");
  const bool uses_fd = (name == "sm" || name == "ssm" || name == "dsm") && !family.has_mixed_derivatives();
  if (uses_fd && family.param_count() > kMaxFdParams) {
    throw ConfigError("estimator " + name + " on " + family.name() + " needs finite-difference gradients over " +
                      std::to_string(family.param_count()) + " parameters; the limit is " +
                      std::to_string(kMaxFdParams));
  }
  EstimatorSetup setup{{}, theta0, cfg.get_size("estimator.batch_size")};

  if (name == "sm") {
    setup.step = [family](const ParamVector& theta, const Batch& batch, RngStream&) {
      return sm_loss(family, theta, batch);
    };
  } else if (name == "dsm") {
    const double sigma = cfg.get_double("estimator.sigma");
    setup.step = [family, sigma](const ParamVector& theta, const Batch& batch, RngStream& r) {
      return dsm_loss(family, theta, batch, sigma, r);
    };
  } else if (name == "ssm") {
    SliceConfig slices;
    slices.projection =
        cfg.get_string("estimator.projection") == "rademacher" ? Projection::kRademacher : Projection::kGaussian;
    slices.num_slices = cfg.get_size("estimator.slices");
    slices.variance_reduced = cfg.get_bool("estimator.variance_reduced");
    if (setup.batch_size == 0) setup.batch_size = 512;
    setup.step = [family, slices](const ParamVector& theta, const Batch& batch, RngStream& r) {
      return ssm_loss(family, theta, batch, slices, r);
    };
  } else if (name == "nce") {
    NceConfig nce;
    nce.nu = cfg.get_double("estimator.nu");
    nce.learn_log_z = cfg.get_bool("estimator.learn_log_z");
    nce.noise = GaussianDensity::isotropic(RealVector(family.dim(), cfg.get_double("estimator.noise_mean")),
                                           cfg.get_double("estimator.noise_var"));
    std::size_t m = cfg.get_size("estimator.noise_samples");
    if (m == 0) m = data_count;
    auto noise = std::make_shared<const Batch>(sample_batch(nce.noise, m, rng));
    if (nce.learn_log_z) setup.theta0 = append_log_z(theta0, 0.0);
    setup.step = [family, nce, noise](const ParamVector& theta, const Batch& batch, RngStream&) {
      return nce_loss(family, theta, batch, *noise, nce);
    };
  } else if (name == "cd" || name == "pcd") {
    LangevinConfig chain;
    chain.step_size = cfg.get_double("estimator.step_size");
    chain.num_steps = cfg.get_size("estimator.langevin_steps");
    chain.adjust = cfg.get_bool("estimator.adjust");
    if (setup.batch_size == 0) setup.batch_size = 1000;
    if (name == "cd") {
      setup.step = [family, chain](const ParamVector& theta, const Batch& batch, RngStream& r) {
        return cd_gradient(family, theta, batch, chain, ChainInit::kData, nullptr, r);
      };
    } else {
      auto buffer = std::make_shared<ReplayBuffer>(cfg.get_size("estimator.buffer_capacity"),
                                                   cfg.get_double("estimator.reinit_prob"));
      setup.step = [family, chain, buffer](const ParamVector& theta, const Batch& batch, RngStream& r) {
        return cd_gradient(family, theta, batch, chain, ChainInit::kBuffer, buffer.get(), r);
      };
    }
  } else {
    throw ConfigError("estimator: unknown value '" + name + "'");
  }
  return setup;
}

double log_partition_1d(const EnergyFamily& family, const ParamVector& theta, double lo, double hi,
                        std::size_t points) {
  if (family.dim() != 1) throw InvalidArgument("log_partition_1d: family must be one-dimensional");
  if (points < 2 || !(hi > lo)) throw InvalidArgument("log_partition_1d: bad grid");
  const double h = (hi - lo) / static_cast<double>(points - 1);
  std::vector<double> logw(points);
  for (std::size_t i = 0; i < points; ++i) {
    const double x = lo + h * static_cast<double>(i);
    const double end_weight = (i == 0 || i + 1 == points) ? 0.5 : 1.0;
    logw[i] = std::log(end_weight * h) - energy(family, theta, RealVector{x});
  }
  const double top = *std::max_element(logw.begin(), logw.end());
  double acc = 0.0;
  for (double w : logw) acc += std::exp(w - top);
  return top + std::log(acc);
}

double cosine(const RealVector& a, const RealVector& b) { return dot(a, b) / (norm(a) * norm(b)); }

}  // namespace ebm::detail

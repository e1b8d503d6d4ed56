// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_SRC_EXPERIMENTS_INTERNAL_HPP_
#define EBM_SRC_EXPERIMENTS_INTERNAL_HPP_

#include <functional>
#include <string>
#include <vector>

#include "ebm/energy/family.hpp"
#include "ebm/energy/gaussian_oracle.hpp"
#include "ebm/estimators/loss_report.hpp"
#include "ebm/experiments/config.hpp"
#include "ebm/experiments/experiment.hpp"
#include "ebm/numerics/optimizer.hpp"
#include "ebm/numerics/rng.hpp"

namespace ebm::detail {

// Root stream layout: every experiment derives its streams from
// RngStream(seed) by split() in this order.
struct RunStreams {
  RngStream data;
  RngStream train;
  RngStream eval;
  explicit RunStreams(std::uint64_t seed);
};

/// N(data.mean, data.var I) in data.dim dimensions.
GaussianDensity data_density(const ExperimentConfig& cfg);
Batch sample_batch(const GaussianDensity& p, std::size_t n, RngStream& rng);

/// Throws ConfigError unless the family is Gaussian(d).
void require_gaussian(const EnergyFamily& family, const std::string& experiment);
/// Throws ConfigError unless family.dim() == dim.
void require_dim(const EnergyFamily& family, std::size_t dim, const std::string& what);
/// Gaussian(d) at (init.mean, init.precision) on every coordinate.
ParamVector gaussian_init(const EnergyFamily& family, const ExperimentConfig& cfg);
/// Diagonal of the covariance P^{-1} of a Gaussian(d) member.
std::vector<double> gaussian_marginal_variances(const EnergyFamily& family, const ParamVector& theta);

using StepFn = std::function<LossReport(const ParamVector& theta, const Batch& batch, RngStream& rng)>;

struct TrainOptions {
  std::string estimator;
  std::size_t steps = 1;
  /// 0 means full batch.
  std::size_t batch_size = 0;
  AdamConfig adam;
  bool linear_decay = false;
  /// Parameter blocks whose gradient is zeroed.
  std::vector<std::string> frozen;
  std::size_t log_every = 10;
  bool wall_clock = false;
  std::uint64_t seed = 0;
};

TrainOptions train_options(const ExperimentConfig& cfg);

struct TrainResult {
  ParamVector theta;
  CsvTable log;
};

/// Adam on the estimator loss. One rng split per optimizer step; minibatches
/// are drawn with replacement from that split.
TrainResult train(const ParamVector& theta0, const Batch& data, const StepFn& step,
                  const TrainOptions& options, RngStream& rng);

struct EstimatorSetup {
  StepFn step;
  /// Includes the "log_z" block for NCE with a learnable partition.
  ParamVector theta0;
  std::size_t batch_size = 0;
};

/// Builds the configured estimator (estimator, estimator.*). Draws NCE noise
/// from `rng` once.
EstimatorSetup make_estimator(const ExperimentConfig& cfg, const EnergyFamily& family,
                              const ParamVector& theta0, std::size_t data_count, RngStream& rng);

/// log of the integral of exp(-E) over [lo, hi] by the trapezoid rule.
double log_partition_1d(const EnergyFamily& family, const ParamVector& theta, double lo, double hi,
                        std::size_t points);

double cosine(const RealVector& a, const RealVector& b);

// Experiments.
void validate_gaussian_recovery(const ExperimentConfig& cfg);
ExperimentResult run_gaussian_recovery(const ExperimentConfig& cfg);
void validate_nce_partition(const ExperimentConfig& cfg);
ExperimentResult run_nce_partition(const ExperimentConfig& cfg);
ExperimentResult run_cd_sm_connection(const ExperimentConfig& cfg);
ExperimentResult run_de_bruijn(const ExperimentConfig& cfg);
ExperimentResult run_ssm_nce_equiv(const ExperimentConfig& cfg);
ExperimentResult run_dsm_control_variate(const ExperimentConfig& cfg);
void validate_ssm_unbiased(const ExperimentConfig& cfg);
ExperimentResult run_ssm_unbiased(const ExperimentConfig& cfg);
ExperimentResult run_ksd_test(const ExperimentConfig& cfg);
ExperimentResult run_sampler_moments(const ExperimentConfig& cfg);
void validate_mode_weight(const ExperimentConfig& cfg);
ExperimentResult run_mode_weight(const ExperimentConfig& cfg);

}  // namespace ebm::detail

#endif  // EBM_SRC_EXPERIMENTS_INTERNAL_HPP_

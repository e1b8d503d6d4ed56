// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "ebm/estimators/nce.hpp"
#include "internal.hpp"

namespace ebm::detail {

namespace {

constexpr double kMeanTolerance = 0.05;
constexpr double kScaleTolerance = 0.1;
constexpr double kLogZTolerance = 0.02;
constexpr double kSelfNormalizedTolerance = 0.05;

std::string indexed(const std::string& name, std::size_t i) { return name + "[" + std::to_string(i) + "]"; }

void add_param_rows(const ParamVector& theta, std::vector<SummaryRow>& summary, const std::string& prefix = "") {
  const auto names = theta.coordinate_names();
  for (std::size_t i = 0; i < theta.size(); ++i) summary.push_back(SummaryRow::param(prefix + names[i], theta[i]));
}

}  // namespace

void validate_gaussian_recovery(const ExperimentConfig& cfg) {
  const EnergyFamily family = family_from_spec(cfg.get_string("family"));
  require_gaussian(family, "gaussian_recovery");
  require_dim(family, cfg.get_size("data.dim"), "gaussian_recovery");
}

ExperimentResult run_gaussian_recovery(const ExperimentConfig& cfg) {
  const EnergyFamily family = family_from_spec(cfg.get_string("family"));
  RunStreams streams(cfg.seed());
  const GaussianDensity p = data_density(cfg);
  const Batch data = sample_batch(p, cfg.get_size("data.samples"), streams.data);

  const EstimatorSetup setup = make_estimator(cfg, family, gaussian_init(family, cfg), data.size(), streams.eval);
  TrainOptions options = train_options(cfg);
  options.batch_size = setup.batch_size;
  TrainResult trained = train(setup.theta0, data, setup.step, options, streams.train);

  ExperimentResult result{std::move(trained.log), {}, {}};
  add_param_rows(trained.theta, result.summary);

  const ParamVector theta = cfg.get_string("estimator") == "nce" && cfg.get_bool("estimator.learn_log_z")
                                ? strip_log_z(trained.theta)
                                : trained.theta;
  const auto variances = gaussian_marginal_variances(family, theta);
  const auto mu = theta.block("mu");
  const bool dsm = cfg.get_string("estimator") == "dsm";
  const double sigma_noise = cfg.get_double("estimator.sigma");
  for (std::size_t i = 0; i < family.dim(); ++i) {
    result.summary.push_back(SummaryRow::within(indexed("mu_hat", i), mu[i], p.mean[i], kMeanTolerance));
    if (dsm) {
      // DSM fits the noise-smoothed data, whose variance is var + sigma^2.
      result.summary.push_back(SummaryRow::within(indexed("var_hat", i), variances[i],
                                                  p.variance[i] + sigma_noise * sigma_noise, kScaleTolerance));
    } else {
      result.summary.push_back(
          SummaryRow::within(indexed("sigma_hat", i), std::sqrt(variances[i]), std::sqrt(p.variance[i]), kScaleTolerance));
    }
  }
  return result;
}

void validate_nce_partition(const ExperimentConfig& cfg) {
  if (cfg.get_size("data.dim") != 1) throw ConfigError("nce_partition: data.dim must be 1");
  if (cfg.get_string("estimator") != "nce") throw ConfigError("nce_partition: estimator must be nce");
}

ExperimentResult run_nce_partition(const ExperimentConfig& cfg) {
  RunStreams streams(cfg.seed());
  const GaussianDensity p = data_density(cfg);
  const Batch data = sample_batch(p, cfg.get_size("data.samples"), streams.data);
  TrainOptions options = train_options(cfg);

  // Learnable log Z with the energy frozen at its initial value.
  const EnergyFamily gaussian = EnergyFamily::gaussian(1);
  ExperimentConfig learn = cfg;
  learn.set("estimator.learn_log_z", true);
  RngStream noise_rng = streams.eval.split();
  const EstimatorSetup with_c = make_estimator(learn, gaussian, gaussian_init(gaussian, cfg), data.size(), noise_rng);
  options.frozen = {"mu", "chol_log_diag"};
  options.batch_size = with_c.batch_size;
  TrainResult part1 = train(with_c.theta0, data, with_c.step, options, streams.train);

  ExperimentResult result{std::move(part1.log), {}, {}};
  add_param_rows(part1.theta, result.summary);
  // log Z of exp(-E) for the frozen energy; the standard normal gives ln(2 pi)/2.
  const ParamVector frozen = strip_log_z(part1.theta);
  const double log_z_true = 0.5 * std::log(2.0 * std::numbers::pi / gaussian_precision(gaussian, frozen)[0]);
  result.summary.push_back(SummaryRow::within("log_z", part1.theta.block(kLogZBlock)[0], log_z_true, kLogZTolerance));

  // Self-normalized mode: c fixed at 0, the quadratic's constant term absorbs log Z.
  const EnergyFamily poly = EnergyFamily::poly1d(2);
  ExperimentConfig fixed = cfg;
  fixed.set("estimator.learn_log_z", false);
  RngStream noise_rng2 = streams.eval.split();
  const EstimatorSetup self = make_estimator(fixed, poly, poly1d_params({0.0, 0.0, 1.0}), data.size(), noise_rng2);
  options.frozen.clear();
  options.batch_size = self.batch_size;
  RngStream train2 = streams.train.split();
  TrainResult part2 = train(self.theta0, data, self.step, options, train2);
  add_param_rows(part2.theta, result.summary, "self_normalized.");
  const double log_z_quad = log_partition_1d(poly, part2.theta, -40.0, 40.0, 80'001);
  result.summary.push_back(SummaryRow::within("self_normalized_log_z", log_z_quad, 0.0, kSelfNormalizedTolerance));
  result.extras.emplace_back("self_normalized.csv", std::move(part2.log));
  return result;
}

}  // namespace ebm::detail

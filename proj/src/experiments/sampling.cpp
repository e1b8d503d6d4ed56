// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <memory>

#include "ebm/estimators/fd_gradient.hpp"
#include "ebm/estimators/score_matching.hpp"
#include "ebm/numerics/stats.hpp"
#include "ebm/samplers/langevin.hpp"
#include "internal.hpp"

namespace ebm::detail {

namespace {

constexpr double kUlaMeanTolerance = 0.05;
constexpr double kUlaVarTolerance = 0.1;
constexpr double kMalaVarTolerance = 0.05;
constexpr std::size_t kShiftChains = 100;
constexpr std::size_t kShiftSteps = 200;
constexpr double kEnergyShift = 123.0;
constexpr double kTruthTolerance = 0.015;
constexpr double kWeightTolerance = 0.1;

struct Moments {
  double mean;
  double var;
};

Moments moments(const std::vector<double>& xs) {
  RunningStats s;
  for (double x : xs) s.add(x);
  return {s.mean(), s.variance()};
}

// Two-mode data: +separation with probability `weight`, else -separation.
double two_mode_draw(double weight, double separation, double component_sd, RngStream& rng) {
  const double centre = rng.uniform() < weight ? separation : -separation;
  return centre + component_sd * rng.normal();
}

double positive_fraction(const std::vector<double>& xs) {
  std::size_t count = 0;
  for (double x : xs) count += x > 0.0 ? 1 : 0;
  return static_cast<double>(count) / static_cast<double>(xs.size());
}

double softmax_first(std::span<const double> logits, std::size_t k) {
  double top = logits[0];
  for (double l : logits) top = std::max(top, l);
  double z = 0.0;
  for (double l : logits) z += std::exp(l - top);
  return std::exp(logits[k] - top) / z;
}

}  // namespace

ExperimentResult run_sampler_moments(const ExperimentConfig& cfg) {
  const EnergyFamily family = EnergyFamily::gaussian(1);
  const ParamVector theta = gaussian_init(family, cfg);
  const double target_mean = cfg.get_double("init.mean");
  const double target_var = 1.0 / cfg.get_double("init.precision");
  const ScoreFn score_fn = [&](const RealVector& x) { return score(family, theta, x); };
  const EnergyFn energy_fn = [&](const RealVector& x) { return energy(family, theta, x); };
  RunStreams streams(cfg.seed());

  // Unadjusted chains started from the target: at eps = 0.01 the chains move
  // too slowly to forget a point start, so this measures stationarity.
  LangevinConfig ula;
  ula.step_size = cfg.get_double("eval.step_size");
  ula.num_steps = cfg.get_size("eval.chain_steps");
  std::vector<double> ula_finals;
  const std::size_t chains = cfg.get_size("eval.chains");
  for (std::size_t c = 0; c < chains; ++c) {
    RngStream rng = streams.eval.split();
    const RealVector x0{target_mean + std::sqrt(target_var) * rng.normal()};
    ula_finals.push_back(langevin_chain(score_fn, x0, ula, rng).final[0]);
  }
  const Moments ula_m = moments(ula_finals);

  LangevinConfig mala;
  mala.step_size = cfg.get_double("eval.mala_step_size");
  mala.adjust = true;
  mala.record_trajectory = true;
  const std::size_t mala_chains = cfg.get_size("eval.mala_chains");
  const std::size_t burn_in = cfg.get_size("eval.burn_in");
  const std::size_t kept = std::max<std::size_t>(1, cfg.get_size("eval.mala_samples") / mala_chains);
  mala.num_steps = burn_in + kept;
  std::vector<double> mala_samples;
  std::size_t accepted = 0, proposed = 0;
  for (std::size_t c = 0; c < mala_chains; ++c) {
    RngStream rng = streams.eval.split();
    const ChainResult chain = langevin_chain(score_fn, RealVector{target_mean}, mala, rng, energy_fn);
    for (std::size_t k = burn_in; k < chain.trajectory.size(); ++k) mala_samples.push_back(chain.trajectory[k][0]);
    accepted += chain.accepted;
    proposed += chain.proposed;
  }
  const Moments mala_m = moments(mala_samples);

  // Shifting the energy by a constant leaves every MALA chain unchanged.
  const EnergyFn shifted_fn = [&](const RealVector& x) { return energy(family, theta, x) + kEnergyShift; };
  LangevinConfig shift_cfg = mala;
  shift_cfg.record_trajectory = false;
  shift_cfg.num_steps = kShiftSteps;
  std::size_t mismatches = 0;
  for (std::size_t c = 0; c < kShiftChains; ++c) {
    RngStream a = streams.eval.split();
    RngStream b = a;
    const RealVector x0{target_mean};
    const ChainResult plain = langevin_chain(score_fn, x0, shift_cfg, a, energy_fn);
    const ChainResult moved = langevin_chain(score_fn, x0, shift_cfg, b, shifted_fn);
    mismatches += (plain.final == moved.final && plain.accepted == moved.accepted) ? 0 : 1;
  }

  ExperimentResult result{CsvTable({"sampler", "step_size", "chains", "samples", "mean", "variance", "accept_rate"}),
                          {},
                          {}};
  result.run.add_row({"ula", format_number(ula.step_size), format_number(chains), format_number(ula_finals.size()),
                      format_number(ula_m.mean), format_number(ula_m.var), format_number(1.0)});
  const double accept_rate = static_cast<double>(accepted) / static_cast<double>(proposed);
  result.run.add_row({"mala", format_number(mala.step_size), format_number(mala_chains),
                      format_number(mala_samples.size()), format_number(mala_m.mean), format_number(mala_m.var),
                      format_number(accept_rate)});
  result.summary.push_back(SummaryRow::within("ula_mean", ula_m.mean, target_mean, kUlaMeanTolerance));
  result.summary.push_back(SummaryRow::within("ula_variance", ula_m.var, target_var, kUlaVarTolerance * target_var));
  result.summary.push_back(SummaryRow::within("mala_variance", mala_m.var, target_var, kMalaVarTolerance * target_var));
  result.summary.push_back(SummaryRow::record("mala_mean", mala_m.mean));
  result.summary.push_back(SummaryRow::record("mala_accept_rate", accept_rate));
  result.summary.push_back(SummaryRow::at_most("energy_shift_mismatched_chains", static_cast<double>(mismatches), 0.0));
  return result;
}

void validate_mode_weight(const ExperimentConfig& cfg) {
  const EnergyFamily family = family_from_spec(cfg.get_string("family"));
  if (!std::holds_alternative<MixtureRbfEnergy>(family.kind()) || family.dim() != 1) {
    throw ConfigError("mode_weight: family must be mixture_rbf(K,1), got " + family.name());
  }
  if (cfg.get_size("data.dim") != 1) throw ConfigError("mode_weight: data.dim must be 1");
  if (family.param_count() > kMaxFdParams) {
    throw ConfigError("mode_weight: " + family.name() + " has more than " + std::to_string(kMaxFdParams) +
                      " parameters for finite-difference gradients");
  }
  if (!(cfg.get_double("anneal.sigma_max") > cfg.get_double("anneal.sigma_min"))) {
    throw ConfigError("anneal.sigma_max: must exceed anneal.sigma_min");
  }
}

ExperimentResult run_mode_weight(const ExperimentConfig& cfg) {
  const EnergyFamily family = family_from_spec(cfg.get_string("family"));
  const auto& mix = std::get<MixtureRbfEnergy>(family.kind());
  const double weight = cfg.get_double("data.weight");
  const double separation = cfg.get_double("data.separation");
  const double component_sd = std::sqrt(cfg.get_double("data.component_var"));
  const std::size_t chains = cfg.get_size("anneal.chains");
  const NoiseSchedule schedule = NoiseSchedule::geometric(
      cfg.get_double("anneal.sigma_max"), cfg.get_double("anneal.sigma_min"), cfg.get_size("anneal.levels"));
  RunStreams streams(cfg.seed());

  Batch data;
  for (std::size_t i = 0; i < cfg.get_size("data.samples"); ++i) {
    data.push_back(RealVector{two_mode_draw(weight, separation, component_sd, streams.data)});
  }

  // Sampler on the true mixture: the basin-fraction oracle itself.
  std::vector<double> truth;
  for (std::size_t c = 0; c < chains; ++c) truth.push_back(two_mode_draw(weight, separation, component_sd, streams.eval));

  // Components spread over [-1, 1] at the widest noise scale, equal weights.
  ParamVector theta0 = family.zero_params();
  {
    auto means = theta0.block("means");
    for (std::size_t k = 0; k < mix.components; ++k) {
      means[k] = mix.components == 1 ? 0.0 : -1.0 + 2.0 * static_cast<double>(k) / static_cast<double>(mix.components - 1);
    }
    for (auto& ls : theta0.block("log_sigma")) ls = std::log(schedule.sigmas.front());
  }

  TrainOptions options = train_options(cfg);
  options.steps = cfg.get_size("anneal.train_steps");
  options.batch_size = cfg.get_size("anneal.batch_size");
  const double init_var = separation * separation + schedule.sigmas.front() * schedule.sigmas.front();

  // Path (b): denoising score matching per noise level, warm-started, then
  // annealed Langevin through the levels.
  std::vector<std::string> header;
  std::unique_ptr<CsvTable> run;
  std::vector<ParamVector> level_theta;
  ParamVector theta = theta0;
  for (std::size_t l = 0; l < schedule.levels(); ++l) {
    const double sigma = schedule.sigmas[l];
    options.estimator = "dsm";
    const StepFn step = [&family, sigma](const ParamVector& th, const Batch& batch, RngStream& rng) {
      return dsm_loss(family, th, batch, sigma, rng);
    };
    RngStream level_rng = streams.train.split();
    TrainResult trained = train(theta, data, step, options, level_rng);
    if (!run) {
      header = {"level", "sigma"};
      for (const auto& h : trained.log.header()) header.push_back(h);
      run = std::make_unique<CsvTable>(header);
    }
    for (const auto& row : trained.log.rows()) {
      std::vector<std::string> full = {format_number(l), format_number(sigma)};
      full.insert(full.end(), row.begin(), row.end());
      run->add_row(std::move(full));
    }
    theta = trained.theta;
    level_theta.push_back(theta);
  }
  const NoisyScoreFn noisy_score = [&](const RealVector& x, double sigma) {
    for (std::size_t l = 0; l < schedule.levels(); ++l) {
      if (schedule.sigmas[l] == sigma) return score(family, level_theta[l], x);
    }
    throw InvalidArgument("mode_weight: unknown noise level");
  };
  LangevinConfig per_level;
  per_level.step_size = cfg.get_double("anneal.step_size");
  per_level.num_steps = cfg.get_size("anneal.steps_per_level");
  std::vector<double> annealed;
  for (std::size_t c = 0; c < chains; ++c) {
    RngStream rng = streams.eval.split();
    const RealVector x0{std::sqrt(init_var) * rng.normal()};
    annealed.push_back(annealed_langevin(noisy_score, schedule, per_level, x0, rng).final[0]);
  }

  // Path (a): plain score matching on clean data, then single-scale Langevin
  // for the same total number of steps.
  options.estimator = "sm";
  options.steps = cfg.get_size("anneal.train_steps") * schedule.levels();
  const StepFn sm_step = [&family](const ParamVector& th, const Batch& batch, RngStream&) {
    return sm_loss(family, th, batch);
  };
  RngStream sm_rng = streams.train.split();
  TrainResult sm_trained = train(theta0, data, sm_step, options, sm_rng);
  const ScoreFn sm_score = [&](const RealVector& x) { return score(family, sm_trained.theta, x); };
  LangevinConfig single = per_level;
  single.num_steps = per_level.num_steps * schedule.levels();
  std::vector<double> plain;
  for (std::size_t c = 0; c < chains; ++c) {
    RngStream rng = streams.eval.split();
    const RealVector x0{std::sqrt(init_var) * rng.normal()};
    plain.push_back(langevin_chain(sm_score, x0, single, rng).final[0]);
  }

  // Index of the component nearest +separation.
  auto positive_component = [&](const ParamVector& th) {
    const auto means = th.block("means");
    std::size_t best = 0;
    for (std::size_t k = 1; k < mix.components; ++k) {
      if (std::abs(means[k] - separation) < std::abs(means[best] - separation)) best = k;
    }
    return best;
  };

  ExperimentResult result{std::move(*run), {}, {}};
  for (std::size_t l = 0; l < schedule.levels(); ++l) {
    result.summary.push_back(SummaryRow::record(
        "learned_weight_sigma=" + format_number(schedule.sigmas[l]),
        softmax_first(level_theta[l].block("logits"), positive_component(level_theta[l]))));
  }
  result.summary.push_back(SummaryRow::record(
      "learned_weight_sm", softmax_first(sm_trained.theta.block("logits"), positive_component(sm_trained.theta))));
  result.summary.push_back(SummaryRow::within("truth_fraction", positive_fraction(truth), weight, kTruthTolerance));
  result.summary.push_back(SummaryRow::within("pi_hat_annealed", positive_fraction(annealed), weight, kWeightTolerance));
  result.summary.push_back(SummaryRow::record("pi_hat_sm", positive_fraction(plain)));

  CsvTable samples({"method", "x"});
  auto add = [&samples](const char* method, const std::vector<double>& xs) {
    for (double x : xs) samples.add_row({method, format_number(x)});
  };
  add("truth", truth);
  add("annealed_dsm", annealed);
  add("sm_langevin", plain);
  result.extras.emplace_back("samples.csv", std::move(samples));
  result.extras.emplace_back("sm_run.csv", std::move(sm_trained.log));
  return result;
}

}  // namespace ebm::detail

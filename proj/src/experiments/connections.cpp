// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <numbers>

#include "ebm/estimators/nce.hpp"
#include "ebm/estimators/score_matching.hpp"
#include "ebm/numerics/stats.hpp"
#include "internal.hpp"

namespace ebm::detail {

namespace {

constexpr double kCosineBound = 0.99;
constexpr double kTrendSe = 3.0;
constexpr double kDeBruijnGap = 1e-3;
// FD order check: the gap should shrink by h_ratio^2 = 100 when h shrinks 10x.
constexpr double kOrderStepLarge = 1e-2;
constexpr double kOrderStepSmall = 1e-3;
constexpr double kOrderTarget = 100.0;
constexpr double kOrderTolerance = 20.0;
// Batch means of identical terms can round in the last place.
constexpr double kConstantEnergyGap = 1e-12;

std::string tagged(const std::string& name, double value) { return name + "=" + format_number(value); }

void require_decreasing(const std::vector<double>& values, const std::string& key) {
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] < values[i - 1])) throw ConfigError(key + ": values must be strictly decreasing");
  }
}

}  // namespace

ExperimentResult run_cd_sm_connection(const ExperimentConfig& cfg) {
  const auto eps_list = cfg.get_list("eval.eps");
  require_decreasing(eps_list, "eval.eps");
  if (cfg.get_size("data.dim") != 1) throw ConfigError("cd_sm_connection: data.dim must be 1");

  const EnergyFamily family = EnergyFamily::gaussian(1);
  const ParamVector theta = gaussian_init(family, cfg);
  RunStreams streams(cfg.seed());
  const GaussianDensity p = data_density(cfg);
  const Batch data = sample_batch(p, cfg.get_size("data.samples"), streams.data);
  // One noise draw per data point, shared by every eps (common random numbers).
  std::vector<double> z(data.size());
  for (auto& zi : z) zi = streams.eval.normal();

  const RealVector g_sm = gaussian_family_fisher_gradient(p, family, theta);
  const std::size_t n_params = theta.size();
  std::vector<std::string> header = {"eps"};
  for (const auto& name : theta.coordinate_names()) header.push_back("g_cd." + name);
  for (const auto& name : theta.coordinate_names()) header.push_back("g_sm_scaled." + name);
  for (const char* col : {"cosine", "ratio", "ratio_se"}) header.emplace_back(col);
  ExperimentResult result{CsvTable(std::move(header)), {}, {}};

  std::vector<double> ratios, ratio_ses;
  double last_cosine = 0.0;
  for (double eps : eps_list) {
    // Antithetic pairs (z, -z) cancel the O(eps) noise term of the one-step chain.
    std::vector<RunningStats> stats(n_params);
    for (std::size_t i = 0; i < data.size(); ++i) {
      const RealVector& x = data[i];
      const RealVector drift = x + (0.5 * eps * eps) * score(family, theta, x);
      const RealVector step{eps * z[i]};
      const RealVector g0 = grad_theta_energy(family, theta, x);
      const RealVector g_plus = grad_theta_energy(family, theta, drift + step);
      const RealVector g_minus = grad_theta_energy(family, theta, drift - step);
      for (std::size_t j = 0; j < n_params; ++j) stats[j].add(g0[j] - 0.5 * (g_plus[j] + g_minus[j]));
    }
    RealVector g_cd(n_params), se(n_params);
    for (std::size_t j = 0; j < n_params; ++j) {
      g_cd[j] = stats[j].mean();
      se[j] = stats[j].standard_error();
    }
    const RealVector target = (0.5 * eps * eps) * g_sm;
    const double cos = cosine(g_cd, target);
    const double ratio = norm(g_cd) / norm(target);
    double var_norm = 0.0;
    for (std::size_t j = 0; j < n_params; ++j) {
      const double w = g_cd[j] / norm(g_cd);
      var_norm += w * w * se[j] * se[j];
    }
    const double ratio_se = std::sqrt(var_norm) / norm(target);

    std::vector<std::string> row = {format_number(eps)};
    for (double v : g_cd) row.push_back(format_number(v));
    for (double v : target) row.push_back(format_number(v));
    for (double v : {cos, ratio, ratio_se}) row.push_back(format_number(v));
    result.run.add_row(std::move(row));
    result.summary.push_back(SummaryRow::record(tagged("cosine_eps", eps), cos));
    result.summary.push_back(SummaryRow::record(tagged("ratio_eps", eps), ratio));
    ratios.push_back(ratio);
    ratio_ses.push_back(ratio_se);
    last_cosine = cos;
  }

  result.summary.push_back(SummaryRow::above(tagged("cosine_eps", eps_list.back()), last_cosine, kCosineBound));
  // |r_k - 1| may not grow as eps shrinks, up to Monte Carlo noise.
  bool trend = true;
  for (std::size_t k = 1; k < ratios.size(); ++k) {
    trend = trend && std::abs(ratios[k] - 1.0) <= std::abs(ratios[k - 1] - 1.0) + kTrendSe * ratio_ses[k];
  }
  result.summary.push_back(SummaryRow::flag("ratio_approaches_one", trend));
  return result;
}

ExperimentResult run_de_bruijn(const ExperimentConfig& cfg) {
  const auto ts = cfg.get_list("eval.t");
  const double h = cfg.get_double("eval.h");
  for (double t : ts) {
    if (!(h < t) || !(kOrderStepLarge < t)) {
      throw ConfigError("eval.h: finite-difference steps must be smaller than every eval.t");
    }
  }
  const GaussianDensity p = data_density(cfg);
  const GaussianDensity q = GaussianDensity::isotropic(RealVector(p.dim(), cfg.get_double("eval.model_mean")),
                                                       cfg.get_double("eval.model_var"));

  auto lhs_at = [](const GaussianDensity& a, const GaussianDensity& b, double t, double step) {
    return (gaussian_kl(a.smoothed(t + step), b.smoothed(t + step)) -
            gaussian_kl(a.smoothed(t - step), b.smoothed(t - step))) /
           (2.0 * step);
  };
  auto rhs_at = [](const GaussianDensity& a, const GaussianDensity& b, double t) {
    return -gaussian_fisher_divergence(a.smoothed(t), b.smoothed(t));
  };
  auto gap_at = [&](double t, double step) {
    const double rhs = rhs_at(p, q, t);
    return std::abs(lhs_at(p, q, t, step) - rhs) / std::abs(rhs);
  };

  ExperimentResult result{CsvTable({"t", "lhs", "rhs", "rhs_half_fisher", "rel_gap", "gap_order_ratio"}), {}, {}};
  for (double t : ts) {
    const double lhs = lhs_at(p, q, t, h);
    const double rhs = rhs_at(p, q, t);
    const double gap = std::abs(lhs - rhs) / std::abs(rhs);
    const double order = gap_at(t, kOrderStepLarge) / gap_at(t, kOrderStepSmall);
    result.run.add_row({format_number(t), format_number(lhs), format_number(rhs), format_number(0.5 * rhs),
                        format_number(gap), format_number(order)});
    result.summary.push_back(SummaryRow::at_most(tagged("rel_gap_t", t), gap, kDeBruijnGap));
    result.summary.push_back(SummaryRow::within(tagged("fd_order_ratio_t", t), order, kOrderTarget, kOrderTolerance));
  }
  // Identical arguments: both sides vanish.
  const double t0 = ts.front();
  result.summary.push_back(SummaryRow::at_most("identical_lhs_abs", std::abs(lhs_at(p, p, t0, h)), 0.0));
  result.summary.push_back(SummaryRow::at_most("identical_rhs_abs", std::abs(rhs_at(p, p, t0)), 0.0));
  return result;
}

ExperimentResult run_ssm_nce_equiv(const ExperimentConfig& cfg) {
  const auto scales = cfg.get_list("eval.scales");
  require_decreasing(scales, "eval.scales");
  const EnergyFamily family = family_from_spec(cfg.get_string("family"));
  require_gaussian(family, "ssm_nce_equiv");
  require_dim(family, cfg.get_size("data.dim"), "ssm_nce_equiv");
  const std::size_t d = family.dim();

  RunStreams streams(cfg.seed());
  const Batch batch = sample_batch(data_density(cfg), cfg.get_size("data.samples"), streams.data);
  const ParamVector theta = gaussian_init(family, cfg);
  const EnergyFamily flat = EnergyFamily::mlp({d, 1});
  const ParamVector flat_theta = flat.zero_params();
  const double two_log2 = 2.0 * std::numbers::ln2;

  ExperimentResult result{CsvTable({"norm_v", "shifted_nce", "ssm_v", "gap", "gap_over_v2", "gap_quarter",
                                    "gap_quarter_over_v2", "constant_energy_gap"}),
                          {},
                          {}};
  std::vector<double> ratios;
  double constant_gap = 0.0;
  for (double s : scales) {
    const RealVector v(d, s / std::sqrt(static_cast<double>(d)));
    const double nce = shifted_nce_loss(family, theta, batch, v).loss;
    const double ssm = ssm_fixed_direction(family, theta, batch, v).loss;
    const double v2 = s * s;
    const double gap = std::abs(nce - two_log2 - 0.5 * ssm);
    const double gap_quarter = std::abs(nce - two_log2 - 0.25 * ssm);
    const double flat_gap = std::abs(shifted_nce_loss(flat, flat_theta, batch, v).loss - two_log2 -
                                     0.5 * ssm_fixed_direction(flat, flat_theta, batch, v).loss);
    constant_gap = std::max(constant_gap, flat_gap);
    ratios.push_back(gap / v2);
    result.run.add_row({format_number(s), format_number(nce), format_number(ssm), format_number(gap),
                        format_number(gap / v2), format_number(gap_quarter), format_number(gap_quarter / v2),
                        format_number(flat_gap)});
    result.summary.push_back(SummaryRow::record(tagged("gap_over_v2_norm", s), gap / v2));
    result.summary.push_back(SummaryRow::record(tagged("gap_quarter_over_v2_norm", s), gap_quarter / v2));
  }
  bool decreasing = true;
  for (std::size_t k = 1; k < ratios.size(); ++k) decreasing = decreasing && ratios[k] < ratios[k - 1];
  result.summary.push_back(SummaryRow::flag("gap_over_v2_strictly_decreasing", decreasing));
  result.summary.push_back(SummaryRow::at_most("constant_energy_gap", constant_gap, kConstantEnergyGap));
  return result;
}

}  // namespace ebm::detail

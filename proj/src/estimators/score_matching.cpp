// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "ebm/estimators/score_matching.hpp"

#include <cmath>

#include "accumulate.hpp"
#include "ebm/estimators/fd_gradient.hpp"
#include "ebm/numerics/errors.hpp"
#include "ebm/numerics/stats.hpp"

namespace ebm {

namespace {

double hessian_factor(HessianSign sign) { return sign == HessianSign::kMinus ? 1.0 : -1.0; }

void check_sigma(double sigma, const char* what) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidArgument(std::string(what) + ": sigma must be positive");
  }
}

RealVector draw_projection(RngStream& rng, std::size_t d, Projection p) {
  return p == Projection::kGaussian ? gaussian_vector(rng, d) : rademacher_vector(rng, d);
}

double sm_term(const EnergyFamily& family, const ParamVector& theta, const RealVector& x, double hf) {
  return 0.5 * squared_norm(grad_x_energy(family, theta, x)) - hf * laplacian_x(family, theta, x);
}

struct DsmTerm {
  double loss;
  double cv;
};

// One DSM sample; draws z from rng.
DsmTerm dsm_term(const EnergyFamily& family, const ParamVector& theta, const RealVector& x,
                 double sigma, RngStream& rng, RealVector* z_out = nullptr) {
  const RealVector z = gaussian_vector(rng, x.dim());
  RealVector r = grad_x_energy(family, theta, x + sigma * z);
  axpy(-1.0 / sigma, z, r);
  const double cv = dsm_control_variate(z, score(family, theta, x), sigma);
  if (z_out) *z_out = z;
  return {0.5 * squared_norm(r), cv};
}

double ssm_term(const RealVector& v, const RealVector& g, const RealVector& hv, bool variance_reduced,
                double hf) {
  const double vg = dot(v, g);
  const double first = variance_reduced ? 0.5 * squared_norm(g) : 0.5 * vg * vg;
  return first - hf * dot(v, hv);
}

}  // namespace

LossReport sm_loss(const EnergyFamily& family, const ParamVector& theta, const Batch& batch,
                   HessianSign sign) {
  family.check_params(theta);
  check_batch(batch, family.dim(), "sm_loss");
  const double hf = hessian_factor(sign);
  const std::size_t d = family.dim();
  LossReport report;
  RunningStats losses;
  if (family.has_mixed_derivatives()) {
    detail::VectorStats grads(family.param_count());
    for (const auto& x : batch) {
      const RealVector g = grad_x_energy(family, theta, x);
      losses.add(0.5 * squared_norm(g) - hf * laplacian_x(family, theta, x));
      RealVector grad = *grad_theta_directional_derivative(family, theta, x, g);
      for (std::size_t j = 0; j < d; ++j) {
        axpy(-hf, *grad_theta_directional_curvature(family, theta, x, basis_vector(d, j)), grad);
      }
      grads.add(grad);
    }
    report.grad_theta = grads.mean();
    report.grad_theta_se = grads.standard_error();
  } else {
    for (const auto& x : batch) losses.add(sm_term(family, theta, x, hf));
    report.grad_theta = estimator_grad_theta(
        family, theta,
        [&](const ParamVector& p, RngStream&) {
          double acc = 0.0;
          for (const auto& x : batch) acc += sm_term(family, p, x, hf);
          return acc / static_cast<double>(batch.size());
        },
        RngStream(0));
  }
  report.loss = losses.mean();
  report.aux["loss_var"] = batch.size() > 1 ? losses.variance() : 0.0;
  return report;
}

double dsm_control_variate(const RealVector& z, const RealVector& score_at_x, double sigma) {
  require_same_dim(z, score_at_x, "dsm_control_variate");
  const double d = static_cast<double>(z.dim());
  return 2.0 / sigma * dot(z, score_at_x) + (squared_norm(z) - d) / (sigma * sigma);
}

namespace {

LossReport dsm_impl(const EnergyFamily& family, const ParamVector& theta, const Batch& batch,
                    double sigma, RngStream& rng, bool with_cv) {
  family.check_params(theta);
  check_batch(batch, family.dim(), with_cv ? "dsm_cv_loss" : "dsm_loss");
  check_sigma(sigma, with_cv ? "dsm_cv_loss" : "dsm_loss");
  const RngStream start = rng;
  LossReport report;
  RunningStats plain, corrected, cvs;
  if (family.has_mixed_derivatives()) {
    detail::VectorStats grads(family.param_count());
    RealVector z(family.dim());
    for (const auto& x : batch) {
      const auto t = dsm_term(family, theta, x, sigma, rng, &z);
      const RealVector x_noisy = x + sigma * z;
      RealVector r = grad_x_energy(family, theta, x_noisy);
      axpy(-1.0 / sigma, z, r);
      RealVector grad = *grad_theta_directional_derivative(family, theta, x_noisy, r);
      if (with_cv) axpy(1.0 / sigma, *grad_theta_directional_derivative(family, theta, x, z), grad);
      grads.add(grad);
      plain.add(t.loss);
      corrected.add(t.loss - 0.5 * t.cv);
      cvs.add(t.cv);
    }
    report.grad_theta = grads.mean();
    report.grad_theta_se = grads.standard_error();
  } else {
    for (const auto& x : batch) {
      const auto t = dsm_term(family, theta, x, sigma, rng);
      plain.add(t.loss);
      corrected.add(t.loss - 0.5 * t.cv);
      cvs.add(t.cv);
    }
    report.grad_theta = estimator_grad_theta(
        family, theta,
        [&](const ParamVector& p, RngStream& r) {
          double acc = 0.0;
          for (const auto& x : batch) {
            const auto t = dsm_term(family, p, x, sigma, r);
            acc += with_cv ? t.loss - 0.5 * t.cv : t.loss;
          }
          return acc / static_cast<double>(batch.size());
        },
        start);
  }
  const bool many = batch.size() > 1;
  if (with_cv) {
    report.loss = corrected.mean();
    report.aux["loss_var"] = many ? corrected.variance() : 0.0;
    report.aux["loss_var_plain"] = many ? plain.variance() : 0.0;
    report.aux["plain_loss"] = plain.mean();
    report.aux["cv_mean"] = cvs.mean();
    report.aux["cv_se"] = many ? cvs.standard_error() : 0.0;
  } else {
    report.loss = plain.mean();
    report.aux["loss_var"] = many ? plain.variance() : 0.0;
  }
  return report;
}

}  // namespace

LossReport dsm_loss(const EnergyFamily& family, const ParamVector& theta, const Batch& batch,
                    double sigma, RngStream& rng) {
  return dsm_impl(family, theta, batch, sigma, rng, false);
}

LossReport dsm_cv_loss(const EnergyFamily& family, const ParamVector& theta, const Batch& batch,
                       double sigma, RngStream& rng) {
  return dsm_impl(family, theta, batch, sigma, rng, true);
}

void SliceConfig::validate() const {
  if (num_slices == 0) throw InvalidArgument("SliceConfig: num_slices must be >= 1");
  if (projection != Projection::kGaussian && projection != Projection::kRademacher) {
    throw InvalidArgument("SliceConfig: unknown projection");
  }
}

LossReport ssm_loss(const EnergyFamily& family, const ParamVector& theta, const Batch& batch,
                    const SliceConfig& cfg, RngStream& rng, HessianSign sign) {
  family.check_params(theta);
  check_batch(batch, family.dim(), "ssm_loss");
  cfg.validate();
  const double hf = hessian_factor(sign);
  const std::size_t d = family.dim();
  const RngStream start = rng;
  const bool analytic = family.has_mixed_derivatives();
  std::optional<detail::VectorStats> grads;
  if (analytic) grads.emplace(family.param_count());

  double total = 0.0, var_sum = 0.0;
  for (const auto& x : batch) {
    const RealVector g = grad_x_energy(family, theta, x);
    RunningStats slices;
    std::optional<RealVector> mixed_g;
    if (analytic && cfg.variance_reduced) mixed_g = grad_theta_directional_derivative(family, theta, x, g);
    for (std::size_t k = 0; k < cfg.num_slices; ++k) {
      const RealVector v = draw_projection(rng, d, cfg.projection);
      const RealVector hv = hvp_x(family, theta, x, v);
      slices.add(ssm_term(v, g, hv, cfg.variance_reduced, hf));
      if (analytic) {
        RealVector grad = cfg.variance_reduced
                              ? *mixed_g
                              : dot(v, g) * *grad_theta_directional_derivative(family, theta, x, v);
        axpy(-hf, *grad_theta_directional_curvature(family, theta, x, v), grad);
        grads->add(grad);
      }
    }
    total += slices.mean();
    if (cfg.num_slices > 1) var_sum += slices.variance() / static_cast<double>(cfg.num_slices);
  }
  const double n = static_cast<double>(batch.size());
  LossReport report;
  report.loss = total / n;
  report.aux["loss_se"] = std::sqrt(var_sum) / n;
  if (analytic) {
    report.grad_theta = grads->mean();
    report.grad_theta_se = grads->standard_error();
  } else {
    report.grad_theta = estimator_grad_theta(
        family, theta,
        [&](const ParamVector& p, RngStream& r) {
          double acc = 0.0;
          for (const auto& x : batch) {
            const RealVector g = grad_x_energy(family, p, x);
            for (std::size_t k = 0; k < cfg.num_slices; ++k) {
              const RealVector v = draw_projection(r, d, cfg.projection);
              acc += ssm_term(v, g, hvp_x(family, p, x, v), cfg.variance_reduced, hf);
            }
          }
          return acc / (n * static_cast<double>(cfg.num_slices));
        },
        start);
  }
  return report;
}

LossReport ssm_fixed_direction(const EnergyFamily& family, const ParamVector& theta,
                               const Batch& batch, const RealVector& v) {
  family.check_params(theta);
  check_batch(batch, family.dim(), "ssm_fixed_direction");
  require_same_dim(batch.front(), v, "ssm_fixed_direction");
  auto mean_term = [&](const ParamVector& p) {
    double acc = 0.0;
    for (const auto& x : batch) {
      acc += ssm_term(v, grad_x_energy(family, p, x), hvp_x(family, p, x, v), false, 1.0);
    }
    return acc / static_cast<double>(batch.size());
  };
  LossReport report;
  report.loss = mean_term(theta);
  if (family.has_mixed_derivatives()) {
    detail::VectorStats grads(family.param_count());
    for (const auto& x : batch) {
      const double vg = dot(v, grad_x_energy(family, theta, x));
      RealVector grad = vg * *grad_theta_directional_derivative(family, theta, x, v);
      grad -= *grad_theta_directional_curvature(family, theta, x, v);
      grads.add(grad);
    }
    report.grad_theta = grads.mean();
    report.grad_theta_se = grads.standard_error();
  } else {
    report.grad_theta = estimator_grad_theta(
        family, theta, [&](const ParamVector& p, RngStream&) { return mean_term(p); }, RngStream(0));
  }
  return report;
}

}  // namespace ebm

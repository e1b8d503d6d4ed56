// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "ebm/estimators/nce.hpp"

#include <cmath>
#include <string>

#include "accumulate.hpp"
#include "ebm/numerics/errors.hpp"

namespace ebm {

ParamVector append_log_z(const ParamVector& theta, double c) {
  std::vector<double> values = theta.values().entries();
  values.push_back(c);
  auto layout = theta.layout();
  layout.push_back({kLogZBlock, theta.size(), 1});
  return ParamVector(RealVector(std::move(values)), std::move(layout));
}

ParamVector strip_log_z(const ParamVector& theta_with_logz) {
  const auto& layout = theta_with_logz.layout();
  if (layout.empty() || layout.back().name != kLogZBlock || layout.size() < 2) {
    throw InvalidArgument("strip_log_z: parameters have no trailing log_z block");
  }
  const std::size_t n = layout.back().offset;
  std::vector<double> values(theta_with_logz.values().begin(), theta_with_logz.values().begin() + n);
  return ParamVector(RealVector(std::move(values)), {layout.begin(), layout.end() - 1});
}

LossReport nce_loss(const EnergyFamily& family, const ParamVector& theta_with_logz,
                    const Batch& data, const Batch& noise, const NceConfig& cfg) {
  const ParamVector theta = cfg.learn_log_z ? strip_log_z(theta_with_logz) : theta_with_logz;
  const double c = cfg.learn_log_z ? theta_with_logz.block(kLogZBlock)[0] : 0.0;
  family.check_params(theta);
  check_batch(data, family.dim(), "nce_loss (data)");
  check_batch(noise, family.dim(), "nce_loss (noise)");
  cfg.noise.validate();
  if (cfg.noise.dim() != family.dim()) throw InvalidArgument("nce_loss: noise density has the wrong dim");
  if (cfg.nu < 0.0 || !std::isfinite(cfg.nu)) throw InvalidArgument("nce_loss: nu must be positive");
  const double n_data = static_cast<double>(data.size());
  const double n_noise = static_cast<double>(noise.size());
  const double log_nu = std::log(cfg.nu > 0.0 ? cfg.nu : n_data / n_noise);

  auto logit = [&](const RealVector& x, const char* which, std::size_t i) {
    const double log_pn = cfg.noise.log_density(x);
    if (!std::isfinite(log_pn)) {
      throw NumericError(std::string("nce_loss: noise log-density is not finite at ") + which + " point " +
                             std::to_string(i),
                         i);
    }
    return log_nu - energy(family, theta, x) - c - log_pn;
  };

  const std::size_t p = family.param_count();
  RealVector grad(theta_with_logz.size(), 0.0);
  double loss = 0.0;
  // Data terms: softplus(-G); dG/dtheta = -grad E, dG/dc = -1.
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double g = logit(data[i], "data", i);
    loss += detail::softplus(-g);
    const double w = detail::sigmoid(-g);
    const RealVector ge = grad_theta_energy(family, theta, data[i]);
    for (std::size_t k = 0; k < p; ++k) grad[k] += w * ge[k];
    if (cfg.learn_log_z) grad[p] += w;
  }
  // Noise terms: softplus(G).
  for (std::size_t i = 0; i < noise.size(); ++i) {
    const double g = logit(noise[i], "noise", i);
    loss += detail::softplus(g);
    const double w = detail::sigmoid(g);
    const RealVector ge = grad_theta_energy(family, theta, noise[i]);
    for (std::size_t k = 0; k < p; ++k) grad[k] -= w * ge[k];
    if (cfg.learn_log_z) grad[p] -= w;
  }
  const double total = n_data + n_noise;
  LossReport report;
  report.loss = loss / total;
  grad *= 1.0 / total;
  report.grad_theta = std::move(grad);
  return report;
}

LossReport shifted_nce_loss(const EnergyFamily& family, const ParamVector& theta,
                            const Batch& batch, const RealVector& v) {
  family.check_params(theta);
  check_batch(batch, family.dim(), "shifted_nce_loss");
  require_same_dim(batch.front(), v, "shifted_nce_loss");
  if (squared_norm(v) == 0.0) throw InvalidArgument("shifted_nce_loss: v must be non-zero");
  detail::VectorStats grads(family.param_count());
  double loss = 0.0;
  for (const auto& x : batch) {
    const double e = energy(family, theta, x);
    const RealVector x_minus = x - v, x_plus = x + v;
    const double a = e - energy(family, theta, x_minus);
    const double b = e - energy(family, theta, x_plus);
    loss += detail::softplus(a) + detail::softplus(b);
    const RealVector ge = grad_theta_energy(family, theta, x);
    RealVector grad = detail::sigmoid(a) * (ge - grad_theta_energy(family, theta, x_minus));
    axpy(detail::sigmoid(b), ge - grad_theta_energy(family, theta, x_plus), grad);
    grads.add(grad);
  }
  LossReport report;
  report.loss = loss / static_cast<double>(batch.size());
  report.grad_theta = grads.mean();
  report.grad_theta_se = grads.standard_error();
  return report;
}

}  // namespace ebm

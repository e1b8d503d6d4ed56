// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "ebm/energy/family.hpp"

#include <cmath>
#include <string>

#include "ebm/numerics/errors.hpp"
#include "kinds.hpp"

namespace ebm {

namespace {

template <typename... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <typename... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::size_t total_length(const std::vector<ParamBlock>& layout) {
  std::size_t n = 0;
  for (const auto& b : layout) n += b.length;
  return n;
}

void require_finite(double value, const char* op) {
  if (!std::isfinite(value)) throw NumericError(std::string(op) + ": non-finite result");
}

RealVector finite_vector(std::vector<double> values, const char* op) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      throw NumericError(std::string(op) + ": non-finite result at index " + std::to_string(i), i);
    }
  }
  return RealVector(std::move(values));
}

}  // namespace

EnergyFamily::EnergyFamily(EnergyKind kind, std::size_t dim, std::size_t param_count,
                           std::vector<ParamBlock> layout)
    : kind_(std::move(kind)), dim_(dim), param_count_(param_count), layout_(std::move(layout)) {}

EnergyFamily EnergyFamily::gaussian(std::size_t dim) {
  if (dim == 0) throw InvalidArgument("Gaussian family: dim must be positive");
  GaussianEnergy k{dim};
  auto layout = detail::layout_of(k);
  const std::size_t n = total_length(layout);
  return EnergyFamily(k, dim, n, std::move(layout));
}

EnergyFamily EnergyFamily::mixture_rbf(std::size_t components, std::size_t dim) {
  if (components == 0 || dim == 0) {
    throw InvalidArgument("MixtureRBF family: components and dim must be positive");
  }
  MixtureRbfEnergy k{components, dim};
  auto layout = detail::layout_of(k);
  const std::size_t n = total_length(layout);
  return EnergyFamily(k, dim, n, std::move(layout));
}

EnergyFamily EnergyFamily::poly1d(unsigned degree) {
  if (degree < 2 || degree % 2 != 0) {
    throw InvalidArgument("Poly1D family: degree must be even and >= 2");
  }
  Poly1DEnergy k{degree};
  auto layout = detail::layout_of(k);
  const std::size_t n = total_length(layout);
  return EnergyFamily(k, 1, n, std::move(layout));
}

EnergyFamily EnergyFamily::mlp(std::vector<std::size_t> layer_sizes) {
  if (layer_sizes.size() < 2 || layer_sizes.back() != 1) {
    throw InvalidArgument("MLP family: layer sizes must be {d, ..., 1}");
  }
  for (std::size_t s : layer_sizes) {
    if (s == 0) throw InvalidArgument("MLP family: layer sizes must be positive");
  }
  const std::size_t d = layer_sizes.front();
  MlpEnergy k{std::move(layer_sizes)};
  auto layout = detail::layout_of(k);
  const std::size_t n = total_length(layout);
  return EnergyFamily(std::move(k), d, n, std::move(layout));
}

std::string EnergyFamily::name() const {
  return std::visit(
      Overloaded{
          [](const GaussianEnergy& k) { return "Gaussian(" + std::to_string(k.dim) + ")"; },
          [](const MixtureRbfEnergy& k) {
            return "MixtureRBF(" + std::to_string(k.components) + "," + std::to_string(k.dim) + ")";
          },
          [](const Poly1DEnergy& k) { return "Poly1D(" + std::to_string(k.degree) + ")"; },
          [](const MlpEnergy& k) {
            std::string s = "MLP(";
            for (std::size_t i = 0; i < k.layer_sizes.size(); ++i) {
              s += (i ? "," : "") + std::to_string(k.layer_sizes[i]);
            }
            return s + ")";
          },
      },
      kind_);
}

ParamVector EnergyFamily::zero_params() const {
  return ParamVector(RealVector(param_count_, 0.0), layout_);
}

void EnergyFamily::check_params(const ParamVector& theta) const {
  if (theta.layout() != layout_) {
    throw InvalidArgument("parameter layout does not match family " + name());
  }
}

void EnergyFamily::check_point(const ParamVector& theta, const RealVector& x) const {
  check_params(theta);
  if (x.dim() != dim_) {
    throw InvalidArgument("point has dim " + std::to_string(x.dim()) + ", family " + name() +
                          " expects " + std::to_string(dim_));
  }
}

bool EnergyFamily::has_mixed_derivatives() const {
  return std::holds_alternative<GaussianEnergy>(kind_) || std::holds_alternative<Poly1DEnergy>(kind_);
}

double energy(const EnergyFamily& family, const ParamVector& theta, const RealVector& x) {
  family.check_point(theta, x);
  const double e = std::visit(
      [&](const auto& k) { return detail::energy_of(k, theta.values().view(), x.view()); },
      family.kind());
  require_finite(e, "energy");
  return e;
}

RealVector grad_x_energy(const EnergyFamily& family, const ParamVector& theta, const RealVector& x) {
  family.check_point(theta, x);
  std::vector<double> out(family.dim());
  std::visit([&](const auto& k) { detail::grad_x_of(k, theta.values().view(), x.view(), out); },
             family.kind());
  return finite_vector(std::move(out), "grad_x_energy");
}

RealVector score(const EnergyFamily& family, const ParamVector& theta, const RealVector& x) {
  return -grad_x_energy(family, theta, x);
}

RealVector grad_theta_energy(const EnergyFamily& family, const ParamVector& theta,
                             const RealVector& x) {
  family.check_point(theta, x);
  std::vector<double> out(family.param_count());
  std::visit([&](const auto& k) { detail::grad_theta_of(k, theta.values().view(), x.view(), out); },
             family.kind());
  return finite_vector(std::move(out), "grad_theta_energy");
}

RealVector hvp_x(const EnergyFamily& family, const ParamVector& theta, const RealVector& x,
                 const RealVector& v) {
  family.check_point(theta, x);
  require_same_dim(x, v, "hvp_x");
  std::vector<double> out(family.dim());
  std::visit(
      [&](const auto& k) { detail::hvp_of(k, theta.values().view(), x.view(), v.view(), out); },
      family.kind());
  return finite_vector(std::move(out), "hvp_x");
}

double laplacian_x(const EnergyFamily& family, const ParamVector& theta, const RealVector& x) {
  family.check_point(theta, x);
  const double lap = std::visit(
      [&](const auto& k) { return detail::laplacian_of(k, theta.values().view(), x.view()); },
      family.kind());
  require_finite(lap, "laplacian_x");
  return lap;
}

std::optional<RealVector> grad_theta_directional_derivative(const EnergyFamily& family,
                                                            const ParamVector& theta,
                                                            const RealVector& x,
                                                            const RealVector& v) {
  family.check_point(theta, x);
  require_same_dim(x, v, "grad_theta_directional_derivative");
  std::vector<double> out(family.param_count());
  const bool ok = std::visit(
      Overloaded{
          [&](const GaussianEnergy& k) {
            detail::mixed_grad_of(k, theta.values().view(), x.view(), v.view(), out);
            return true;
          },
          [&](const Poly1DEnergy& k) {
            detail::mixed_grad_of(k, theta.values().view(), x.view(), v.view(), out);
            return true;
          },
          [](const auto&) { return false; },
      },
      family.kind());
  if (!ok) return std::nullopt;
  return finite_vector(std::move(out), "grad_theta_directional_derivative");
}

std::optional<RealVector> grad_theta_directional_curvature(const EnergyFamily& family,
                                                           const ParamVector& theta,
                                                           const RealVector& x,
                                                           const RealVector& v) {
  family.check_point(theta, x);
  require_same_dim(x, v, "grad_theta_directional_curvature");
  std::vector<double> out(family.param_count());
  const bool ok = std::visit(
      Overloaded{
          [&](const GaussianEnergy& k) {
            detail::mixed_curv_of(k, theta.values().view(), x.view(), v.view(), out);
            return true;
          },
          [&](const Poly1DEnergy& k) {
            detail::mixed_curv_of(k, theta.values().view(), x.view(), v.view(), out);
            return true;
          },
          [](const auto&) { return false; },
      },
      family.kind());
  if (!ok) return std::nullopt;
  return finite_vector(std::move(out), "grad_theta_directional_curvature");
}

ParamVector gaussian_params(const std::vector<double>& mu, const std::vector<double>& chol_log_diag,
                            const std::vector<double>& chol_offdiag) {
  const std::size_t d = mu.size();
  if (d == 0 || chol_log_diag.size() != d || chol_offdiag.size() != d * (d - 1) / 2) {
    throw InvalidArgument("gaussian_params: inconsistent block sizes");
  }
  std::vector<std::pair<std::string, std::vector<double>>> blocks = {{"mu", mu},
                                                                     {"chol_log_diag", chol_log_diag}};
  if (d > 1) blocks.emplace_back("chol_offdiag", chol_offdiag);
  return ParamVector::from_blocks(blocks);
}

ParamVector gaussian_params_diag(const std::vector<double>& mu,
                                 const std::vector<double>& precision_diag) {
  if (precision_diag.size() != mu.size()) {
    throw InvalidArgument("gaussian_params_diag: size mismatch");
  }
  std::vector<double> log_diag(mu.size());
  for (std::size_t i = 0; i < mu.size(); ++i) {
    if (!(precision_diag[i] > 0.0)) throw InvalidArgument("gaussian_params_diag: precision must be > 0");
    log_diag[i] = 0.5 * std::log(precision_diag[i]);
  }
  return gaussian_params(mu, log_diag, std::vector<double>(mu.size() * (mu.size() - 1) / 2, 0.0));
}

std::vector<double> gaussian_precision(const EnergyFamily& family, const ParamVector& theta) {
  if (!std::holds_alternative<GaussianEnergy>(family.kind())) {
    throw InvalidArgument("gaussian_precision: family is not Gaussian");
  }
  family.check_params(theta);
  const std::size_t d = family.dim();
  std::vector<double> l(d * d, 0.0);
  const auto log_diag = theta.block("chol_log_diag");
  for (std::size_t i = 0; i < d; ++i) {
    l[i * d + i] = std::exp(log_diag[i]);
    for (std::size_t j = 0; j < i; ++j) l[i * d + j] = theta.block("chol_offdiag")[i * (i - 1) / 2 + j];
  }
  std::vector<double> p(d * d, 0.0);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) {
      for (std::size_t k = 0; k < d; ++k) p[i * d + j] += l[i * d + k] * l[j * d + k];
    }
  }
  return p;
}

ParamVector poly1d_params(const std::vector<double>& coefficients) {
  if (coefficients.size() < 3 || (coefficients.size() - 1) % 2 != 0) {
    throw InvalidArgument("poly1d_params: need an even degree >= 2");
  }
  if (!(coefficients.back() > 0.0)) {
    throw InvalidArgument("poly1d_params: leading coefficient must be positive");
  }
  std::vector<double> coef(coefficients.begin(), coefficients.end() - 1);
  return ParamVector::from_blocks({{"coef", coef}, {"log_lead", {std::log(coefficients.back())}}});
}

}  // namespace ebm

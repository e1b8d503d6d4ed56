// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "kinds.hpp"

namespace ebm::detail {

namespace {

// Dense lower-triangular factor, row-major d x d.
std::vector<double> cholesky_factor(std::size_t d, In theta) {
  std::vector<double> l(d * d, 0.0);
  const In log_diag = theta.subspan(d, d);
  const In off = theta.subspan(2 * d);
  for (std::size_t i = 0; i < d; ++i) {
    l[i * d + i] = std::exp(log_diag[i]);
    for (std::size_t j = 0; j < i; ++j) l[i * d + j] = off[i * (i - 1) / 2 + j];
  }
  return l;
}

// u = L^T r
std::vector<double> lt_times(std::size_t d, const std::vector<double>& l, In r) {
  std::vector<double> u(d, 0.0);
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = j; i < d; ++i) u[j] += l[i * d + j] * r[i];
  }
  return u;
}

// out = L u
void l_times(std::size_t d, const std::vector<double>& l, const std::vector<double>& u, Out out) {
  for (std::size_t i = 0; i < d; ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= i; ++j) acc += l[i * d + j] * u[j];
    out[i] = acc;
  }
}

std::vector<double> residual(std::size_t d, In theta, In x) {
  std::vector<double> r(d);
  for (std::size_t i = 0; i < d; ++i) r[i] = x[i] - theta[i];
  return r;
}

// Writes d/dL_ij of a scalar whose derivative w.r.t. the dense factor is
// dl(i, j), mapping the diagonal through the log reparameterisation.
template <typename DL>
void scatter_factor_grad(std::size_t d, const std::vector<double>& l, DL&& dl, Out out) {
  for (std::size_t i = 0; i < d; ++i) {
    out[d + i] = dl(i, i) * l[i * d + i];
    for (std::size_t j = 0; j < i; ++j) out[2 * d + i * (i - 1) / 2 + j] = dl(i, j);
  }
}

}  // namespace

std::vector<ParamBlock> layout_of(const GaussianEnergy& k) {
  const std::size_t d = k.dim;
  std::vector<ParamBlock> layout = {{"mu", 0, d}, {"chol_log_diag", d, d}};
  if (d > 1) layout.push_back({"chol_offdiag", 2 * d, d * (d - 1) / 2});
  return layout;
}

double energy_of(const GaussianEnergy& k, In theta, In x) {
  const std::size_t d = k.dim;
  const auto l = cholesky_factor(d, theta);
  const auto r = residual(d, theta, x);
  const auto u = lt_times(d, l, r);
  double acc = 0.0;
  for (double ui : u) acc += ui * ui;
  return 0.5 * acc;
}

void grad_x_of(const GaussianEnergy& k, In theta, In x, Out out) {
  const std::size_t d = k.dim;
  const auto l = cholesky_factor(d, theta);
  const auto r = residual(d, theta, x);
  l_times(d, l, lt_times(d, l, r), out);
}

void grad_theta_of(const GaussianEnergy& k, In theta, In x, Out out) {
  const std::size_t d = k.dim;
  const auto l = cholesky_factor(d, theta);
  const auto r = residual(d, theta, x);
  const auto u = lt_times(d, l, r);
  // dE/dmu = -P r
  l_times(d, l, u, out.subspan(0, d));
  for (std::size_t i = 0; i < d; ++i) out[i] = -out[i];
  scatter_factor_grad(d, l, [&](std::size_t i, std::size_t j) { return u[j] * r[i]; }, out);
}

void hvp_of(const GaussianEnergy& k, In theta, In /*x*/, In v, Out out) {
  const std::size_t d = k.dim;
  const auto l = cholesky_factor(d, theta);
  l_times(d, l, lt_times(d, l, v), out);
}

double laplacian_of(const GaussianEnergy& k, In theta, In /*x*/) {
  const std::size_t d = k.dim;
  const auto l = cholesky_factor(d, theta);
  double acc = 0.0;
  for (double lij : l) acc += lij * lij;
  return acc;
}

void mixed_grad_of(const GaussianEnergy& k, In theta, In x, In v, Out out) {
  // v^T grad_x E = (L^T v) . (L^T r)
  const std::size_t d = k.dim;
  const auto l = cholesky_factor(d, theta);
  const auto r = residual(d, theta, x);
  const auto u = lt_times(d, l, r);
  const auto a = lt_times(d, l, v);
  l_times(d, l, a, out.subspan(0, d));
  for (std::size_t i = 0; i < d; ++i) out[i] = -out[i];
  scatter_factor_grad(
      d, l, [&](std::size_t i, std::size_t j) { return v[i] * u[j] + a[j] * r[i]; }, out);
}

void mixed_curv_of(const GaussianEnergy& k, In theta, In /*x*/, In v, Out out) {
  // v^T P v = |L^T v|^2
  const std::size_t d = k.dim;
  const auto l = cholesky_factor(d, theta);
  const auto a = lt_times(d, l, v);
  for (std::size_t i = 0; i < d; ++i) out[i] = 0.0;
  scatter_factor_grad(d, l, [&](std::size_t i, std::size_t j) { return 2.0 * a[j] * v[i]; }, out);
}

}  // namespace ebm::detail

// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>

#include "kinds.hpp"

namespace ebm::detail {

namespace {

// a_j for j = 0..n with a_n = exp(b).
inline double coefficient(const Poly1DEnergy& k, In theta, unsigned j) {
  return j == k.degree ? std::exp(theta[k.degree]) : theta[j];
}

// x^p with x^p = 0 for negative p (derivative of a lower-order term).
inline double power(double x, int p) { return p < 0 ? 0.0 : std::pow(x, p); }

}  // namespace

std::vector<ParamBlock> layout_of(const Poly1DEnergy& k) {
  return {{"coef", 0, k.degree}, {"log_lead", k.degree, 1}};
}

double energy_of(const Poly1DEnergy& k, In theta, In x) {
  // Horner from the leading coefficient down.
  double acc = 0.0;
  for (int j = static_cast<int>(k.degree); j >= 0; --j) {
    acc = acc * x[0] + coefficient(k, theta, static_cast<unsigned>(j));
  }
  return acc;
}

void grad_x_of(const Poly1DEnergy& k, In theta, In x, Out out) {
  double acc = 0.0;
  for (int j = static_cast<int>(k.degree); j >= 1; --j) {
    acc = acc * x[0] + j * coefficient(k, theta, static_cast<unsigned>(j));
  }
  out[0] = acc;
}

void grad_theta_of(const Poly1DEnergy& k, In theta, In x, Out out) {
  for (unsigned j = 0; j < k.degree; ++j) out[j] = power(x[0], static_cast<int>(j));
  out[k.degree] = std::exp(theta[k.degree]) * power(x[0], static_cast<int>(k.degree));
}

void hvp_of(const Poly1DEnergy& k, In theta, In x, In v, Out out) {
  out[0] = laplacian_of(k, theta, x) * v[0];
}

double laplacian_of(const Poly1DEnergy& k, In theta, In x) {
  double acc = 0.0;
  for (int j = static_cast<int>(k.degree); j >= 2; --j) {
    acc = acc * x[0] + j * (j - 1) * coefficient(k, theta, static_cast<unsigned>(j));
  }
  return acc;
}

void mixed_grad_of(const Poly1DEnergy& k, In theta, In x, In v, Out out) {
  for (unsigned j = 0; j <= k.degree; ++j) {
    const int jj = static_cast<int>(j);
    out[j] = v[0] * jj * power(x[0], jj - 1);
  }
  out[k.degree] *= std::exp(theta[k.degree]);
}

void mixed_curv_of(const Poly1DEnergy& k, In theta, In x, In v, Out out) {
  for (unsigned j = 0; j <= k.degree; ++j) {
    const int jj = static_cast<int>(j);
    out[j] = v[0] * v[0] * jj * (jj - 1) * power(x[0], jj - 2);
  }
  out[k.degree] *= std::exp(theta[k.degree]);
}

}  // namespace ebm::detail

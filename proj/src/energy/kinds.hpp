// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

// Per-family kernels. All take raw spans that the dispatcher in family.cpp has
// already validated; outputs are pre-sized by the caller.

#ifndef EBM_SRC_ENERGY_KINDS_HPP_
#define EBM_SRC_ENERGY_KINDS_HPP_

#include <span>
#include <vector>

#include "ebm/energy/family.hpp"

namespace ebm::detail {

using In = std::span<const double>;
using Out = std::span<double>;

std::vector<ParamBlock> layout_of(const GaussianEnergy& k);
double energy_of(const GaussianEnergy& k, In theta, In x);
void grad_x_of(const GaussianEnergy& k, In theta, In x, Out out);
void grad_theta_of(const GaussianEnergy& k, In theta, In x, Out out);
void hvp_of(const GaussianEnergy& k, In theta, In x, In v, Out out);
double laplacian_of(const GaussianEnergy& k, In theta, In x);
void mixed_grad_of(const GaussianEnergy& k, In theta, In x, In v, Out out);
void mixed_curv_of(const GaussianEnergy& k, In theta, In x, In v, Out out);

std::vector<ParamBlock> layout_of(const MixtureRbfEnergy& k);
double energy_of(const MixtureRbfEnergy& k, In theta, In x);
void grad_x_of(const MixtureRbfEnergy& k, In theta, In x, Out out);
void grad_theta_of(const MixtureRbfEnergy& k, In theta, In x, Out out);
void hvp_of(const MixtureRbfEnergy& k, In theta, In x, In v, Out out);
double laplacian_of(const MixtureRbfEnergy& k, In theta, In x);

std::vector<ParamBlock> layout_of(const Poly1DEnergy& k);
double energy_of(const Poly1DEnergy& k, In theta, In x);
void grad_x_of(const Poly1DEnergy& k, In theta, In x, Out out);
void grad_theta_of(const Poly1DEnergy& k, In theta, In x, Out out);
void hvp_of(const Poly1DEnergy& k, In theta, In x, In v, Out out);
double laplacian_of(const Poly1DEnergy& k, In theta, In x);
void mixed_grad_of(const Poly1DEnergy& k, In theta, In x, In v, Out out);
void mixed_curv_of(const Poly1DEnergy& k, In theta, In x, In v, Out out);

std::vector<ParamBlock> layout_of(const MlpEnergy& k);
double energy_of(const MlpEnergy& k, In theta, In x);
void grad_x_of(const MlpEnergy& k, In theta, In x, Out out);
void grad_theta_of(const MlpEnergy& k, In theta, In x, Out out);
void hvp_of(const MlpEnergy& k, In theta, In x, In v, Out out);
double laplacian_of(const MlpEnergy& k, In theta, In x);

}  // namespace ebm::detail

#endif  // EBM_SRC_ENERGY_KINDS_HPP_

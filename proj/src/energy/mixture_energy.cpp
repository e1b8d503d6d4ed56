// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kinds.hpp"

namespace ebm::detail {

namespace {

struct MixtureTerms {
  std::vector<double> log_joint;   // log pi_k + log N(x; mu_k, s_k^2 I)
  std::vector<double> resp;        // posterior responsibilities gamma_k
  std::vector<double> inv_var;     // 1 / s_k^2
  std::vector<double> sq_dist;     // |x - mu_k|^2
  double log_sum = 0.0;            // log sum_k exp(log_joint_k) = -E
};

double log_sum_exp(const std::vector<double>& v) {
  const double m = *std::max_element(v.begin(), v.end());
  double acc = 0.0;
  for (double e : v) acc += std::exp(e - m);
  return m + std::log(acc);
}

MixtureTerms evaluate(const MixtureRbfEnergy& k, In theta, In x) {
  const std::size_t kk = k.components;
  const std::size_t d = k.dim;
  const In logits = theta.subspan(0, kk);
  const In means = theta.subspan(kk, kk * d);
  const In log_sigma = theta.subspan(kk + kk * d, kk);

  std::vector<double> w(logits.begin(), logits.end());
  const double log_norm = log_sum_exp(w);

  MixtureTerms t;
  t.log_joint.resize(kk);
  t.inv_var.resize(kk);
  t.sq_dist.resize(kk);
  const double half_log_2pi = 0.5 * std::log(2.0 * std::numbers::pi);
  for (std::size_t c = 0; c < kk; ++c) {
    double dist = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double diff = x[i] - means[c * d + i];
      dist += diff * diff;
    }
    t.inv_var[c] = std::exp(-2.0 * log_sigma[c]);
    t.sq_dist[c] = dist;
    t.log_joint[c] = (logits[c] - log_norm) - static_cast<double>(d) * (half_log_2pi + log_sigma[c]) -
                     0.5 * dist * t.inv_var[c];
  }
  t.log_sum = log_sum_exp(t.log_joint);
  t.resp.resize(kk);
  for (std::size_t c = 0; c < kk; ++c) t.resp[c] = std::exp(t.log_joint[c] - t.log_sum);
  return t;
}

}  // namespace

std::vector<ParamBlock> layout_of(const MixtureRbfEnergy& k) {
  const std::size_t kk = k.components;
  return {{"logits", 0, kk}, {"means", kk, kk * k.dim}, {"log_sigma", kk + kk * k.dim, kk}};
}

double energy_of(const MixtureRbfEnergy& k, In theta, In x) { return -evaluate(k, theta, x).log_sum; }

void grad_x_of(const MixtureRbfEnergy& k, In theta, In x, Out out) {
  // grad E = sum_k gamma_k (x - mu_k) / s_k^2
  const auto t = evaluate(k, theta, x);
  const std::size_t d = k.dim;
  const In means = theta.subspan(k.components, k.components * d);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t c = 0; c < k.components; ++c) {
    const double w = t.resp[c] * t.inv_var[c];
    for (std::size_t i = 0; i < d; ++i) out[i] += w * (x[i] - means[c * d + i]);
  }
}

void grad_theta_of(const MixtureRbfEnergy& k, In theta, In x, Out out) {
  const auto t = evaluate(k, theta, x);
  const std::size_t kk = k.components;
  const std::size_t d = k.dim;
  const In logits = theta.subspan(0, kk);
  const In means = theta.subspan(kk, kk * d);

  std::vector<double> w(logits.begin(), logits.end());
  const double log_norm = log_sum_exp(w);
  for (std::size_t c = 0; c < kk; ++c) {
    // dE/dw_c = softmax(w)_c - gamma_c
    out[c] = std::exp(logits[c] - log_norm) - t.resp[c];
    const double g = t.resp[c] * t.inv_var[c];
    for (std::size_t i = 0; i < d; ++i) out[kk + c * d + i] = -g * (x[i] - means[c * d + i]);
    out[kk + kk * d + c] = t.resp[c] * (static_cast<double>(d) - t.sq_dist[c] * t.inv_var[c]);
  }
}

void hvp_of(const MixtureRbfEnergy& k, In theta, In x, In v, Out out) {
  // H = sum_k gamma_k I / s_k^2 - (sum_k gamma_k g_k g_k^T - gbar gbar^T),
  // g_k = -(x - mu_k) / s_k^2, gbar = sum_k gamma_k g_k.
  const auto t = evaluate(k, theta, x);
  const std::size_t d = k.dim;
  const In means = theta.subspan(k.components, k.components * d);
  std::vector<double> gbar(d, 0.0);
  std::vector<double> gk(d);
  std::fill(out.begin(), out.end(), 0.0);
  for (std::size_t c = 0; c < k.components; ++c) {
    double gv = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      gk[i] = -(x[i] - means[c * d + i]) * t.inv_var[c];
      gv += gk[i] * v[i];
    }
    for (std::size_t i = 0; i < d; ++i) {
      out[i] += t.resp[c] * (t.inv_var[c] * v[i] - gk[i] * gv);
      gbar[i] += t.resp[c] * gk[i];
    }
  }
  double gbar_v = 0.0;
  for (std::size_t i = 0; i < d; ++i) gbar_v += gbar[i] * v[i];
  for (std::size_t i = 0; i < d; ++i) out[i] += gbar[i] * gbar_v;
}

double laplacian_of(const MixtureRbfEnergy& k, In theta, In x) {
  // trace H = sum_k gamma_k (d / s_k^2 - |g_k|^2) + |gbar|^2
  const auto t = evaluate(k, theta, x);
  const std::size_t d = k.dim;
  const In means = theta.subspan(k.components, k.components * d);
  std::vector<double> gbar(d, 0.0);
  double acc = 0.0;
  for (std::size_t c = 0; c < k.components; ++c) {
    double gk_sq = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      const double gi = -(x[i] - means[c * d + i]) * t.inv_var[c];
      gk_sq += gi * gi;
      gbar[i] += t.resp[c] * gi;
    }
    acc += t.resp[c] * (static_cast<double>(d) * t.inv_var[c] - gk_sq);
  }
  for (double gi : gbar) acc += gi * gi;
  return acc;
}

}  // namespace ebm::detail

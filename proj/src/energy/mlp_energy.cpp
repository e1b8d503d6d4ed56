// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <string>

#include "kinds.hpp"

namespace ebm::detail {

namespace {

inline double softplus(double z) { return z > 0.0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z)); }

inline double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// Views of layer l's weights (row-major out x in) and bias inside theta.
struct Layer {
  std::size_t in;
  std::size_t out;
  std::size_t w_offset;
  std::size_t b_offset;
};

std::vector<Layer> layers_of(const MlpEnergy& k) {
  std::vector<Layer> layers;
  std::size_t offset = 0;
  for (std::size_t l = 0; l + 1 < k.layer_sizes.size(); ++l) {
    const std::size_t in = k.layer_sizes[l];
    const std::size_t out = k.layer_sizes[l + 1];
    layers.push_back({in, out, offset, offset + in * out});
    offset += in * out + out;
  }
  return layers;
}

// Forward pass. pre[l] = W_l a_l + b_l, act[l] = a_l (act[0] = x).
struct Forward {
  std::vector<std::vector<double>> pre;
  std::vector<std::vector<double>> act;
};

Forward forward(const std::vector<Layer>& layers, In theta, In x) {
  Forward f;
  f.act.emplace_back(x.begin(), x.end());
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Layer& ly = layers[l];
    const auto& a = f.act.back();
    std::vector<double> z(ly.out);
    for (std::size_t o = 0; o < ly.out; ++o) {
      double acc = theta[ly.b_offset + o];
      for (std::size_t i = 0; i < ly.in; ++i) acc += theta[ly.w_offset + o * ly.in + i] * a[i];
      z[o] = acc;
    }
    if (l + 1 < layers.size()) {
      std::vector<double> next(ly.out);
      for (std::size_t o = 0; o < ly.out; ++o) next[o] = softplus(z[o]);
      f.pre.push_back(std::move(z));
      f.act.push_back(std::move(next));
    } else {
      f.pre.push_back(std::move(z));
    }
  }
  return f;
}

// W_l^T delta
std::vector<double> transpose_apply(const Layer& ly, In theta, const std::vector<double>& delta) {
  std::vector<double> g(ly.in, 0.0);
  for (std::size_t o = 0; o < ly.out; ++o) {
    for (std::size_t i = 0; i < ly.in; ++i) g[i] += theta[ly.w_offset + o * ly.in + i] * delta[o];
  }
  return g;
}

// delta[l] = dE / d pre[l].
std::vector<std::vector<double>> backward(const std::vector<Layer>& layers, In theta,
                                          const Forward& f) {
  const std::size_t n = layers.size();
  std::vector<std::vector<double>> delta(n);
  delta[n - 1] = {1.0};
  for (std::size_t l = n - 1; l-- > 0;) {
    auto g = transpose_apply(layers[l + 1], theta, delta[l + 1]);
    for (std::size_t o = 0; o < g.size(); ++o) g[o] *= sigmoid(f.pre[l][o]);
    delta[l] = std::move(g);
  }
  return delta;
}

}  // namespace

std::vector<ParamBlock> layout_of(const MlpEnergy& k) {
  std::vector<ParamBlock> layout;
  std::size_t l = 0;
  for (const Layer& ly : layers_of(k)) {
    layout.push_back({"W" + std::to_string(l), ly.w_offset, ly.in * ly.out});
    layout.push_back({"b" + std::to_string(l), ly.b_offset, ly.out});
    ++l;
  }
  return layout;
}

double energy_of(const MlpEnergy& k, In theta, In x) {
  const auto layers = layers_of(k);
  return forward(layers, theta, x).pre.back()[0];
}

void grad_x_of(const MlpEnergy& k, In theta, In x, Out out) {
  const auto layers = layers_of(k);
  const auto f = forward(layers, theta, x);
  const auto delta = backward(layers, theta, f);
  const auto g = transpose_apply(layers[0], theta, delta[0]);
  std::copy(g.begin(), g.end(), out.begin());
}

void grad_theta_of(const MlpEnergy& k, In theta, In x, Out out) {
  const auto layers = layers_of(k);
  const auto f = forward(layers, theta, x);
  const auto delta = backward(layers, theta, f);
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const Layer& ly = layers[l];
    for (std::size_t o = 0; o < ly.out; ++o) {
      for (std::size_t i = 0; i < ly.in; ++i) out[ly.w_offset + o * ly.in + i] = delta[l][o] * f.act[l][i];
      out[ly.b_offset + o] = delta[l][o];
    }
  }
}

void hvp_of(const MlpEnergy& k, In theta, In x, In v, Out out) {
  // Forward-mode tangent (direction v) pushed through the forward pass and the
  // backward pass that computes grad_x E.
  const auto layers = layers_of(k);
  const auto f = forward(layers, theta, x);
  const auto delta = backward(layers, theta, f);
  const std::size_t n = layers.size();

  std::vector<std::vector<double>> pre_dot(n);
  std::vector<double> a_dot(v.begin(), v.end());
  for (std::size_t l = 0; l < n; ++l) {
    const Layer& ly = layers[l];
    std::vector<double> z_dot(ly.out, 0.0);
    for (std::size_t o = 0; o < ly.out; ++o) {
      for (std::size_t i = 0; i < ly.in; ++i) z_dot[o] += theta[ly.w_offset + o * ly.in + i] * a_dot[i];
    }
    if (l + 1 < n) {
      a_dot.assign(ly.out, 0.0);
      for (std::size_t o = 0; o < ly.out; ++o) a_dot[o] = sigmoid(f.pre[l][o]) * z_dot[o];
    }
    pre_dot[l] = std::move(z_dot);
  }

  std::vector<double> delta_dot = {0.0};
  for (std::size_t l = n - 1; l-- > 0;) {
    const auto g = transpose_apply(layers[l + 1], theta, delta[l + 1]);
    const auto g_dot = transpose_apply(layers[l + 1], theta, delta_dot);
    std::vector<double> next(g.size());
    for (std::size_t o = 0; o < g.size(); ++o) {
      const double s = sigmoid(f.pre[l][o]);
      next[o] = g_dot[o] * s + g[o] * s * (1.0 - s) * pre_dot[l][o];
    }
    delta_dot = std::move(next);
  }
  const auto hv = transpose_apply(layers[0], theta, delta_dot);
  std::copy(hv.begin(), hv.end(), out.begin());
}

double laplacian_of(const MlpEnergy& k, In theta, In x) {
  const std::size_t d = k.layer_sizes.front();
  std::vector<double> e(d, 0.0);
  std::vector<double> hv(d);
  double acc = 0.0;
  for (std::size_t i = 0; i < d; ++i) {
    e[i] = 1.0;
    hvp_of(k, theta, x, e, hv);
    acc += hv[i];
    e[i] = 0.0;
  }
  return acc;
}

}  // namespace ebm::detail

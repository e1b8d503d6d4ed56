// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "ebm/samplers/replay_buffer.hpp"

#include <cmath>

#include "ebm/numerics/errors.hpp"

namespace ebm {

ReplayBuffer::ReplayBuffer(std::size_t capacity, double reinit_prob)
    : capacity_(capacity), reinit_prob_(reinit_prob) {
  if (capacity == 0) throw InvalidArgument("ReplayBuffer: capacity must be positive");
  if (!(reinit_prob >= 0.0 && reinit_prob <= 1.0)) {
    throw InvalidArgument("ReplayBuffer: reinit_prob must lie in [0, 1]");
  }
}

void ReplayBuffer::push(const RealVector& x, RngStream& rng) {
  if (!items_.empty()) require_same_dim(items_.front(), x, "ReplayBuffer::push");
  if (items_.size() < capacity_) {
    items_.push_back(x);
    inserted_at_.push_back(pushes_);
  } else {
    const auto slot = rng.uniform_index(capacity_);
    items_[slot] = x;
    inserted_at_[slot] = pushes_;
  }
  ++pushes_;
}

RealVector ReplayBuffer::init_sample(RngStream& rng,
                                     const std::function<RealVector(RngStream&)>& fresh) const {
  if (items_.empty()) return fresh(rng);
  const double u = rng.uniform();
  const auto idx = rng.uniform_index(items_.size());
  if (u < reinit_prob_) return fresh(rng);
  return items_[idx];
}

RealVector fresh_gaussian(RngStream& rng, std::size_t dim, double variance) {
  RealVector x = gaussian_vector(rng, dim);
  x *= std::sqrt(variance);
  return x;
}

}  // namespace ebm

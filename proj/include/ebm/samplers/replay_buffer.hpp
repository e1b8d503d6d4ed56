// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_SAMPLERS_REPLAY_BUFFER_HPP_
#define EBM_SAMPLERS_REPLAY_BUFFER_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "ebm/numerics/real_vector.hpp"
#include "ebm/numerics/rng.hpp"

namespace ebm {

inline constexpr std::size_t kDefaultBufferCapacity = 10'000;
inline constexpr double kDefaultReinitProb = 0.05;
inline constexpr double kDefaultFreshVariance = 4.0;

/// Store of past chain states for persistent chains.
class ReplayBuffer {
 public:
  explicit ReplayBuffer(std::size_t capacity = kDefaultBufferCapacity,
                        double reinit_prob = kDefaultReinitProb);

  std::size_t capacity() const { return capacity_; }
  double reinit_prob() const { return reinit_prob_; }
  std::size_t size() const { return items_.size(); }
  bool empty() const { return items_.empty(); }
  const std::vector<RealVector>& items() const { return items_; }
  /// Push index (0-based, counting every push) of each stored item.
  const std::vector<std::uint64_t>& insertion_indices() const { return inserted_at_; }

  /// Appends x; once full, overwrites a uniformly chosen stored item instead.
  /// Consumes one block of rng only when the buffer is full. Throws
  /// InvalidArgument when x's dim differs from stored items.
  void push(const RealVector& x, RngStream& rng);

  /// Fresh draw with probability reinit_prob (always when empty), otherwise a
  /// uniformly chosen stored item. Consumes two blocks of rng when non-empty,
  /// plus whatever `fresh` draws.
  RealVector init_sample(RngStream& rng, const std::function<RealVector(RngStream&)>& fresh) const;

 private:
  std::size_t capacity_;
  double reinit_prob_;
  std::uint64_t pushes_ = 0;
  std::vector<RealVector> items_;
  std::vector<std::uint64_t> inserted_at_;
};

/// Draw from N(0, variance I), the default fresh initializer.
RealVector fresh_gaussian(RngStream& rng, std::size_t dim, double variance = kDefaultFreshVariance);

}  // namespace ebm

#endif  // EBM_SAMPLERS_REPLAY_BUFFER_HPP_

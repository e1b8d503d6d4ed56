// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_NUMERICS_RNG_HPP_
#define EBM_NUMERICS_RNG_HPP_

#include <array>
#include <cstddef>
#include <cstdint>

#include "ebm/numerics/real_vector.hpp"

namespace ebm {

/// Philox4x32-10 block function (Salmon et al., SC'11). Maps a 128-bit
/// counter and 64-bit key to 128 pseudo-random bits.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key);

/// Counter-based random stream.
///
/// Every draw is a pure function of (seed, stream_id, counter): the seed is
/// the Philox key and (counter, stream_id) form the 128-bit block counter.
/// Each scalar draw below consumes exactly one block, i.e. advances `counter`
/// by one. A copy of the stream replays the same draws, which is what
/// common-random-number finite differences rely on.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0, std::uint64_t counter = 0)
      : seed_(seed), stream_id_(stream_id), counter_(counter) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  std::uint64_t counter() const { return counter_; }
  bool is_antithetic() const { return antithetic_; }

  /// Derives an independent child stream and advances this stream by one
  /// block. The child id is a hash of (stream_id, counter), so no two splits
  /// of the same lineage share a (stream_id, counter) pair.
  RngStream split();

  /// Same draws with normals and Rademacher signs negated and uniforms
  /// reflected (u -> 1 - u).
  RngStream antithetic() const;

  /// Raw 128 bits of the next block.
  std::array<std::uint32_t, 4> next_block();
  std::uint64_t next_u64();
  /// Uniform on the open interval (0, 1), 53-bit resolution. One block.
  double uniform();
  /// Standard normal via Box-Muller on the two 64-bit halves. One block.
  double normal();
  /// +1 or -1 with probability 1/2. One block.
  double rademacher();
  /// Uniform integer in [0, n). One block. n must be positive.
  std::uint64_t uniform_index(std::uint64_t n);

  friend bool operator==(const RngStream&, const RngStream&) = default;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t counter_;
  bool antithetic_ = false;
};

/// d i.i.d. N(0, 1) draws; consumes d blocks. Throws InvalidArgument on d == 0.
RealVector gaussian_vector(RngStream& rng, std::size_t d);

/// d i.i.d. Rademacher (+-1) draws; consumes d blocks. Throws InvalidArgument on d == 0.
RealVector rademacher_vector(RngStream& rng, std::size_t d);

}  // namespace ebm

#endif  // EBM_NUMERICS_RNG_HPP_

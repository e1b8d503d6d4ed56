// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "ebm/numerics/rng.hpp"

#include <cmath>
#include <numbers>

#include "ebm/numerics/errors.hpp"

namespace ebm {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
  const std::uint64_t product = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(product >> 32);
  lo = static_cast<std::uint32_t>(product);
}

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

inline double to_open_unit(std::uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    std::uint32_t hi0, lo0, hi1, lo1;
    mulhilo(kPhiloxM0, ctr[0], hi0, lo0);
    mulhilo(kPhiloxM1, ctr[2], hi1, lo1);
    ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

RngStream RngStream::split() {
  const std::uint64_t child_id = mix64(mix64(stream_id_) ^ mix64(counter_ + 0x632BE59BD9B4E019ull));
  ++counter_;
  RngStream child(seed_, child_id, 0);
  child.antithetic_ = antithetic_;
  return child;
}

RngStream RngStream::antithetic() const {
  RngStream copy = *this;
  copy.antithetic_ = !antithetic_;
  return copy;
}

std::array<std::uint32_t, 4> RngStream::next_block() {
  const std::array<std::uint32_t, 4> ctr = {
      static_cast<std::uint32_t>(counter_), static_cast<std::uint32_t>(counter_ >> 32),
      static_cast<std::uint32_t>(stream_id_), static_cast<std::uint32_t>(stream_id_ >> 32)};
  const std::array<std::uint32_t, 2> key = {static_cast<std::uint32_t>(seed_),
                                            static_cast<std::uint32_t>(seed_ >> 32)};
  ++counter_;
  return philox4x32(ctr, key);
}

std::uint64_t RngStream::next_u64() {
  const auto b = next_block();
  return (static_cast<std::uint64_t>(b[1]) << 32) | b[0];
}

double RngStream::uniform() {
  const double u = to_open_unit(next_u64());
  return antithetic_ ? 1.0 - u : u;
}

double RngStream::normal() {
  const auto b = next_block();
  const double u1 = to_open_unit((static_cast<std::uint64_t>(b[1]) << 32) | b[0]);
  const double u2 = to_open_unit((static_cast<std::uint64_t>(b[3]) << 32) | b[2]);
  const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  return antithetic_ ? -z : z;
}

double RngStream::rademacher() {
  const double s = (next_block()[0] & 1u) ? 1.0 : -1.0;
  return antithetic_ ? -s : s;
}

std::uint64_t RngStream::uniform_index(std::uint64_t n) {
  if (n == 0) throw InvalidArgument("uniform_index: n must be positive");
  // 53-bit uniform scaled to [0, n); bias is at most n / 2^53.
  const double u = to_open_unit(next_u64());
  const auto idx = static_cast<std::uint64_t>(u * static_cast<double>(n));
  return idx < n ? idx : n - 1;
}

RealVector gaussian_vector(RngStream& rng, std::size_t d) {
  if (d == 0) throw InvalidArgument("gaussian_vector: invalid dimension 0");
  RealVector out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = rng.normal();
  return out;
}

RealVector rademacher_vector(RngStream& rng, std::size_t d) {
  if (d == 0) throw InvalidArgument("rademacher_vector: invalid dimension 0");
  RealVector out(d);
  for (std::size_t i = 0; i < d; ++i) out[i] = rng.rademacher();
  return out;
}

}  // namespace ebm

// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "ebm/energy/family.hpp"
#include "ebm/numerics/errors.hpp"
#include "ebm/numerics/stats.hpp"
#include "ebm/samplers/langevin.hpp"
#include "ebm/samplers/replay_buffer.hpp"

namespace ebm {
namespace {

RealVector std_normal_score(const RealVector& x) { return -x; }
double std_normal_energy(const RealVector& x) { return 0.5 * squared_norm(x); }

TEST(Langevin, ZeroScoreSingleStepAddsScaledNoise) {
  RngStream rng(1), replay(1);
  const RealVector x0{0.5, -1.0};
  const auto out = langevin_chain([](const RealVector& x) { return RealVector(x.dim(), 0.0); }, x0,
                                  {.step_size = 0.3, .num_steps = 1}, rng);
  const RealVector z = gaussian_vector(replay, 2);
  EXPECT_EQ(out.final, x0 + 0.3 * z);
  EXPECT_EQ(rng, replay);
}

TEST(Langevin, RejectsBadConfig) {
  RngStream rng(1);
  EXPECT_THROW(langevin_chain(std_normal_score, RealVector{0.0}, {.step_size = 0.0}, rng),
               InvalidArgument);
  EXPECT_THROW(langevin_chain(std_normal_score, RealVector{0.0}, {.step_size = 0.1, .num_steps = 0}, rng),
               InvalidArgument);
  EXPECT_THROW(langevin_chain(std_normal_score, RealVector{0.0}, {.step_size = 0.1, .adjust = true}, rng),
               InvalidArgument);
}

TEST(Langevin, DivergingChainThrowsWithStep) {
  RngStream rng(2);
  // Score pushes outwards: x grows like (1 + eps^2/2)^k and overflows.
  try {
    langevin_chain([](const RealVector& x) { return 1e3 * x; }, RealVector{1.0},
                   {.step_size = 1.0, .num_steps = 10'000}, rng);
    FAIL() << "expected ChainDivergence";
  } catch (const ChainDivergence& e) {
    EXPECT_GT(e.step(), 1u);
    EXPECT_LT(e.step(), 10'000u);
  }
}

TEST(Langevin, DeterministicForIdenticalStreams) {
  RngStream a(3), b(3);
  const LangevinConfig cfg{.step_size = 0.2, .num_steps = 50, .adjust = true};
  const auto ra = langevin_chain(std_normal_score, RealVector{2.0}, cfg, a, std_normal_energy);
  const auto rb = langevin_chain(std_normal_score, RealVector{2.0}, cfg, b, std_normal_energy);
  EXPECT_EQ(ra.final, rb.final);
  EXPECT_EQ(ra.accepted, rb.accepted);
}

TEST(Langevin, StationaryMomentsSmallScale) {
  // Chains start at the target, so only discretization and MC error remain.
  RngStream parent(4);
  RunningStats stats;
  for (int c = 0; c < 2000; ++c) {
    RngStream rng = parent.split();
    const RealVector x0{rng.normal()};
    stats.add(langevin_chain(std_normal_score, x0, {.step_size = 0.1, .num_steps = 200}, rng).final[0]);
  }
  EXPECT_LT(std::abs(stats.mean()), 0.1);
  EXPECT_GT(stats.variance(), 0.85);
  EXPECT_LT(stats.variance(), 1.15);
}

TEST(Mala, AcceptanceRateAtSmallStep) {
  RngStream rng(5);
  const auto out = langevin_chain(std_normal_score, RealVector{0.0},
                                  {.step_size = 0.1, .num_steps = 100'000, .adjust = true}, rng,
                                  std_normal_energy);
  EXPECT_GT(out.accept_rate(), 0.5);
  EXPECT_LT(out.accept_rate(), 1.0);
}

TEST(Mala, LogRatioIsZeroForSamePoint) {
  const RealVector x{0.7, -0.2};
  EXPECT_EQ(mala_log_accept_ratio(std_normal_energy, std_normal_score, x, x, 0.4), 0.0);
}

TEST(Mala, LogRatioMatchesBruteForceProposalDensities) {
  // E(x) = 1/2 a (x - m)^2 in 1-D, proposal densities evaluated directly.
  const double a = 2.5, m = 0.3, eps = 0.7;
  auto e = [&](const RealVector& x) { return 0.5 * a * (x[0] - m) * (x[0] - m); };
  auto s = [&](const RealVector& x) { return RealVector{-a * (x[0] - m)}; };
  auto log_q = [&](double to, double from) {
    const double mean = from + 0.5 * eps * eps * (-a * (from - m));
    return -0.5 * std::log(2.0 * std::numbers::pi * eps * eps) - (to - mean) * (to - mean) / (2.0 * eps * eps);
  };
  RngStream rng(6);
  for (int t = 0; t < 20; ++t) {
    const double x = 2.0 * rng.normal(), y = 2.0 * rng.normal();
    const double brute = (-e(RealVector{y}) + log_q(x, y)) - (-e(RealVector{x}) + log_q(y, x));
    EXPECT_NEAR(mala_log_accept_ratio(e, s, RealVector{x}, RealVector{y}, eps), brute, 1e-10);
  }
}

TEST(Mala, EnergyShiftChangesNothing) {
  auto shifted = [](const RealVector& x) { return std_normal_energy(x) + 123.0; };
  const RealVector x{0.1}, y{0.9};
  EXPECT_NEAR(mala_log_accept_ratio(std_normal_energy, std_normal_score, x, y, 0.5),
              mala_log_accept_ratio(shifted, std_normal_score, x, y, 0.5), 1e-12);
  RngStream a(7), b(7);
  const LangevinConfig cfg{.step_size = 0.5, .num_steps = 200, .adjust = true};
  EXPECT_EQ(langevin_chain(std_normal_score, x, cfg, a, std_normal_energy).final,
            langevin_chain(std_normal_score, x, cfg, b, shifted).final);
}

TEST(NoiseSchedule, GeometricEndpointsAndOrder) {
  const auto s = NoiseSchedule::geometric(2.0, 0.1, 5);
  ASSERT_EQ(s.levels(), 5u);
  EXPECT_EQ(s.sigmas.front(), 2.0);
  EXPECT_EQ(s.sigmas.back(), 0.1);
  EXPECT_NEAR(s.sigmas[1] / s.sigmas[0], s.sigmas[4] / s.sigmas[3], 1e-12);
  EXPECT_THROW((NoiseSchedule{{1.0, 1.0}}.validate()), InvalidArgument);
  EXPECT_THROW((NoiseSchedule{{}}.validate()), InvalidArgument);
}

TEST(Annealed, SingleLevelEqualsPlainChain) {
  RngStream a(8), b(8);
  const LangevinConfig cfg{.step_size = 0.05, .num_steps = 30};
  const auto annealed = annealed_langevin(
      [](const RealVector& x, double sigma) { return (-1.0 / (1.0 + sigma * sigma)) * x; },
      NoiseSchedule{{0.5}}, cfg, RealVector{1.0}, a);
  const auto plain = langevin_chain([](const RealVector& x) { return (-1.0 / 1.25) * x; },
                                    RealVector{1.0}, cfg, b);
  EXPECT_EQ(annealed.final, plain.final);
}

TEST(Annealed, VisitsLevelsInDecreasingSigma) {
  RngStream rng(9);
  std::vector<double> seen;
  const auto out = annealed_langevin(
      [&](const RealVector& x, double sigma) {
        if (seen.empty() || seen.back() != sigma) seen.push_back(sigma);
        return -x;
      },
      NoiseSchedule{{1.0, 0.5}}, {.step_size = 0.1, .num_steps = 3, .record_trajectory = true},
      RealVector{0.0}, rng);
  EXPECT_EQ(seen, (std::vector<double>{1.0, 0.5}));
  EXPECT_EQ(out.level_tags, (std::vector<std::size_t>{0, 0, 0, 1, 1, 1}));
}

TEST(ReplayBuffer, InitSampleRules) {
  RngStream rng(10);
  auto fresh = [](RngStream&) { return RealVector{42.0}; };
  ReplayBuffer empty(4, 0.0);
  EXPECT_EQ(empty.init_sample(rng, fresh), RealVector{42.0});

  ReplayBuffer always(4, 1.0);
  always.push(RealVector{1.0}, rng);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(always.init_sample(rng, fresh), RealVector{42.0});

  ReplayBuffer never(4, 0.0);
  never.push(RealVector{1.0}, rng);
  for (int i = 0; i < 10; ++i) EXPECT_EQ(never.init_sample(rng, fresh), RealVector{1.0});
}

TEST(ReplayBuffer, PushRespectsCapacity) {
  RngStream rng(11);
  ReplayBuffer b(2);
  b.push(RealVector{1.0}, rng);
  EXPECT_EQ(b.size(), 1u);
  b.push(RealVector{2.0}, rng);
  b.push(RealVector{3.0}, rng);
  EXPECT_EQ(b.size(), 2u);
  EXPECT_THROW(b.push(RealVector{1.0, 2.0}, rng), InvalidArgument);
}

TEST(ReplayBuffer, UniformEvictionKeepsDiverseAges) {
  RngStream rng(12);
  ReplayBuffer b(100);
  for (int i = 0; i < 10'000; ++i) b.push(RealVector{static_cast<double>(i)}, rng);
  const std::set<std::uint64_t> distinct(b.insertion_indices().begin(), b.insertion_indices().end());
  EXPECT_GE(distinct.size(), 10u);
  EXPECT_EQ(b.size(), 100u);
}

TEST(ReplayBuffer, FreshGaussianVariance) {
  RngStream rng(13);
  RunningStats s;
  for (int i = 0; i < 100'000; ++i) s.add(fresh_gaussian(rng, 1)[0]);
  EXPECT_NEAR(s.variance(), 4.0, 0.06);
}

}  // namespace
}  // namespace ebm

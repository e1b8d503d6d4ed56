// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <set>

#include "ebm/numerics/errors.hpp"
#include "ebm/numerics/finite_diff.hpp"
#include "ebm/numerics/optimizer.hpp"
#include "ebm/numerics/param_vector.hpp"
#include "ebm/numerics/rng.hpp"
#include "ebm/numerics/stats.hpp"

namespace ebm {
namespace {

// Known-answer vectors published with the Random123 distribution.
TEST(Philox, KnownAnswerVectors) {
  EXPECT_EQ(philox4x32({0, 0, 0, 0}, {0, 0}),
            (std::array<std::uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8}));
  EXPECT_EQ(philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}),
            (std::array<std::uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd}));
  EXPECT_EQ(philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}),
            (std::array<std::uint32_t, 4>{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1}));
}

TEST(RngStream, GaussianVectorIsDeterministic) {
  RngStream a(1), b(1);
  EXPECT_EQ(gaussian_vector(a, 3), gaussian_vector(b, 3));
  EXPECT_EQ(a, b);
}

TEST(RngStream, EachDrawAdvancesCounterByOne) {
  RngStream rng(5, 9);
  gaussian_vector(rng, 4);
  EXPECT_EQ(rng.counter(), 4u);
  rademacher_vector(rng, 3);
  EXPECT_EQ(rng.counter(), 7u);
  rng.uniform();
  rng.uniform_index(10);
  EXPECT_EQ(rng.counter(), 9u);
}

TEST(RngStream, ZeroDimensionIsRejected) {
  RngStream rng(1);
  EXPECT_THROW(gaussian_vector(rng, 0), InvalidArgument);
  EXPECT_THROW(rademacher_vector(rng, 0), InvalidArgument);
}

TEST(RngStream, GaussianMoments) {
  RngStream rng(2024);
  constexpr int kDraws = 1'000'000;
  double s1 = 0, s2 = 0, s4 = 0;
  for (int i = 0; i < kDraws; ++i) {
    const double z = rng.normal();
    s1 += z;
    s2 += z * z;
    s4 += z * z * z * z;
  }
  const double mean = s1 / kDraws;
  const double var = s2 / kDraws - mean * mean;
  EXPECT_LT(std::abs(mean), 0.004);
  EXPECT_GE(var, 0.99);
  EXPECT_LE(var, 1.01);
  const double kurtosis = (s4 / kDraws) / (var * var);
  EXPECT_LT(std::abs(kurtosis - 3.0), 0.05);
}

TEST(RngStream, RademacherEntriesAndCorrelation) {
  RngStream rng(77);
  double cross = 0.0;
  constexpr int kDraws = 100'000;
  for (int i = 0; i < kDraws; ++i) {
    const RealVector v = rademacher_vector(rng, 2);
    for (double e : v) ASSERT_TRUE(e == 1.0 || e == -1.0);
    ASSERT_EQ(squared_norm(v), 2.0);
    cross += v[0] * v[1];
  }
  EXPECT_LT(std::abs(cross / kDraws), 0.01);
}

TEST(RngStream, SplitNeverReusesStreams) {
  RngStream parent(3);
  std::set<std::uint64_t> ids = {parent.stream_id()};
  for (int i = 0; i < 10'000; ++i) {
    RngStream child = parent.split();
    EXPECT_TRUE(ids.insert(child.stream_id()).second);
    // Children of children stay distinct as well.
    EXPECT_TRUE(ids.insert(child.split().stream_id()).second);
  }
  EXPECT_EQ(parent.counter(), 10'000u);
}

TEST(RngStream, SplitStreamsAreUncorrelated) {
  RngStream parent(11);
  RngStream a = parent.split();
  RngStream b = parent.split();
  double cross = 0.0;
  constexpr int kDraws = 100'000;
  for (int i = 0; i < kDraws; ++i) cross += a.normal() * b.normal();
  // 3-sigma bound for a product of independent standard normals.
  EXPECT_LT(std::abs(cross / kDraws), 3.0 / std::sqrt(kDraws));
}

TEST(RngStream, AntitheticNegatesNormals) {
  RngStream rng(8, 2, 5);
  RngStream anti = rng.antithetic();
  for (int i = 0; i < 10; ++i) {
    EXPECT_EQ(rng.normal(), -anti.normal());
    EXPECT_EQ(rng.rademacher(), -anti.rademacher());
    EXPECT_DOUBLE_EQ(rng.uniform(), 1.0 - anti.uniform());
  }
}

TEST(RngStream, UniformIsInsideOpenInterval) {
  RngStream rng(0);
  for (int i = 0; i < 100'000; ++i) {
    const double u = rng.uniform();
    ASSERT_GT(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(FiniteDiff, QuadraticIsExact) {
  const auto g = finite_diff_gradient([](const RealVector& x) { return x[0] * x[0]; },
                                      RealVector{3.0}, 1e-4);
  EXPECT_NEAR(g[0], 6.0, 1e-7);
}

TEST(FiniteDiff, ConstantGivesZero) {
  const auto g = finite_diff_gradient([](const RealVector&) { return 4.2; }, RealVector{1.0, -2.0, 3.0});
  for (double gi : g) EXPECT_EQ(gi, 0.0);
}

TEST(FiniteDiff, SineOfFirstCoordinate) {
  const auto g = finite_diff_gradient([](const RealVector& x) { return std::sin(x[0]); },
                                      RealVector{0.0, 5.0}, 1e-5);
  EXPECT_NEAR(g[0], 1.0, 1e-9);
  EXPECT_NEAR(g[1], 0.0, 1e-9);
}

TEST(FiniteDiff, NonFiniteEvaluationNamesCoordinate) {
  try {
    finite_diff_gradient(
        [](const RealVector& x) { return x[1] > 1.0 ? std::numeric_limits<double>::infinity() : 0.0; },
        RealVector{0.0, 1.0});
    FAIL() << "expected NumericError";
  } catch (const NumericError& e) {
    ASSERT_TRUE(e.coordinate().has_value());
    EXPECT_EQ(*e.coordinate(), 1u);
  }
}

TEST(FiniteDiff, RejectsNonPositiveStep) {
  EXPECT_THROW(finite_diff_gradient([](const RealVector&) { return 0.0; }, RealVector{1.0}, 0.0),
               InvalidArgument);
}

TEST(RealVector, RejectsNonFiniteAndEmpty) {
  EXPECT_THROW(RealVector(std::vector<double>{}), InvalidArgument);
  EXPECT_THROW(RealVector({1.0, std::nan("")}), NumericError);
  EXPECT_THROW(RealVector(0), InvalidArgument);
}

TEST(ParamVector, LayoutMustBeContiguous) {
  EXPECT_THROW(ParamVector(RealVector(3), {{"a", 0, 1}, {"b", 2, 1}}), InvalidArgument);
  EXPECT_THROW(ParamVector(RealVector(3), {{"a", 0, 2}}), InvalidArgument);
  const auto p = ParamVector::from_blocks({{"mu", {1.0, 2.0}}, {"s", {3.0}}});
  EXPECT_EQ(p.block("s")[0], 3.0);
  EXPECT_EQ(p.coordinate_names(), (std::vector<std::string>{"mu[0]", "mu[1]", "s[0]"}));
}

TEST(Adam, ZeroGradientLeavesParams) {
  const auto params = ParamVector::from_blocks({{"w", {1.0, -2.0}}});
  const auto state = OptimizerState::init(2);
  const auto [next, updated] = optimizer_step(state, params, RealVector(2, 0.0));
  EXPECT_EQ(updated, params);
  EXPECT_EQ(next.step_count, 1u);
}

TEST(Adam, FirstStepMovesByLearningRateAgainstSign) {
  // Bias-corrected first step: m_hat = g, v_hat = g^2 -> delta = -lr g / (|g| + eps).
  const auto params = ParamVector::from_blocks({{"w", {0.5, 0.5, 0.5}}});
  const auto state = OptimizerState::init(3, {.learning_rate = 0.01});
  const auto [next, updated] = optimizer_step(state, params, RealVector{3.0, -0.2, 1e3});
  EXPECT_NEAR(updated[0] - 0.5, -0.01, 1e-9);
  EXPECT_NEAR(updated[1] - 0.5, 0.01, 1e-9);
  EXPECT_NEAR(updated[2] - 0.5, -0.01, 1e-9);
}

TEST(Adam, DeterministicAndChecksDims) {
  const auto params = ParamVector::from_blocks({{"w", {0.1, 0.2}}});
  const auto state = OptimizerState::init(2);
  const auto g = RealVector{0.3, -0.7};
  EXPECT_EQ(optimizer_step(state, params, g), optimizer_step(state, params, g));
  EXPECT_THROW(optimizer_step(state, params, RealVector{1.0}), InvalidArgument);
}

TEST(Adam, ConvergesOnQuadratic) {
  auto params = ParamVector::from_blocks({{"w", {3.0, -4.0}}});
  auto state = OptimizerState::init(2, {.learning_rate = 0.05});
  for (int i = 0; i < 2000; ++i) {
    RealVector g{2.0 * (params[0] - 1.0), 2.0 * (params[1] + 0.5)};
    std::tie(state, params) = optimizer_step(state, params, g);
  }
  EXPECT_NEAR(params[0], 1.0, 1e-3);
  EXPECT_NEAR(params[1], -0.5, 1e-3);
}

TEST(RunningStats, MatchesClosedForm) {
  RunningStats s;
  for (double x : {1.0, 2.0, 3.0, 4.0}) s.add(x);
  EXPECT_DOUBLE_EQ(s.mean(), 2.5);
  EXPECT_NEAR(s.variance(), 5.0 / 3.0, 1e-12);
}

}  // namespace
}  // namespace ebm

// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ebm/energy/family.hpp"
#include "ebm/energy/gaussian_oracle.hpp"
#include "ebm/numerics/errors.hpp"
#include "ebm/numerics/finite_diff.hpp"
#include "ebm/numerics/stats.hpp"
#include "support/test_util.hpp"

namespace ebm {
namespace {

using testing::all_test_families;
using testing::random_params;
using testing::random_vector;
using testing::relative_error;

constexpr int kPropertyTrials = 100;

const EnergyFamily kGauss1 = EnergyFamily::gaussian(1);

TEST(Energy, GaussianExamples) {
  const auto theta = gaussian_params_diag({0.0}, {1.0});
  EXPECT_DOUBLE_EQ(energy(kGauss1, theta, RealVector{0.0}), 0.0);
  EXPECT_DOUBLE_EQ(energy(kGauss1, theta, RealVector{2.0}), 2.0);
  EXPECT_DOUBLE_EQ(score(kGauss1, theta, RealVector{2.0})[0], -2.0);
  EXPECT_DOUBLE_EQ(grad_theta_energy(kGauss1, theta, RealVector{2.0})[0], -2.0);
}

TEST(Energy, PolyExamples) {
  const auto family = EnergyFamily::poly1d(4);
  const auto theta = poly1d_params({0, 0, 0, 0, 1});
  EXPECT_DOUBLE_EQ(energy(family, theta, RealVector{2.0}), 16.0);
  EXPECT_DOUBLE_EQ(laplacian_x(family, theta, RealVector{1.0}), 12.0);
}

TEST(Energy, GaussianLaplacianIsTrace) {
  const auto family = EnergyFamily::gaussian(2);
  const auto theta = gaussian_params_diag({0.3, -1.0}, {1.0, 4.0});
  EXPECT_NEAR(laplacian_x(family, theta, RealVector{5.0, 2.0}), 5.0, 1e-12);
}

TEST(Energy, GaussianHvpIsPrecisionTimesV) {
  const auto family = EnergyFamily::gaussian(3);
  RngStream rng(4);
  const auto theta = random_params(family, rng, 0.5);
  const auto p = gaussian_precision(family, theta);
  const RealVector v{1.0, -2.0, 0.5};
  for (int t = 0; t < 3; ++t) {
    const auto hv = hvp_x(family, theta, random_vector(rng, 3, 2.0), v);
    for (std::size_t i = 0; i < 3; ++i) {
      double expect = 0.0;
      for (std::size_t j = 0; j < 3; ++j) expect += p[i * 3 + j] * v[j];
      EXPECT_NEAR(hv[i], expect, 1e-12);
    }
  }
}

TEST(Energy, SingleComponentMixtureMatchesGaussianScore) {
  const auto mix = EnergyFamily::mixture_rbf(1, 2);
  const auto gauss = EnergyFamily::gaussian(2);
  const double log_sigma = 0.4;
  const auto theta_mix = ParamVector::from_blocks(
      {{"logits", {0.7}}, {"means", {1.0, -0.5}}, {"log_sigma", {log_sigma}}});
  const double prec = std::exp(-2.0 * log_sigma);
  const auto theta_gauss = gaussian_params_diag({1.0, -0.5}, {prec, prec});
  const RealVector x{0.3, 2.0};
  EXPECT_LT(relative_error(score(mix, theta_mix, x), score(gauss, theta_gauss, x)), 1e-12);
}

TEST(Energy, MlpZeroFinalWeightsGiveUnitBiasGradient) {
  const auto family = EnergyFamily::mlp({3, 6, 4, 1});
  RngStream rng(5);
  auto theta = random_params(family, rng, 1.0);
  for (double& w : theta.block("W2")) w = 0.0;
  for (int t = 0; t < 5; ++t) {
    const auto g = grad_theta_energy(family, theta, random_vector(rng, 3, 3.0));
    EXPECT_EQ(g[theta.block_info("b2").offset], 1.0);
  }
}

TEST(Energy, RejectsMismatchedInputs) {
  const auto theta = gaussian_params_diag({0.0}, {1.0});
  EXPECT_THROW(energy(kGauss1, theta, RealVector{1.0, 2.0}), InvalidArgument);
  EXPECT_THROW(energy(EnergyFamily::gaussian(2), theta, RealVector{1.0, 2.0}), InvalidArgument);
  EXPECT_THROW(hvp_x(kGauss1, theta, RealVector{1.0}, RealVector{1.0, 2.0}), InvalidArgument);
  EXPECT_THROW(EnergyFamily::poly1d(3), InvalidArgument);
  EXPECT_THROW(EnergyFamily::mlp({2, 3, 2}), InvalidArgument);
}

class FamilyProperty : public ::testing::TestWithParam<EnergyFamily> {};

TEST_P(FamilyProperty, ScoreMatchesFiniteDifference) {
  const auto& family = GetParam();
  RngStream rng(100);
  for (int t = 0; t < kPropertyTrials; ++t) {
    const auto theta = random_params(family, rng, 0.5);
    const auto x = random_vector(rng, family.dim(), 1.5);
    const auto fd = finite_diff_gradient([&](const RealVector& y) { return energy(family, theta, y); }, x);
    ASSERT_LT(relative_error(score(family, theta, x), -fd), 1e-5) << family.name() << " trial " << t;
  }
}

TEST_P(FamilyProperty, GradThetaMatchesFiniteDifference) {
  const auto& family = GetParam();
  RngStream rng(101);
  for (int t = 0; t < kPropertyTrials; ++t) {
    const auto theta = random_params(family, rng, 0.5);
    const auto x = random_vector(rng, family.dim(), 1.5);
    const auto fd = finite_diff_gradient(
        [&](const RealVector& p) { return energy(family, theta.with_values(p), x); }, theta.values());
    ASSERT_LT(relative_error(grad_theta_energy(family, theta, x), fd), 1e-5)
        << family.name() << " trial " << t;
  }
}

TEST_P(FamilyProperty, HvpMatchesFiniteDifferenceOfGradient) {
  const auto& family = GetParam();
  RngStream rng(102);
  const double h = 1e-5;
  for (int t = 0; t < kPropertyTrials; ++t) {
    const auto theta = random_params(family, rng, 0.5);
    const auto x = random_vector(rng, family.dim(), 1.5);
    const auto v = random_vector(rng, family.dim(), 1.0);
    RealVector fd = grad_x_energy(family, theta, x + h * v) - grad_x_energy(family, theta, x - h * v);
    fd *= 1.0 / (2.0 * h);
    ASSERT_LT(relative_error(hvp_x(family, theta, x, v), fd), 1e-4) << family.name() << " trial " << t;
  }
}

TEST_P(FamilyProperty, HvpIsSymmetricAndLinear) {
  const auto& family = GetParam();
  RngStream rng(103);
  for (int t = 0; t < kPropertyTrials; ++t) {
    const auto theta = random_params(family, rng, 0.5);
    const auto x = random_vector(rng, family.dim(), 1.5);
    const auto u = random_vector(rng, family.dim(), 1.0);
    const auto v = random_vector(rng, family.dim(), 1.0);
    const double uhv = dot(u, hvp_x(family, theta, x, v));
    const double vhu = dot(v, hvp_x(family, theta, x, u));
    ASSERT_NEAR(uhv, vhu, 1e-10 * (1.0 + std::abs(uhv)));
    const auto lin = hvp_x(family, theta, x, 2.0 * u + v);
    const auto sum = 2.0 * hvp_x(family, theta, x, u) + hvp_x(family, theta, x, v);
    ASSERT_LT(relative_error(lin, sum), 1e-10);
  }
}

TEST_P(FamilyProperty, LaplacianIsSumOfCoordinateHvps) {
  const auto& family = GetParam();
  RngStream rng(104);
  for (int t = 0; t < kPropertyTrials; ++t) {
    const auto theta = random_params(family, rng, 0.5);
    const auto x = random_vector(rng, family.dim(), 1.5);
    double sum = 0.0;
    for (std::size_t i = 0; i < family.dim(); ++i) {
      sum += hvp_x(family, theta, x, basis_vector(family.dim(), i))[i];
    }
    ASSERT_NEAR(laplacian_x(family, theta, x), sum, 1e-10 * (1.0 + std::abs(sum)));
  }
}

TEST_P(FamilyProperty, MixedDerivativesMatchFiniteDifference) {
  const auto& family = GetParam();
  if (!family.has_mixed_derivatives()) {
    RngStream rng(0);
    const auto theta = random_params(family, rng, 0.5);
    const auto x = random_vector(rng, family.dim(), 1.0);
    EXPECT_FALSE(grad_theta_directional_derivative(family, theta, x, x).has_value());
    EXPECT_FALSE(grad_theta_directional_curvature(family, theta, x, x).has_value());
    return;
  }
  RngStream rng(105);
  for (int t = 0; t < kPropertyTrials; ++t) {
    const auto theta = random_params(family, rng, 0.5);
    const auto x = random_vector(rng, family.dim(), 1.5);
    const auto v = random_vector(rng, family.dim(), 1.0);
    const auto fd_grad = finite_diff_gradient(
        [&](const RealVector& p) { return dot(v, grad_x_energy(family, theta.with_values(p), x)); },
        theta.values());
    ASSERT_LT(relative_error(*grad_theta_directional_derivative(family, theta, x, v), fd_grad), 1e-5);
    const auto fd_curv = finite_diff_gradient(
        [&](const RealVector& p) { return dot(v, hvp_x(family, theta.with_values(p), x, v)); },
        theta.values());
    ASSERT_LT(relative_error(*grad_theta_directional_curvature(family, theta, x, v), fd_curv), 1e-5);
  }
}

INSTANTIATE_TEST_SUITE_P(AllFamilies, FamilyProperty, ::testing::ValuesIn(all_test_families()),
                         [](const auto& info) {
                           std::string name = info.param.name();
                           std::string out;
                           for (char c : name) out += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
                           return out;
                         });

TEST(Energy, PolyConstantShiftOnlyMovesEnergy) {
  const auto family = EnergyFamily::poly1d(4);
  RngStream rng(6);
  for (int t = 0; t < 20; ++t) {
    const auto theta = random_params(family, rng, 0.5);
    auto shifted = theta;
    shifted.block("coef")[0] += 3.25;
    const auto x = random_vector(rng, 1, 1.5);
    EXPECT_NEAR(energy(family, shifted, x) - energy(family, theta, x), 3.25, 1e-12);
    EXPECT_EQ(score(family, shifted, x), score(family, theta, x));
    EXPECT_EQ(hvp_x(family, shifted, x, RealVector{1.0}), hvp_x(family, theta, x, RealVector{1.0}));
    EXPECT_EQ(laplacian_x(family, shifted, x), laplacian_x(family, theta, x));
  }
}

TEST(Energy, GaussianPrecisionIsPositiveDefinite) {
  const auto family = EnergyFamily::gaussian(3);
  RngStream rng(7);
  for (int t = 0; t < 50; ++t) {
    const auto theta = random_params(family, rng, 2.0);
    const auto v = random_vector(rng, 3, 1.0);
    EXPECT_GT(dot(v, hvp_x(family, theta, RealVector(3), v)), 0.0);
  }
}

TEST(GaussianOracle, KlExamples) {
  const auto p = GaussianDensity::standard(1);
  EXPECT_EQ(gaussian_kl(p, p), 0.0);
  EXPECT_NEAR(gaussian_kl(p, GaussianDensity::isotropic(RealVector{1.0}, 1.0)), 0.5, 1e-15);
  RngStream rng(8);
  for (int t = 0; t < 100; ++t) {
    GaussianDensity a{random_vector(rng, 2, 2.0), RealVector{std::exp(rng.normal()), std::exp(rng.normal())}};
    GaussianDensity b{random_vector(rng, 2, 2.0), RealVector{std::exp(rng.normal()), std::exp(rng.normal())}};
    EXPECT_GE(gaussian_kl(a, b), 0.0);
  }
  GaussianDensity bad{RealVector{0.0}, RealVector{-1.0}};
  EXPECT_THROW(gaussian_kl(bad, p), InvalidArgument);
}

TEST(GaussianOracle, FisherExamples) {
  const auto p = GaussianDensity::standard(1);
  EXPECT_EQ(gaussian_fisher_divergence(p, p), 0.0);
  for (double m : {0.5, 1.0, -3.0}) {
    EXPECT_NEAR(gaussian_fisher_divergence(p, GaussianDensity::isotropic(RealVector{m}, 1.0)),
                0.5 * m * m, 1e-14);
  }
}

TEST(GaussianOracle, FisherMatchesMonteCarlo) {
  const GaussianDensity p{RealVector{0.5, -1.0}, RealVector{2.0, 0.5}};
  const GaussianDensity q{RealVector{-0.2, 0.3}, RealVector{1.0, 3.0}};
  RngStream rng(9);
  RunningStats stats;
  for (int i = 0; i < 1'000'000; ++i) {
    const auto x = p.sample(rng);
    stats.add(0.5 * squared_norm(p.score(x) - q.score(x)));
  }
  EXPECT_NEAR(stats.mean(), gaussian_fisher_divergence(p, q), 3.0 * stats.standard_error());
}

TEST(GaussianOracle, FamilyDensityRoundTrip) {
  const auto family = EnergyFamily::gaussian(2);
  const auto g = gaussian_family_density(family, gaussian_params_diag({1.0, 2.0}, {4.0, 0.5}));
  EXPECT_NEAR(g.variance[0], 0.25, 1e-15);
  EXPECT_NEAR(g.variance[1], 2.0, 1e-15);
  EXPECT_THROW(gaussian_family_density(family, gaussian_params({0, 0}, {0, 0}, {0.3})), InvalidArgument);
}

TEST(GaussianOracle, FisherGradientMatchesFiniteDifference) {
  for (std::size_t d : {1u, 3u}) {
    const auto family = EnergyFamily::gaussian(d);
    RngStream rng(10 + d);
    for (int t = 0; t < 20; ++t) {
      const auto theta = random_params(family, rng, 0.5);
      GaussianDensity data{random_vector(rng, d, 1.0), RealVector(d)};
      for (double& v : data.variance) v = std::exp(rng.normal() * 0.5);
      // D_F(data || p_theta) by quadrature-free identity: E_data 1/2 |s_data - s_theta|^2
      // with s_theta linear, so it only needs first and second moments.
      auto divergence = [&](const RealVector& p) {
        const auto th = theta.with_values(p);
        const auto prec = gaussian_precision(family, th);
        const auto mu = th.block("mu");
        // score gap g(x) = -S^-1 (x - m) + P (x - mu) = A (x - m) + P (m - mu)
        double acc = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
          double shift = 0.0;
          for (std::size_t j = 0; j < d; ++j) shift += prec[i * d + j] * (data.mean[j] - mu[j]);
          acc += shift * shift;
          for (std::size_t j = 0; j < d; ++j) {
            const double a = prec[i * d + j] - (i == j ? 1.0 / data.variance[i] : 0.0);
            acc += a * a * data.variance[j];
          }
        }
        return 0.5 * acc;
      };
      const auto fd = finite_diff_gradient(divergence, theta.values());
      ASSERT_LT(relative_error(gaussian_family_fisher_gradient(data, family, theta), fd), 1e-5);
    }
  }
}

}  // namespace
}  // namespace ebm

// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "ebm/energy/gaussian_oracle.hpp"
#include "ebm/estimators/contrastive.hpp"
#include "ebm/estimators/fd_gradient.hpp"
#include "ebm/estimators/ksd.hpp"
#include "ebm/estimators/nce.hpp"
#include "ebm/estimators/score_matching.hpp"
#include "ebm/numerics/errors.hpp"
#include "ebm/numerics/stats.hpp"
#include "support/test_util.hpp"

namespace ebm {
namespace {

using testing::random_params;
using testing::random_vector;
using testing::relative_error;

Batch sample_batch(const GaussianDensity& g, std::size_t n, RngStream& rng) {
  Batch out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(g.sample(rng));
  return out;
}

Batch gaussian_batch(double mean, double var, std::size_t n, RngStream& rng) {
  return sample_batch(GaussianDensity::isotropic(RealVector{mean}, var), n, rng);
}

const EnergyFamily kG1 = EnergyFamily::gaussian(1);
const ParamVector kStdNormal = gaussian_params_diag({0.0}, {1.0});

// --- contrastive divergence ---

TEST(Cd, SamplesEqualDataGiveZeroGradient) {
  RngStream rng(1);
  const auto data = gaussian_batch(0.3, 2.0, 50, rng);
  const auto report = contrastive_gradient(kG1, kStdNormal, data, data);
  for (double g : report.grad_theta) EXPECT_EQ(g, 0.0);
}

TEST(Cd, ExactModelSamplesGiveClosedFormGradient) {
  RngStream rng(2);
  const auto data = gaussian_batch(1.0, 1.0, 100'000, rng);
  const auto model = gaussian_batch(0.0, 1.0, 100'000, rng);
  const auto report = contrastive_gradient(kG1, kStdNormal, data, model);
  EXPECT_NEAR(report.grad_theta[0], -1.0, 3.0 * (*report.grad_theta_se)[0]);
}

TEST(Cd, DeterministicAndBufferBacked) {
  RngStream data_rng(3);
  const auto data = gaussian_batch(0.0, 1.0, 20, data_rng);
  const LangevinConfig cfg{.step_size = 0.1, .num_steps = 5};
  RngStream a(4), b(4);
  EXPECT_EQ(cd_gradient(kG1, kStdNormal, data, cfg, ChainInit::kData, nullptr, a).grad_theta,
            cd_gradient(kG1, kStdNormal, data, cfg, ChainInit::kData, nullptr, b).grad_theta);
  EXPECT_THROW(cd_gradient(kG1, kStdNormal, data, cfg, ChainInit::kBuffer, nullptr, a), InvalidArgument);
  ReplayBuffer buffer(8);
  cd_gradient(kG1, kStdNormal, data, cfg, ChainInit::kBuffer, &buffer, a);
  EXPECT_EQ(buffer.size(), 8u);
  EXPECT_THROW(cd_gradient(kG1, kStdNormal, {}, cfg, ChainInit::kData, nullptr, a), InvalidArgument);
}

TEST(Cd, MalaReportsAcceptance) {
  RngStream rng(5);
  const auto data = gaussian_batch(0.0, 1.0, 20, rng);
  const auto report = cd_gradient(kG1, kStdNormal, data, {.step_size = 0.5, .num_steps = 10, .adjust = true},
                                  ChainInit::kData, nullptr, rng);
  ASSERT_TRUE(report.aux.contains("accept_rate"));
  EXPECT_GT(report.aux.at("accept_rate"), 0.5);
}

// --- score matching ---

TEST(Sm, MatchedUnitGaussianLossIsMinusHalf) {
  RngStream rng(6);
  const auto data = gaussian_batch(0.0, 1.0, 100'000, rng);
  const auto report = sm_loss(kG1, kStdNormal, data);
  const double se = std::sqrt(report.aux.at("loss_var") / 1e5);
  EXPECT_NEAR(report.loss + 0.5, 0.0, 3.0 * se);
}

TEST(Sm, GradientMatchesFisherOracleAndFlippedSignDoesNot) {
  RngStream rng(7);
  const GaussianDensity data{RealVector{0.7}, RealVector{1.0}};
  const auto batch = sample_batch(data, 100'000, rng);
  const auto oracle = gaussian_family_fisher_gradient(data, kG1, kStdNormal);
  const auto good = sm_loss(kG1, kStdNormal, batch);
  const auto bad = sm_loss(kG1, kStdNormal, batch, HessianSign::kPlus);
  bool bad_fails = false;
  for (std::size_t i = 0; i < oracle.dim(); ++i) {
    EXPECT_NEAR(good.grad_theta[i], oracle[i], 3.0 * (*good.grad_theta_se)[i]);
    bad_fails |= std::abs(bad.grad_theta[i] - oracle[i]) > 3.0 * (*bad.grad_theta_se)[i];
  }
  EXPECT_TRUE(bad_fails);
}

TEST(Sm, InvariantToEnergyShift) {
  const auto family = EnergyFamily::poly1d(4);
  RngStream rng(8);
  const auto theta = random_params(family, rng, 0.5);
  auto shifted = theta;
  shifted.block("coef")[0] += 2.0;
  const auto batch = gaussian_batch(0.0, 1.0, 100, rng);
  EXPECT_EQ(sm_loss(family, theta, batch).loss, sm_loss(family, shifted, batch).loss);
}

TEST(Sm, FdPathMatchesAnalyticPath) {
  RngStream rng(9);
  const auto batch = gaussian_batch(0.4, 1.5, 200, rng);
  const auto theta = gaussian_params_diag({0.2}, {0.7});
  const auto analytic = sm_loss(kG1, theta, batch).grad_theta;
  const auto fd = estimator_grad_theta(
      kG1, theta, [&](const ParamVector& p, RngStream&) { return sm_loss(kG1, p, batch).loss; }, rng);
  EXPECT_LT(relative_error(fd, analytic), 1e-4);
}

// --- denoising score matching ---

TEST(Dsm, PerfectScoreClosedFormLoss) {
  // Model variance 1 + sigma^2 for data N(0, 1): E loss = 1 / (2 sigma^2 (1 + sigma^2)).
  const double sigma = 0.5;
  RngStream rng(10);
  const auto batch = gaussian_batch(0.0, 1.0, 100'000, rng);
  const auto theta = gaussian_params_diag({0.0}, {1.0 / (1.0 + sigma * sigma)});
  const auto report = dsm_loss(kG1, theta, batch, sigma, rng);
  const double expected = 1.0 / (2.0 * sigma * sigma * (1.0 + sigma * sigma));
  EXPECT_NEAR(expected, 1.6, 1e-12);
  EXPECT_NEAR(report.loss, expected, 3.0 * std::sqrt(report.aux.at("loss_var") / 1e5));
}

TEST(Dsm, DivergesLikeInverseSigmaSquared) {
  RngStream rng(11);
  const auto batch = gaussian_batch(0.0, 1.0, 10'000, rng);
  for (double sigma : {1e-2, 1e-3}) {
    RngStream z(12);
    const double scaled = dsm_loss(kG1, kStdNormal, batch, sigma, z).loss * sigma * sigma;
    EXPECT_NEAR(scaled, 0.5, 0.05);  // E |z|^2 / 2 with d = 1
  }
}

TEST(Dsm, RejectsNonPositiveSigma) {
  RngStream rng(13);
  EXPECT_THROW(dsm_loss(kG1, kStdNormal, {RealVector{0.0}}, 0.0, rng), InvalidArgument);
  EXPECT_THROW(dsm_cv_loss(kG1, kStdNormal, {RealVector{0.0}}, -1.0, rng), InvalidArgument);
}

TEST(DsmCv, ControlVariateHasZeroMean) {
  RngStream rng(14);
  const auto batch = gaussian_batch(0.0, 1.0, 100'000, rng);
  const auto report = dsm_cv_loss(kG1, kStdNormal, batch, 0.3, rng);
  EXPECT_NEAR(report.aux.at("cv_mean"), 0.0, 3.0 * report.aux.at("cv_se"));
}

TEST(DsmCv, ReducesVarianceAtSmallSigma) {
  RngStream rng(15);
  const auto batch = gaussian_batch(0.0, 1.0, 1000, rng);
  const auto report = dsm_cv_loss(kG1, kStdNormal, batch, 0.01, rng);
  EXPECT_LE(report.aux.at("loss_var"), 0.1 * report.aux.at("loss_var_plain"));
}

TEST(DsmCv, SameNoiseAsPlainDsm) {
  RngStream data_rng(16);
  const auto batch = gaussian_batch(0.0, 1.0, 100, data_rng);
  RngStream a(17), b(17);
  EXPECT_DOUBLE_EQ(dsm_cv_loss(kG1, kStdNormal, batch, 0.2, a).aux.at("plain_loss"),
                   dsm_loss(kG1, kStdNormal, batch, 0.2, b).loss);
  EXPECT_EQ(a, b);
}

// --- sliced score matching ---

TEST(Ssm, CoordinateDirectionReducesToSmTerms) {
  RngStream rng(18);
  const auto theta = gaussian_params_diag({0.3}, {2.0});
  const auto batch = gaussian_batch(0.0, 1.0, 50, rng);
  EXPECT_NEAR(ssm_fixed_direction(kG1, theta, batch, RealVector{1.0}).loss, sm_loss(kG1, theta, batch).loss,
              1e-12);
  // Rademacher slices in 1-D are +-e_1, so every slice equals the SM term.
  const auto sliced = ssm_loss(kG1, theta, batch, {Projection::kRademacher, 3, false}, rng);
  EXPECT_NEAR(sliced.loss, sm_loss(kG1, theta, batch).loss, 1e-12);
}

class SsmUnbiased : public ::testing::TestWithParam<std::tuple<Projection, bool>> {};

TEST_P(SsmUnbiased, SliceAverageMatchesSm) {
  const auto [projection, vr] = GetParam();
  const auto family = EnergyFamily::gaussian(3);
  RngStream rng(19);
  const auto theta = random_params(family, rng, 0.4);
  Batch batch;
  for (int i = 0; i < 10; ++i) batch.push_back(random_vector(rng, 3, 1.0));
  const auto sliced = ssm_loss(family, theta, batch, {projection, 10'000, vr}, rng);
  const double target = sm_loss(family, theta, batch).loss;
  EXPECT_NEAR(sliced.loss, target, 3.0 * sliced.aux.at("loss_se"));
}

INSTANTIATE_TEST_SUITE_P(Projections, SsmUnbiased,
                         ::testing::Combine(::testing::Values(Projection::kGaussian, Projection::kRademacher),
                                            ::testing::Bool()));

TEST(Ssm, RejectsZeroSlices) {
  RngStream rng(20);
  EXPECT_THROW(ssm_loss(kG1, kStdNormal, {RealVector{0.0}}, {Projection::kGaussian, 0, false}, rng),
               InvalidArgument);
}

// --- NCE ---

TEST(Nce, ModelEqualToNoiseGivesLogTwo) {
  // E = x^2 / 2 with c = 1/2 log(2 pi) is exactly -log N(0, 1).
  RngStream rng(21);
  NceConfig cfg{.nu = 1.0, .noise = GaussianDensity::standard(1), .learn_log_z = true};
  const auto theta = append_log_z(kStdNormal, 0.5 * std::log(2.0 * std::numbers::pi));
  const auto data = gaussian_batch(0.5, 2.0, 100, rng);
  const auto noise = gaussian_batch(-1.0, 1.0, 100, rng);
  EXPECT_NEAR(nce_loss(kG1, theta, data, noise, cfg).loss, std::log(2.0), 1e-12);
}

TEST(Nce, GradientVanishesWhenDataIsNoise) {
  RngStream rng(22);
  const auto noise_density = GaussianDensity::isotropic(RealVector{0.5}, 2.0);
  NceConfig cfg{.noise = noise_density};
  const auto theta = append_log_z(gaussian_params_diag({0.5}, {0.5}), 0.5 * std::log(2.0 * std::numbers::pi * 2.0));
  const auto data = sample_batch(noise_density, 100'000, rng);
  const auto noise = sample_batch(noise_density, 100'000, rng);
  const auto report = nce_loss(kG1, theta, data, noise, cfg);
  // Every logit is 0, so each point contributes +-1/2 grad E with weight 1 / (N + M).
  RunningStats mu_terms;
  for (const auto& x : data) mu_terms.add(0.5 * grad_theta_energy(kG1, strip_log_z(theta), x)[0]);
  for (const auto& x : noise) mu_terms.add(-0.5 * grad_theta_energy(kG1, strip_log_z(theta), x)[0]);
  EXPECT_NEAR(report.grad_theta[0], 0.0, 3.0 * mu_terms.standard_error());
  EXPECT_NEAR(report.grad_theta[2], 0.0, 1e-12);
}

TEST(Nce, ShiftBetweenEnergyAndLogZLeavesLossUnchanged) {
  const auto family = EnergyFamily::poly1d(2);
  RngStream rng(23);
  const auto theta = random_params(family, rng, 0.5);
  auto shifted = theta;
  shifted.block("coef")[0] += 0.75;
  NceConfig cfg{.noise = GaussianDensity::isotropic(RealVector{0.0}, 3.0)};
  const auto data = gaussian_batch(0.0, 1.0, 100, rng);
  const auto noise = sample_batch(cfg.noise, 100, rng);
  EXPECT_NEAR(nce_loss(family, append_log_z(theta, 0.2), data, noise, cfg).loss,
              nce_loss(family, append_log_z(shifted, 0.2 - 0.75), data, noise, cfg).loss, 1e-12);
}

TEST(Nce, SelfNormalizedModeHasNoLogZ) {
  RngStream rng(24);
  NceConfig cfg{.noise = GaussianDensity::standard(1), .learn_log_z = false};
  const auto data = gaussian_batch(0.0, 1.0, 10, rng);
  const auto report = nce_loss(kG1, kStdNormal, data, data, cfg);
  EXPECT_EQ(report.grad_theta.dim(), kG1.param_count());
  EXPECT_THROW(strip_log_z(kStdNormal), InvalidArgument);
}

// --- shifted NCE ---

TEST(ShiftedNce, ConstantEnergyGivesTwoLogTwo) {
  const auto family = EnergyFamily::mlp({2, 3, 1});
  auto theta = family.zero_params();
  theta.block("b1")[0] = 1.7;
  RngStream rng(25);
  Batch batch;
  for (int i = 0; i < 10; ++i) batch.push_back(random_vector(rng, 2, 1.0));
  EXPECT_NEAR(shifted_nce_loss(family, theta, batch, RealVector{0.3, -0.1}).loss, 2.0 * std::log(2.0), 1e-15);
  EXPECT_THROW(shifted_nce_loss(family, theta, batch, RealVector{0.0, 0.0}), InvalidArgument);
}

TEST(ShiftedNce, InvariantToEnergyShift) {
  const auto family = EnergyFamily::poly1d(4);
  RngStream rng(26);
  const auto theta = random_params(family, rng, 0.5);
  auto shifted = theta;
  shifted.block("coef")[0] -= 4.0;
  const auto batch = gaussian_batch(0.0, 1.0, 100, rng);
  EXPECT_NEAR(shifted_nce_loss(family, theta, batch, RealVector{0.05}).loss,
              shifted_nce_loss(family, shifted, batch, RealVector{0.05}).loss, 1e-12);
}

// --- KSD ---

TEST(Ksd, NullAndAlternative) {
  RngStream rng(27);
  const auto matched = gaussian_batch(0.0, 1.0, 2000, rng);
  const auto null = ksd(kG1, kStdNormal, matched, 1.0);
  EXPECT_LT(std::abs(null.value), 3.0 * null.se);
  const auto shifted = gaussian_batch(2.0, 1.0, 2000, rng);
  const auto alt = ksd(kG1, kStdNormal, shifted, 1.0);
  EXPECT_GT(alt.value, 5.0 * alt.se);
  EXPECT_THROW(ksd(kG1, kStdNormal, {RealVector{0.0}}, 1.0), InvalidArgument);
}

TEST(Ksd, InvariantToEnergyShift) {
  const auto family = EnergyFamily::poly1d(2);
  RngStream rng(28);
  const auto theta = random_params(family, rng, 0.5);
  auto shifted = theta;
  shifted.block("coef")[0] += 9.0;
  const auto batch = gaussian_batch(0.0, 1.0, 200, rng);
  EXPECT_EQ(ksd(family, theta, batch, 0.8).value, ksd(family, shifted, batch, 0.8).value);
}

// --- CRN finite differences ---

TEST(EstimatorGradTheta, DeterministicLossMatchesFiniteDiff) {
  RngStream rng(29);
  const auto x = RealVector{0.8};
  const auto theta = gaussian_params_diag({0.1}, {1.3});
  const auto crn = estimator_grad_theta(
      kG1, theta, [&](const ParamVector& p, RngStream&) { return energy(kG1, p, x); }, rng);
  const auto fd = finite_diff_gradient([&](const RealVector& v) { return energy(kG1, theta.with_values(v), x); },
                                       theta.values());
  EXPECT_EQ(crn, fd);
}

TEST(EstimatorGradTheta, StochasticLossIsRepeatable) {
  RngStream rng(30);
  const auto batch = gaussian_batch(0.0, 1.0, 20, rng);
  const auto family = EnergyFamily::mixture_rbf(2, 1);
  const auto theta = random_params(family, rng, 0.3);
  auto closure = [&](const ParamVector& p, RngStream& r) { return dsm_loss(family, p, batch, 0.3, r).loss; };
  EXPECT_EQ(estimator_grad_theta(family, theta, closure, rng), estimator_grad_theta(family, theta, closure, rng));
}

TEST(EstimatorGradTheta, RefusesLargeFamilies) {
  const auto family = EnergyFamily::mlp({3, 16, 1});
  RngStream rng(31);
  EXPECT_THROW(estimator_grad_theta(family, family.zero_params(),
                                    [](const ParamVector&, RngStream&) { return 0.0; }, rng),
               InvalidArgument);
}

// Analytic estimator gradients against CRN finite differences of the same loss.
TEST(EstimatorGradTheta, AnalyticPathsAgreeWithCrnFd) {
  RngStream rng(32);
  const std::vector<EnergyFamily> families = {EnergyFamily::gaussian(1), EnergyFamily::gaussian(2),
                                              EnergyFamily::poly1d(4)};
  for (int t = 0; t < 20; ++t) {
    const auto& family = families[t % families.size()];
    const auto theta = random_params(family, rng, 0.3);
    Batch batch;
    for (int i = 0; i < 30; ++i) batch.push_back(random_vector(rng, family.dim(), 1.0));
    const RngStream noise = rng.split();
    auto check = [&](const char* name, auto loss_fn) {
      RngStream r = noise;
      const auto analytic = loss_fn(theta, r).grad_theta;
      const auto fd = estimator_grad_theta(
          family, theta, [&](const ParamVector& p, RngStream& rr) { return loss_fn(p, rr).loss; }, noise);
      EXPECT_LT(relative_error(analytic, fd), 1e-4) << name << " trial " << t << " " << family.name();
    };
    check("sm", [&](const ParamVector& p, RngStream&) { return sm_loss(family, p, batch); });
    check("dsm", [&](const ParamVector& p, RngStream& r) { return dsm_loss(family, p, batch, 0.4, r); });
    check("dsm_cv", [&](const ParamVector& p, RngStream& r) { return dsm_cv_loss(family, p, batch, 0.4, r); });
    check("ssm", [&](const ParamVector& p, RngStream& r) {
      return ssm_loss(family, p, batch, {Projection::kGaussian, 3, false}, r);
    });
    check("ssm_vr", [&](const ParamVector& p, RngStream& r) {
      return ssm_loss(family, p, batch, {Projection::kRademacher, 3, true}, r);
    });
    check("shifted_nce", [&](const ParamVector& p, RngStream&) {
      return shifted_nce_loss(family, p, batch, RealVector(family.dim(), 0.2));
    });
    NceConfig cfg{.noise = GaussianDensity::isotropic(RealVector(family.dim(), 0.0), 2.0), .learn_log_z = false};
    check("nce", [&](const ParamVector& p, RngStream&) {
      return nce_loss(family, p, batch, Batch(batch.rbegin(), batch.rend()), cfg);
    });
  }
}

}  // namespace
}  // namespace ebm

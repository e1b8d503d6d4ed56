// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "ebm/experiments/check_suite.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <functional>
#include <numbers>
#include <set>

#include "ebm/energy/family.hpp"
#include "ebm/energy/gaussian_oracle.hpp"
#include "ebm/estimators/contrastive.hpp"
#include "ebm/estimators/fd_gradient.hpp"
#include "ebm/estimators/ksd.hpp"
#include "ebm/estimators/nce.hpp"
#include "ebm/estimators/score_matching.hpp"
#include "ebm/experiments/config.hpp"
#include "ebm/experiments/experiment.hpp"
#include "ebm/numerics/finite_diff.hpp"
#include "ebm/numerics/optimizer.hpp"
#include "ebm/numerics/rng.hpp"
#include "ebm/numerics/stats.hpp"
#include "ebm/samplers/langevin.hpp"
#include "ebm/samplers/replay_buffer.hpp"

namespace ebm {

namespace {

constexpr int kTrials = 100;

enum class Rule { kBelow, kAtMost, kAtLeast };

struct Property {
  std::string name;
  std::string module;
  double tolerance;
  Rule rule;
  std::function<double(const CheckOptions&)> measure;
};

double relative_error(const RealVector& a, const RealVector& b) {
  double diff = 0.0, ref = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    diff += (a[i] - b[i]) * (a[i] - b[i]);
    ref += b[i] * b[i];
  }
  diff = std::sqrt(diff);
  ref = std::sqrt(ref);
  return ref > 1e-8 ? diff / ref : diff;
}

RealVector scaled_normal(RngStream& rng, std::size_t d, double scale) {
  RealVector v = gaussian_vector(rng, d);
  v *= scale;
  return v;
}

ParamVector random_theta(const EnergyFamily& family, RngStream& rng, double scale) {
  ParamVector theta = family.zero_params();
  theta.values() = scaled_normal(rng, family.param_count(), scale);
  return theta;
}

Batch gaussian_batch(const GaussianDensity& p, std::size_t n, RngStream& rng) {
  Batch out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(p.sample(rng));
  return out;
}

std::string slug(const std::string& text) {
  std::string out;
  for (char c : text) {
    if (std::isalnum(static_cast<unsigned char>(c))) {
      out += c;
    } else if (!out.empty() && out.back() != '_') {
      out += '_';
    }
  }
  while (!out.empty() && out.back() == '_') out.pop_back();
  return out;
}

std::vector<EnergyFamily> property_families() {
  return {EnergyFamily::gaussian(1), EnergyFamily::gaussian(3), EnergyFamily::mixture_rbf(3, 2),
          EnergyFamily::poly1d(4), EnergyFamily::mlp({3, 6, 4, 1})};
}

// Runs `trial` kTrials times on random (theta, x) and returns the largest value.
double worst_case(const EnergyFamily& family, std::uint64_t seed,
                  const std::function<double(const ParamVector&, const RealVector&, RngStream&)>& trial) {
  RngStream rng(seed);
  double worst = 0.0;
  for (int t = 0; t < kTrials; ++t) {
    const ParamVector theta = random_theta(family, rng, 0.5);
    const RealVector x = scaled_normal(rng, family.dim(), 1.5);
    worst = std::max(worst, trial(theta, x, rng));
  }
  return worst;
}

void add_numerics(std::vector<Property>& props) {
  props.push_back({"philox_known_answer", "numerics", 0.0, Rule::kAtMost, [](const CheckOptions&) {
                     int bad = 0;
                     bad += philox4x32({0, 0, 0, 0}, {0, 0}) !=
                            std::array<std::uint32_t, 4>{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8};
                     bad += philox4x32({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) !=
                            std::array<std::uint32_t, 4>{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd};
                     bad += philox4x32({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) !=
                            std::array<std::uint32_t, 4>{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1};
                     return static_cast<double>(bad);
                   }});
  // Moments of 10^6 standard normal draws, shared by three rows.
  struct NormalMoments {
    double mean, var, kurtosis;
  };
  auto normal_moments = [] {
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
    return NormalMoments{mean, var, (s4 / kDraws) / (var * var)};
  };
  props.push_back({"gaussian_mean_abs", "numerics", 0.004, Rule::kBelow,
                   [=](const CheckOptions&) { return std::abs(normal_moments().mean); }});
  props.push_back({"gaussian_variance_dev", "numerics", 0.01, Rule::kAtMost,
                   [=](const CheckOptions&) { return std::abs(normal_moments().var - 1.0); }});
  props.push_back({"gaussian_kurtosis_dev", "numerics", 0.05, Rule::kBelow,
                   [=](const CheckOptions&) { return std::abs(normal_moments().kurtosis - 3.0); }});
  props.push_back({"rademacher_cross_moment", "numerics", 0.01, Rule::kBelow, [](const CheckOptions&) {
                     RngStream rng(77);
                     double cross = 0.0;
                     constexpr int kDraws = 100'000;
                     for (int i = 0; i < kDraws; ++i) {
                       const RealVector v = rademacher_vector(rng, 2);
                       cross += v[0] * v[1];
                     }
                     return std::abs(cross / kDraws);
                   }});
  props.push_back({"fd_quadratic", "numerics", 1e-7, Rule::kBelow, [](const CheckOptions&) {
                     const auto g = finite_diff_gradient([](const RealVector& x) { return x[0] * x[0]; },
                                                         RealVector{3.0}, 1e-4);
                     return std::abs(g[0] - 6.0);
                   }});
  props.push_back({"adam_first_step", "numerics", 1e-9, Rule::kBelow, [](const CheckOptions&) {
                     const auto params = ParamVector::from_blocks({{"w", {0.5, 0.5, 0.5}}});
                     const RealVector g{3.0, -0.2, 1e3};
                     const auto state = OptimizerState::init(3, {.learning_rate = 0.01});
                     const auto updated = optimizer_step(state, params, g).second;
                     double worst = 0.0;
                     for (std::size_t i = 0; i < 3; ++i) {
                       const double expected = -0.01 * (g[i] > 0 ? 1.0 : -1.0);
                       worst = std::max(worst, std::abs(updated[i] - 0.5 - expected));
                     }
                     return worst;
                   }});
}

void add_energy(std::vector<Property>& props) {
  for (const EnergyFamily& family : property_families()) {
    const std::string tag = "." + slug(family.name());
    props.push_back({"score_fd" + tag, "energy", 1e-5, Rule::kBelow, [family](const CheckOptions&) {
                       return worst_case(family, 100, [&](const ParamVector& theta, const RealVector& x, RngStream&) {
                         const auto fd =
                             finite_diff_gradient([&](const RealVector& y) { return energy(family, theta, y); }, x);
                         return relative_error(score(family, theta, x), -fd);
                       });
                     }});
    props.push_back({"grad_theta_fd" + tag, "energy", 1e-5, Rule::kBelow, [family](const CheckOptions&) {
                       return worst_case(family, 101, [&](const ParamVector& theta, const RealVector& x, RngStream&) {
                         const auto fd = finite_diff_gradient(
                             [&](const RealVector& p) { return energy(family, theta.with_values(p), x); },
                             theta.values());
                         return relative_error(grad_theta_energy(family, theta, x), fd);
                       });
                     }});
    props.push_back({"hvp_fd" + tag, "energy", 1e-4, Rule::kBelow, [family](const CheckOptions&) {
                       return worst_case(family, 102, [&](const ParamVector& theta, const RealVector& x, RngStream& r) {
                         const double h = 1e-5;
                         const RealVector v = scaled_normal(r, family.dim(), 1.0);
                         RealVector fd = grad_x_energy(family, theta, x + h * v) - grad_x_energy(family, theta, x - h * v);
                         fd *= 1.0 / (2.0 * h);
                         return relative_error(hvp_x(family, theta, x, v), fd);
                       });
                     }});
    props.push_back({"hvp_symmetry" + tag, "energy", 1e-10, Rule::kBelow, [family](const CheckOptions&) {
                       return worst_case(family, 103, [&](const ParamVector& theta, const RealVector& x, RngStream& r) {
                         const RealVector u = scaled_normal(r, family.dim(), 1.0);
                         const RealVector v = scaled_normal(r, family.dim(), 1.0);
                         const double uhv = dot(u, hvp_x(family, theta, x, v));
                         const double vhu = dot(v, hvp_x(family, theta, x, u));
                         return std::abs(uhv - vhu) / (1.0 + std::abs(uhv));
                       });
                     }});
    props.push_back({"laplacian_sum" + tag, "energy", 1e-10, Rule::kBelow, [family](const CheckOptions&) {
                       return worst_case(family, 104, [&](const ParamVector& theta, const RealVector& x, RngStream&) {
                         double sum = 0.0;
                         for (std::size_t i = 0; i < family.dim(); ++i) {
                           sum += hvp_x(family, theta, x, basis_vector(family.dim(), i))[i];
                         }
                         return std::abs(laplacian_x(family, theta, x) - sum) / (1.0 + std::abs(sum));
                       });
                     }});
  }
  props.push_back({"poly_shift_invariance", "energy", 0.0, Rule::kAtMost, [](const CheckOptions&) {
                     const auto family = EnergyFamily::poly1d(4);
                     RngStream rng(6);
                     double worst = 0.0;
                     for (int t = 0; t < kTrials; ++t) {
                       const auto theta = random_theta(family, rng, 0.5);
                       auto shifted = theta;
                       shifted.block("coef")[0] += 3.25;
                       const auto x = scaled_normal(rng, 1, 1.5);
                       const RealVector one{1.0};
                       worst = std::max({worst, norm(score(family, shifted, x) - score(family, theta, x)),
                                         norm(hvp_x(family, shifted, x, one) - hvp_x(family, theta, x, one)),
                                         std::abs(laplacian_x(family, shifted, x) - laplacian_x(family, theta, x))});
                     }
                     return worst;
                   }});
  props.push_back({"kl_nonnegative", "energy", 0.0, Rule::kAtLeast, [](const CheckOptions&) {
                     RngStream rng(8);
                     double lowest = std::numeric_limits<double>::infinity();
                     for (int t = 0; t < kTrials; ++t) {
                       auto density = [&] {
                         RealVector var = scaled_normal(rng, 3, 0.7);
                         for (auto& v : var) v = std::exp(v);
                         return GaussianDensity{scaled_normal(rng, 3, 1.0), var};
                       };
                       const auto p = density();
                       const auto q = density();
                       lowest = std::min(lowest, gaussian_kl(p, q));
                     }
                     return lowest;
                   }});
  // |Monte Carlo - closed form| in standard errors at 10^6 samples.
  props.push_back({"fisher_monte_carlo_z", "energy", 3.0, Rule::kBelow, [](const CheckOptions&) {
                     const GaussianDensity p{RealVector{0.3, -0.5}, RealVector{1.5, 0.7}};
                     const GaussianDensity q{RealVector{-0.2, 0.4}, RealVector{0.8, 2.0}};
                     RngStream rng(9);
                     RunningStats s;
                     for (int i = 0; i < 1'000'000; ++i) {
                       const RealVector x = p.sample(rng);
                       s.add(0.5 * squared_norm(p.score(x) - q.score(x)));
                     }
                     return std::abs(s.mean() - gaussian_fisher_divergence(p, q)) / s.standard_error();
                   }});
}

double std_normal_energy(const RealVector& x) { return 0.5 * squared_norm(x); }
RealVector std_normal_score(const RealVector& x) { return -x; }

void add_samplers(std::vector<Property>& props) {
  props.push_back({"mala_ratio_brute_force", "samplers", 1e-10, Rule::kBelow, [](const CheckOptions&) {
                     // Quadratic energy with precision 2: direct evaluation of both proposal densities.
                     const auto e = [](const RealVector& x) { return squared_norm(x); };
                     const auto s = [](const RealVector& x) { return -2.0 * x; };
                     RngStream rng(11);
                     double worst = 0.0;
                     for (int t = 0; t < kTrials; ++t) {
                       const RealVector a = scaled_normal(rng, 2, 1.0);
                       const RealVector b = scaled_normal(rng, 2, 1.0);
                       const double eps = 0.2 + rng.uniform();
                       auto log_q = [&](const RealVector& to, const RealVector& from) {
                         const RealVector mean = from + (0.5 * eps * eps) * s(from);
                         return -squared_norm(to - mean) / (2.0 * eps * eps);
                       };
                       const double brute = (-e(b) + log_q(a, b)) - (-e(a) + log_q(b, a));
                       worst = std::max(worst, std::abs(mala_log_accept_ratio(e, s, a, b, eps) - brute) /
                                                   (1.0 + std::abs(brute)));
                     }
                     return worst;
                   }});
  props.push_back({"mala_shift_invariance", "samplers", 0.0, Rule::kAtMost, [](const CheckOptions&) {
                     const auto shifted = [](const RealVector& x) { return std_normal_energy(x) + 123.0; };
                     const LangevinConfig cfg{.step_size = 0.5, .num_steps = 200, .adjust = true};
                     double mismatches = 0.0;
                     for (std::uint64_t c = 0; c < 20; ++c) {
                       RngStream a(c), b(c);
                       const RealVector x0{0.1};
                       mismatches += langevin_chain(std_normal_score, x0, cfg, a, std_normal_energy).final ==
                                             langevin_chain(std_normal_score, x0, cfg, b, shifted).final
                                         ? 0.0
                                         : 1.0;
                     }
                     return mismatches;
                   }});
  props.push_back({"buffer_eviction_distinct", "samplers", 10.0, Rule::kAtLeast, [](const CheckOptions&) {
                     ReplayBuffer buffer(100, 0.0);
                     RngStream rng(12);
                     for (int i = 0; i < 10'000; ++i) buffer.push(RealVector{static_cast<double>(i)}, rng);
                     const auto& idx = buffer.insertion_indices();
                     return static_cast<double>(std::set<std::uint64_t>(idx.begin(), idx.end()).size());
                   }});
  props.push_back({"annealed_level_order_violations", "samplers", 0.0, Rule::kAtMost, [](const CheckOptions&) {
                     const NoiseSchedule schedule{{1.0, 0.5, 0.25}};
                     const LangevinConfig cfg{.step_size = 0.1, .num_steps = 4, .record_trajectory = true};
                     RngStream rng(13);
                     const auto result = annealed_langevin(
                         [](const RealVector& x, double sigma) { return (-1.0 / (1.0 + sigma * sigma)) * x; }, schedule,
                         cfg, RealVector{0.0}, rng);
                     double violations = 0.0;
                     for (std::size_t i = 1; i < result.level_tags.size(); ++i) {
                       const double prev = schedule.sigmas[result.level_tags[i - 1]];
                       const double cur = schedule.sigmas[result.level_tags[i]];
                       violations += cur > prev ? 1.0 : 0.0;
                     }
                     if (result.level_tags.size() != schedule.levels() * cfg.num_steps) violations += 1.0;
                     return violations;
                   }});
}

void add_estimators(std::vector<Property>& props) {
  // Largest |grad sm_loss - grad D_F| in standard errors over 10 random Gaussian
  // (theta, data) pairs at 10^5 samples.
  props.push_back({"fisher_oracle_gradient_z", "estimators", 3.0, Rule::kBelow, [](const CheckOptions& o) {
                     RngStream rng(21);
                     double worst = 0.0;
                     for (int t = 0; t < 10; ++t) {
                       const auto family = EnergyFamily::gaussian(1 + t % 2);
                       const std::size_t d = family.dim();
                       const ParamVector theta = random_theta(family, rng, 0.5);
                       RealVector var = scaled_normal(rng, d, 0.4);
                       for (auto& v : var) v = std::exp(v);
                       const GaussianDensity data{scaled_normal(rng, d, 1.0), var};
                       const Batch batch = gaussian_batch(data, 100'000, rng);
                       const auto oracle = gaussian_family_fisher_gradient(data, family, theta);
                       const auto report =
                           sm_loss(family, theta, batch, o.flip_sm_sign ? HessianSign::kPlus : HessianSign::kMinus);
                       for (std::size_t i = 0; i < oracle.dim(); ++i) {
                         worst = std::max(worst, std::abs(report.grad_theta[i] - oracle[i]) / (*report.grad_theta_se)[i]);
                       }
                     }
                     return worst;
                   }});
  props.push_back({"sm_energy_shift_invariance", "estimators", 0.0, Rule::kAtMost, [](const CheckOptions&) {
                     const auto family = EnergyFamily::poly1d(4);
                     RngStream rng(22);
                     const auto theta = random_theta(family, rng, 0.5);
                     auto shifted = theta;
                     shifted.block("coef")[0] += 2.0;
                     const Batch batch = gaussian_batch(GaussianDensity::standard(1), 100, rng);
                     return std::abs(sm_loss(family, theta, batch).loss - sm_loss(family, shifted, batch).loss);
                   }});
  props.push_back({"analytic_vs_crn_fd", "estimators", 1e-4, Rule::kBelow, [](const CheckOptions&) {
                     RngStream rng(32);
                     const std::vector<EnergyFamily> families = {EnergyFamily::gaussian(1), EnergyFamily::gaussian(2),
                                                                 EnergyFamily::poly1d(4)};
                     double worst = 0.0;
                     for (int t = 0; t < 20; ++t) {
                       const auto& family = families[t % families.size()];
                       const auto theta = random_theta(family, rng, 0.3);
                       Batch batch;
                       for (int i = 0; i < 30; ++i) batch.push_back(scaled_normal(rng, family.dim(), 1.0));
                       const RngStream noise = rng.split();
                       auto check = [&](auto loss_fn) {
                         RngStream r = noise;
                         const auto analytic = loss_fn(theta, r).grad_theta;
                         const auto fd = estimator_grad_theta(
                             family, theta, [&](const ParamVector& p, RngStream& rr) { return loss_fn(p, rr).loss; },
                             noise);
                         worst = std::max(worst, relative_error(analytic, fd));
                       };
                       check([&](const ParamVector& p, RngStream&) { return sm_loss(family, p, batch); });
                       check([&](const ParamVector& p, RngStream& r) { return dsm_loss(family, p, batch, 0.4, r); });
                       check([&](const ParamVector& p, RngStream& r) { return dsm_cv_loss(family, p, batch, 0.4, r); });
                       check([&](const ParamVector& p, RngStream& r) {
                         return ssm_loss(family, p, batch, {Projection::kGaussian, 3, false}, r);
                       });
                       check([&](const ParamVector& p, RngStream& r) {
                         return ssm_loss(family, p, batch, {Projection::kRademacher, 3, true}, r);
                       });
                       check([&](const ParamVector& p, RngStream&) {
                         return shifted_nce_loss(family, p, batch, RealVector(family.dim(), 0.2));
                       });
                       const NceConfig cfg{.noise = GaussianDensity::isotropic(RealVector(family.dim(), 0.0), 2.0),
                                           .learn_log_z = false};
                       check([&](const ParamVector& p, RngStream&) {
                         return nce_loss(family, p, batch, Batch(batch.rbegin(), batch.rend()), cfg);
                       });
                     }
                     return worst;
                   }});
  props.push_back({"ssm_unbiased_z", "estimators", 3.0, Rule::kBelow, [](const CheckOptions&) {
                     const auto family = EnergyFamily::gaussian(3);
                     RngStream rng(19);
                     const auto theta = random_theta(family, rng, 0.4);
                     Batch batch;
                     for (int i = 0; i < 10; ++i) batch.push_back(scaled_normal(rng, 3, 1.0));
                     const double target = sm_loss(family, theta, batch).loss;
                     double worst = 0.0;
                     for (Projection p : {Projection::kGaussian, Projection::kRademacher}) {
                       for (bool vr : {false, true}) {
                         const auto sliced = ssm_loss(family, theta, batch, {p, 10'000, vr}, rng);
                         worst = std::max(worst, std::abs(sliced.loss - target) / sliced.aux.at("loss_se"));
                       }
                     }
                     return worst;
                   }});
  props.push_back({"dsm_cv_zero_mean_z", "estimators", 3.0, Rule::kBelow, [](const CheckOptions&) {
                     RngStream rng(14);
                     const Batch batch = gaussian_batch(GaussianDensity::standard(1), 100'000, rng);
                     const auto report =
                         dsm_cv_loss(EnergyFamily::gaussian(1), gaussian_params_diag({0.0}, {1.0}), batch, 0.3, rng);
                     return std::abs(report.aux.at("cv_mean")) / report.aux.at("cv_se");
                   }});
  props.push_back({"ksd_null_z", "estimators", 3.0, Rule::kBelow, [](const CheckOptions&) {
                     RngStream rng(27);
                     const Batch batch = gaussian_batch(GaussianDensity::standard(1), 2000, rng);
                     const auto r = ksd(EnergyFamily::gaussian(1), gaussian_params_diag({0.0}, {1.0}), batch, 1.0);
                     return std::abs(r.value) / r.se;
                   }});
  // Exact model samples, data N(1, 1), model N(0, 1): d loss / d mu = -1.
  props.push_back({"cd_closed_form_z", "estimators", 3.0, Rule::kBelow, [](const CheckOptions&) {
                     RngStream rng(2);
                     const Batch data = gaussian_batch(GaussianDensity::isotropic(RealVector{1.0}, 1.0), 100'000, rng);
                     const Batch model = gaussian_batch(GaussianDensity::standard(1), 100'000, rng);
                     const auto r =
                         contrastive_gradient(EnergyFamily::gaussian(1), gaussian_params_diag({0.0}, {1.0}), data, model);
                     return std::abs(r.grad_theta[0] + 1.0) / (*r.grad_theta_se)[0];
                   }});
  props.push_back({"nce_model_equals_noise_log2", "estimators", 1e-12, Rule::kBelow, [](const CheckOptions&) {
                     // Model exp(-x^2/2 - c) with c = log sqrt(2 pi) is exactly the N(0, 1) noise density.
                     const auto family = EnergyFamily::gaussian(1);
                     const auto theta = append_log_z(gaussian_params_diag({0.0}, {1.0}), 0.5 * std::log(2.0 * std::numbers::pi));
                     RngStream rng(23);
                     const Batch data = gaussian_batch(GaussianDensity::standard(1), 500, rng);
                     const Batch noise = gaussian_batch(GaussianDensity::standard(1), 500, rng);
                     const NceConfig cfg{.nu = 1.0, .noise = GaussianDensity::standard(1), .learn_log_z = true};
                     return std::abs(nce_loss(family, theta, data, noise, cfg).loss - std::numbers::ln2);
                   }});
}

void add_experiments(std::vector<Property>& props) {
  props.push_back({"config_round_trip_mismatch", "experiments", 0.0, Rule::kAtMost, [](const CheckOptions&) {
                     const char* text =
                         "experiment = gaussian_recovery\nseed = 7\nestimator = dsm\nestimator.sigma = 0.25\n"
                         "eval.eps = 0.3,0.1\nlog.wall_clock = false\nfamily = mixture_rbf(2,1)\n";
                     const ExperimentConfig a = parse_config(text);
                     const ExperimentConfig b = parse_config(serialize_config(a));
                     return a == b ? 0.0 : 1.0;
                   }});
  props.push_back({"de_bruijn_rel_gap", "experiments", 1e-3, Rule::kBelow, [](const CheckOptions&) {
                     const ExperimentResult r = evaluate_experiment(parse_config("experiment = de_bruijn\nseed = 0\n"));
                     double worst = 0.0;
                     for (const auto& row : r.summary) {
                       if (row.name.rfind("rel_gap_t", 0) == 0) worst = std::max(worst, row.value);
                     }
                     return worst;
                   }});
}

const std::vector<Property>& properties() {
  static const std::vector<Property> props = [] {
    std::vector<Property> p;
    add_numerics(p);
    add_energy(p);
    add_samplers(p);
    add_estimators(p);
    add_experiments(p);
    return p;
  }();
  return props;
}

bool judge(Rule rule, double measured, double tolerance) {
  switch (rule) {
    case Rule::kBelow: return measured < tolerance;
    case Rule::kAtMost: return measured <= tolerance;
    case Rule::kAtLeast: return measured >= tolerance;
  }
  return false;
}

}  // namespace

const std::vector<std::string>& check_property_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& p : properties()) out.push_back(p.name);
    return out;
  }();
  return names;
}

std::vector<CheckRow> run_check_suite(const CheckOptions& options) {
  std::vector<CheckRow> rows;
  for (const auto& p : properties()) {
    if (!options.filter.empty() && p.name.find(options.filter) == std::string::npos &&
        p.module.find(options.filter) == std::string::npos) {
      continue;
    }
    CheckRow row{p.name, p.module, 0.0, p.tolerance, false};
    try {
      row.measured = p.measure(options);
      row.pass = std::isfinite(row.measured) && judge(p.rule, row.measured, p.tolerance);
    } catch (const std::exception&) {
      row.measured = std::numeric_limits<double>::quiet_NaN();
      row.pass = false;
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

CsvTable check_report(const std::vector<CheckRow>& rows) {
  CsvTable table({"property", "module", "measured", "tolerance", "pass"});
  for (const auto& r : rows) {
    table.add_row({r.property, r.module, format_number(r.measured), format_number(r.tolerance), format_bool(r.pass)});
  }
  return table;
}

}  // namespace ebm

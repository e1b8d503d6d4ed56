// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "ebm/estimators/ksd.hpp"

#include <cmath>

#include "ebm/numerics/errors.hpp"
#include "ebm/numerics/stats.hpp"

namespace ebm {

KsdResult ksd(const EnergyFamily& family, const ParamVector& theta, const Batch& batch,
              double bandwidth) {
  family.check_params(theta);
  check_batch(batch, family.dim(), "ksd");
  if (batch.size() < 2) throw InvalidArgument("ksd: needs at least two points");
  if (!(bandwidth > 0.0)) throw InvalidArgument("ksd: bandwidth must be positive");
  const std::size_t n = batch.size();
  const std::size_t d = family.dim();
  const double h2 = bandwidth * bandwidth;
  const double h4 = h2 * h2;

  // Flat copies keep the O(n^2) loop allocation-free.
  std::vector<double> xs(n * d), ss(n * d);
  for (std::size_t i = 0; i < n; ++i) {
    const RealVector s = score(family, theta, batch[i]);
    for (std::size_t k = 0; k < d; ++k) {
      xs[i * d + k] = batch[i][k];
      ss[i * d + k] = s[k];
    }
  }

  std::vector<double> row_sum(n, 0.0);
  RunningStats pair_stats;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      double r2 = 0.0, s_dot = 0.0, cross = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = xs[i * d + k] - xs[j * d + k];
        r2 += diff * diff;
        s_dot += ss[i * d + k] * ss[j * d + k];
        cross += (ss[i * d + k] - ss[j * d + k]) * diff;
      }
      const double kern = std::exp(-r2 / (2.0 * h2));
      const double u = kern * (s_dot + cross / h2 + static_cast<double>(d) / h2 - r2 / h4);
      total += u;
      row_sum[i] += u;
      row_sum[j] += u;
      pair_stats.add(u);
    }
  }
  const double pairs = static_cast<double>(n) * static_cast<double>(n - 1) / 2.0;
  KsdResult out;
  out.value = total / pairs;
  // Var(U) ~ 4 Var(h1) / n + 2 Var(u) / (n (n - 1)), h1(x_i) = E_j u(x_i, x_j).
  RunningStats h1;
  for (double r : row_sum) h1.add(r / static_cast<double>(n - 1));
  const double nn = static_cast<double>(n);
  const double var_pairs = pair_stats.count() > 1 ? pair_stats.variance() : 0.0;
  out.se = std::sqrt(4.0 * h1.variance() / nn + 2.0 * var_pairs / (nn * (nn - 1.0)));
  return out;
}

}  // namespace ebm

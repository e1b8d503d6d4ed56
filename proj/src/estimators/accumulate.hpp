// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_SRC_ESTIMATORS_ACCUMULATE_HPP_
#define EBM_SRC_ESTIMATORS_ACCUMULATE_HPP_

#include <cmath>
#include <cstddef>
#include <vector>

#include "ebm/numerics/real_vector.hpp"
#include "ebm/numerics/stats.hpp"

namespace ebm::detail {

/// Per-coordinate running mean and variance of per-sample gradients.
class VectorStats {
 public:
  explicit VectorStats(std::size_t dim) : stats_(dim) {}

  void add(const RealVector& v) {
    for (std::size_t i = 0; i < stats_.size(); ++i) stats_[i].add(v[i]);
  }
  std::size_t count() const { return stats_.front().count(); }

  RealVector mean() const {
    RealVector m(stats_.size());
    for (std::size_t i = 0; i < stats_.size(); ++i) m[i] = stats_[i].mean();
    return m;
  }
  /// Variance of each coordinate divided by the count; zero for one sample.
  RealVector mean_variance() const {
    RealVector out(stats_.size(), 0.0);
    if (count() < 2) return out;
    for (std::size_t i = 0; i < stats_.size(); ++i) {
      out[i] = stats_[i].variance() / static_cast<double>(stats_[i].count());
    }
    return out;
  }
  RealVector standard_error() const {
    RealVector out = mean_variance();
    for (double& e : out) e = std::sqrt(e);
    return out;
  }

 private:
  std::vector<RunningStats> stats_;
};

inline double softplus(double a) { return a > 0.0 ? a + std::log1p(std::exp(-a)) : std::log1p(std::exp(a)); }
inline double sigmoid(double a) {
  if (a >= 0.0) return 1.0 / (1.0 + std::exp(-a));
  const double e = std::exp(a);
  return e / (1.0 + e);
}

}  // namespace ebm::detail

#endif  // EBM_SRC_ESTIMATORS_ACCUMULATE_HPP_

// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_NUMERICS_ERRORS_HPP_
#define EBM_NUMERICS_ERRORS_HPP_

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

namespace ebm {

/// Bad dimensions, mismatched layouts, out-of-range arguments.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation produced NaN/Inf. Carries the offending coordinate when one
/// is known (finite differences, vector construction).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what,
                        std::optional<std::size_t> coordinate = std::nullopt)
      : std::runtime_error(what), coordinate_(coordinate) {}

  std::optional<std::size_t> coordinate() const { return coordinate_; }

 private:
  std::optional<std::size_t> coordinate_;
};

/// An MCMC chain left the finite reals.
class ChainDivergence : public NumericError {
 public:
  ChainDivergence(const std::string& what, std::size_t step)
      : NumericError(what), step_(step) {}

  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace ebm

#endif  // EBM_NUMERICS_ERRORS_HPP_

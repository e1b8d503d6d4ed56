// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_NUMERICS_PARAM_VECTOR_HPP_
#define EBM_NUMERICS_PARAM_VECTOR_HPP_

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ebm/numerics/real_vector.hpp"

namespace ebm {

/// Named contiguous slice of a parameter vector.
struct ParamBlock {
  std::string name;
  std::size_t offset = 0;
  std::size_t length = 0;

  friend bool operator==(const ParamBlock&, const ParamBlock&) = default;
};

/// Flat parameter vector plus the layout that names its pieces.
/// Blocks are contiguous, non-overlapping and cover every entry.
class ParamVector {
 public:
  ParamVector(RealVector values, std::vector<ParamBlock> layout);

  /// Builds a vector by concatenating named blocks in order.
  static ParamVector from_blocks(const std::vector<std::pair<std::string, std::vector<double>>>& blocks);

  const RealVector& values() const { return values_; }
  RealVector& values() { return values_; }
  std::size_t size() const { return values_.dim(); }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }

  const std::vector<ParamBlock>& layout() const { return layout_; }
  bool has_block(std::string_view name) const;
  const ParamBlock& block_info(std::string_view name) const;
  std::span<const double> block(std::string_view name) const;
  std::span<double> block(std::string_view name);

  /// Same layout, new values. Throws InvalidArgument on size mismatch.
  ParamVector with_values(RealVector values) const;

  /// "name[i]" for each coordinate, in order.
  std::vector<std::string> coordinate_names() const;

  bool same_layout(const ParamVector& other) const { return layout_ == other.layout_; }

  friend bool operator==(const ParamVector&, const ParamVector&) = default;

 private:
  RealVector values_;
  std::vector<ParamBlock> layout_;
};

}  // namespace ebm

#endif  // EBM_NUMERICS_PARAM_VECTOR_HPP_

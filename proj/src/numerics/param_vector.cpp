// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "ebm/numerics/param_vector.hpp"

#include "ebm/numerics/errors.hpp"

namespace ebm {

ParamVector::ParamVector(RealVector values, std::vector<ParamBlock> layout)
    : values_(std::move(values)), layout_(std::move(layout)) {
  std::size_t expected = 0;
  for (const auto& b : layout_) {
    if (b.offset != expected || b.length == 0) {
      throw InvalidArgument("ParamVector: block '" + b.name + "' is not contiguous");
    }
    expected += b.length;
  }
  if (expected != values_.dim()) {
    throw InvalidArgument("ParamVector: layout covers " + std::to_string(expected) +
                          " entries, values have " + std::to_string(values_.dim()));
  }
}

ParamVector ParamVector::from_blocks(
    const std::vector<std::pair<std::string, std::vector<double>>>& blocks) {
  std::vector<double> values;
  std::vector<ParamBlock> layout;
  for (const auto& [name, entries] : blocks) {
    layout.push_back({name, values.size(), entries.size()});
    values.insert(values.end(), entries.begin(), entries.end());
  }
  return ParamVector(RealVector(std::move(values)), std::move(layout));
}

bool ParamVector::has_block(std::string_view name) const {
  for (const auto& b : layout_) {
    if (b.name == name) return true;
  }
  return false;
}

const ParamBlock& ParamVector::block_info(std::string_view name) const {
  for (const auto& b : layout_) {
    if (b.name == name) return b;
  }
  throw InvalidArgument("ParamVector: no block named '" + std::string(name) + "'");
}

std::span<const double> ParamVector::block(std::string_view name) const {
  const auto& b = block_info(name);
  return values_.view().subspan(b.offset, b.length);
}

std::span<double> ParamVector::block(std::string_view name) {
  const auto& b = block_info(name);
  return values_.view().subspan(b.offset, b.length);
}

ParamVector ParamVector::with_values(RealVector values) const {
  if (values.dim() != values_.dim()) {
    throw InvalidArgument("ParamVector::with_values: size mismatch");
  }
  return ParamVector(std::move(values), layout_);
}

std::vector<std::string> ParamVector::coordinate_names() const {
  std::vector<std::string> names;
  names.reserve(values_.dim());
  for (const auto& b : layout_) {
    for (std::size_t i = 0; i < b.length; ++i) {
      names.push_back(b.name + "[" + std::to_string(i) + "]");
    }
  }
  return names;
}

}  // namespace ebm

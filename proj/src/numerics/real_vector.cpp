// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#include "ebm/numerics/real_vector.hpp"

#include <cmath>
#include <string>

#include "ebm/numerics/errors.hpp"

namespace ebm {

namespace {

void check_entries(const std::vector<double>& entries) {
  if (entries.empty()) {
    throw InvalidArgument("RealVector: dimension must be positive");
  }
  for (std::size_t i = 0; i < entries.size(); ++i) {
    if (!std::isfinite(entries[i])) {
      throw NumericError("RealVector: non-finite entry at index " + std::to_string(i), i);
    }
  }
}

}  // namespace

RealVector::RealVector(std::size_t dim, double fill) : entries_(dim, fill) {
  check_entries(entries_);
}

RealVector::RealVector(std::vector<double> entries) : entries_(std::move(entries)) {
  check_entries(entries_);
}

RealVector::RealVector(std::initializer_list<double> entries) : entries_(entries) {
  check_entries(entries_);
}

bool RealVector::all_finite() const {
  for (double v : entries_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

RealVector& RealVector::operator+=(const RealVector& other) {
  require_same_dim(*this, other, "operator+=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

RealVector& RealVector::operator-=(const RealVector& other) {
  require_same_dim(*this, other, "operator-=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

RealVector& RealVector::operator*=(double scale) {
  for (double& v : entries_) v *= scale;
  return *this;
}

RealVector operator+(RealVector a, const RealVector& b) { return a += b; }
RealVector operator-(RealVector a, const RealVector& b) { return a -= b; }
RealVector operator-(RealVector a) { return a *= -1.0; }
RealVector operator*(double scale, RealVector a) { return a *= scale; }
RealVector operator*(RealVector a, double scale) { return a *= scale; }

double dot(const RealVector& a, const RealVector& b) {
  require_same_dim(a, b, "dot");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) acc += a[i] * b[i];
  return acc;
}

double squared_norm(const RealVector& a) {
  double acc = 0.0;
  for (double v : a) acc += v * v;
  return acc;
}

double norm(const RealVector& a) { return std::sqrt(squared_norm(a)); }

void axpy(double alpha, const RealVector& x, RealVector& y) {
  require_same_dim(x, y, "axpy");
  for (std::size_t i = 0; i < x.dim(); ++i) y[i] += alpha * x[i];
}

RealVector basis_vector(std::size_t dim, std::size_t i) {
  if (i >= dim) throw InvalidArgument("basis_vector: index out of range");
  RealVector e(dim, 0.0);
  e[i] = 1.0;
  return e;
}

void require_same_dim(const RealVector& a, const RealVector& b, const char* what) {
  if (a.dim() != b.dim()) {
    throw InvalidArgument(std::string(what) + ": dimension mismatch (" +
                          std::to_string(a.dim()) + " vs " + std::to_string(b.dim()) + ")");
  }
}

}  // namespace ebm

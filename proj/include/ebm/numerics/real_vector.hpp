// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_NUMERICS_REAL_VECTOR_HPP_
#define EBM_NUMERICS_REAL_VECTOR_HPP_

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ebm {

/// Dense vector of doubles with dim >= 1. Entries are checked finite when the
/// vector is constructed from external data; element writes are unchecked.
class RealVector {
 public:
  /// Vector of `dim` copies of `fill`. Throws InvalidArgument when dim == 0.
  explicit RealVector(std::size_t dim, double fill = 0.0);
  /// Throws InvalidArgument when empty, NumericError when a value is not finite.
  explicit RealVector(std::vector<double> entries);
  RealVector(std::initializer_list<double> entries);

  std::size_t dim() const { return entries_.size(); }
  std::size_t size() const { return entries_.size(); }

  double operator[](std::size_t i) const { return entries_[i]; }
  double& operator[](std::size_t i) { return entries_[i]; }

  std::span<const double> view() const { return entries_; }
  std::span<double> view() { return entries_; }
  const std::vector<double>& entries() const { return entries_; }

  auto begin() const { return entries_.begin(); }
  auto end() const { return entries_.end(); }
  auto begin() { return entries_.begin(); }
  auto end() { return entries_.end(); }

  /// True when every entry is finite.
  bool all_finite() const;

  RealVector& operator+=(const RealVector& other);
  RealVector& operator-=(const RealVector& other);
  RealVector& operator*=(double scale);

  friend bool operator==(const RealVector&, const RealVector&) = default;

 private:
  std::vector<double> entries_;
};

RealVector operator+(RealVector a, const RealVector& b);
RealVector operator-(RealVector a, const RealVector& b);
RealVector operator-(RealVector a);
RealVector operator*(double scale, RealVector a);
RealVector operator*(RealVector a, double scale);

double dot(const RealVector& a, const RealVector& b);
double squared_norm(const RealVector& a);
double norm(const RealVector& a);

/// y += alpha * x
void axpy(double alpha, const RealVector& x, RealVector& y);

/// Unit vector e_i of dimension dim.
RealVector basis_vector(std::size_t dim, std::size_t i);

/// Throws InvalidArgument unless a.dim() == b.dim().
void require_same_dim(const RealVector& a, const RealVector& b, const char* what);

}  // namespace ebm

#endif  // EBM_NUMERICS_REAL_VECTOR_HPP_

// Copyright 2026 The signopt Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// =============================================================================

#ifndef SIGNOPT_VECMATH_HPP
#define SIGNOPT_VECMATH_HPP

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace signopt {

/// Dense real vector of fixed dimension d >= 1.
///
/// Construction only checks the dimension. Finiteness is checked by the
/// operations that consume a vector (norms, signum), so that callers such as
/// the run loop can detect a blown-up iterate and report it as divergence
/// rather than as bad input.
class DenseVector {
 public:
  explicit DenseVector(std::size_t dim, double fill = 0.0);
  explicit DenseVector(std::vector<double> entries);
  DenseVector(std::initializer_list<double> entries);

  std::size_t dim() const noexcept { return entries_.size(); }

  double operator[](std::size_t i) const { return entries_[i]; }
  double& operator[](std::size_t i) { return entries_[i]; }

  std::span<const double> view() const noexcept { return entries_; }
  std::span<double> view() noexcept { return entries_; }
  const std::vector<double>& entries() const noexcept { return entries_; }

  bool is_finite() const noexcept;

  DenseVector& operator+=(const DenseVector& other);
  DenseVector& operator-=(const DenseVector& other);
  DenseVector& operator*=(double scale);

  friend bool operator==(const DenseVector&, const DenseVector&) = default;

 private:
  std::vector<double> entries_;
};

DenseVector operator+(DenseVector lhs, const DenseVector& rhs);
DenseVector operator-(DenseVector lhs, const DenseVector& rhs);
DenseVector operator*(double scale, DenseVector v);

/// Throws kInvalidInput when any entry is NaN or infinite.
void require_finite(const DenseVector& v, const char* context);
/// Throws kInvalidInput when the dimensions differ.
void require_same_dim(const DenseVector& a, const DenseVector& b,
                      const char* context);

/// Componentwise signum with sign(0) = 0.
DenseVector sign_vec(const DenseVector& v);

double l1_norm(const DenseVector& v);
double linf_norm(const DenseVector& v);
double l2_norm(const DenseVector& v);
double dot(const DenseVector& a, const DenseVector& b);

/// y <- y + a * x
void axpy(double a, const DenseVector& x, DenseVector& y);

}  // namespace signopt

#endif  // SIGNOPT_VECMATH_HPP

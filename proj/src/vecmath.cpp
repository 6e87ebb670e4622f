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

#include "signopt/vecmath.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "signopt/errors.hpp"

namespace signopt {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kNoMinimum: return "no-minimum";
    case ErrorKind::kMissingData: return "missing-data";
    case ErrorKind::kOutOfRange: return "out-of-range";
    case ErrorKind::kInvalidConfig: return "invalid-config";
    case ErrorKind::kDivergence: return "divergence";
    case ErrorKind::kStiffness: return "stiffness";
    case ErrorKind::kUndefinedPMin: return "undefined-p_min";
    case ErrorKind::kIterationCap: return "iteration-cap";
    case ErrorKind::kParse: return "parse";
  }
  return "unknown";
}

DenseVector::DenseVector(std::size_t dim, double fill) : entries_(dim, fill) {
  if (dim == 0) fail(ErrorKind::kInvalidInput, "DenseVector: dimension must be >= 1");
}

DenseVector::DenseVector(std::vector<double> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) fail(ErrorKind::kInvalidInput, "DenseVector: dimension must be >= 1");
}

DenseVector::DenseVector(std::initializer_list<double> entries)
    : DenseVector(std::vector<double>(entries)) {}

bool DenseVector::is_finite() const noexcept {
  return std::all_of(entries_.begin(), entries_.end(),
                     [](double e) { return std::isfinite(e); });
}

DenseVector& DenseVector::operator+=(const DenseVector& other) {
  require_same_dim(*this, other, "operator+=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] += other.entries_[i];
  return *this;
}

DenseVector& DenseVector::operator-=(const DenseVector& other) {
  require_same_dim(*this, other, "operator-=");
  for (std::size_t i = 0; i < entries_.size(); ++i) entries_[i] -= other.entries_[i];
  return *this;
}

DenseVector& DenseVector::operator*=(double scale) {
  for (double& e : entries_) e *= scale;
  return *this;
}

DenseVector operator+(DenseVector lhs, const DenseVector& rhs) { return lhs += rhs; }
DenseVector operator-(DenseVector lhs, const DenseVector& rhs) { return lhs -= rhs; }
DenseVector operator*(double scale, DenseVector v) { return v *= scale; }

void require_finite(const DenseVector& v, const char* context) {
  if (!v.is_finite()) {
    fail(ErrorKind::kInvalidInput, std::string(context) + ": non-finite entry");
  }
}

void require_same_dim(const DenseVector& a, const DenseVector& b, const char* context) {
  if (a.dim() != b.dim()) {
    fail(ErrorKind::kInvalidInput, std::string(context) + ": dimension mismatch (" +
                                       std::to_string(a.dim()) + " vs " +
                                       std::to_string(b.dim()) + ")");
  }
}

DenseVector sign_vec(const DenseVector& v) {
  require_finite(v, "sign_vec");
  DenseVector out(v.dim());
  for (std::size_t i = 0; i < v.dim(); ++i) {
    out[i] = v[i] > 0.0 ? 1.0 : (v[i] < 0.0 ? -1.0 : 0.0);
  }
  return out;
}

double l1_norm(const DenseVector& v) {
  require_finite(v, "l1_norm");
  double s = 0.0;
  for (double e : v.view()) s += std::abs(e);
  return s;
}

double linf_norm(const DenseVector& v) {
  require_finite(v, "linf_norm");
  double m = 0.0;
  for (double e : v.view()) m = std::max(m, std::abs(e));
  return m;
}

double l2_norm(const DenseVector& v) {
  require_finite(v, "l2_norm");
  double s = 0.0;
  for (double e : v.view()) s += e * e;
  return std::sqrt(s);
}

double dot(const DenseVector& a, const DenseVector& b) {
  require_same_dim(a, b, "dot");
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += a[i] * b[i];
  return s;
}

void axpy(double a, const DenseVector& x, DenseVector& y) {
  require_same_dim(x, y, "axpy");
  for (std::size_t i = 0; i < x.dim(); ++i) y[i] += a * x[i];
}

}  // namespace signopt

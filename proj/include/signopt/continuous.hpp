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

#ifndef SIGNOPT_CONTINUOUS_HPP
#define SIGNOPT_CONTINUOUS_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "signopt/objectives.hpp"
#include "signopt/vecmath.hpp"

namespace signopt {

enum class FlowKind {
  kGradient,  // x' = -beta grad f(x)
  kSign,      // x' = -beta sign(grad f(x))
};

struct FlowConfig {
  FlowKind kind = FlowKind::kGradient;
  double beta = 0.1;
  double dt = 1e-4;
  double t_end = 5.0;
  /// Record every `sample_stride` base steps (the final time is always recorded).
  std::size_t sample_stride = 100;

  void validate() const;
};

struct FlowSample {
  double t = 0.0;
  double V = 0.0;
  double grad_l2 = 0.0;
  double grad_l1 = 0.0;
};

struct ContinuousTrace {
  FlowKind kind = FlowKind::kGradient;
  double beta = 0.0;
  std::vector<FlowSample> samples;
  /// Number of step halvings taken to keep f non-increasing.
  std::size_t halvings = 0;
};

/// Forward Euler. A step that would increase f is split into two half steps,
/// recursively, at most 20 levels deep (kStiffness beyond that). For the
/// sign flow, coordinates with |g_i| <= 1e-9 are frozen for the step so the
/// trajectory settles at the minimizer instead of chattering around it.
ContinuousTrace integrate_flow(const FlowConfig& cfg, const Objective& obj, const DenseVector& x0);

struct FlowVerdict {
  bool pass = true;
  std::optional<double> first_violation_t;
  std::string failed_inequality;
  std::size_t checked = 0;

  std::string to_text() const;
};

/// Gradient-flow bounds:
///   convex:    V(t) <= D1^2 V(0) / (D1^2 + V(0) beta t)
///   nonconvex: min_{s<=t} ||grad f||_2 <= sqrt(V(0)) / sqrt(beta t)
/// The convex check needs D1 (sublevel-set diameter in l2).
FlowVerdict check_prop1(const ContinuousTrace& trace, std::optional<double> D1, double beta,
                        bool convex = true, double slack = 1.0 + 1e-6);

/// Sign-flow bounds:
///   convex:    V(t) <= V(0) exp(-beta t / D2)
///   nonconvex: min_{s<=t} ||grad f||_1 <= V(0) / (beta t)
/// The convex check needs D2 (sublevel-set diameter in l_inf).
FlowVerdict check_prop2(const ContinuousTrace& trace, std::optional<double> D2, double beta,
                        bool convex = true, double slack = 1.0 + 1e-6);

enum class DiameterNorm { kL2, kLinf };

/// Largest distance to the minimizer over random box points in the sublevel
/// set {f <= f(x0)}. A lower estimate of the true diameter.
double estimate_sublevel_diameter(const Objective& obj, const DenseVector& x0, const Box& box,
                                  std::size_t budget, std::uint64_t seed, DiameterNorm norm);

/// Header: t,V,grad_l2,grad_l1
void write_continuous_csv(std::ostream& out, const ContinuousTrace& trace);

}  // namespace signopt

#endif  // SIGNOPT_CONTINUOUS_HPP

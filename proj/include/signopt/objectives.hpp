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

#ifndef SIGNOPT_OBJECTIVES_HPP
#define SIGNOPT_OBJECTIVES_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "signopt/vecmath.hpp"

namespace signopt {

enum class Provenance { kAnalytic, kEstimated };

struct Constant {
  double value = 0.0;
  Provenance provenance = Provenance::kAnalytic;
};

/// Norm constants of an objective.
///
///   mu_inf : f(x) - f(y) >= <grad f(y), x - y> + mu/2 ||x - y||_inf^2
///   L_inf  : ||grad f(x) - grad f(y)||_1 <= L ||x - y||_inf
///   pl_mu  : ||grad f(x)||_1^2 >= 2 mu (f(x) - f*)
struct ConstantSet {
  std::optional<Constant> mu_inf;
  std::optional<Constant> L_inf;
  std::optional<Constant> pl_mu;

  /// Throws kInvalidInput if a constant is non-positive or if analytic
  /// mu_inf exceeds analytic L_inf.
  void validate() const;
};

/// Sum-structured objectives f = (1/n) sum_i f_i expose their components
/// so a minibatch oracle can average a subset of them.
struct FiniteSum {
  std::size_t count = 0;
  /// accum += grad f_i(x)
  std::function<void(std::size_t i, const DenseVector& x, DenseVector& accum)> add_component_grad;
};

struct ObjectiveParts {
  std::string name;
  std::size_t dim = 0;
  std::function<double(const DenseVector&)> value;
  std::function<DenseVector(const DenseVector&)> gradient;
  std::optional<double> f_star;
  std::optional<DenseVector> minimizer;
  ConstantSet constants;
  /// Euclidean Lipschitz constant of the gradient, when known. Used for the
  /// step size of the long-run GD baseline.
  std::optional<double> l2_lipschitz;
  std::shared_ptr<const FiniteSum> finite_sum;
};

/// Immutable differentiable objective. Evaluation is re-entrant.
class Objective {
 public:
  explicit Objective(ObjectiveParts parts);

  const std::string& name() const noexcept { return parts_.name; }
  std::size_t dim() const noexcept { return parts_.dim; }

  double value(const DenseVector& x) const;
  DenseVector gradient(const DenseVector& x) const;

  const std::optional<double>& f_star() const noexcept { return parts_.f_star; }
  const std::optional<DenseVector>& minimizer() const noexcept { return parts_.minimizer; }
  const ConstantSet& constants() const noexcept { return parts_.constants; }
  const std::optional<double>& l2_lipschitz() const noexcept { return parts_.l2_lipschitz; }
  const FiniteSum* finite_sum() const noexcept { return parts_.finite_sum.get(); }

  /// Copy with a computed optimal value attached (e.g. from a baseline run).
  Objective with_f_star(double f_star) const;
  Objective with_constants(ConstantSet constants) const;

 private:
  ObjectiveParts parts_;
};

/// f(x) = 1/2 x^T A x - b^T x.
Objective make_quadratic(const Eigen::MatrixXd& A, const DenseVector& b,
                         std::string name = "quadratic");

/// f(x) = x^2 + 3 sin^2(x); nonconvex, PL.
Objective make_toy_pl();

struct Sample {
  DenseVector features;
  int label = 1;
  friend bool operator==(const Sample&, const Sample&) = default;
};
using SampleList = std::vector<Sample>;

/// f(x) = (1/n) sum_i log(1 + exp(-b_i a_i^T x)) + ||x||^2 / (2n)
Objective make_logistic(SampleList samples, std::string name = "logistic");

struct SyntheticData {
  SampleList samples;
  DenseVector hidden_weights;
};

/// Gaussian features, labels drawn from the logistic model around a hidden
/// weight vector. Deterministic in seed.
SyntheticData synth_logistic_data(std::size_t n, std::size_t d, std::uint64_t seed);

void write_samples_csv(std::ostream& out, const SampleList& samples);
SampleList read_samples_csv(std::istream& in);

/// Axis-aligned region [lower_i, upper_i].
struct Box {
  std::vector<double> lower;
  std::vector<double> upper;

  static Box cube(std::size_t dim, double lo, double hi);
  std::size_t dim() const noexcept { return lower.size(); }
};

struct EstimateRequest {
  bool lipschitz = true;
  bool pl = true;
};

/// Running max of ||grad f(x) - grad f(y)||_1 / ||x - y||_inf over random
/// pairs and running min of the PL ratio over random points in the box.
/// The first k samples do not depend on the budget, so the estimates are
/// monotone in it.
ConstantSet estimate_constants(const Objective& obj, const Box& box, std::size_t budget,
                               std::uint64_t seed, EstimateRequest request = {});

}  // namespace signopt

#endif  // SIGNOPT_OBJECTIVES_HPP

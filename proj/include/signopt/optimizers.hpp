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

#ifndef SIGNOPT_OPTIMIZERS_HPP
#define SIGNOPT_OPTIMIZERS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "signopt/objectives.hpp"
#include "signopt/oracles.hpp"
#include "signopt/vecmath.hpp"

namespace signopt {

enum class Method {
  kGd,                   // x' = x - a g
  kSignGd,               // x' = x - a sign(g)
  kScaledSignGd,         // x' = x - a ||g||_1 sign(g)
  kAdagradNorm,          // b'^2 = b^2 + ||g||^2,       x' = x - (eta/b') g
  kSignAdagradGradAccum, // b'^2 = b^2 + ||g||^2,       x' = x - (eta/b') sign(g)
  kSignAdagradSignAccum, // b'^2 = b^2 + ||sign g||^2,  x' = x - (eta/b') sign(g)
  kEfSignGd,             // error feedback with the scaled sign compressor
  kSignum,               // sign of an exponential moving average of gradients
};

/// Where EF-SIGNGD evaluates the gradient: at x_k, or at x_k - e_k.
enum class EfMode { kAtX, kAtXMinusE };

std::string_view method_name(Method m);
/// Accepts both the deterministic and the stochastic spelling
/// (e.g. "scaled_signgd" and "scaled_signsgd").
std::optional<Method> parse_method(std::string_view name);

struct OptimizerState {
  DenseVector x;
  std::size_t k = 0;
  double accumulator_b = 0.0;
  DenseVector ef_residual;
  DenseVector momentum;

  explicit OptimizerState(DenseVector x0)
      : x(std::move(x0)), ef_residual(x.dim()), momentum(x.dim()) {}
};

OptimizerState step_gd(const OptimizerState& state, const Objective& obj, double alpha);
OptimizerState step_signgd(const OptimizerState& state, const Objective& obj, double alpha);
OptimizerState step_scaled_signgd(const OptimizerState& state, const Objective& obj, double alpha);
OptimizerState step_adagrad_norm(const OptimizerState& state, const Objective& obj, double eta);
OptimizerState step_sign_adagrad_grad_accum(const OptimizerState& state, const Objective& obj,
                                            double eta);
OptimizerState step_sign_adagrad_sign_accum(const OptimizerState& state, const Objective& obj,
                                            double eta);
OptimizerState step_ef_signgd(const OptimizerState& state, const Objective& obj, double lambda,
                              EfMode mode);

// Stochastic counterparts. Each draws exactly one gradient from the oracle.
OptimizerState step_sgd(const OptimizerState& state, StochasticOracle& oracle, double alpha);
OptimizerState step_signsgd(const OptimizerState& state, StochasticOracle& oracle, double alpha);
OptimizerState step_scaled_signsgd(const OptimizerState& state, StochasticOracle& oracle,
                                   double alpha);
OptimizerState step_ef_signsgd(const OptimizerState& state, StochasticOracle& oracle,
                               double lambda, EfMode mode);
OptimizerState step_signum(const OptimizerState& state, StochasticOracle& oracle, double alpha,
                           double beta_m);

/// Step-size sequence a_k.
class Schedule {
 public:
  enum class Kind { kConstant, kDiminishing, kCustom };

  static Schedule constant(double alpha);
  /// a_k = 3 / (mu (2 p_min - 1) (k + 1))
  static Schedule diminishing(double mu, double p_min);
  /// a_k = c / (k + 1) with an explicit constant.
  static Schedule harmonic(double c);
  static Schedule custom(std::vector<double> values);

  double value(std::size_t k) const;
  Kind kind() const noexcept { return kind_; }
  /// alpha for constant, c for diminishing/harmonic.
  double scale() const noexcept { return scale_; }
  std::string describe() const;

 private:
  Schedule(Kind kind, double scale, std::vector<double> values)
      : kind_(kind), scale_(scale), values_(std::move(values)) {}

  Kind kind_;
  double scale_;
  std::vector<double> values_;
};

inline double schedule_value(const Schedule& s, std::size_t k) { return s.value(k); }

struct TraceRow {
  std::size_t k = 0;
  double f = 0.0;
  std::optional<double> V;
  double grad_l1 = 0.0;
  /// Step size used to leave x_k; empty on the final row.
  std::optional<double> alpha;
  std::optional<double> bound;
  /// Cumulative communication spent to reach x_k.
  std::uint64_t bits_up = 0;
  std::uint64_t bits_down = 0;
  std::optional<DenseVector> x;
};

enum class TraceStatus { kCompleted, kStationary };

struct Trace {
  std::vector<TraceRow> rows;
  TraceStatus status = TraceStatus::kCompleted;

  std::vector<double> suboptimality() const;
};

/// Appends the row for iterate x. V is filled when the objective knows f*.
void append_row(Trace& trace, const Objective& obj, std::size_t k, const DenseVector& x,
                std::optional<double> alpha);

struct MethodConfig {
  Method method = Method::kScaledSignGd;
  double beta_m = 0.9;
  EfMode ef_mode = EfMode::kAtX;
};

using GradientSource = std::variant<const Objective*, StochasticOracle*>;

struct RunOptions {
  /// Record x_k every `snapshot_stride` rows (0 = never).
  std::size_t snapshot_stride = 0;
  /// Theoretical bound overlay written into the bound column.
  std::function<double(std::size_t k)> bound;
  /// Stop early once ||grad f(x_k)||_1 <= this value (0 disables).
  double stop_grad_l1 = 0.0;
};

/// Runs `iters` steps from x0 and records rows k = 0..iters. A stochastic
/// source is reseeded with derive_seed(seed, 0) first, so results depend
/// only on (config, seed). Throws DivergenceError on a non-finite or
/// astronomically large iterate.
Trace run(const MethodConfig& config, GradientSource source, const Schedule& schedule,
          const DenseVector& x0, std::size_t iters, std::uint64_t seed,
          const RunOptions& options = {});

/// Header: k,f,V,grad_l1,alpha,bound,bits_up,bits_down[,x1..xd]
void write_trace_csv(std::ostream& out, const Trace& trace, bool with_iterates = false);

/// 17 significant digits.
std::string format_double(double v);

}  // namespace signopt

#endif  // SIGNOPT_OPTIMIZERS_HPP

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

#ifndef SIGNOPT_THEORY_HPP
#define SIGNOPT_THEORY_HPP

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "signopt/optimizers.hpp"

namespace signopt {

/// zeta = 1 - 2 mu a (1 - L a / 2), the deterministic linear rate.
/// Requires mu > 0, L >= mu and 0 < a < 2/L.
double rate_zeta(double mu, double L, double alpha);

/// gamma = a (1 - L a / 2), the per-step descent coefficient.
double rate_gamma(double L, double alpha);

struct RateAndFloor {
  double zeta = 0.0;
  double floor = 0.0;
};

/// Single-node stochastic rate and error floor under a constant step:
///   zeta1 = 1 - 2 mu a (2 p - 1 - L a)
///   floor = L sigma^2 a / (2 mu (2 p - 1 - L a))
/// Requires p in (1/2, 1] and 0 < a < (2p - 1)/L.
RateAndFloor rate_zeta1_and_floor(double mu, double L, double alpha, double sigma, double p_min);

/// Majority-vote rate with q = I_p(kappa, kappa), kappa = floor((M+1)/2):
///   zeta2 = 1 - 2 mu a (2 q - 1 - L a)
///   floor = L sigma^2 a^2 / (1 - zeta2)
RateAndFloor rate_zeta2_and_floor(double mu, double L, double alpha, double sigma, double p_min,
                                  int workers);

int majority_kappa(int workers);

/// Regularized incomplete beta function by adaptive Gauss-Kronrod
/// quadrature of its defining integral. Exact at p = 0 and p = 1.
double reg_inc_beta(double p, double a, double b);

/// (f(x0) - f*) / (gamma (k + 1)): bound on min_l ||g_l||_1^2 without PL.
double nonconvex_bound(double f0_gap, double L, double alpha, std::size_t k);

/// 9 L sigma^2 / (mu^2 (2p-1)^2) (32/k + 1/k^2) + (f(x0) - f*)/(k+1)^3
double diminishing_bound(double mu, double L, double sigma, double p_min, double f0_gap,
                         std::size_t k);

struct RateInputs {
  double mu = 0.0;
  double L = 0.0;
  double alpha = 0.0;
  double sigma = 0.0;
  double p_min = 1.0;
  int workers = 1;
};

/// Every constant whose step-size condition holds at the given inputs.
struct RateBundle {
  RateInputs inputs;
  int kappa = 1;
  std::optional<double> zeta;
  std::optional<double> gamma;
  std::optional<double> zeta1;
  std::optional<double> floor1;
  std::optional<double> zeta2;
  std::optional<double> floor2;

  std::string to_text() const;
};

RateBundle make_rate_bundle(const RateInputs& inputs);

enum class Theorem { kThm1, kThm2Const, kThm2Dimin, kThm3Dist };

std::string_view theorem_name(Theorem t);
std::optional<Theorem> parse_theorem(std::string_view name);

struct Verdict {
  Theorem which = Theorem::kThm1;
  bool pass = true;
  std::optional<std::size_t> first_violation;
  /// max over checked k of V_k / bound_k
  double max_ratio = 0.0;
  std::size_t checked = 0;

  std::string to_text() const;
  static std::string csv_header();
  std::string to_csv_row() const;
};

/// Right-hand side of the selected bound at iteration k, given V_0.
std::function<double(std::size_t)> bound_function(const RateBundle& bundle, Theorem which,
                                                  double v0);

/// Checks V_k <= slack * bound_k for k in [k_min, k_max]. For the stochastic
/// theorems `suboptimality` must already be a seed-averaged mean trace.
Verdict verify_trace_bound(std::span<const double> suboptimality, const RateBundle& bundle,
                           Theorem which, double slack, std::size_t k_min = 0,
                           std::optional<std::size_t> k_max = std::nullopt);

Verdict verify_trace_bound(const Trace& trace, const RateBundle& bundle, Theorem which,
                           double slack, std::size_t k_min = 0,
                           std::optional<std::size_t> k_max = std::nullopt);

}  // namespace signopt

#endif  // SIGNOPT_THEORY_HPP

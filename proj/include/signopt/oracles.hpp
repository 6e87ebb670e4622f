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

#ifndef SIGNOPT_ORACLES_HPP
#define SIGNOPT_ORACLES_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "signopt/objectives.hpp"
#include "signopt/rng.hpp"
#include "signopt/vecmath.hpp"

namespace signopt {

/// Independent zero-mean gaussian noise added per coordinate. A single
/// entry is broadcast to every coordinate.
struct GaussianNoise {
  std::vector<double> noise_std;
};

/// Average of batch_size component gradients sampled without replacement.
struct Minibatch {
  std::size_t batch_size = 1;
};

using OracleKind = std::variant<GaussianNoise, Minibatch>;

/// Unbiased stochastic gradient source with an l1 variance bound.
///
/// Owns a private RNG stream; one instance must not be driven from two
/// threads at once. Two oracles built with the same seed draw identical
/// sequences.
class StochasticOracle {
 public:
  StochasticOracle(std::shared_ptr<const Objective> base, OracleKind kind, std::uint64_t seed,
                   double declared_p_min = 1.0,
                   std::optional<double> declared_sigma = std::nullopt);

  static StochasticOracle gaussian(std::shared_ptr<const Objective> base, double noise_std,
                                   std::uint64_t seed, double declared_p_min = 1.0);
  static StochasticOracle minibatch(std::shared_ptr<const Objective> base, std::size_t batch_size,
                                    std::uint64_t seed, double declared_p_min = 1.0);

  DenseVector draw(const DenseVector& x);

  const Objective& base() const noexcept { return *base_; }
  std::shared_ptr<const Objective> base_ptr() const noexcept { return base_; }
  const OracleKind& kind() const noexcept { return kind_; }

  /// sigma with E||g~ - g||_1^2 <= sigma^2.
  double declared_sigma() const noexcept { return declared_sigma_; }
  /// Lower bound on the per-coordinate sign success probability assumed by
  /// the rate bounds. Configuration, not measured.
  double declared_p_min() const noexcept { return declared_p_min_; }

  /// Restart the stream (used to replay a run under a different seed).
  void reseed(std::uint64_t seed);
  /// Fresh copy of this oracle on another stream.
  StochasticOracle with_seed(std::uint64_t seed) const;

 private:
  std::shared_ptr<const Objective> base_;
  OracleKind kind_;
  Rng rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::vector<std::size_t> index_pool_;
  double declared_sigma_ = 0.0;
  double declared_p_min_ = 1.0;
};

inline DenseVector draw(StochasticOracle& oracle, const DenseVector& x) { return oracle.draw(x); }

/// P(sign(g_i + N(0, s^2)) = sign(g_i)) = Phi(|g_i| / s).
double success_probability_gaussian(double g_i, double noise_std);

/// Standard normal CDF.
double standard_normal_cdf(double z);

/// Smallest empirical sign-agreement frequency over the given points and
/// over coordinates with |g_i| > 1e-12.
double estimate_p_min(StochasticOracle& oracle, std::span<const DenseVector> points,
                      std::size_t draws_per_point);

}  // namespace signopt

#endif  // SIGNOPT_ORACLES_HPP

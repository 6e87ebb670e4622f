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

#include "signopt/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "signopt/errors.hpp"

namespace signopt {
namespace {

std::vector<double> broadcast(const std::vector<double>& std_devs, std::size_t d) {
  if (std_devs.size() == 1) return std::vector<double>(d, std_devs.front());
  if (std_devs.size() != d) {
    fail(ErrorKind::kInvalidInput, "GaussianNoise: noise_std must have 1 or d entries");
  }
  return std_devs;
}

// E||n||_1^2 for independent n_i ~ N(0, s_i^2), inflated by 1.05 on sigma.
double gaussian_sigma(const std::vector<double>& s) {
  const double c = 2.0 / std::numbers::pi;
  double mean_abs = 0.0;
  double var_abs = 0.0;
  for (double si : s) {
    mean_abs += si * std::sqrt(c);
    var_abs += si * si * (1.0 - c);
  }
  return 1.05 * std::sqrt(mean_abs * mean_abs + var_abs);
}

}  // namespace

StochasticOracle::StochasticOracle(std::shared_ptr<const Objective> base, OracleKind kind,
                                   std::uint64_t seed, double declared_p_min,
                                   std::optional<double> declared_sigma)
    : base_(std::move(base)), kind_(std::move(kind)), rng_(seed), declared_p_min_(declared_p_min) {
  if (!base_) fail(ErrorKind::kInvalidInput, "StochasticOracle: null objective");
  if (!(declared_p_min > 0.5 && declared_p_min <= 1.0)) {
    fail(ErrorKind::kInvalidConfig, "StochasticOracle: declared p_min must lie in (1/2, 1]");
  }
  if (auto* g = std::get_if<GaussianNoise>(&kind_)) {
    if (g->noise_std.empty()) fail(ErrorKind::kInvalidInput, "GaussianNoise: empty noise_std");
    g->noise_std = broadcast(g->noise_std, base_->dim());
    for (double s : g->noise_std) {
      if (!(s >= 0.0 && std::isfinite(s))) {
        fail(ErrorKind::kInvalidInput, "GaussianNoise: noise_std must be finite and >= 0");
      }
    }
    declared_sigma_ = gaussian_sigma(g->noise_std);
  } else {
    const auto& mb = std::get<Minibatch>(kind_);
    const FiniteSum* sum = base_->finite_sum();
    if (sum == nullptr) fail(ErrorKind::kInvalidInput, "Minibatch: objective is not a finite sum");
    if (mb.batch_size == 0 || mb.batch_size > sum->count) {
      fail(ErrorKind::kInvalidInput, "Minibatch: batch_size must lie in [1, n]");
    }
    index_pool_.resize(sum->count);
    for (std::size_t i = 0; i < index_pool_.size(); ++i) index_pool_[i] = i;
    if (!declared_sigma) {
      // Monte Carlo at the origin on a side stream.
      StochasticOracle probe(base_, kind_, derive_seed(seed, 0x5167), declared_p_min, 0.0);
      const DenseVector x0(base_->dim());
      const DenseVector g = base_->gradient(x0);
      double acc = 0.0;
      constexpr int kDraws = 1000;
      for (int r = 0; r < kDraws; ++r) {
        const double e = l1_norm(probe.draw(x0) - g);
        acc += e * e;
      }
      declared_sigma_ = 1.1 * std::sqrt(acc / kDraws);
    }
  }
  if (declared_sigma) {
    if (!(*declared_sigma >= 0.0)) fail(ErrorKind::kInvalidInput, "declared_sigma must be >= 0");
    declared_sigma_ = *declared_sigma;
  }
}

StochasticOracle StochasticOracle::gaussian(std::shared_ptr<const Objective> base, double noise_std,
                                            std::uint64_t seed, double declared_p_min) {
  return StochasticOracle(std::move(base), GaussianNoise{{noise_std}}, seed, declared_p_min);
}

StochasticOracle StochasticOracle::minibatch(std::shared_ptr<const Objective> base,
                                             std::size_t batch_size, std::uint64_t seed,
                                             double declared_p_min) {
  return StochasticOracle(std::move(base), Minibatch{batch_size}, seed, declared_p_min);
}

void StochasticOracle::reseed(std::uint64_t seed) {
  rng_.seed(seed);
  normal_.reset();
  for (std::size_t i = 0; i < index_pool_.size(); ++i) index_pool_[i] = i;
}

StochasticOracle StochasticOracle::with_seed(std::uint64_t seed) const {
  StochasticOracle copy = *this;
  copy.reseed(seed);
  return copy;
}

DenseVector StochasticOracle::draw(const DenseVector& x) {
  require_same_dim(x, DenseVector(base_->dim()), "StochasticOracle::draw");
  DenseVector g = base_->gradient(x);
  if (const auto* gn = std::get_if<GaussianNoise>(&kind_)) {
    for (std::size_t i = 0; i < g.dim(); ++i) {
      if (gn->noise_std[i] > 0.0) g[i] += gn->noise_std[i] * normal_(rng_);
    }
    return g;
  }
  const std::size_t batch = std::get<Minibatch>(kind_).batch_size;
  const std::size_t n = index_pool_.size();
  if (batch == n) return g;

  const FiniteSum& sum = *base_->finite_sum();
  DenseVector accum(base_->dim());
  // Partial Fisher-Yates: the first `batch` slots become a uniform sample.
  for (std::size_t s = 0; s < batch; ++s) {
    std::uniform_int_distribution<std::size_t> pick(s, n - 1);
    std::swap(index_pool_[s], index_pool_[pick(rng_)]);
    sum.add_component_grad(index_pool_[s], x, accum);
  }
  accum *= 1.0 / static_cast<double>(batch);
  return accum;
}

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

double success_probability_gaussian(double g_i, double noise_std) {
  if (!(noise_std > 0.0)) {
    fail(ErrorKind::kInvalidInput, "success_probability_gaussian: noise_std must be > 0");
  }
  return standard_normal_cdf(std::abs(g_i) / noise_std);
}

double estimate_p_min(StochasticOracle& oracle, std::span<const DenseVector> points,
                      std::size_t draws_per_point) {
  if (points.empty()) fail(ErrorKind::kInvalidInput, "estimate_p_min: no points");
  if (draws_per_point < 100) {
    fail(ErrorKind::kInvalidInput, "estimate_p_min: need at least 100 draws per point");
  }
  double p_min = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> agree;
  for (const DenseVector& x : points) {
    const DenseVector g = oracle.base().gradient(x);
    agree.assign(g.dim(), 0);
    for (std::size_t r = 0; r < draws_per_point; ++r) {
      const DenseVector gt = oracle.draw(x);
      for (std::size_t i = 0; i < g.dim(); ++i) {
        if ((gt[i] > 0.0 && g[i] > 0.0) || (gt[i] < 0.0 && g[i] < 0.0)) ++agree[i];
      }
    }
    for (std::size_t i = 0; i < g.dim(); ++i) {
      if (std::abs(g[i]) <= 1e-12) continue;
      p_min = std::min(p_min, static_cast<double>(agree[i]) / static_cast<double>(draws_per_point));
    }
  }
  if (!std::isfinite(p_min)) {
    fail(ErrorKind::kUndefinedPMin, "estimate_p_min: every gradient coordinate is below 1e-12");
  }
  return p_min;
}

}  // namespace signopt

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

#include "signopt/distributed.hpp"

#include <cmath>
#include <future>
#include <stdexcept>
#include <string>

#include "signopt/errors.hpp"
#include "signopt/rng.hpp"

namespace signopt {

VoteResult majority_vote_aggregate(std::span<const DenseVector> signs,
                                   std::span<const double> norms) {
  if (signs.empty()) fail(ErrorKind::kInvalidInput, "majority_vote_aggregate: no workers");
  if (signs.size() != norms.size()) {
    fail(ErrorKind::kInvalidInput, "majority_vote_aggregate: signs and norms differ in count");
  }
  const double inv_m = 1.0 / static_cast<double>(signs.size());
  DenseVector mean(signs.front().dim());
  double mean_l1 = 0.0;
  for (std::size_t m = 0; m < signs.size(); ++m) {
    require_same_dim(signs[m], mean, "majority_vote_aggregate");
    for (std::size_t i = 0; i < mean.dim(); ++i) {
      const double s = signs[m][i];
      if (s != 1.0 && s != -1.0 && s != 0.0) {
        fail(ErrorKind::kInvalidInput, "majority_vote_aggregate: sign entries must be in {-1,0,1}");
      }
      mean[i] += s;
    }
    if (!(norms[m] >= 0.0)) fail(ErrorKind::kInvalidInput, "majority_vote_aggregate: negative norm");
    mean_l1 += norms[m];
  }
  mean *= inv_m;
  return VoteResult{sign_vec(mean), mean_l1 * inv_m};
}

std::uint64_t CommLedger::uplink_bits(std::uint64_t workers, std::uint64_t dim) {
  return workers * (dim + 64);
}

std::uint64_t CommLedger::downlink_bits(std::uint64_t workers, std::uint64_t dim) {
  const std::uint64_t encoded = workers % 2 == 1 ? dim : 2 * dim;
  return workers * (encoded + 64);
}

void CommLedger::credit(std::uint64_t workers, std::uint64_t dim) {
  up_.push_back(uplink_bits(workers, dim));
  down_.push_back(downlink_bits(workers, dim));
  total_up_ += up_.back();
  total_down_ += down_.back();
}

Cluster::Cluster(std::vector<StochasticOracle> worker_oracles, DenseVector x0, ClusterOptions options)
    : server_x_(std::move(x0)), options_(options) {
  if (worker_oracles.empty()) fail(ErrorKind::kInvalidInput, "Cluster: need at least one worker");
  const Objective* shared = &worker_oracles.front().base();
  for (StochasticOracle& o : worker_oracles) {
    if (&o.base() != shared) fail(ErrorKind::kInvalidInput, "Cluster: workers must share one objective");
  }
  require_same_dim(server_x_, DenseVector(shared->dim()), "Cluster x0");
  for (StochasticOracle& o : worker_oracles) workers_.push_back(Worker{std::move(o), server_x_});
}

Cluster Cluster::gaussian(std::shared_ptr<const Objective> objective, std::size_t workers,
                          const std::vector<double>& noise_std, std::uint64_t master_seed,
                          DenseVector x0, double declared_p_min, ClusterOptions options) {
  if (workers == 0) fail(ErrorKind::kInvalidInput, "Cluster: need at least one worker");
  if (noise_std.size() != 1 && noise_std.size() != workers) {
    fail(ErrorKind::kInvalidInput, "Cluster: noise_std needs 1 or M entries");
  }
  std::vector<StochasticOracle> oracles;
  oracles.reserve(workers);
  for (std::size_t m = 0; m < workers; ++m) {
    const double s = noise_std.size() == 1 ? noise_std.front() : noise_std[m];
    oracles.push_back(StochasticOracle::gaussian(objective, s, derive_seed(master_seed, m),
                                                 declared_p_min));
  }
  return Cluster(std::move(oracles), std::move(x0), options);
}

VoteResult Cluster::step(double alpha) {
  if (!(alpha > 0.0)) fail(ErrorKind::kInvalidInput, "distributed_round: alpha must be > 0");
  const std::size_t M = workers_.size();

  // Workers: draw at their own replica and build the uplink payload.
  auto compute = [](Worker& w) {
    const DenseVector g = w.oracle.draw(w.x);
    if (!g.is_finite()) return std::optional<WorkerMessage>();
    return std::optional(WorkerMessage{sign_vec(g), l1_norm(g)});
  };
  std::vector<std::optional<WorkerMessage>> inbox(M);
  if (options_.parallel_draws && M > 1) {
    std::vector<std::future<std::optional<WorkerMessage>>> pending;
    pending.reserve(M);
    for (Worker& w : workers_) pending.push_back(std::async(std::launch::async, compute, std::ref(w)));
    for (std::size_t m = 0; m < M; ++m) inbox[m] = pending[m].get();
  } else {
    for (std::size_t m = 0; m < M; ++m) inbox[m] = compute(workers_[m]);
  }

  // Server: pull, aggregate, push.
  std::vector<DenseVector> signs;
  std::vector<double> norms;
  signs.reserve(M);
  norms.reserve(M);
  for (std::size_t m = 0; m < M; ++m) {
    if (!inbox[m]) {
      throw DivergenceError(round_, "worker " + std::to_string(m) +
                                        " drew a non-finite gradient in round " +
                                        std::to_string(round_));
    }
    signs.push_back(std::move(inbox[m]->signs));
    norms.push_back(inbox[m]->l1);
  }
  const VoteResult vote = majority_vote_aggregate(signs, norms);
  ledger_.credit(M, server_x_.dim());

  const double scale = -alpha * vote.mean_l1;
  if (!std::isfinite(scale)) {
    throw DivergenceError(round_, "aggregated step is not finite in round " + std::to_string(round_));
  }
  for (Worker& w : workers_) axpy(scale, vote.vote, w.x);
  axpy(scale, vote.vote, server_x_);
  for (const Worker& w : workers_) {
    if (!(w.x == server_x_)) throw std::logic_error("Cluster: worker replica diverged from server");
  }
  ++round_;
  return vote;
}

Trace distributed_run(std::shared_ptr<const Objective> objective, const DistributedConfig& config,
                      const DenseVector& x0, const RunOptions& run_options) {
  if (config.rounds == 0) fail(ErrorKind::kInvalidInput, "distributed_run: rounds must be >= 1");
  auto make_cluster = [&] {
    if (!config.batch) {
      return Cluster::gaussian(objective, config.workers, config.noise_std, config.master_seed, x0,
                               config.declared_p_min, config.options);
    }
    if (config.workers == 0) fail(ErrorKind::kInvalidInput, "Cluster: need at least one worker");
    std::vector<StochasticOracle> oracles;
    oracles.reserve(config.workers);
    for (std::size_t m = 0; m < config.workers; ++m) {
      oracles.push_back(StochasticOracle::minibatch(objective, *config.batch,
                                                    derive_seed(config.master_seed, m),
                                                    config.declared_p_min));
    }
    return Cluster(std::move(oracles), x0, config.options);
  };
  Cluster cluster = make_cluster();
  Trace trace;
  trace.rows.reserve(config.rounds + 1);
  for (std::size_t k = 0;; ++k) {
    const bool last = k == config.rounds;
    append_row(trace, *objective, k, cluster.x(), last ? std::nullopt : std::optional(config.alpha));
    TraceRow& row = trace.rows.back();
    row.bits_up = cluster.ledger().total_uplink();
    row.bits_down = cluster.ledger().total_downlink();
    if (run_options.bound) row.bound = run_options.bound(k);
    if (run_options.snapshot_stride > 0 && k % run_options.snapshot_stride == 0) row.x = cluster.x();
    if (last) break;
    cluster.step(config.alpha);
  }
  return trace;
}

}  // namespace signopt

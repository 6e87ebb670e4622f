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

#ifndef SIGNOPT_DISTRIBUTED_HPP
#define SIGNOPT_DISTRIBUTED_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "signopt/objectives.hpp"
#include "signopt/optimizers.hpp"
#include "signopt/oracles.hpp"
#include "signopt/vecmath.hpp"

namespace signopt {

/// What a worker sends to the server each round: sign(g~) and ||g~||_1.
struct WorkerMessage {
  DenseVector signs;
  double l1 = 0.0;
};

struct VoteResult {
  DenseVector vote;       // sign of the mean of the worker sign vectors
  double mean_l1 = 0.0;   // M_k, mean of the worker l1 norms
};

/// Server-side aggregation. Sees only the uplink payloads.
VoteResult majority_vote_aggregate(std::span<const DenseVector> signs,
                                   std::span<const double> norms);

/// Bit accounting for one synchronous round with M workers in dimension d.
///   uplink   = M (d + 64)
///   downlink = M (d_enc + 64), d_enc = d for odd M and 2d for even M
/// Even M can produce ties (vote 0), so the broadcast needs ternary symbols.
class CommLedger {
 public:
  static std::uint64_t uplink_bits(std::uint64_t workers, std::uint64_t dim);
  static std::uint64_t downlink_bits(std::uint64_t workers, std::uint64_t dim);

  void credit(std::uint64_t workers, std::uint64_t dim);

  std::size_t rounds() const noexcept { return up_.size(); }
  std::uint64_t round_uplink(std::size_t r) const { return up_.at(r); }
  std::uint64_t round_downlink(std::size_t r) const { return down_.at(r); }
  std::uint64_t total_uplink() const noexcept { return total_up_; }
  std::uint64_t total_downlink() const noexcept { return total_down_; }

 private:
  std::vector<std::uint64_t> up_;
  std::vector<std::uint64_t> down_;
  std::uint64_t total_up_ = 0;
  std::uint64_t total_down_ = 0;
};

struct ClusterOptions {
  /// Draw worker gradients on separate threads within a round.
  bool parallel_draws = false;
};

/// Parameter server plus M workers running distributed scaled SIGNSGD with
/// majority vote. Every worker keeps its own replica of x; the server only
/// ever reads worker messages.
class Cluster {
 public:
  Cluster(std::vector<StochasticOracle> worker_oracles, DenseVector x0, ClusterOptions options = {});

  /// Gaussian-noise workers seeded with derive_seed(master_seed, m).
  /// noise_std holds one entry (shared) or one per worker.
  static Cluster gaussian(std::shared_ptr<const Objective> objective, std::size_t workers,
                          const std::vector<double>& noise_std, std::uint64_t master_seed,
                          DenseVector x0, double declared_p_min = 1.0, ClusterOptions options = {});

  std::size_t workers() const noexcept { return workers_.size(); }
  std::size_t round() const noexcept { return round_; }
  const DenseVector& x() const noexcept { return server_x_; }
  const DenseVector& replica(std::size_t m) const { return workers_.at(m).x; }
  const CommLedger& ledger() const noexcept { return ledger_; }
  const Objective& objective() const noexcept { return workers_.front().oracle.base(); }

  /// One pull/aggregate/push round with step alpha.
  VoteResult step(double alpha);

 private:
  struct Worker {
    StochasticOracle oracle;
    DenseVector x;
  };

  std::vector<Worker> workers_;
  DenseVector server_x_;
  CommLedger ledger_;
  std::size_t round_ = 0;
  ClusterOptions options_;
};

inline VoteResult distributed_round(Cluster& cluster, double alpha) { return cluster.step(alpha); }

struct DistributedConfig {
  std::size_t workers = 1;
  std::vector<double> noise_std{0.0};
  double alpha = 0.1;
  std::size_t rounds = 100;
  std::uint64_t master_seed = 0;
  double declared_p_min = 1.0;
  /// When set, workers draw minibatch gradients instead of gaussian noise.
  std::optional<std::size_t> batch;
  ClusterOptions options;
};

/// Rows k = 0..rounds with cumulative bit columns.
Trace distributed_run(std::shared_ptr<const Objective> objective, const DistributedConfig& config,
                      const DenseVector& x0, const RunOptions& run_options = {});

}  // namespace signopt

#endif  // SIGNOPT_DISTRIBUTED_HPP

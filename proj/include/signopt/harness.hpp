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

#ifndef SIGNOPT_HARNESS_HPP
#define SIGNOPT_HARNESS_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "signopt/continuous.hpp"
#include "signopt/distributed.hpp"
#include "signopt/objectives.hpp"
#include "signopt/optimizers.hpp"
#include "signopt/oracles.hpp"
#include "signopt/theory.hpp"

namespace signopt {

/// One experiment. Mirrors the sections of the config file; every field has
/// a default. See docs in README.md for the file format.
struct ExperimentConfig {
  // [objective]
  std::string objective = "quadratic1d";
  std::size_t n = 2000;
  std::size_t d = 50;
  std::uint64_t data_seed = 1;
  std::optional<double> mu;  // declared constants for bound overlays
  std::optional<double> L;

  // [method]
  /// Each entry is "name" or "name@alpha" (per-method constant step).
  std::vector<std::string> methods{"scaled_signgd"};
  std::size_t iters = 50;
  std::size_t repeats = 1;
  std::uint64_t seed = 0;
  /// Comma-separated start point, "gaussian" for N(0, I) per repeat, or
  /// empty for the objective's default.
  std::string x0;
  double beta_m = 0.9;
  std::string ef_mode = "at-x";
  std::string theorem = "thm1";

  // [schedule]
  std::string schedule = "constant";  // constant | diminishing
  double alpha = 0.05;
  /// c in c/(k+1); when unset the diminishing schedule is 3/(mu (2p-1)(k+1)).
  std::optional<double> dimin_const;

  // [oracle]
  std::string oracle = "exact";  // exact | gaussian | minibatch
  double noise_std = 0.0;
  std::size_t batch = 1;
  std::optional<double> sigma;
  double p_min = 1.0;

  // [distributed]
  std::vector<std::size_t> workers{1};

  // [output]
  std::string path;
  bool iterates = false;
  std::size_t stride = 1;  // write every stride-th row

  /// Throws kInvalidConfig on any invariant violation.
  void validate() const;
  /// INI text that load_config_string() parses back to an equal config.
  std::string serialize() const;
  /// Single line for CSV comment headers.
  std::string fingerprint() const;

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig load_config(const std::string& path);
ExperimentConfig load_config_string(const std::string& text);

/// Named configurations reproducing the experiments at desk scale.
std::optional<ExperimentConfig> preset(std::string_view name);
std::vector<std::string> preset_names();

/// Objective named by the config; logistic data is synthesized from
/// (n, d, data_seed) and its f* attached from the cached baseline.
std::shared_ptr<const Objective> build_objective(const ExperimentConfig& cfg);

/// Long GD run with step 1/L2 until ||grad f||_1 <= tol. Memoized per
/// objective name; if SIGNOPT_CACHE_DIR is set the value is also kept on disk.
double compute_baseline_fstar(const Objective& obj, double tol = 1e-10,
                              std::size_t max_iters = 1'000'000);

struct MethodSpec {
  std::string label;
  MethodConfig config;
  std::optional<double> alpha;  // overrides the shared schedule
};
MethodSpec parse_method_spec(const std::string& spec, const ExperimentConfig& cfg);

Schedule build_schedule(const ExperimentConfig& cfg, const Objective& obj,
                        std::optional<double> alpha_override = std::nullopt);

DenseVector start_point(const ExperimentConfig& cfg, const Objective& obj, std::size_t repeat);

/// Mean/std over repeats of one method, row by row.
struct AggregateRow {
  std::size_t k = 0;
  double f_mean = 0.0;
  double f_std = 0.0;
  std::optional<double> V_mean;
  std::optional<double> V_std;
  double grad_l1_mean = 0.0;
  std::optional<double> alpha;
  std::uint64_t bits_up = 0;
  std::uint64_t bits_down = 0;
};

struct AggregateTrace {
  std::string label;
  std::vector<AggregateRow> rows;

  std::vector<double> mean_suboptimality() const;
};

AggregateTrace aggregate(std::string label, const std::vector<Trace>& runs);

/// Calls body(i) for i in [0, count) on a small thread pool.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body);

/// All repeats of one method spec on the config's objective and oracle.
std::vector<Trace> run_repeats(const ExperimentConfig& cfg, std::shared_ptr<const Objective> obj,
                               const MethodSpec& method, const Schedule& schedule);

/// Repeats of the distributed simulation with M workers.
std::vector<Trace> run_distributed_repeats(const ExperimentConfig& cfg,
                                           std::shared_ptr<const Objective> obj,
                                           std::size_t workers);

/// Header: method,k,f_mean,f_std,V_mean,V_std,grad_l1_mean,alpha,bits_up,bits_down
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateTrace>& traces,
                         std::size_t stride = 1);

/// "# signopt <command> <fingerprint>"
std::string csv_comment(std::string_view command, const ExperimentConfig& cfg);

// CSV producers behind the CLI subcommands. Each is deterministic in cfg.
std::string run_csv(const ExperimentConfig& cfg);
std::string compare_csv(const ExperimentConfig& cfg, std::string_view command = "compare");
std::string counterexample_csv(std::string_view which, std::optional<double> alpha);
std::string logistic_csv(const ExperimentConfig& cfg);
std::string distributed_csv(const ExperimentConfig& cfg);
std::string ode_csv(const ExperimentConfig& cfg, double beta, double dt, double t_end,
                    bool* all_pass = nullptr);

struct VerifyResult {
  Verdict verdict;
  std::string report;
};
VerifyResult verify_config(const ExperimentConfig& cfg);

/// Entry point of the command-line tool.
int cli_main(int argc, const char* const* argv);

}  // namespace signopt

#endif  // SIGNOPT_HARNESS_HPP

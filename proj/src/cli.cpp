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

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "signopt/errors.hpp"
#include "signopt/harness.hpp"

namespace signopt {
namespace {

/// Flags shared by the experiment subcommands.
struct CommonFlags {
  std::string config_path;
  std::string preset_name;
  std::string out;
  std::optional<double> alpha;
  std::optional<std::size_t> iters;
  std::optional<std::size_t> repeats;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> theorem;
  std::vector<std::string> methods;
  std::optional<std::string> schedule;
  std::optional<double> dimin_const;
  std::vector<std::size_t> workers;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config_path, "INI configuration file")->check(CLI::ExistingFile);
  cmd->add_option("--preset", f.preset_name, "named preset")
      ->check(CLI::IsMember(preset_names()));
  cmd->add_option("--out", f.out, "output CSV path");
  cmd->add_option("--alpha", f.alpha, "step size (eta for the AdaGrad variants)");
  cmd->add_option("--iters", f.iters, "iterations");
  cmd->add_option("--repeats", f.repeats, "independent repeats");
  cmd->add_option("--seed", f.seed, "base seed");
  cmd->add_option("--theorem", f.theorem, "thm1 | thm2-const | thm2-dimin | thm3-dist");
  cmd->add_option("--methods", f.methods, "name or name@alpha, comma separated")->delimiter(',');
  cmd->add_option("--schedule", f.schedule, "constant | diminishing");
  cmd->add_option("--dimin-const", f.dimin_const, "c in the schedule c/(k+1)");
  cmd->add_option("--workers", f.workers, "worker counts, comma separated")->delimiter(',');
}

ExperimentConfig resolve(const CommonFlags& f, std::string_view default_preset) {
  if (!f.config_path.empty() && !f.preset_name.empty()) {
    throw CLI::ValidationError("--config and --preset are mutually exclusive");
  }
  ExperimentConfig cfg;
  if (!f.config_path.empty()) {
    cfg = load_config(f.config_path);
  } else if (!f.preset_name.empty()) {
    cfg = *preset(f.preset_name);
  } else if (!default_preset.empty()) {
    cfg = *preset(default_preset);
  }
  if (f.alpha) cfg.alpha = *f.alpha;
  if (f.iters) cfg.iters = *f.iters;
  if (f.repeats) cfg.repeats = *f.repeats;
  if (f.seed) cfg.seed = *f.seed;
  if (f.theorem) cfg.theorem = *f.theorem;
  if (!f.methods.empty()) cfg.methods = f.methods;
  if (f.schedule) cfg.schedule = *f.schedule;
  if (f.dimin_const) cfg.dimin_const = *f.dimin_const;
  if (!f.workers.empty()) cfg.workers = f.workers;
  if (!f.out.empty()) cfg.path = f.out;
  cfg.validate();
  return cfg;
}

/// --out / [output] path, else $SIGNOPT_OUT_DIR/<name>.csv, else stdout.
void emit(const std::string& text, const std::string& path, const std::string& name) {
  std::filesystem::path target = path;
  if (target.empty()) {
    if (const char* dir = std::getenv("SIGNOPT_OUT_DIR"); dir != nullptr && *dir != '\0') {
      target = std::filesystem::path(dir) / (name + ".csv");
    }
  }
  if (target.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(target, std::ios::binary);
  if (!out) fail(ErrorKind::kInvalidConfig, "cannot write " + target.string());
  out << text;
  if (!out) fail(ErrorKind::kInvalidConfig, "write failed: " + target.string());
  std::cerr << "wrote " << target.string() << '\n';
}

}  // namespace

int cli_main(int argc, const char* const* argv) {
  CLI::App app{"Sign-based gradient methods: experiments and bound checks", "signopt"};
  app.require_subcommand(1);
  int status = 0;

  CommonFlags run_f, compare_f, toy_f, logistic_f, dist_f, ode_f, verify_f;

  auto* run = app.add_subcommand("run", "one method on one objective");
  add_common(run, run_f);
  run->callback([&] {
    const ExperimentConfig cfg = resolve(run_f, "");
    emit(run_csv(cfg), cfg.path, "run");
  });

  auto* compare = app.add_subcommand("compare", "several methods on shared start points and seeds");
  add_common(compare, compare_f);
  compare->callback([&] {
    const ExperimentConfig cfg = resolve(compare_f, "");
    emit(compare_csv(cfg), cfg.path, "compare");
  });

  std::string ce_which;
  std::optional<double> ce_alpha;
  std::string ce_out;
  auto* ce = app.add_subcommand("counterexample", "deterministic failure cases of plain sign steps");
  ce->add_option("which", ce_which, "ex1 | adagrad-v1 | adagrad-v2")
      ->required()
      ->check(CLI::IsMember({"ex1", "adagrad-v1", "adagrad-v2"}));
  ce->add_option("--alpha", ce_alpha, "step size (eta for the AdaGrad variants)");
  ce->add_option("--out", ce_out, "output CSV path");
  ce->callback([&] { emit(counterexample_csv(ce_which, ce_alpha), ce_out, "counterexample-" + ce_which); });

  auto* toy = app.add_subcommand("toy", "x^2 + 3 sin^2 x with five methods");
  add_common(toy, toy_f);
  toy->callback([&] {
    const ExperimentConfig cfg = resolve(toy_f, "toy");
    emit(compare_csv(cfg, "toy"), cfg.path, "toy");
  });

  auto* logistic = app.add_subcommand("logistic", "synthetic l2-regularized logistic regression");
  add_common(logistic, logistic_f);
  logistic->callback([&] {
    const ExperimentConfig cfg = resolve(logistic_f, "logistic");
    emit(logistic_csv(cfg), cfg.path, "logistic");
  });

  auto* dist = app.add_subcommand("distributed", "majority vote with a sweep over worker counts");
  add_common(dist, dist_f);
  dist->callback([&] {
    const ExperimentConfig cfg = resolve(dist_f, "distributed");
    emit(distributed_csv(cfg), cfg.path, "distributed");
  });

  RateInputs bi;
  auto* bounds = app.add_subcommand("bounds", "print the rate constants for given inputs");
  bounds->add_option("--mu", bi.mu, "strong convexity / PL constant")->required();
  bounds->add_option("--L", bi.L, "smoothness constant")->required();
  bounds->add_option("--alpha", bi.alpha, "step size")->required();
  bounds->add_option("--sigma", bi.sigma, "l1 noise bound")->capture_default_str();
  bounds->add_option("--p-min", bi.p_min, "sign success probability")->capture_default_str();
  bounds->add_option("--workers", bi.workers, "worker count")->capture_default_str();
  bounds->callback([&] { std::cout << make_rate_bundle(bi).to_text(); });

  double beta = 0.1, dt = 1e-4, t_end = 5.0;
  auto* ode = app.add_subcommand("ode", "gradient and sign flows with their bounds");
  add_common(ode, ode_f);
  ode->add_option("--beta", beta, "flow speed")->capture_default_str();
  ode->add_option("--dt", dt, "Euler step")->capture_default_str();
  ode->add_option("--t-end", t_end, "horizon")->capture_default_str();
  ode->callback([&] {
    const ExperimentConfig cfg = resolve(ode_f, "ode");
    bool pass = false;
    emit(ode_csv(cfg, beta, dt, t_end, &pass), cfg.path, "ode");
    if (!pass) status = 1;
  });

  auto* verify = app.add_subcommand("verify", "run and check the selected bound");
  add_common(verify, verify_f);
  verify->callback([&] {
    const ExperimentConfig cfg = resolve(verify_f, "quadratic1d");
    const VerifyResult r = verify_config(cfg);
    std::cout << r.report;
    if (!r.verdict.pass) status = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const DivergenceError& e) {
    std::cerr << "signopt: diverged at iteration " << e.iteration() << ": " << e.what() << '\n';
    return 1;
  } catch (const Error& e) {
    std::cerr << "signopt: error (" << to_string(e.kind()) << "): " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "signopt: error: " << e.what() << '\n';
    return 1;
  }
  return status;
}

}  // namespace signopt

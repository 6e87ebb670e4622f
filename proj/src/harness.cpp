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

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "signopt/errors.hpp"
#include "signopt/harness.hpp"
#include "signopt/rng.hpp"

namespace signopt {
namespace {

std::shared_ptr<const Objective> diagonal_quadratic(std::vector<double> diag, const char* name) {
  const auto d = static_cast<Eigen::Index>(diag.size());
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) A(i, i) = diag[static_cast<std::size_t>(i)];
  return std::make_shared<const Objective>(make_quadratic(A, DenseVector(diag.size()), name));
}

std::string default_x0(const std::string& objective) {
  if (objective == "example1") return "0.05,0.05";
  if (objective == "quadratic2d") return "1,1";
  if (objective == "toy") return "3";
  if (objective == "logistic") return "gaussian";
  return "1";
}

std::string logistic_name(const ExperimentConfig& cfg) {
  return "logistic(n=" + std::to_string(cfg.n) + ",d=" + std::to_string(cfg.d) +
         ",seed=" + std::to_string(cfg.data_seed) + ")";
}

/// Declared constants win over the objective's own.
RateInputs rate_inputs(const ExperimentConfig& cfg, const Objective& obj, double alpha,
                       double sigma, int workers) {
  RateInputs in;
  const ConstantSet& c = obj.constants();
  if (cfg.mu) {
    in.mu = *cfg.mu;
  } else if (c.mu_inf) {
    in.mu = c.mu_inf->value;
  } else if (c.pl_mu) {
    in.mu = c.pl_mu->value;
  }
  if (cfg.L) {
    in.L = *cfg.L;
  } else if (c.L_inf) {
    in.L = c.L_inf->value;
  }
  if (!(in.mu > 0.0) || !(in.L > 0.0)) {
    fail(ErrorKind::kMissingData, "objective '" + obj.name() + "' has no mu/L; declare them");
  }
  in.alpha = alpha;
  in.sigma = sigma;
  in.p_min = cfg.p_min;
  in.workers = workers;
  return in;
}

std::optional<StochasticOracle> make_oracle(const ExperimentConfig& cfg,
                                            std::shared_ptr<const Objective> obj,
                                            std::uint64_t seed) {
  if (cfg.oracle == "exact") return std::nullopt;
  if (cfg.oracle == "gaussian") {
    return StochasticOracle(std::move(obj), GaussianNoise{{cfg.noise_std}}, seed, cfg.p_min,
                            cfg.sigma);
  }
  return StochasticOracle(std::move(obj), Minibatch{cfg.batch}, seed, cfg.p_min, cfg.sigma);
}

double declared_sigma(const ExperimentConfig& cfg, std::shared_ptr<const Objective> obj) {
  if (cfg.sigma) return *cfg.sigma;
  const auto oracle = make_oracle(cfg, std::move(obj), cfg.seed);
  return oracle ? oracle->declared_sigma() : 0.0;
}

Trace strided(const Trace& t, std::size_t stride) {
  if (stride <= 1) return t;
  Trace out;
  out.status = t.status;
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (i % stride == 0 || i + 1 == t.rows.size()) out.rows.push_back(t.rows[i]);
  }
  return out;
}

std::string with_header(std::string_view command, const ExperimentConfig& cfg,
                        const std::string& body) {
  return csv_comment(command, cfg) + "\n" + body;
}

std::mutex& cache_mutex() {
  static std::mutex m;
  return m;
}

std::map<std::string, double>& fstar_cache() {
  static std::map<std::string, double> cache;
  return cache;
}

std::optional<std::filesystem::path> disk_cache_file(const std::string& name) {
  const char* dir = std::getenv("SIGNOPT_CACHE_DIR");
  if (dir == nullptr || *dir == '\0') return std::nullopt;
  std::string file;
  for (char c : name) file += std::isalnum(static_cast<unsigned char>(c)) ? c : '_';
  return std::filesystem::path(dir) / (file + ".fstar");
}

}  // namespace

std::shared_ptr<const Objective> build_objective(const ExperimentConfig& cfg) {
  const std::string& name = cfg.objective;
  if (name == "quadratic1d") return diagonal_quadratic({2.0}, "quadratic1d");
  if (name == "half_square") return diagonal_quadratic({1.0}, "half_square");
  if (name == "example1") return diagonal_quadratic({2.0, 2.0}, "example1");
  if (name == "quadratic2d") return diagonal_quadratic({2.0, 4.0}, "quadratic2d");
  if (name == "toy") return std::make_shared<const Objective>(make_toy_pl());
  if (name == "logistic") {
    const SyntheticData data = synth_logistic_data(cfg.n, cfg.d, cfg.data_seed);
    const Objective obj = make_logistic(data.samples, logistic_name(cfg));
    return std::make_shared<const Objective>(obj.with_f_star(compute_baseline_fstar(obj)));
  }
  fail(ErrorKind::kInvalidConfig, "unknown objective '" + name + "'");
}

double compute_baseline_fstar(const Objective& obj, double tol, std::size_t max_iters) {
  {
    std::lock_guard lock(cache_mutex());
    const auto hit = fstar_cache().find(obj.name());
    if (hit != fstar_cache().end()) return hit->second;
  }
  const auto disk = disk_cache_file(obj.name());
  if (disk) {
    std::ifstream in(*disk);
    double v = 0.0;
    if (in >> v && std::isfinite(v)) {
      std::lock_guard lock(cache_mutex());
      fstar_cache()[obj.name()] = v;
      return v;
    }
  }

  double L = 0.0;
  if (obj.l2_lipschitz()) {
    L = *obj.l2_lipschitz();
  } else if (obj.constants().L_inf) {
    L = obj.constants().L_inf->value;
  } else {
    fail(ErrorKind::kMissingData, "compute_baseline_fstar: no Lipschitz constant for " + obj.name());
  }
  DenseVector x(obj.dim());
  std::size_t it = 0;
  for (;; ++it) {
    const DenseVector g = obj.gradient(x);
    if (l1_norm(g) <= tol) break;
    if (it == max_iters) {
      fail(ErrorKind::kIterationCap, "compute_baseline_fstar: no convergence within " +
                                         std::to_string(max_iters) + " iterations");
    }
    axpy(-1.0 / L, g, x);
  }
  const double f = obj.value(x);
  {
    std::lock_guard lock(cache_mutex());
    fstar_cache()[obj.name()] = f;
  }
  if (disk) {
    std::ofstream out(*disk);
    out << format_double(f) << '\n';
  }
  return f;
}

MethodSpec parse_method_spec(const std::string& spec, const ExperimentConfig& cfg) {
  MethodSpec out;
  out.label = spec;
  const auto at = spec.find('@');
  const std::string name = spec.substr(0, at);
  const auto method = parse_method(name);
  if (!method) fail(ErrorKind::kInvalidConfig, "unknown method '" + name + "'");
  if (at != std::string::npos) {
    const std::string a = spec.substr(at + 1);
    char* end = nullptr;
    const double v = std::strtod(a.c_str(), &end);
    if (a.empty() || *end != '\0' || !(v > 0.0) || !std::isfinite(v)) {
      fail(ErrorKind::kInvalidConfig, "bad step size in method '" + spec + "'");
    }
    out.alpha = v;
  }
  out.config.method = *method;
  out.config.beta_m = cfg.beta_m;
  out.config.ef_mode = cfg.ef_mode == "at-x-minus-e" ? EfMode::kAtXMinusE : EfMode::kAtX;
  return out;
}

Schedule build_schedule(const ExperimentConfig& cfg, const Objective& obj,
                        std::optional<double> alpha_override) {
  if (cfg.schedule == "constant") return Schedule::constant(alpha_override.value_or(cfg.alpha));
  if (cfg.dimin_const) return Schedule::harmonic(*cfg.dimin_const);
  const RateInputs in = rate_inputs(cfg, obj, cfg.alpha, 0.0, 1);
  return Schedule::diminishing(in.mu, cfg.p_min);
}

DenseVector start_point(const ExperimentConfig& cfg, const Objective& obj, std::size_t repeat) {
  const std::string spec = cfg.x0.empty() ? default_x0(cfg.objective) : cfg.x0;
  if (spec == "gaussian") {
    Rng rng(derive_seed(cfg.seed + repeat, 0x5eed));
    std::normal_distribution<double> normal;
    DenseVector x(obj.dim());
    for (std::size_t i = 0; i < x.dim(); ++i) x[i] = normal(rng);
    return x;
  }
  std::vector<double> values;
  std::stringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    char* end = nullptr;
    const double v = std::strtod(item.c_str(), &end);
    if (item.empty() || *end != '\0' || !std::isfinite(v)) {
      fail(ErrorKind::kInvalidConfig, "bad x0 entry '" + item + "'");
    }
    values.push_back(v);
  }
  if (values.size() != obj.dim()) {
    fail(ErrorKind::kInvalidConfig, "x0 has " + std::to_string(values.size()) +
                                        " entries; objective dimension is " +
                                        std::to_string(obj.dim()));
  }
  return DenseVector(std::move(values));
}

std::vector<double> AggregateTrace::mean_suboptimality() const {
  std::vector<double> v;
  v.reserve(rows.size());
  for (const AggregateRow& r : rows) {
    if (!r.V_mean) fail(ErrorKind::kMissingData, "mean_suboptimality: f* unknown");
    v.push_back(*r.V_mean);
  }
  return v;
}

AggregateTrace aggregate(std::string label, const std::vector<Trace>& runs) {
  if (runs.empty()) fail(ErrorKind::kInvalidInput, "aggregate: no runs");
  const std::size_t rows = runs.front().rows.size();
  for (const Trace& t : runs) {
    if (t.rows.size() != rows) fail(ErrorKind::kInvalidInput, "aggregate: runs differ in length");
  }
  const double n = static_cast<double>(runs.size());
  auto mean_std = [&](auto field) {
    double sum = 0.0;
    for (const Trace& t : runs) sum += field(t);
    const double mean = sum / n;
    double ss = 0.0;
    for (const Trace& t : runs) ss += (field(t) - mean) * (field(t) - mean);
    return std::pair(mean, runs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0);
  };

  AggregateTrace out{std::move(label), {}};
  out.rows.reserve(rows);
  for (std::size_t i = 0; i < rows; ++i) {
    const TraceRow& first = runs.front().rows[i];
    AggregateRow r;
    r.k = first.k;
    std::tie(r.f_mean, r.f_std) = mean_std([i](const Trace& t) { return t.rows[i].f; });
    const bool has_v =
        std::all_of(runs.begin(), runs.end(), [i](const Trace& t) { return t.rows[i].V.has_value(); });
    if (has_v) {
      const auto [m, s] = mean_std([i](const Trace& t) { return *t.rows[i].V; });
      r.V_mean = m;
      r.V_std = s;
    }
    r.grad_l1_mean = mean_std([i](const Trace& t) { return t.rows[i].grad_l1; }).first;
    r.alpha = first.alpha;
    r.bits_up = first.bits_up;
    r.bits_down = first.bits_down;
    out.rows.push_back(r);
  }
  return out;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& body) {
  const std::size_t threads =
      std::min<std::size_t>(count, std::max(1u, std::thread::hardware_concurrency()));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<Trace> run_repeats(const ExperimentConfig& cfg, std::shared_ptr<const Objective> obj,
                               const MethodSpec& method, const Schedule& schedule) {
  std::vector<Trace> traces(cfg.repeats);
  RunOptions options;
  options.snapshot_stride = cfg.iterates ? 1 : 0;
  parallel_for(cfg.repeats, [&](std::size_t r) {
    const std::uint64_t seed = cfg.seed + r;
    const DenseVector x0 = start_point(cfg, *obj, r);
    auto oracle = make_oracle(cfg, obj, seed);
    const GradientSource source = oracle ? GradientSource(&*oracle) : GradientSource(obj.get());
    traces[r] = run(method.config, source, schedule, x0, cfg.iters, seed, options);
  });
  return traces;
}

std::vector<Trace> run_distributed_repeats(const ExperimentConfig& cfg,
                                           std::shared_ptr<const Objective> obj,
                                           std::size_t workers) {
  if (cfg.oracle == "exact") {
    fail(ErrorKind::kInvalidConfig, "distributed runs need a gaussian or minibatch oracle");
  }
  if (cfg.schedule != "constant") {
    fail(ErrorKind::kInvalidConfig, "distributed runs use a constant step size");
  }
  const MethodSpec spec = parse_method_spec(cfg.methods.front(), cfg);
  std::vector<Trace> traces(cfg.repeats);
  parallel_for(cfg.repeats, [&](std::size_t r) {
    DistributedConfig dc;
    dc.workers = workers;
    dc.noise_std = {cfg.noise_std};
    dc.alpha = spec.alpha.value_or(cfg.alpha);
    dc.rounds = cfg.iters;
    dc.master_seed = cfg.seed + r;
    dc.declared_p_min = cfg.p_min;
    if (cfg.oracle == "minibatch") dc.batch = cfg.batch;
    RunOptions options;
    options.snapshot_stride = cfg.iterates ? 1 : 0;
    traces[r] = distributed_run(obj, dc, start_point(cfg, *obj, r), options);
  });
  return traces;
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateTrace>& traces,
                         std::size_t stride) {
  if (stride == 0) stride = 1;
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  out << "method,k,f_mean,f_std,V_mean,V_std,grad_l1_mean,alpha,bits_up,bits_down\n";
  for (const AggregateTrace& t : traces) {
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
      if (i % stride != 0 && i + 1 != t.rows.size()) continue;
      const AggregateRow& r = t.rows[i];
      out << t.label << ',' << r.k << ',' << format_double(r.f_mean) << ','
          << format_double(r.f_std) << ',' << opt(r.V_mean) << ',' << opt(r.V_std) << ','
          << format_double(r.grad_l1_mean) << ',' << opt(r.alpha) << ',' << r.bits_up << ','
          << r.bits_down << '\n';
    }
  }
}

std::string csv_comment(std::string_view command, const ExperimentConfig& cfg) {
  return "# signopt " + std::string(command) + " " + cfg.fingerprint();
}

std::string run_csv(const ExperimentConfig& cfg) {
  cfg.validate();
  if (cfg.methods.size() != 1) {
    fail(ErrorKind::kInvalidConfig, "run takes exactly one method; use compare for several");
  }
  const auto obj = build_objective(cfg);
  const MethodSpec spec = parse_method_spec(cfg.methods.front(), cfg);
  const Schedule schedule = build_schedule(cfg, *obj, spec.alpha);
  std::ostringstream out;
  if (cfg.repeats > 1) {
    write_aggregate_csv(out, {aggregate(spec.label, run_repeats(cfg, obj, spec, schedule))},
                        cfg.stride);
    return with_header("run", cfg, out.str());
  }

  RunOptions options;
  options.snapshot_stride = cfg.iterates ? 1 : 0;
  const DenseVector x0 = start_point(cfg, *obj, 0);
  // Bound overlay when the constants and step size put the theorem in range.
  if (const auto which = parse_theorem(cfg.theorem);
      which && obj->f_star() && schedule.kind() != Schedule::Kind::kCustom) {
    try {
      const RateBundle bundle = make_rate_bundle(rate_inputs(
          cfg, *obj, schedule.value(0), declared_sigma(cfg, obj), 1));
      options.bound = bound_function(bundle, *which, obj->value(x0) - *obj->f_star());
    } catch (const Error&) {
      options.bound = nullptr;
    }
  }
  auto oracle = make_oracle(cfg, obj, cfg.seed);
  const GradientSource source = oracle ? GradientSource(&*oracle) : GradientSource(obj.get());
  const Trace trace = run(spec.config, source, schedule, x0, cfg.iters, cfg.seed, options);
  write_trace_csv(out, strided(trace, cfg.stride), cfg.iterates);
  return with_header("run", cfg, out.str());
}

std::string compare_csv(const ExperimentConfig& cfg, std::string_view command) {
  cfg.validate();
  const auto obj = build_objective(cfg);
  std::vector<AggregateTrace> results;
  for (const std::string& m : cfg.methods) {
    const MethodSpec spec = parse_method_spec(m, cfg);
    const Schedule schedule = build_schedule(cfg, *obj, spec.alpha);
    results.push_back(aggregate(spec.label, run_repeats(cfg, obj, spec, schedule)));
  }
  std::ostringstream out;
  write_aggregate_csv(out, results, cfg.stride);
  return with_header(command, cfg, out.str());
}

std::string counterexample_csv(std::string_view which, std::optional<double> alpha) {
  if (which != "ex1" && which != "adagrad-v1" && which != "adagrad-v2") {
    fail(ErrorKind::kInvalidConfig, "unknown counterexample '" + std::string(which) +
                                        "' (expected ex1, adagrad-v1 or adagrad-v2)");
  }
  ExperimentConfig cfg = *preset(which);
  if (alpha) {
    cfg.alpha = *alpha;
    if (which == "ex1") {
      const std::string half = format_double(*alpha / 2.0);
      cfg.x0 = half + "," + half;
    }
  }
  cfg.validate();
  const auto obj = build_objective(cfg);
  const MethodSpec spec = parse_method_spec(cfg.methods.front(), cfg);
  RunOptions options;
  options.snapshot_stride = 1;
  const Trace trace = run(spec.config, obj.get(), build_schedule(cfg, *obj), start_point(cfg, *obj, 0),
                          cfg.iters, cfg.seed, options);
  std::ostringstream out;
  write_trace_csv(out, trace, true);
  return with_header("counterexample " + std::string(which), cfg, out.str());
}

std::string logistic_csv(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto obj = build_objective(cfg);
  std::vector<AggregateTrace> results;

  ExperimentConfig constant = cfg;
  constant.schedule = "constant";
  for (const std::string& m : cfg.methods) {
    const MethodSpec spec = parse_method_spec(m, constant);
    const Schedule schedule = build_schedule(constant, *obj, spec.alpha);
    results.push_back(aggregate(spec.label, run_repeats(constant, obj, spec, schedule)));
  }

  ExperimentConfig dimin = cfg;
  dimin.schedule = "diminishing";
  MethodSpec scaled = parse_method_spec("scaled_signsgd", dimin);
  scaled.label = "scaled_signsgd/diminishing";
  results.push_back(
      aggregate(scaled.label, run_repeats(dimin, obj, scaled, build_schedule(dimin, *obj))));

  std::ostringstream out;
  write_aggregate_csv(out, results, cfg.stride);
  return with_header("logistic", cfg, out.str());
}

std::string distributed_csv(const ExperimentConfig& cfg) {
  cfg.validate();
  const auto obj = build_objective(cfg);
  std::vector<AggregateTrace> results;
  for (std::size_t m : cfg.workers) {
    results.push_back(aggregate("M=" + std::to_string(m), run_distributed_repeats(cfg, obj, m)));
  }
  std::ostringstream out;
  write_aggregate_csv(out, results, cfg.stride);
  return with_header("distributed", cfg, out.str());
}

std::string ode_csv(const ExperimentConfig& cfg, double beta, double dt, double t_end,
                    bool* all_pass) {
  cfg.validate();
  const auto obj = build_objective(cfg);
  const DenseVector x0 = start_point(cfg, *obj, 0);
  if (!obj->minimizer()) fail(ErrorKind::kMissingData, "ode: objective has no known minimizer");

  // Sampling box around the minimizer that contains the sublevel set of x0
  // for the quadratic and toy objectives.
  const double reach = 2.0 * linf_norm(x0 - *obj->minimizer()) + 1.0;
  Box box{(*obj->minimizer() - DenseVector(obj->dim(), reach)).entries(),
          (*obj->minimizer() + DenseVector(obj->dim(), reach)).entries()};
  const double D1 = estimate_sublevel_diameter(*obj, x0, box, 20000, cfg.seed, DiameterNorm::kL2);
  const double D2 = estimate_sublevel_diameter(*obj, x0, box, 20000, cfg.seed, DiameterNorm::kLinf);

  std::ostringstream out;
  out << csv_comment("ode", cfg) << '\n';
  bool pass = true;
  for (FlowKind kind : {FlowKind::kGradient, FlowKind::kSign}) {
    FlowConfig fc;
    fc.kind = kind;
    fc.beta = beta;
    fc.dt = dt;
    fc.t_end = t_end;
    const ContinuousTrace trace = integrate_flow(fc, *obj, x0);
    const bool gradient = kind == FlowKind::kGradient;
    const FlowVerdict convex = gradient ? check_prop1(trace, D1, beta) : check_prop2(trace, D2, beta);
    const FlowVerdict general =
        gradient ? check_prop1(trace, std::nullopt, beta, false) : check_prop2(trace, std::nullopt, beta, false);
    pass = pass && convex.pass && general.pass;
    const char* name = gradient ? "gradient" : "sign";
    out << "# flow=" << name << " beta=" << format_double(beta) << " dt=" << format_double(dt)
        << " halvings=" << trace.halvings << '\n';
    write_continuous_csv(out, trace);
    out << "# verdict " << name << " convex: " << convex.to_text();
    out << "# verdict " << name << " nonconvex: " << general.to_text();
  }
  if (all_pass) *all_pass = pass;
  return out.str();
}

VerifyResult verify_config(const ExperimentConfig& cfg) {
  cfg.validate();
  const Theorem which = *parse_theorem(cfg.theorem);
  const auto obj = build_objective(cfg);
  if (!obj->f_star()) fail(ErrorKind::kMissingData, "verify: objective has no known f*");
  const MethodSpec spec = parse_method_spec(cfg.methods.front(), cfg);
  const bool stochastic = which != Theorem::kThm1;
  if (stochastic && cfg.oracle == "exact") {
    fail(ErrorKind::kInvalidConfig, "verify: " + std::string(theorem_name(which)) +
                                        " needs a stochastic oracle");
  }
  if (stochastic && spec.config.method != Method::kScaledSignGd) {
    fail(ErrorKind::kInvalidConfig, "verify: the stochastic bounds cover scaled_signsgd only");
  }
  if (which == Theorem::kThm1 && spec.config.method != Method::kScaledSignGd) {
    fail(ErrorKind::kInvalidConfig, "verify: thm1 covers scaled_signgd only");
  }
  if ((which == Theorem::kThm2Dimin) != (cfg.schedule == "diminishing")) {
    fail(ErrorKind::kInvalidConfig, "verify: thm2-dimin goes with the diminishing schedule only");
  }

  const Schedule schedule = build_schedule(cfg, *obj, spec.alpha);
  const int workers = which == Theorem::kThm3Dist ? static_cast<int>(cfg.workers.front()) : 1;
  const double alpha = which == Theorem::kThm2Dimin ? cfg.alpha : schedule.value(0);
  const RateBundle bundle =
      make_rate_bundle(rate_inputs(cfg, *obj, alpha, declared_sigma(cfg, obj), workers));

  std::vector<Trace> runs;
  if (which == Theorem::kThm3Dist) {
    runs = run_distributed_repeats(cfg, obj, cfg.workers.front());
  } else {
    ExperimentConfig single = cfg;
    if (!stochastic) single.repeats = 1;
    runs = run_repeats(single, obj, spec, schedule);
  }
  const std::vector<double> v = aggregate(spec.label, runs).mean_suboptimality();
  const double slack = stochastic ? 1.1 : 1.0 + 1e-9;
  VerifyResult result{verify_trace_bound(v, bundle, which, slack), {}};
  result.report = bundle.to_text() + result.verdict.to_text();
  return result;
}

}  // namespace signopt

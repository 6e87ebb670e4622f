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

#include "signopt/optimizers.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "signopt/errors.hpp"
#include "signopt/rng.hpp"

namespace signopt {
namespace {

constexpr double kDivergenceLimit = 1e100;

void require_positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    fail(ErrorKind::kInvalidInput, std::string(what) + " must be positive and finite");
  }
}

OptimizerState advance(const OptimizerState& s) {
  OptimizerState next = s;
  ++next.k;
  return next;
}

OptimizerState apply_gd(const OptimizerState& s, const DenseVector& g, double alpha) {
  require_positive(alpha, "step_gd: alpha");
  OptimizerState next = advance(s);
  axpy(-alpha, g, next.x);
  return next;
}

OptimizerState apply_signgd(const OptimizerState& s, const DenseVector& g, double alpha) {
  require_positive(alpha, "step_signgd: alpha");
  OptimizerState next = advance(s);
  axpy(-alpha, sign_vec(g), next.x);
  return next;
}

OptimizerState apply_scaled_signgd(const OptimizerState& s, const DenseVector& g, double alpha) {
  require_positive(alpha, "step_scaled_signgd: alpha");
  OptimizerState next = advance(s);
  axpy(-alpha * l1_norm(g), sign_vec(g), next.x);
  return next;
}

enum class Accum { kGradient, kSign };
enum class Direction { kGradient, kSign };

OptimizerState apply_adagrad(const OptimizerState& s, const DenseVector& g, double eta, Accum accum,
                             Direction dir) {
  require_positive(eta, "adagrad: eta");
  OptimizerState next = advance(s);
  const DenseVector sg = sign_vec(g);
  const double inc = accum == Accum::kGradient ? l2_norm(g) : l2_norm(sg);
  next.accumulator_b = std::sqrt(s.accumulator_b * s.accumulator_b + inc * inc);
  if (next.accumulator_b == 0.0) return next;  // 0/0 first step: no-op
  axpy(-eta / next.accumulator_b, dir == Direction::kGradient ? g : sg, next.x);
  return next;
}

template <class GradAt>
OptimizerState apply_ef(const OptimizerState& s, GradAt&& grad_at, double lambda, EfMode mode) {
  require_positive(lambda, "step_ef_signgd: lambda");
  const DenseVector& e = s.ef_residual;
  const DenseVector g = mode == EfMode::kAtX ? grad_at(s.x) : grad_at(s.x - e);
  DenseVector p = lambda * g;
  p += e;
  const double scale = l1_norm(p) / static_cast<double>(p.dim());
  const DenseVector compressed = scale * sign_vec(p);
  OptimizerState next = advance(s);
  next.x -= compressed;
  next.ef_residual = p - compressed;
  return next;
}

OptimizerState apply_signum(const OptimizerState& s, const DenseVector& g, double alpha,
                            double beta_m) {
  require_positive(alpha, "step_signum: alpha");
  if (!(beta_m >= 0.0 && beta_m < 1.0)) {
    fail(ErrorKind::kInvalidInput, "step_signum: beta_m must lie in [0, 1)");
  }
  OptimizerState next = advance(s);
  next.momentum *= beta_m;
  axpy(1.0 - beta_m, g, next.momentum);
  axpy(-alpha, sign_vec(next.momentum), next.x);
  return next;
}

}  // namespace

std::string_view method_name(Method m) {
  switch (m) {
    case Method::kGd: return "gd";
    case Method::kSignGd: return "signgd";
    case Method::kScaledSignGd: return "scaled_signgd";
    case Method::kAdagradNorm: return "adagrad_norm";
    case Method::kSignAdagradGradAccum: return "sign_adagrad_v1";
    case Method::kSignAdagradSignAccum: return "sign_adagrad_v2";
    case Method::kEfSignGd: return "ef_signgd";
    case Method::kSignum: return "signum";
  }
  return "unknown";
}

std::optional<Method> parse_method(std::string_view name) {
  struct Alias {
    std::string_view name;
    Method method;
  };
  static constexpr Alias kAliases[] = {
      {"gd", Method::kGd},
      {"sgd", Method::kGd},
      {"signgd", Method::kSignGd},
      {"signsgd", Method::kSignGd},
      {"scaled_signgd", Method::kScaledSignGd},
      {"scaled_signsgd", Method::kScaledSignGd},
      {"adagrad_norm", Method::kAdagradNorm},
      {"sign_adagrad_v1", Method::kSignAdagradGradAccum},
      {"sign_adagrad_v2", Method::kSignAdagradSignAccum},
      {"ef_signgd", Method::kEfSignGd},
      {"ef_signsgd", Method::kEfSignGd},
      {"signum", Method::kSignum},
  };
  for (const Alias& a : kAliases) {
    if (a.name == name) return a.method;
  }
  return std::nullopt;
}

OptimizerState step_gd(const OptimizerState& s, const Objective& obj, double alpha) {
  return apply_gd(s, obj.gradient(s.x), alpha);
}

OptimizerState step_signgd(const OptimizerState& s, const Objective& obj, double alpha) {
  return apply_signgd(s, obj.gradient(s.x), alpha);
}

OptimizerState step_scaled_signgd(const OptimizerState& s, const Objective& obj, double alpha) {
  return apply_scaled_signgd(s, obj.gradient(s.x), alpha);
}

OptimizerState step_adagrad_norm(const OptimizerState& s, const Objective& obj, double eta) {
  return apply_adagrad(s, obj.gradient(s.x), eta, Accum::kGradient, Direction::kGradient);
}

OptimizerState step_sign_adagrad_grad_accum(const OptimizerState& s, const Objective& obj,
                                            double eta) {
  return apply_adagrad(s, obj.gradient(s.x), eta, Accum::kGradient, Direction::kSign);
}

OptimizerState step_sign_adagrad_sign_accum(const OptimizerState& s, const Objective& obj,
                                            double eta) {
  return apply_adagrad(s, obj.gradient(s.x), eta, Accum::kSign, Direction::kSign);
}

OptimizerState step_ef_signgd(const OptimizerState& s, const Objective& obj, double lambda,
                              EfMode mode) {
  return apply_ef(s, [&](const DenseVector& at) { return obj.gradient(at); }, lambda, mode);
}

OptimizerState step_sgd(const OptimizerState& s, StochasticOracle& oracle, double alpha) {
  return apply_gd(s, oracle.draw(s.x), alpha);
}

OptimizerState step_signsgd(const OptimizerState& s, StochasticOracle& oracle, double alpha) {
  return apply_signgd(s, oracle.draw(s.x), alpha);
}

OptimizerState step_scaled_signsgd(const OptimizerState& s, StochasticOracle& oracle,
                                   double alpha) {
  return apply_scaled_signgd(s, oracle.draw(s.x), alpha);
}

OptimizerState step_ef_signsgd(const OptimizerState& s, StochasticOracle& oracle, double lambda,
                               EfMode mode) {
  return apply_ef(s, [&](const DenseVector& at) { return oracle.draw(at); }, lambda, mode);
}

OptimizerState step_signum(const OptimizerState& s, StochasticOracle& oracle, double alpha,
                           double beta_m) {
  return apply_signum(s, oracle.draw(s.x), alpha, beta_m);
}

Schedule Schedule::constant(double alpha) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    fail(ErrorKind::kInvalidConfig, "constant schedule: alpha must be positive");
  }
  return Schedule(Kind::kConstant, alpha, {});
}

Schedule Schedule::diminishing(double mu, double p_min) {
  if (!(mu > 0.0)) fail(ErrorKind::kInvalidConfig, "diminishing schedule: mu must be positive");
  if (!(p_min > 0.5 && p_min <= 1.0)) {
    fail(ErrorKind::kInvalidConfig, "diminishing schedule: p_min must lie in (1/2, 1]");
  }
  return Schedule(Kind::kDiminishing, 3.0 / (mu * (2.0 * p_min - 1.0)), {});
}

Schedule Schedule::harmonic(double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    fail(ErrorKind::kInvalidConfig, "harmonic schedule: constant must be positive");
  }
  return Schedule(Kind::kDiminishing, c, {});
}

Schedule Schedule::custom(std::vector<double> values) {
  if (values.empty()) fail(ErrorKind::kInvalidConfig, "custom schedule: empty");
  for (double v : values) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      fail(ErrorKind::kInvalidConfig, "custom schedule: entries must be positive");
    }
  }
  return Schedule(Kind::kCustom, 0.0, std::move(values));
}

double Schedule::value(std::size_t k) const {
  switch (kind_) {
    case Kind::kConstant: return scale_;
    case Kind::kDiminishing: return scale_ / static_cast<double>(k + 1);
    case Kind::kCustom:
      if (k >= values_.size()) {
        fail(ErrorKind::kOutOfRange, "custom schedule: no value for k = " + std::to_string(k));
      }
      return values_[k];
  }
  return 0.0;
}

std::string Schedule::describe() const {
  switch (kind_) {
    case Kind::kConstant: return "constant(" + format_double(scale_) + ")";
    case Kind::kDiminishing: return format_double(scale_) + "/(k+1)";
    case Kind::kCustom: return "custom[" + std::to_string(values_.size()) + "]";
  }
  return "";
}

std::vector<double> Trace::suboptimality() const {
  std::vector<double> v;
  v.reserve(rows.size());
  for (const TraceRow& r : rows) {
    if (!r.V) fail(ErrorKind::kMissingData, "trace has no suboptimality (f* unknown)");
    v.push_back(*r.V);
  }
  return v;
}

void append_row(Trace& trace, const Objective& obj, std::size_t k, const DenseVector& x,
                std::optional<double> alpha) {
  TraceRow row;
  row.k = k;
  row.f = obj.value(x);
  if (!std::isfinite(row.f) || std::abs(row.f) > kDivergenceLimit || !x.is_finite() ||
      linf_norm(x) > kDivergenceLimit) {
    throw DivergenceError(k, "iterate diverged at k = " + std::to_string(k));
  }
  if (obj.f_star()) row.V = row.f - *obj.f_star();
  row.grad_l1 = l1_norm(obj.gradient(x));
  row.alpha = alpha;
  trace.rows.push_back(std::move(row));
}

Trace run(const MethodConfig& config, GradientSource source, const Schedule& schedule,
          const DenseVector& x0, std::size_t iters, std::uint64_t seed, const RunOptions& options) {
  if (iters == 0) fail(ErrorKind::kInvalidInput, "run: iters must be >= 1");

  StochasticOracle* oracle = nullptr;
  const Objective* obj = nullptr;
  if (auto* o = std::get_if<StochasticOracle*>(&source)) {
    oracle = *o;
    oracle->reseed(derive_seed(seed, 0));
    obj = &oracle->base();
  } else {
    obj = std::get<const Objective*>(source);
  }
  require_same_dim(x0, DenseVector(obj->dim()), "run: x0");
  if (!x0.is_finite()) fail(ErrorKind::kInvalidInput, "run: x0 must be finite");

  auto gradient = [&](const DenseVector& x) {
    return oracle != nullptr ? oracle->draw(x) : obj->gradient(x);
  };

  Trace trace;
  trace.rows.reserve(iters + 1);
  OptimizerState state(x0);
  for (std::size_t k = 0;; ++k) {
    const bool last = k == iters;
    append_row(trace, *obj, k, state.x, last ? std::nullopt : std::optional(schedule.value(k)));
    TraceRow& row = trace.rows.back();
    if (options.bound) row.bound = options.bound(k);
    if (options.snapshot_stride > 0 && k % options.snapshot_stride == 0) row.x = state.x;
    if (last) break;
    if (options.stop_grad_l1 > 0.0 && row.grad_l1 <= options.stop_grad_l1) {
      row.alpha.reset();
      trace.status = TraceStatus::kStationary;
      break;
    }

    const double a = *row.alpha;
    switch (config.method) {
      case Method::kGd: state = apply_gd(state, gradient(state.x), a); break;
      case Method::kSignGd: state = apply_signgd(state, gradient(state.x), a); break;
      case Method::kScaledSignGd: state = apply_scaled_signgd(state, gradient(state.x), a); break;
      case Method::kAdagradNorm:
        state = apply_adagrad(state, gradient(state.x), a, Accum::kGradient, Direction::kGradient);
        break;
      case Method::kSignAdagradGradAccum:
        state = apply_adagrad(state, gradient(state.x), a, Accum::kGradient, Direction::kSign);
        break;
      case Method::kSignAdagradSignAccum:
        state = apply_adagrad(state, gradient(state.x), a, Accum::kSign, Direction::kSign);
        break;
      case Method::kEfSignGd: state = apply_ef(state, gradient, a, config.ef_mode); break;
      case Method::kSignum:
        state = apply_signum(state, gradient(state.x), a, config.beta_m);
        break;
    }
  }
  return trace;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trace_csv(std::ostream& out, const Trace& trace, bool with_iterates) {
  std::size_t d = 0;
  if (with_iterates) {
    for (const TraceRow& r : trace.rows) {
      if (r.x) {
        d = r.x->dim();
        break;
      }
    }
  }
  out << "k,f,V,grad_l1,alpha,bound,bits_up,bits_down";
  for (std::size_t i = 0; i < d; ++i) out << ",x" << (i + 1);
  out << '\n';
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const TraceRow& r : trace.rows) {
    out << r.k << ',' << format_double(r.f) << ',' << opt(r.V) << ',' << format_double(r.grad_l1)
        << ',' << opt(r.alpha) << ',' << opt(r.bound) << ',' << r.bits_up << ',' << r.bits_down;
    for (std::size_t i = 0; i < d; ++i) {
      out << ',';
      if (r.x) out << format_double((*r.x)[i]);
    }
    out << '\n';
  }
}

}  // namespace signopt

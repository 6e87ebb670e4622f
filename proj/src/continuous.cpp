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

#include "signopt/continuous.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "signopt/errors.hpp"
#include "signopt/optimizers.hpp"
#include "signopt/rng.hpp"

namespace signopt {
namespace {

constexpr int kMaxHalvings = 20;
constexpr double kFreeze = 1e-9;

struct Integrator {
  const FlowConfig& cfg;
  const Objective& obj;
  std::size_t halvings = 0;

  DenseVector velocity(const DenseVector& x) const {
    DenseVector g = obj.gradient(x);
    if (cfg.kind == FlowKind::kGradient) return -cfg.beta * g;
    DenseVector v(g.dim());
    for (std::size_t i = 0; i < g.dim(); ++i) {
      if (std::abs(g[i]) <= kFreeze) continue;
      v[i] = g[i] > 0.0 ? -cfg.beta : cfg.beta;
    }
    return v;
  }

  void advance(DenseVector& x, double& fx, double h, int depth) {
    DenseVector candidate = x;
    axpy(h, velocity(x), candidate);
    const double fc = obj.value(candidate);
    if (fc <= fx + 1e-14 * std::abs(fx)) {
      x = std::move(candidate);
      fx = fc;
      return;
    }
    if (depth == kMaxHalvings) {
      fail(ErrorKind::kStiffness, "integrate_flow: step-halving budget exhausted");
    }
    ++halvings;
    advance(x, fx, 0.5 * h, depth + 1);
    advance(x, fx, 0.5 * h, depth + 1);
  }
};

FlowSample sample_at(const Objective& obj, double t, const DenseVector& x, double fx) {
  const DenseVector g = obj.gradient(x);
  return FlowSample{t, fx - *obj.f_star(), l2_norm(g), l1_norm(g)};
}

void record(FlowVerdict& v, bool ok, double t, const char* which) {
  ++v.checked;
  if (!ok && v.pass) {
    v.pass = false;
    v.first_violation_t = t;
    v.failed_inequality = which;
  }
}

enum class GradNorm { kL2, kL1 };

// Shared loop: the convex bound on V(t) plus the running-min gradient bound.
template <class ConvexBound, class GradBound>
FlowVerdict check_flow(const ContinuousTrace& trace, GradNorm norm, bool convex,
                       ConvexBound convex_bound, GradBound grad_bound, double slack,
                       const char* convex_name, const char* grad_name) {
  if (trace.samples.empty()) fail(ErrorKind::kMissingData, "flow check: empty trace");
  FlowVerdict out;
  const double v0 = trace.samples.front().V;
  double running_min = std::numeric_limits<double>::infinity();
  for (const FlowSample& s : trace.samples) {
    running_min = std::min(running_min, norm == GradNorm::kL2 ? s.grad_l2 : s.grad_l1);
    if (convex) record(out, s.V <= slack * convex_bound(v0, s.t), s.t, convex_name);
    if (s.t > 0.0) record(out, running_min <= slack * grad_bound(v0, s.t), s.t, grad_name);
  }
  return out;
}

}  // namespace

void FlowConfig::validate() const {
  if (!(beta > 0.0) || !std::isfinite(beta)) fail(ErrorKind::kInvalidConfig, "FlowConfig: beta must be > 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) fail(ErrorKind::kInvalidConfig, "FlowConfig: dt must be > 0");
  if (!(t_end > 0.0) || !std::isfinite(t_end)) fail(ErrorKind::kInvalidConfig, "FlowConfig: t_end must be > 0");
  if (dt > t_end) fail(ErrorKind::kInvalidConfig, "FlowConfig: dt must not exceed t_end");
  if (sample_stride == 0) fail(ErrorKind::kInvalidConfig, "FlowConfig: sample_stride must be >= 1");
}

ContinuousTrace integrate_flow(const FlowConfig& cfg, const Objective& obj, const DenseVector& x0) {
  cfg.validate();
  if (!obj.f_star()) fail(ErrorKind::kMissingData, "integrate_flow: f_star required");
  require_same_dim(x0, DenseVector(obj.dim()), "integrate_flow: x0");
  require_finite(x0, "integrate_flow: x0");

  const auto steps = static_cast<std::size_t>(std::llround(cfg.t_end / cfg.dt));
  ContinuousTrace trace;
  trace.kind = cfg.kind;
  trace.beta = cfg.beta;
  trace.samples.reserve(steps / cfg.sample_stride + 2);

  Integrator integ{cfg, obj};
  DenseVector x = x0;
  double fx = obj.value(x);
  trace.samples.push_back(sample_at(obj, 0.0, x, fx));
  for (std::size_t n = 1; n <= steps; ++n) {
    integ.advance(x, fx, cfg.dt, 0);
    if (n % cfg.sample_stride == 0 || n == steps) {
      trace.samples.push_back(sample_at(obj, static_cast<double>(n) * cfg.dt, x, fx));
    }
  }
  trace.halvings = integ.halvings;
  return trace;
}

FlowVerdict check_prop1(const ContinuousTrace& trace, std::optional<double> D1, double beta,
                        bool convex, double slack) {
  if (convex && !D1) fail(ErrorKind::kMissingData, "check_prop1: D1 required for the convex bound");
  if (!(beta > 0.0)) fail(ErrorKind::kInvalidInput, "check_prop1: beta must be > 0");
  const double d2 = D1 ? *D1 * *D1 : 0.0;
  return check_flow(
      trace, GradNorm::kL2, convex,
      [d2, beta](double v0, double t) { return d2 * v0 / (d2 + v0 * beta * t); },
      [beta](double v0, double t) { return std::sqrt(v0) / std::sqrt(beta * t); }, slack,
      "V(t) <= D1^2 V0 / (D1^2 + V0 beta t)", "min ||grad f||_2 <= sqrt(V0 / (beta t))");
}

FlowVerdict check_prop2(const ContinuousTrace& trace, std::optional<double> D2, double beta,
                        bool convex, double slack) {
  if (convex && !D2) fail(ErrorKind::kMissingData, "check_prop2: D2 required for the convex bound");
  if (!(beta > 0.0)) fail(ErrorKind::kInvalidInput, "check_prop2: beta must be > 0");
  const double diam = D2.value_or(1.0);
  return check_flow(
      trace, GradNorm::kL1, convex,
      [diam, beta](double v0, double t) { return v0 * std::exp(-beta * t / diam); },
      [beta](double v0, double t) { return v0 / (beta * t); }, slack,
      "V(t) <= V0 exp(-beta t / D2)", "min ||grad f||_1 <= V0 / (beta t)");
}

std::string FlowVerdict::to_text() const {
  std::ostringstream s;
  s << (pass ? "PASS" : "FAIL") << " (" << checked << " inequality checks)";
  if (first_violation_t) s << "; first violation at t = " << format_double(*first_violation_t) << ": " << failed_inequality;
  s << '\n';
  return s.str();
}

double estimate_sublevel_diameter(const Objective& obj, const DenseVector& x0, const Box& box,
                                  std::size_t budget, std::uint64_t seed, DiameterNorm norm) {
  if (!obj.minimizer()) fail(ErrorKind::kMissingData, "estimate_sublevel_diameter: minimizer required");
  if (box.dim() != obj.dim()) fail(ErrorKind::kInvalidInput, "estimate_sublevel_diameter: box dimension");
  const double level = obj.value(x0);
  const DenseVector& xs = *obj.minimizer();
  auto dist = [&](const DenseVector& x) {
    return norm == DiameterNorm::kL2 ? l2_norm(x - xs) : linf_norm(x - xs);
  };
  double best = dist(x0);
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  DenseVector x(obj.dim());
  for (std::size_t s = 0; s < budget; ++s) {
    for (std::size_t i = 0; i < x.dim(); ++i) {
      x[i] = box.lower[i] + (box.upper[i] - box.lower[i]) * unif(rng);
    }
    if (obj.value(x) <= level) best = std::max(best, dist(x));
  }
  return best;
}

void write_continuous_csv(std::ostream& out, const ContinuousTrace& trace) {
  out << "t,V,grad_l2,grad_l1\n";
  for (const FlowSample& s : trace.samples) {
    out << format_double(s.t) << ',' << format_double(s.V) << ',' << format_double(s.grad_l2) << ','
        << format_double(s.grad_l1) << '\n';
  }
}

}  // namespace signopt

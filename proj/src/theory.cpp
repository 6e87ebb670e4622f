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

#include "signopt/theory.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "signopt/errors.hpp"

namespace signopt {
namespace {

void require_rate_domain(double mu, double L, const char* who) {
  if (!(mu > 0.0) || !std::isfinite(mu)) fail(ErrorKind::kOutOfRange, std::string(who) + ": mu must be > 0");
  if (!(L >= mu) || !std::isfinite(L)) fail(ErrorKind::kOutOfRange, std::string(who) + ": L must be >= mu");
}

void require_p_min(double p_min, const char* who) {
  if (!(p_min > 0.5 && p_min <= 1.0)) {
    fail(ErrorKind::kOutOfRange, std::string(who) + ": p_min must lie in (1/2, 1]");
  }
}

void require_step(double alpha, double upper, const char* who) {
  if (!(alpha > 0.0 && alpha < upper)) {
    std::ostringstream msg;
    msg << who << ": alpha = " << alpha << " outside (0, " << upper << ")";
    fail(ErrorKind::kOutOfRange, msg.str());
  }
}

double rate_with_margin(double mu, double L, double alpha, double margin, const char* who) {
  const double z = 1.0 - 2.0 * mu * alpha * (margin - L * alpha);
  if (!(z >= 0.5 && z < 1.0)) {
    fail(ErrorKind::kOutOfRange, std::string(who) + ": rate left [1/2, 1)");
  }
  return z;
}

// 15-point Kronrod rule with the embedded 7-point Gauss rule.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
double gauss_kronrod(const F& f, double lo, double hi, double tol, int depth) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  const double fc = f(c);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double pair = f(c - dx) + f(c + dx);
    kronrod += kWgk[j] * pair;
    if (j % 2 == 1) gauss += kWg[j / 2] * pair;
  }
  kronrod *= h;
  gauss *= h;
  const double floor = 64.0 * std::numeric_limits<double>::epsilon() * std::abs(kronrod);
  if (std::abs(kronrod - gauss) <= std::max(tol, floor) || depth >= 40) return kronrod;
  return gauss_kronrod(f, lo, c, 0.5 * tol, depth + 1) + gauss_kronrod(f, c, hi, 0.5 * tol, depth + 1);
}

// int_0^x t^(a-1) (1-t)^(b-1) dt for x <= 1/2. For a < 1 the endpoint
// singularity is removed with t = s^(1/a).
double lower_beta_integral(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  constexpr double kTol = 1e-15;
  if (a < 1.0) {
    const double upper = std::pow(x, a);
    auto g = [a, b](double s) { return std::pow(1.0 - std::pow(s, 1.0 / a), b - 1.0) / a; };
    return gauss_kronrod(g, 0.0, upper, kTol, 0);
  }
  auto g = [a, b](double t) { return std::pow(t, a - 1.0) * std::pow(1.0 - t, b - 1.0); };
  return gauss_kronrod(g, 0.0, x, kTol, 0);
}

}  // namespace

double rate_zeta(double mu, double L, double alpha) {
  require_rate_domain(mu, L, "rate_zeta");
  require_step(alpha, 2.0 / L, "rate_zeta");
  const double z = 1.0 - 2.0 * mu * alpha * (1.0 - 0.5 * L * alpha);
  if (!(z >= 0.0 && z < 1.0)) fail(ErrorKind::kOutOfRange, "rate_zeta: rate left [0, 1)");
  return z;
}

double rate_gamma(double L, double alpha) {
  if (!(L > 0.0)) fail(ErrorKind::kOutOfRange, "rate_gamma: L must be > 0");
  require_step(alpha, 2.0 / L, "rate_gamma");
  return alpha * (1.0 - 0.5 * L * alpha);
}

RateAndFloor rate_zeta1_and_floor(double mu, double L, double alpha, double sigma, double p_min) {
  require_rate_domain(mu, L, "rate_zeta1_and_floor");
  require_p_min(p_min, "rate_zeta1_and_floor");
  if (!(sigma >= 0.0)) fail(ErrorKind::kOutOfRange, "rate_zeta1_and_floor: sigma must be >= 0");
  const double margin = 2.0 * p_min - 1.0;
  require_step(alpha, margin / L, "rate_zeta1_and_floor");
  const double zeta1 = rate_with_margin(mu, L, alpha, margin, "rate_zeta1_and_floor");
  const double floor1 = L * sigma * sigma * alpha / (2.0 * mu * (margin - L * alpha));
  return {zeta1, floor1};
}

int majority_kappa(int workers) {
  if (workers < 1) fail(ErrorKind::kOutOfRange, "majority_kappa: M must be >= 1");
  return (workers + 1) / 2;
}

RateAndFloor rate_zeta2_and_floor(double mu, double L, double alpha, double sigma, double p_min,
                                  int workers) {
  require_rate_domain(mu, L, "rate_zeta2_and_floor");
  require_p_min(p_min, "rate_zeta2_and_floor");
  if (!(sigma >= 0.0)) fail(ErrorKind::kOutOfRange, "rate_zeta2_and_floor: sigma must be >= 0");
  const int kappa = majority_kappa(workers);
  const double q = reg_inc_beta(p_min, kappa, kappa);
  const double margin = 2.0 * q - 1.0;
  require_step(alpha, margin / L, "rate_zeta2_and_floor");
  const double zeta2 = rate_with_margin(mu, L, alpha, margin, "rate_zeta2_and_floor");
  const double floor2 = L * sigma * sigma * alpha * alpha / (1.0 - zeta2);
  return {zeta2, floor2};
}

double reg_inc_beta(double p, double a, double b) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    fail(ErrorKind::kInvalidInput, "reg_inc_beta: a and b must be positive");
  }
  if (!(p >= 0.0 && p <= 1.0)) fail(ErrorKind::kInvalidInput, "reg_inc_beta: p must lie in [0, 1]");
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  // Split at 1/2 so each piece has at most one singular endpoint, at 0.
  const double total = lower_beta_integral(a, b, 0.5) + lower_beta_integral(b, a, 0.5);
  if (p <= 0.5) return lower_beta_integral(a, b, p) / total;
  return 1.0 - lower_beta_integral(b, a, 1.0 - p) / total;
}

double nonconvex_bound(double f0_gap, double L, double alpha, std::size_t k) {
  if (!(f0_gap >= 0.0)) fail(ErrorKind::kOutOfRange, "nonconvex_bound: f0_gap must be >= 0");
  return f0_gap / (rate_gamma(L, alpha) * static_cast<double>(k + 1));
}

double diminishing_bound(double mu, double L, double sigma, double p_min, double f0_gap,
                         std::size_t k) {
  if (k == 0) fail(ErrorKind::kOutOfRange, "diminishing_bound: k must be >= 1");
  require_rate_domain(mu, L, "diminishing_bound");
  require_p_min(p_min, "diminishing_bound");
  if (!(f0_gap >= 0.0)) fail(ErrorKind::kOutOfRange, "diminishing_bound: f0_gap must be >= 0");
  const double kk = static_cast<double>(k);
  const double margin = 2.0 * p_min - 1.0;
  const double lead = 9.0 * L * sigma * sigma / (mu * mu * margin * margin);
  return lead * (32.0 / kk + 1.0 / (kk * kk)) + f0_gap / std::pow(kk + 1.0, 3);
}

RateBundle make_rate_bundle(const RateInputs& in) {
  require_rate_domain(in.mu, in.L, "make_rate_bundle");
  if (!(in.alpha > 0.0)) fail(ErrorKind::kOutOfRange, "make_rate_bundle: alpha must be > 0");
  RateBundle out;
  out.inputs = in;
  out.kappa = majority_kappa(in.workers);
  if (in.alpha < 2.0 / in.L) {
    out.zeta = rate_zeta(in.mu, in.L, in.alpha);
    out.gamma = rate_gamma(in.L, in.alpha);
  }
  if (in.p_min > 0.5 && in.p_min <= 1.0) {
    if (in.alpha < (2.0 * in.p_min - 1.0) / in.L) {
      const auto r = rate_zeta1_and_floor(in.mu, in.L, in.alpha, in.sigma, in.p_min);
      out.zeta1 = r.zeta;
      out.floor1 = r.floor;
    }
    const double q = reg_inc_beta(in.p_min, out.kappa, out.kappa);
    if (in.alpha < (2.0 * q - 1.0) / in.L) {
      const auto r = rate_zeta2_and_floor(in.mu, in.L, in.alpha, in.sigma, in.p_min, in.workers);
      out.zeta2 = r.zeta;
      out.floor2 = r.floor;
    }
  }
  return out;
}

std::string RateBundle::to_text() const {
  std::ostringstream s;
  auto line = [&s](const char* name, const std::optional<double>& v) {
    s << name << " = " << (v ? format_double(*v) : std::string("n/a (step size out of range)"))
      << '\n';
  };
  s << "inputs: mu = " << format_double(inputs.mu) << ", L = " << format_double(inputs.L)
    << ", alpha = " << format_double(inputs.alpha) << ", sigma = " << format_double(inputs.sigma)
    << ", p_min = " << format_double(inputs.p_min) << ", M = " << inputs.workers << '\n';
  s << "kappa = " << kappa << '\n';
  line("zeta", zeta);
  line("gamma", gamma);
  line("zeta1", zeta1);
  line("floor1", floor1);
  line("zeta2", zeta2);
  line("floor2", floor2);
  return s.str();
}

std::string_view theorem_name(Theorem t) {
  switch (t) {
    case Theorem::kThm1: return "thm1";
    case Theorem::kThm2Const: return "thm2-const";
    case Theorem::kThm2Dimin: return "thm2-dimin";
    case Theorem::kThm3Dist: return "thm3-dist";
  }
  return "unknown";
}

std::optional<Theorem> parse_theorem(std::string_view name) {
  for (Theorem t : {Theorem::kThm1, Theorem::kThm2Const, Theorem::kThm2Dimin, Theorem::kThm3Dist}) {
    if (theorem_name(t) == name) return t;
  }
  return std::nullopt;
}

std::function<double(std::size_t)> bound_function(const RateBundle& bundle, Theorem which,
                                                  double v0) {
  auto missing = [](const char* what) {
    fail(ErrorKind::kOutOfRange, std::string("bound unavailable: ") + what +
                                     " not defined at this step size");
  };
  switch (which) {
    case Theorem::kThm1: {
      if (!bundle.zeta) missing("zeta");
      const double z = *bundle.zeta;
      return [z, v0](std::size_t k) { return std::pow(z, static_cast<double>(k)) * v0; };
    }
    case Theorem::kThm2Const: {
      if (!bundle.zeta1) missing("zeta1");
      const double z = *bundle.zeta1;
      const double fl = *bundle.floor1;
      return [z, fl, v0](std::size_t k) { return std::pow(z, static_cast<double>(k)) * v0 + fl; };
    }
    case Theorem::kThm2Dimin: {
      const RateInputs in = bundle.inputs;
      return [in, v0](std::size_t k) {
        if (k == 0) return std::numeric_limits<double>::infinity();
        return diminishing_bound(in.mu, in.L, in.sigma, in.p_min, v0, k);
      };
    }
    case Theorem::kThm3Dist: {
      if (!bundle.zeta2) missing("zeta2");
      const double z = *bundle.zeta2;
      const double fl = *bundle.floor2;
      return [z, fl, v0](std::size_t k) { return std::pow(z, static_cast<double>(k)) * v0 + fl; };
    }
  }
  return {};
}

Verdict verify_trace_bound(std::span<const double> v, const RateBundle& bundle, Theorem which,
                           double slack, std::size_t k_min, std::optional<std::size_t> k_max) {
  if (v.empty()) fail(ErrorKind::kMissingData, "verify_trace_bound: empty trace");
  if (!(slack >= 1.0)) fail(ErrorKind::kInvalidInput, "verify_trace_bound: slack must be >= 1");
  if (which == Theorem::kThm2Dimin && k_min == 0) k_min = 1;
  const std::size_t last = std::min(v.size() - 1, k_max.value_or(v.size() - 1));
  const auto bound = bound_function(bundle, which, v[0]);

  Verdict out;
  out.which = which;
  for (std::size_t k = k_min; k <= last; ++k) {
    const double b = bound(k);
    const double ratio = b > 0.0 ? v[k] / b : (v[k] > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
    out.max_ratio = std::max(out.max_ratio, ratio);
    ++out.checked;
    if (!(v[k] <= slack * b) && out.pass) {
      out.pass = false;
      out.first_violation = k;
    }
  }
  return out;
}

Verdict verify_trace_bound(const Trace& trace, const RateBundle& bundle, Theorem which,
                           double slack, std::size_t k_min, std::optional<std::size_t> k_max) {
  const std::vector<double> v = trace.suboptimality();
  return verify_trace_bound(std::span<const double>(v), bundle, which, slack, k_min, k_max);
}

std::string Verdict::to_text() const {
  std::ostringstream s;
  s << "theorem " << theorem_name(which) << ": " << (pass ? "PASS" : "FAIL") << " (" << checked
    << " iterations checked, max V/bound = " << format_double(max_ratio) << ")";
  if (first_violation) s << "; first violation at k = " << *first_violation;
  s << '\n';
  return s.str();
}

std::string Verdict::csv_header() { return "theorem,pass,first_violation_k,max_ratio"; }

std::string Verdict::to_csv_row() const {
  std::ostringstream s;
  s << theorem_name(which) << ',' << (pass ? "pass" : "fail") << ','
    << (first_violation ? std::to_string(*first_violation) : std::string()) << ','
    << format_double(max_ratio);
  return s.str();
}

}  // namespace signopt

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

#include <cmath>
#include <memory>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "reference.hpp"
#include "signopt/errors.hpp"
#include "signopt/optimizers.hpp"

namespace signopt {
namespace {

Objective quad(std::initializer_list<double> diag) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(diag.size()));
  Eigen::Index i = 0;
  for (double v : diag) d(i++) = v;
  return make_quadratic(d.asDiagonal(), DenseVector(diag.size()));
}

OptimizerState at(std::initializer_list<double> x) { return OptimizerState(DenseVector(x)); }

TEST(Gd, OneStep) {
  EXPECT_EQ(step_gd(at({1.0}), quad({2.0}), 0.25).x, DenseVector{0.5});
  EXPECT_EQ(step_gd(at({0.0}), quad({2.0}), 0.25).x, DenseVector{0.0});
  const DenseVector x = step_gd(at({1.0, 2.0}), quad({2.0, 2.0}), 0.1).x;
  EXPECT_DOUBLE_EQ(x[0], 0.8);
  EXPECT_DOUBLE_EQ(x[1], 1.6);
}

TEST(SignGd, OscillatesFromHalfStep) {
  const Objective f = quad({2.0, 2.0});
  OptimizerState s = at({0.05, 0.05});
  s = step_signgd(s, f, 0.1);
  EXPECT_EQ(s.x, (DenseVector{-0.05, -0.05}));
  s = step_signgd(s, f, 0.1);
  EXPECT_EQ(s.x, (DenseVector{0.05, 0.05}));
  EXPECT_EQ(step_signgd(at({0.0, 0.0}), f, 0.1).x, (DenseVector{0.0, 0.0}));
  EXPECT_EQ(step_signgd(at({5.0}), quad({2.0}), 1.0).x, DenseVector{4.0});
}

TEST(ScaledSignGd, HalvesOnSquare) {
  const Objective f = quad({2.0});
  OptimizerState s = at({1.0});
  for (int k = 1; k <= 30; ++k) {
    s = step_scaled_signgd(s, f, 0.25);
    EXPECT_EQ(s.x[0], std::ldexp(1.0, -k));
    EXPECT_EQ(f.value(s.x), std::ldexp(1.0, -2 * k));
  }
  EXPECT_EQ(s.k, 30u);
}

TEST(ScaledSignGd, HandArithmetic) {
  const DenseVector x = step_scaled_signgd(at({0.05, 0.05}), quad({2.0, 2.0}), 0.1).x;
  EXPECT_NEAR(x[0], 0.03, 1e-16);
  EXPECT_NEAR(x[1], 0.03, 1e-16);
  EXPECT_EQ(step_scaled_signgd(at({0.0}), quad({2.0}), 0.1).x, DenseVector{0.0});
}

TEST(AdagradNorm, HandArithmetic) {
  const OptimizerState s = step_adagrad_norm(at({1.0}), quad({1.0}), 1.0);
  EXPECT_EQ(s.accumulator_b, 1.0);
  EXPECT_EQ(s.x, DenseVector{0.0});
  OptimizerState still = at({0.0});
  still.accumulator_b = 2.0;
  const OptimizerState t = step_adagrad_norm(still, quad({1.0}), 1.0);
  EXPECT_EQ(t.x, DenseVector{0.0});
  EXPECT_EQ(t.accumulator_b, 2.0);
}

TEST(AdagradNorm, ZeroAccumulatorIsNoOp) {
  for (auto step : {step_adagrad_norm, step_sign_adagrad_grad_accum, step_sign_adagrad_sign_accum}) {
    const OptimizerState s = step(at({0.0}), quad({1.0}), 1.0);
    EXPECT_EQ(s.x, DenseVector{0.0});
    EXPECT_EQ(s.accumulator_b, 0.0);
  }
}

TEST(SignAdagradGradAccum, HandArithmetic) {
  const OptimizerState s = step_sign_adagrad_grad_accum(at({1.0}), quad({1.0}), 0.5);
  EXPECT_EQ(s.accumulator_b, 1.0);
  EXPECT_EQ(s.x, DenseVector{0.5});
}

TEST(SignAdagradSignAccum, AlternatingPartialSums) {
  const Objective f = quad({2.0});
  OptimizerState s = at({0.5});
  s = step_sign_adagrad_sign_accum(s, f, 1.0);
  EXPECT_EQ(s.x[0], -0.5);
  s = step_sign_adagrad_sign_accum(s, f, 1.0);
  EXPECT_NEAR(s.x[0], 0.2071067811865475, 1e-15);
  s = step_sign_adagrad_sign_accum(s, f, 1.0);
  EXPECT_NEAR(s.x[0], -0.3702434880030784, 1e-15);
  EXPECT_DOUBLE_EQ(s.accumulator_b, std::sqrt(3.0));
}

TEST(EfSignGd, OneDimensionIsGd) {
  const OptimizerState s = step_ef_signgd(at({1.0}), quad({2.0}), 0.1, EfMode::kAtX);
  EXPECT_DOUBLE_EQ(s.x[0], 0.8);
  EXPECT_EQ(s.ef_residual[0], 0.0);
  const OptimizerState z = step_ef_signgd(at({0.0, 0.0}), quad({2.0, 4.0}), 0.1, EfMode::kAtX);
  EXPECT_EQ(z.x, (DenseVector{0.0, 0.0}));
  EXPECT_EQ(z.ef_residual, (DenseVector{0.0, 0.0}));
}

// z = x - e follows plain GD when the gradient is taken at x - e.
TEST(EfSignGdProperties, ShiftedModeTracksGd) {
  std::mt19937_64 rng(8);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = 2 + trial % 4;
    const Eigen::MatrixXd A = ref::random_spd(d, 0.5, 3.0, rng);
    const Objective f = make_quadratic(A, DenseVector(d));
    std::vector<double> z(d);
    for (double& zi : z) zi = normal(rng);
    OptimizerState s{DenseVector(z)};
    for (int k = 0; k < 50; ++k) {
      s = step_ef_signgd(s, f, 0.1, EfMode::kAtXMinusE);
      const std::vector<double> g = ref::quad_gradient(A, z);
      for (std::size_t i = 0; i < d; ++i) z[i] -= 0.1 * g[i];
      const DenseVector zk = s.x - s.ef_residual;
      for (std::size_t i = 0; i < d; ++i) EXPECT_NEAR(zk[i], z[i], 1e-12);
    }
  }
}

std::shared_ptr<const Objective> square_ptr() { return std::make_shared<const Objective>(quad({2.0})); }

TEST(Stochastic, NoiseFreeMatchesDeterministic) {
  auto o = StochasticOracle::gaussian(square_ptr(), 0.0, 1);
  EXPECT_EQ(step_scaled_signsgd(at({1.0}), o, 0.1).x, step_scaled_signgd(at({1.0}), o.base(), 0.1).x);
  EXPECT_EQ(step_signsgd(at({1.0}), o, 0.1).x, step_signgd(at({1.0}), o.base(), 0.1).x);
  EXPECT_EQ(step_sgd(at({1.0}), o, 0.1).x, step_gd(at({1.0}), o.base(), 0.1).x);
}

TEST(Stochastic, ScaledStepUsesDrawnGradient) {
  auto o = StochasticOracle::gaussian(square_ptr(), 0.3, 12);
  auto probe = o.with_seed(12);
  const double g = probe.draw(DenseVector{1.0})[0];
  const OptimizerState s = step_scaled_signsgd(at({1.0}), o, 0.1);
  EXPECT_DOUBLE_EQ(s.x[0], 1.0 - 0.1 * std::abs(g) * (g > 0 ? 1.0 : -1.0));
}

TEST(Signum, ZeroMomentumIsSignStep) {
  auto a = StochasticOracle::gaussian(square_ptr(), 0.5, 4);
  auto b = a.with_seed(4);
  a.reseed(4);
  OptimizerState s = at({1.0});
  OptimizerState t = at({1.0});
  for (int k = 0; k < 20; ++k) {
    s = step_signum(s, a, 0.05, 0.0);
    t = step_signsgd(t, b, 0.05);
    EXPECT_EQ(s.x, t.x);
  }
}

TEST(Signum, ConstantGradientMomentumConverges) {
  // f = -x has constant gradient -1.
  ObjectiveParts parts;
  parts.name = "linear";
  parts.dim = 1;
  parts.value = [](const DenseVector& x) { return -x[0]; };
  parts.gradient = [](const DenseVector&) { return DenseVector{-1.0}; };
  auto obj = std::make_shared<const Objective>(Objective(parts));
  auto o = StochasticOracle::gaussian(obj, 0.0, 1);
  OptimizerState s = at({0.0});
  for (int k = 0; k < 200; ++k) s = step_signum(s, o, 1e-3, 0.9);
  EXPECT_NEAR(s.momentum[0], -1.0, 1e-6);
  EXPECT_NEAR(s.x[0], 0.2, 1e-9);
}

TEST(Schedule, Values) {
  EXPECT_EQ(Schedule::constant(0.05).value(17), 0.05);
  const Schedule d = Schedule::diminishing(2.0, 0.9);
  EXPECT_DOUBLE_EQ(d.value(0), 1.875);
  EXPECT_DOUBLE_EQ(d.value(9), 0.1875);
  EXPECT_DOUBLE_EQ(Schedule::harmonic(6.0).value(2), 2.0);
  const Schedule c = Schedule::custom({0.1, 0.2});
  EXPECT_EQ(c.value(1), 0.2);
  EXPECT_THROW(c.value(2), Error);
}

TEST(Schedule, RejectsHalfOrLessPMin) {
  for (double p : {0.5, 0.4}) {
    try {
      Schedule::diminishing(2.0, p);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kInvalidConfig);
    }
  }
}

TEST(Run, ExactSquareTrace) {
  const Objective f = quad({2.0});
  const Trace t = run({Method::kScaledSignGd}, &f, Schedule::constant(0.25), DenseVector{1.0}, 10, 0);
  ASSERT_EQ(t.rows.size(), 11u);
  for (const TraceRow& r : t.rows) EXPECT_EQ(*r.V, std::ldexp(1.0, -2 * static_cast<int>(r.k)));
  EXPECT_FALSE(t.rows.back().alpha.has_value());
  EXPECT_EQ(t.rows.front().alpha, 0.25);
}

TEST(Run, OscillationKeepsValue) {
  const Objective f = quad({2.0, 2.0});
  const Trace t = run({Method::kSignGd}, &f, Schedule::constant(0.1), DenseVector{0.05, 0.05}, 20, 0);
  for (const TraceRow& r : t.rows) EXPECT_EQ(r.f, t.rows.front().f);
}

TEST(Run, DivergenceReportsIteration) {
  const Objective f = quad({2.0});
  try {
    run({Method::kGd}, &f, Schedule::constant(10.0), DenseVector{1.0}, 100, 0);
    FAIL();
  } catch (const DivergenceError& e) {
    EXPECT_EQ(e.iteration(), 40u);
  }
}

TEST(Run, StochasticDeterministicInSeed) {
  auto o1 = StochasticOracle::gaussian(square_ptr(), 0.5, 1);
  auto o2 = StochasticOracle::gaussian(square_ptr(), 0.5, 777);
  for (Method m : {Method::kGd, Method::kSignGd, Method::kScaledSignGd, Method::kEfSignGd, Method::kSignum}) {
    const Trace a = run({m}, &o1, Schedule::constant(0.05), DenseVector{1.0}, 100, 5);
    const Trace b = run({m}, &o2, Schedule::constant(0.05), DenseVector{1.0}, 100, 5);
    std::ostringstream sa, sb;
    write_trace_csv(sa, a);
    write_trace_csv(sb, b);
    EXPECT_EQ(sa.str(), sb.str());
  }
}

TEST(Run, StopsWhenStationary) {
  const Objective f = quad({2.0});
  RunOptions opt;
  opt.stop_grad_l1 = 1e-3;
  const Trace t = run({Method::kGd}, &f, Schedule::constant(0.25), DenseVector{1.0}, 100, 0, opt);
  EXPECT_EQ(t.status, TraceStatus::kStationary);
  EXPECT_LE(t.rows.back().grad_l1, 1e-3);
  EXPECT_FALSE(t.rows.back().alpha.has_value());
}

TEST(TraceCsv, HeaderAndEmptyFields) {
  const Objective f = quad({2.0, 2.0});
  RunOptions opt;
  opt.snapshot_stride = 1;
  const Trace t = run({Method::kSignGd}, &f, Schedule::constant(0.1), DenseVector{0.05, 0.05}, 1, 0, opt);
  std::ostringstream out;
  write_trace_csv(out, t, true);
  EXPECT_EQ(out.str(),
            "k,f,V,grad_l1,alpha,bound,bits_up,bits_down,x1,x2\n"
            "0,0.005000000000000001,0.005000000000000001,0.20000000000000001,0.10000000000000001,,0,0,"
            "0.050000000000000003,0.050000000000000003\n"
            "1,0.005000000000000001,0.005000000000000001,0.20000000000000001,,,0,0,"
            "-0.050000000000000003,-0.050000000000000003\n");
}

TEST(MethodNames, RoundTrip) {
  for (Method m : {Method::kGd, Method::kSignGd, Method::kScaledSignGd, Method::kAdagradNorm,
                   Method::kSignAdagradGradAccum, Method::kSignAdagradSignAccum, Method::kEfSignGd,
                   Method::kSignum}) {
    EXPECT_EQ(parse_method(method_name(m)), m);
  }
  EXPECT_EQ(parse_method("scaled_signsgd"), Method::kScaledSignGd);
  EXPECT_EQ(parse_method("sgd"), Method::kGd);
  EXPECT_FALSE(parse_method("adam").has_value());
}

// Descent inequality V' - V <= -gamma ||g||_1^2 on random quadratics.
TEST(ScaledSignGdProperties, DescentInequality) {
  std::mt19937_64 rng(21);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.01, 0.99);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t d = 1 + trial % 6;
    const Eigen::MatrixXd A = ref::random_spd(d, 0.2, 4.0, rng);
    const Objective f = make_quadratic(A, DenseVector(d));
    const double L = ref::sum_abs(A);
    const double alpha = unif(rng) * 2.0 / L;
    const double gamma = alpha * (1.0 - L * alpha / 2.0);
    std::vector<double> x(d);
    for (double& xi : x) xi = normal(rng);
    OptimizerState s{DenseVector(x)};
    for (int k = 0; k < 30; ++k) {
      const double v = f.value(s.x);
      const double g1 = l1_norm(f.gradient(s.x));
      s = step_scaled_signgd(s, f, alpha);
      EXPECT_LE(f.value(s.x) - v, -gamma * g1 * g1 + 1e-12);
    }
  }
}

}  // namespace
}  // namespace signopt

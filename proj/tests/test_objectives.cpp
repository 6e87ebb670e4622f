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
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "reference.hpp"
#include "signopt/errors.hpp"
#include "signopt/objectives.hpp"

namespace signopt {
namespace {

Eigen::MatrixXd diag(std::initializer_list<double> v) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double x : v) d(i++) = x;
  return d.asDiagonal();
}

template <class F>
ErrorKind kind_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::kParse;
}

TEST(Quadratic, SumOfSquares) {
  const Objective f = make_quadratic(diag({2.0, 2.0}), DenseVector(2));
  const DenseVector g = f.gradient(DenseVector{0.05, 0.05});
  EXPECT_DOUBLE_EQ(g[0], 0.1);
  EXPECT_DOUBLE_EQ(g[1], 0.1);
  EXPECT_EQ(*f.f_star(), 0.0);
}

TEST(Quadratic, OneDimensionalConstantsCoincide) {
  const Objective f = make_quadratic(diag({2.0}), DenseVector(1));
  EXPECT_DOUBLE_EQ(f.constants().mu_inf->value, 2.0);
  EXPECT_DOUBLE_EQ(f.constants().L_inf->value, 2.0);
  EXPECT_EQ(*f.f_star(), 0.0);
  EXPECT_EQ(f.constants().L_inf->provenance, Provenance::kAnalytic);
}

TEST(Quadratic, DiagonalConstants) {
  const Objective f = make_quadratic(diag({2.0, 4.0}), DenseVector(2));
  EXPECT_DOUBLE_EQ(f.constants().L_inf->value, 6.0);
  EXPECT_DOUBLE_EQ(f.constants().mu_inf->value, 2.0);
}

TEST(Quadratic, Errors) {
  Eigen::MatrixXd asym(2, 2);
  asym << 1.0, 2.0, 0.0, 1.0;
  EXPECT_EQ(kind_of([&] { make_quadratic(asym, DenseVector(2)); }), ErrorKind::kInvalidInput);
  EXPECT_EQ(kind_of([] { make_quadratic(diag({1.0, 0.0}), DenseVector{0.0, 1.0}); }),
            ErrorKind::kNoMinimum);
  EXPECT_EQ(kind_of([] { make_quadratic(diag({1.0, -1.0}), DenseVector(2)); }),
            ErrorKind::kInvalidInput);
}

TEST(Quadratic, SingularWithBInRange) {
  const Objective f = make_quadratic(diag({2.0, 0.0}), DenseVector{2.0, 0.0});
  EXPECT_NEAR(*f.f_star(), -1.0, 1e-14);
  EXPECT_FALSE(f.constants().mu_inf.has_value());
}

// Gradient, f* and minimizer of random quadratics against plain loops and
// finite differences.
TEST(QuadraticProperties, RandomSpd) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> normal;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t d = 1 + trial % 8;
    const Eigen::MatrixXd A = ref::random_spd(d, 0.5, 5.0, rng);
    DenseVector b(d);
    for (std::size_t i = 0; i < d; ++i) b[i] = normal(rng);
    const Objective f = make_quadratic(A, b);
    std::vector<double> x(d);
    for (double& xi : x) xi = normal(rng);
    auto value = [&](const std::vector<double>& v) {
      double s = ref::quad_value(A, v);
      for (std::size_t i = 0; i < d; ++i) s -= b[i] * v[i];
      return s;
    };
    const std::vector<double> fd = ref::fd_gradient(value, x);
    const DenseVector g = f.gradient(DenseVector(x));
    for (std::size_t i = 0; i < d; ++i) EXPECT_NEAR(g[i], fd[i], 1e-6 * (1.0 + std::abs(fd[i])));
    EXPECT_NEAR(f.value(DenseVector(x)), value(x), 1e-12 * (1.0 + std::abs(value(x))));
    EXPECT_LE(*f.f_star(), f.value(DenseVector(x)));
    EXPECT_LT(l1_norm(f.gradient(*f.minimizer())), 1e-10);
    EXPECT_DOUBLE_EQ(f.constants().L_inf->value, ref::sum_abs(A));
    EXPECT_LE(f.constants().mu_inf->value, f.constants().L_inf->value);
  }
}

TEST(ToyPl, ValuesAndGradient) {
  const Objective f = make_toy_pl();
  EXPECT_EQ(f.value(DenseVector{0.0}), 0.0);
  // 1 + 3 sin^2(1) and 2 + 3 sin(2)
  EXPECT_NEAR(f.value(DenseVector{1.0}), 3.1242197, 1e-6);
  EXPECT_NEAR(f.gradient(DenseVector{1.0})[0], 4.7278923, 1e-6);
  ASSERT_TRUE(f.constants().pl_mu.has_value());
  EXPECT_GT(f.constants().pl_mu->value, 0.0);
  EXPECT_EQ(f.constants().pl_mu->provenance, Provenance::kEstimated);
}

TEST(ToyPl, GradientMatchesFiniteDifferences) {
  const Objective f = make_toy_pl();
  auto value = [](const std::vector<double>& v) {
    return v[0] * v[0] + 3.0 * std::sin(v[0]) * std::sin(v[0]);
  };
  for (double x = -4.0; x <= 4.0; x += 0.37) {
    EXPECT_NEAR(f.gradient(DenseVector{x})[0], ref::fd_gradient(value, {x})[0], 1e-7);
  }
}

TEST(Logistic, ZeroFeatureSample) {
  const Objective f = make_logistic({Sample{DenseVector(3), 1}});
  const DenseVector x{0.3, -1.0, 2.0};
  EXPECT_NEAR(f.value(x), std::log(2.0) + 0.5 * std::pow(l2_norm(x), 2), 1e-14);
  EXPECT_LT(l1_norm(f.gradient(DenseVector(3))), 1e-15);
}

TEST(Logistic, SymmetricPair) {
  const Objective f = make_logistic({Sample{DenseVector{1.0}, 1}, Sample{DenseVector{1.0}, -1}});
  EXPECT_NEAR(f.value(DenseVector{0.0}), std::log(2.0), 1e-15);
  EXPECT_NEAR(f.gradient(DenseVector{0.0})[0], 0.0, 1e-15);
}

TEST(Logistic, GradientMatchesFiniteDifferences) {
  const SyntheticData data = synth_logistic_data(50, 5, 21);
  const Objective f = make_logistic(data.samples);
  auto value = [&](const std::vector<double>& v) {
    double s = 0.0;
    for (const Sample& smp : data.samples) {
      double m = 0.0;
      for (std::size_t j = 0; j < v.size(); ++j) m += smp.features[j] * v[j];
      s += std::log1p(std::exp(-smp.label * m));
    }
    double sq = 0.0;
    for (double vi : v) sq += vi * vi;
    return s / 50.0 + sq / 100.0;
  };
  std::mt19937_64 rng(5);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (int p = 0; p < 20; ++p) {
    std::vector<double> x(5);
    for (double& xi : x) xi = normal(rng);
    const std::vector<double> fd = ref::fd_gradient(value, x);
    const DenseVector g = f.gradient(DenseVector(x));
    EXPECT_NEAR(f.value(DenseVector(x)), value(x), 1e-12);
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < 5; ++j) {
      num = std::max(num, std::abs(g[j] - fd[j]));
      den = std::max(den, std::abs(fd[j]));
    }
    worst = std::max(worst, num / den);
  }
  EXPECT_LT(worst, 1e-5);
}

TEST(Logistic, ComponentGradientsAverageToFullGradient) {
  const SyntheticData data = synth_logistic_data(40, 4, 2);
  const Objective f = make_logistic(data.samples);
  const DenseVector x{0.5, -0.25, 1.0, 0.0};
  DenseVector acc(4);
  for (std::size_t i = 0; i < 40; ++i) f.finite_sum()->add_component_grad(i, x, acc);
  acc *= 1.0 / 40.0;
  const DenseVector g = f.gradient(x);
  for (std::size_t j = 0; j < 4; ++j) EXPECT_NEAR(acc[j], g[j], 1e-14);
}

TEST(Logistic, RejectsBadLabel) {
  EXPECT_EQ(kind_of([] { make_logistic({Sample{DenseVector{1.0}, 0}}); }), ErrorKind::kInvalidInput);
}

TEST(Logistic, ConstantsBoundEstimates) {
  const SyntheticData data = synth_logistic_data(100, 3, 4);
  const Objective f = make_logistic(data.samples).with_f_star(0.0);
  const ConstantSet est = estimate_constants(f, Box::cube(3, -2.0, 2.0), 2000, 1,
                                             EstimateRequest{.lipschitz = true, .pl = false});
  EXPECT_LE(est.L_inf->value, f.constants().L_inf->value);
  EXPECT_GT(est.L_inf->value, 0.0);
}

TEST(Synthetic, Deterministic) {
  const SyntheticData a = synth_logistic_data(10, 3, 7);
  const SyntheticData b = synth_logistic_data(10, 3, 7);
  std::ostringstream sa, sb;
  write_samples_csv(sa, a.samples);
  write_samples_csv(sb, b.samples);
  EXPECT_EQ(sa.str(), sb.str());
  EXPECT_EQ(a.samples, b.samples);
}

TEST(Synthetic, LabelBalance) {
  const SyntheticData data = synth_logistic_data(1000, 5, 1);
  double pos = 0.0;
  for (const Sample& s : data.samples) pos += s.label == 1 ? 1.0 : 0.0;
  EXPECT_GE(pos / 1000.0, 0.35);
  EXPECT_LE(pos / 1000.0, 0.65);
}

TEST(Synthetic, RejectsEmpty) {
  EXPECT_EQ(kind_of([] { synth_logistic_data(0, 3, 1); }), ErrorKind::kInvalidInput);
  EXPECT_EQ(kind_of([] { synth_logistic_data(3, 0, 1); }), ErrorKind::kInvalidInput);
}

TEST(SamplesCsv, RoundTrip) {
  const SampleList samples = synth_logistic_data(25, 4, 9).samples;
  std::stringstream io;
  write_samples_csv(io, samples);
  EXPECT_EQ(read_samples_csv(io), samples);
}

TEST(SamplesCsv, ParseErrorCarriesLine) {
  std::istringstream in("1,0.5,0.25\n-1,abc,1\n");
  try {
    read_samples_csv(in);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
}

TEST(Estimate, SquareOnInterval) {
  const Objective f = make_quadratic(diag({2.0}), DenseVector(1));
  const ConstantSet c = estimate_constants(f, Box::cube(1, -2.0, 2.0), 10000, 1);
  EXPECT_GE(c.L_inf->value, 1.99);
  EXPECT_LE(c.L_inf->value, 2.0);
  EXPECT_GE(c.pl_mu->value, 1.99);
  EXPECT_LE(c.pl_mu->value, 2.0 + 1e-12);
  EXPECT_EQ(c.L_inf->provenance, Provenance::kEstimated);
}

TEST(Estimate, SumOfSquaresBelowAnalytic) {
  const Objective f = make_quadratic(diag({2.0, 2.0}), DenseVector(2));
  const ConstantSet c = estimate_constants(f, Box::cube(2, -1.0, 1.0), 5000, 2);
  EXPECT_LE(c.L_inf->value, 4.0);
}

TEST(Estimate, MonotoneInBudget) {
  const Objective f = make_toy_pl();
  double prev_L = 0.0, prev_pl = 1e300;
  for (std::size_t budget : {10u, 100u, 1000u, 5000u}) {
    const ConstantSet c = estimate_constants(f, Box::cube(1, -3.0, 3.0), budget, 17);
    EXPECT_GE(c.L_inf->value, prev_L);
    EXPECT_LE(c.pl_mu->value, prev_pl);
    prev_L = c.L_inf->value;
    prev_pl = c.pl_mu->value;
  }
}

TEST(Estimate, MissingFStar) {
  const Objective f = make_logistic(synth_logistic_data(10, 2, 1).samples);
  EXPECT_EQ(kind_of([&] { estimate_constants(f, Box::cube(2, -1.0, 1.0), 10, 1); }),
            ErrorKind::kMissingData);
}

}  // namespace
}  // namespace signopt

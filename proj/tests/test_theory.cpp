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

#include <gtest/gtest.h>

#include "reference.hpp"
#include "signopt/errors.hpp"
#include "signopt/theory.hpp"

namespace signopt {
namespace {

ErrorKind kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "expected an error";
  return ErrorKind::kParse;
}

TEST(Zeta, Values) {
  EXPECT_EQ(rate_zeta(2.0, 2.0, 0.25), 0.25);
  EXPECT_DOUBLE_EQ(rate_zeta(1.0, 4.0, 0.25), 0.75);
  EXPECT_NEAR(rate_zeta(2.0, 2.0, 1e-12), 1.0, 1e-11);
  EXPECT_EQ(rate_gamma(2.0, 0.25), 0.1875);
}

TEST(Zeta, OutOfRange) {
  EXPECT_EQ(kind_of([] { rate_zeta(2.0, 2.0, 1.0); }), ErrorKind::kOutOfRange);
  EXPECT_EQ(kind_of([] { rate_zeta(2.0, 2.0, 0.0); }), ErrorKind::kOutOfRange);
  EXPECT_EQ(kind_of([] { rate_zeta(3.0, 2.0, 0.1); }), ErrorKind::kOutOfRange);
}

// zeta stays in [0, 1) over the admissible range, for any mu <= L.
TEST(ZetaProperties, UnitInterval) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(1e-6, 1.0 - 1e-6);
  for (int t = 0; t < 2000; ++t) {
    const double L = 0.1 + 10.0 * u(rng);
    const double mu = L * u(rng);
    const double z = rate_zeta(mu, L, 2.0 / L * u(rng));
    EXPECT_GE(z, 0.0);
    EXPECT_LT(z, 1.0);
  }
}

TEST(Zeta1, Values) {
  const RateAndFloor r = rate_zeta1_and_floor(2.0, 2.0, 0.2, 0.1, 0.9);
  EXPECT_NEAR(r.zeta, 0.68, 1e-15);
  EXPECT_NEAR(r.floor, 0.0025, 1e-15);
  EXPECT_EQ(rate_zeta1_and_floor(2.0, 2.0, 0.2, 0.0, 0.9).floor, 0.0);
  const double near_pole = rate_zeta1_and_floor(2.0, 2.0, 0.4 - 1e-9, 0.1, 0.9).floor;
  EXPECT_GT(near_pole, 1e5);
  EXPECT_EQ(kind_of([] { rate_zeta1_and_floor(2.0, 2.0, 0.4, 0.1, 0.9); }), ErrorKind::kOutOfRange);
}

TEST(Zeta2, SingleWorkerReduces) {
  const RateAndFloor one = rate_zeta2_and_floor(2.0, 2.0, 0.2, 0.1, 0.9, 1);
  const RateAndFloor base = rate_zeta1_and_floor(2.0, 2.0, 0.2, 0.1, 0.9);
  EXPECT_NEAR(one.zeta, base.zeta, 1e-14);
  EXPECT_EQ(majority_kappa(1), 1);
}

TEST(Zeta2, ThreeWorkers) {
  EXPECT_EQ(majority_kappa(3), 2);
  EXPECT_EQ(majority_kappa(4), 2);
  EXPECT_EQ(majority_kappa(5), 3);
  const RateAndFloor r = rate_zeta2_and_floor(2.0, 2.0, 0.2, 0.1, 0.9, 3);
  EXPECT_NEAR(r.zeta, 0.5648, 1e-12);
  EXPECT_NEAR(r.floor, 2.0 * 0.01 * 0.04 / (1.0 - 0.5648), 1e-14);
}

TEST(Zeta2, VoteHelps) {
  const double z1 = rate_zeta2_and_floor(2.0, 2.0, 0.1, 0.1, 0.8, 1).zeta;
  const double z3 = rate_zeta2_and_floor(2.0, 2.0, 0.1, 0.1, 0.8, 3).zeta;
  EXPECT_LT(z3, z1);
}

TEST(RegIncBeta, ClosedForms) {
  for (double p = 0.0; p <= 1.0; p += 0.05) {
    EXPECT_NEAR(reg_inc_beta(p, 1.0, 1.0), p, 1e-14);
    EXPECT_NEAR(reg_inc_beta(p, 2.0, 2.0), 3 * p * p - 2 * p * p * p, 1e-14);
  }
  for (int k = 1; k <= 5; ++k) EXPECT_NEAR(reg_inc_beta(0.5, k, k), 0.5, 1e-14);
  EXPECT_NEAR(reg_inc_beta(0.8, 2.0, 2.0), 0.896, 1e-14);
  EXPECT_NEAR(reg_inc_beta(0.9, 2.0, 2.0), 0.972, 1e-14);
  EXPECT_EQ(reg_inc_beta(0.0, 3.0, 2.0), 0.0);
  EXPECT_EQ(reg_inc_beta(1.0, 3.0, 2.0), 1.0);
}

TEST(RegIncBeta, AgainstIndependentRoutes) {
  for (double a : {0.3, 0.5, 1.0, 2.0, 3.5, 7.0, 12.0}) {
    for (double b : {0.4, 1.0, 2.0, 5.0, 12.0}) {
      for (double p = 0.01; p < 1.0; p += 0.07) {
        EXPECT_NEAR(reg_inc_beta(p, a, b), ref::ibeta_boost(p, a, b), 1e-12) << a << ' ' << b << ' ' << p;
        if (a >= 1.0 && b >= 1.0) {
          EXPECT_NEAR(reg_inc_beta(p, a, b), ref::ibeta_quadrature(p, a, b), 1e-10);
        }
      }
    }
  }
}

TEST(RegIncBeta, SymmetryAndMonotonicity) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int t = 0; t < 300; ++t) {
    const double a = 0.2 + 8 * u(rng), b = 0.2 + 8 * u(rng), p = u(rng), q = u(rng);
    EXPECT_NEAR(reg_inc_beta(p, a, b), 1.0 - reg_inc_beta(1.0 - p, b, a), 1e-12);
    if (p < q) {
      EXPECT_LE(reg_inc_beta(p, a, b), reg_inc_beta(q, a, b) + 1e-15);
    }
  }
}

TEST(RegIncBeta, Errors) {
  EXPECT_EQ(kind_of([] { reg_inc_beta(0.5, 0.0, 1.0); }), ErrorKind::kInvalidInput);
  EXPECT_EQ(kind_of([] { reg_inc_beta(1.5, 1.0, 1.0); }), ErrorKind::kInvalidInput);
}

TEST(NonconvexBound, Values) {
  EXPECT_NEAR(nonconvex_bound(1.0, 2.0, 0.25, 9), 1.0 / (0.1875 * 10.0), 1e-15);
  EXPECT_EQ(nonconvex_bound(0.0, 2.0, 0.25, 9), 0.0);
  for (std::size_t k = 0; k < 50; ++k) {
    EXPECT_GT(nonconvex_bound(1.0, 2.0, 0.25, k), nonconvex_bound(1.0, 2.0, 0.25, k + 1));
  }
}

TEST(DiminishingBound, Values) {
  const double lead = 9.0 * 2.0 * 0.01 / (4.0 * 0.64);
  EXPECT_NEAR(diminishing_bound(2.0, 2.0, 0.1, 0.9, 1.0, 100),
              lead * (0.32 + 1e-4) + 1.0 / (101.0 * 101.0 * 101.0), 1e-15);
  EXPECT_NEAR(diminishing_bound(2.0, 2.0, 0.1, 0.9, 1.0, 100), 0.0225080, 1e-7);
  EXPECT_DOUBLE_EQ(diminishing_bound(2.0, 2.0, 0.0, 0.9, 1.0, 9), 1e-3);
  const double r = diminishing_bound(2.0, 2.0, 0.1, 0.9, 1.0, 200000) /
                   diminishing_bound(2.0, 2.0, 0.1, 0.9, 1.0, 100000);
  EXPECT_NEAR(r, 0.5, 1e-4);
  EXPECT_THROW(diminishing_bound(2.0, 2.0, 0.1, 0.9, 1.0, 0), Error);
}

TEST(Bundle, OnlyInRangeConstants) {
  RateBundle b = make_rate_bundle({2.0, 2.0, 0.25, 0.0, 1.0, 1});
  EXPECT_EQ(*b.zeta, 0.25);
  EXPECT_EQ(*b.gamma, 0.1875);
  b = make_rate_bundle({2.0, 2.0, 0.35, 0.1, 0.9, 1});
  EXPECT_TRUE(b.zeta1.has_value());
  b = make_rate_bundle({2.0, 2.0, 0.45, 0.1, 0.9, 1});
  EXPECT_TRUE(b.zeta.has_value());
  EXPECT_FALSE(b.zeta1.has_value());
  b = make_rate_bundle({2.0, 2.0, 1.5, 0.1, 0.9, 1});
  EXPECT_FALSE(b.zeta.has_value());
  EXPECT_NE(b.to_text().find("n/a"), std::string::npos);
}

TEST(Verify, ExactTraceMeetsTightBound) {
  std::vector<double> v;
  for (int k = 0; k <= 40; ++k) v.push_back(std::pow(0.25, k));
  const RateBundle b = make_rate_bundle({2.0, 2.0, 0.25, 0.0, 1.0, 1});
  const Verdict verdict = verify_trace_bound(v, b, Theorem::kThm1, 1.0 + 1e-9);
  EXPECT_TRUE(verdict.pass);
  EXPECT_EQ(verdict.checked, 41u);
  EXPECT_NEAR(verdict.max_ratio, 1.0, 1e-12);
}

TEST(Verify, TooFastRateIsCaught) {
  // GD on x^2 with alpha = 0.25 halves x each step: V_k = 0.25^k. Checking
  // against a rate of 0.125 must fail at k = 1.
  std::vector<double> v;
  for (int k = 0; k <= 10; ++k) v.push_back(std::pow(0.25, k));
  RateBundle b = make_rate_bundle({2.0, 2.0, 0.25, 0.0, 1.0, 1});
  b.zeta = *b.zeta / 2.0;
  const Verdict verdict = verify_trace_bound(v, b, Theorem::kThm1, 1.0 + 1e-9);
  EXPECT_FALSE(verdict.pass);
  EXPECT_EQ(verdict.first_violation, 1u);
  EXPECT_EQ(Verdict::csv_header(), "theorem,pass,first_violation_k,max_ratio");
  EXPECT_EQ(verdict.to_csv_row().substr(0, 12), "thm1,fail,1,");
}

TEST(Theorems, Names) {
  for (Theorem t : {Theorem::kThm1, Theorem::kThm2Const, Theorem::kThm2Dimin, Theorem::kThm3Dist}) {
    EXPECT_EQ(parse_theorem(theorem_name(t)), t);
  }
  EXPECT_FALSE(parse_theorem("thm9").has_value());
}

}  // namespace
}  // namespace signopt

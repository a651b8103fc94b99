// Copyright 2026 The Unseen Authors.
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

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "unseen/estimators.h"
#include "unseen/rng.h"
#include "unseen/sim.h"
#include "unseen/stream.h"
#include "unseen/uncertainty.h"

namespace unseen {
namespace {

using Pairs = std::vector<std::pair<std::int64_t, std::int64_t>>;

FrequencyProfile Make(const Pairs& p) { return profile_from_counts(p); }

TEST(VarianceProxyTest, GtExamples) {
  EXPECT_DOUBLE_EQ(gt_variance_proxy(Make({{1, 2}, {2, 1}}), Horizon(10, 1)).value, 4.0);
  EXPECT_DOUBLE_EQ(gt_variance_proxy(Make({}), Horizon(10, 1)).value, 0.0);
  EXPECT_DOUBLE_EQ(gt_variance_proxy(Make({{1, 10}}), Horizon(10, 0.5)).value, 7.5);
}

TEST(VarianceProxyTest, LinearExamples) {
  const Horizon h(10, 1);
  const auto p = Make({{1, 2}, {2, 1}, {5, 3}});
  EXPECT_DOUBLE_EQ(linear_variance_proxy(p, gt_weights(h, 5)).value,
                   gt_variance_proxy(p, h).value);
  EXPECT_DOUBLE_EQ(linear_variance_proxy(Make({{1, 3}}), LinearWeights({2})).value, 18.0);
  const auto zero = linear_variance_proxy(Make({{1, 2}}), LinearWeights({-1}));
  EXPECT_DOUBLE_EQ(zero.value, 0.0);
  EXPECT_FALSE(zero.clamped);
  const auto neg = linear_variance_proxy(Make({{1, 2}}), LinearWeights({-0.5}));
  EXPECT_DOUBLE_EQ(neg.value, 0.0);
  EXPECT_TRUE(neg.clamped);
}

// gt proxy = GT point + sum phi_i r^{2i}, before clamping.
TEST(VarianceProxyProperty, ArithmeticIdentity) {
  std::mt19937_64 rng(4);
  for (int k = 0; k < 200; ++k) {
    const double r = std::uniform_real_distribution<double>(0.05, 1.0)(rng);
    Pairs pairs;
    for (int i = 1; i <= 6; ++i) pairs.emplace_back(i, rng() % 20);
    const auto p = Make(pairs);
    const Horizon h(10, r);
    double extra = 0.0;
    for (const auto& [i, c] : p.counts()) extra += c * std::pow(r, 2.0 * i);
    const double raw = good_toulmin(p, h) + extra;
    const auto v = gt_variance_proxy(p, h);
    EXPECT_NEAR(v.value, std::max(raw, 0.0), 1e-12 * (1 + std::abs(raw)));
    EXPECT_EQ(v.clamped, raw < 0.0);
  }
}

TEST(GaussianIntervalTest, Examples) {
  VarianceProxy v;
  v.value = 4;
  const auto one = gaussian_interval(1, v, 0.6826894921370859);
  EXPECT_NEAR(one.lo, -1.0, 1e-9);
  EXPECT_NEAR(one.hi, 3.0, 1e-9);
  v.value = 0;
  const auto deg = gaussian_interval(5, v, 0.95);
  EXPECT_EQ(deg.lo, 5.0);
  EXPECT_EQ(deg.hi, 5.0);
  v.value = 1;
  const auto ci = gaussian_interval(0, v, 0.95);
  EXPECT_NEAR(ci.hi, 1.9599639845400542, 1e-12);
  EXPECT_NEAR(ci.lo, -1.9599639845400542, 1e-12);
  EXPECT_THROW(gaussian_interval(0, v, 1.0), Error);
}

TailBoundQuery PowerLawQuery(double z) {
  // alpha = 0.5, c = 1, t = 100: c Gamma(1 - alpha) t^alpha plug-in.
  TailBoundQuery q;
  q.z = z;
  q.p_split = 0.5;
  q.arity = 1;
  q.alpha_hat = 0.5;
  q.s_t = 17.724538509055160273;
  q.s_t2 = 5;
  q.s_T_hat = q.s_t * std::sqrt(10.0);
  return q;
}

TEST(DOfZTest, IndependentFormulaOracle) {
  EXPECT_NEAR(d_of_z(PowerLawQuery(10), Horizon(100, 9)), 0.26738789590126376957, 1e-14);
}

TEST(DOfZTest, Limits) {
  EXPECT_NEAR(d_of_z(PowerLawQuery(1e-9), Horizon(100, 9)), 0.0, 1e-9);
  const auto q = PowerLawQuery(3);
  EXPECT_NEAR(d_of_z(q, Horizon(100, 1e-9)), 1.5, 1e-6);
  auto bad = PowerLawQuery(0);
  bad.z = max_admissible_z(bad, Horizon(100, 9)) * 1.01;
  try {
    d_of_z(bad, Horizon(100, 9));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("max admissible z"), std::string::npos);
  }
}

TEST(FarFutureTailTest, IndependentOracle) {
  TailBoundQuery q;
  q.z = 300;
  q.p_split = 0.5;
  q.alpha_hat = 0.4;
  q.s_t = 500;
  q.s_t2 = 200;
  q.s_T_hat = 500 * std::pow(4.0, 0.4);
  const Horizon h(1000, 3);
  q.arity = 1;
  EXPECT_NEAR(far_future_tail(q, h), 2.000010033668380771, 1e-12);
  q.arity = 3;
  EXPECT_NEAR(far_future_tail(q, h), 3.3840413045902026802, 1e-12);
  q.z = 0;
  EXPECT_DOUBLE_EQ(far_future_tail(q, h), 6.0);
}

TEST(FarFutureTailProperty, NonIncreasingInZ) {
  for (int b : {1, 2, 5}) {
    TailBoundQuery q = PowerLawQuery(0);
    q.arity = b;
    q.s_t = 4000;
    q.s_t2 = 1500;
    q.s_T_hat = 4000 * std::sqrt(10.0);
    const Horizon h(1e5, 9);
    const double zmax = max_admissible_z(q, h);
    double prev = 6.0;
    for (int k = 1; k < 400; ++k) {
      q.z = zmax * k / 400.0;
      const double v = far_future_tail(q, h);
      EXPECT_LE(v, prev + 1e-15);
      EXPECT_GE(v, 0.0);
      prev = v;
    }
    EXPECT_LT(prev, 1.0);
  }
}

TEST(ConservativeIntervalTest, LevelZeroAndVacuous) {
  const auto p = Make({{1, 300}, {2, 120}, {3, 80}, {10, 60}});
  const Horizon h(2000, 4);
  const auto deg = conservative_interval(p, h, 1, 0.0);
  const double point = power_law_induced(p, h, ratio_alpha(p));
  EXPECT_EQ(deg.lo, point);
  EXPECT_EQ(deg.hi, point);
  const auto ci = conservative_interval(p, h, 1, 0.5);
  EXPECT_LT(ci.lo, point);
  EXPECT_GT(ci.hi, point);
  EXPECT_NEAR(ci.hi - point, point - ci.lo, 1e-9 * point);
  const auto small = conservative_interval(p, h, 1, 1e-6);
  EXPECT_LT(small.hi - small.lo, ci.hi - ci.lo);
  try {
    conservative_interval(Make({{1, 1}}), Horizon(1, 0.1), 1, 0.99);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("bound vacuous at this level"),
              std::string::npos);
  }
  EXPECT_THROW(conservative_interval(Make({}), h, 1, 0.5), Error);
}

TEST(TransEqTest, Example) {
  const double d = trans_eq_d(1, 1, 0.4, 2, 1);
  EXPECT_NEAR(d, 0.37932031215785885946, 1e-14);
  EXPECT_LT(std::pow(2.0, -(1 - d) / (1 + d)) * d, 0.4);
  EXPECT_NEAR(trans_eq_d(1, 1, 1e-12, 2, 1), 0.0, 1e-11);
  EXPECT_THROW(trans_eq_d(1, 1, 0.6, 2, 1), Error);
  EXPECT_THROW(trans_eq_d(1, 1, 0.1, 1, 1), Error);
}

TEST(TransEqProperty, RandomAdmissibleDraws) {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  while (checked < 10000) {
    const double x = std::exp(4 * u(rng) - 2), y = std::exp(4 * u(rng) - 2);
    const double c = 1 + std::exp(6 * u(rng) - 4), k = std::exp(4 * u(rng) - 2);
    const double zmax = k * x / std::pow(c, y / x);
    const double z = zmax * u(rng);
    if (!(z > 0) || !std::isfinite(zmax)) continue;
    const double d = trans_eq_d(x, y, z, c, k);
    EXPECT_LT(std::pow(c, -(y - d) / (x + d)) * k * d, z);
    ++checked;
  }
}

TEST(CltDistantTest, PositiveAndFinite) {
  for (double a : {0.2, 0.5, 0.8}) {
    for (double r : {1.0, 10.0}) {
      const double s = clt_distant_sigma2(a, r);
      EXPECT_TRUE(std::isfinite(s));
    }
  }
  EXPECT_THROW(clt_distant_sigma2(1.0, 1.0), Error);
}

ObservationStream Stream(std::initializer_list<std::vector<SpeciesId>> events) {
  ObservationStream s;
  for (const auto& e : events) s.AddEvent(e);
  return s;
}

TEST(DiagnosticsTest, Examples) {
  const Horizon h(1, 1);
  const auto singles = Stream({{0}, {1}, {0}});
  EXPECT_EQ(epsilon_hat(singles, h), 0.0);
  EXPECT_EQ(codiscovery_diagnostic(singles).codiscovered_pairs, 0);
  EXPECT_EQ(perfect_pair_bound(singles, h), 0.0);
  const auto ab = Stream({{0, 1}});
  EXPECT_DOUBLE_EQ(epsilon_hat(ab, h), 4.0);
  EXPECT_EQ(codiscovery_diagnostic(ab).codiscovered_pairs, 2);
  EXPECT_DOUBLE_EQ(perfect_pair_bound(ab, h), 4.0);
  EXPECT_DOUBLE_EQ(perfect_pair_bound(Stream({{0, 1}, {0, 1}}), h), 0.0);
  const auto disjoint = Stream({{0, 1, 2}, {3, 4, 5}, {6, 7, 8}});
  EXPECT_EQ(codiscovery_diagnostic(disjoint).codiscovered_pairs, 3 * 3 * 2);
}

// epsilon_hat is unbiased for the closed-form epsilon(t).
TEST(DiagnosticsProperty, EpsilonHatUnbiased) {
  const std::vector<SpeciesModel> zoo = {
      SpeciesModel::Incidence({{{0, 1}, 1.0}}),
      SpeciesModel::Incidence({{{0, 1}, 0.5}, {{1, 2}, 0.3}, {{3}, 0.4}}),
      SpeciesModel::Incidence({{{0, 1, 2}, 0.2}, {{2, 3, 4}, 0.25}, {{0, 4}, 0.1}}),
  };
  for (double r : {0.5, 1.0}) {
    const Horizon h(2, r);
    for (const auto& m : zoo) {
      const Simulator sim(m);
      const int reps = 20000;
      double s = 0, s2 = 0;
      for (int k = 0; k < reps; ++k) {
        const auto o = sim.Run(h, DeriveSeed(77, k), true);
        const double e = epsilon_hat(*o.past_stream, h);
        s += e;
        s2 += e * e;
      }
      const double mean = s / reps;
      const double se = std::sqrt((s2 / reps - mean * mean) / reps);
      EXPECT_NEAR(mean, EpsilonClosedForm(m, h), 3 * se + 1e-12);
    }
  }
}

}  // namespace
}  // namespace unseen

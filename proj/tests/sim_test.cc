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
#include <numeric>
#include <vector>

#include "gtest/gtest.h"
#include "unseen/estimators.h"
#include "unseen/rng.h"
#include "unseen/sim.h"
#include "unseen/uncertainty.h"

namespace unseen {
namespace {

struct Moments {
  double mean = 0, se = 0;
};

template <typename F>
Moments Mc(int reps, F f) {
  double s = 0, s2 = 0;
  for (int k = 0; k < reps; ++k) {
    const double v = f(k);
    s += v;
    s2 += v * v;
  }
  const double mean = s / reps;
  return {mean, std::sqrt(std::max(0.0, s2 / reps - mean * mean) / reps)};
}

TEST(SimulatorTest, Deterministic) {
  const auto m = UniformModel(200);
  const Horizon h(300, 2);
  const auto a = simulate(m, h, 5);
  const auto b = simulate(m, h, 5);
  EXPECT_EQ(a.profile_t, b.profile_t);
  EXPECT_EQ(a.s_tT_true, b.s_tT_true);
  EXPECT_EQ(a.past_counts, b.past_counts);
  EXPECT_EQ(a.future_counts, b.future_counts);
  EXPECT_NE(simulate(m, h, 6).past_counts, a.past_counts);
}

TEST(SimulatorTest, SingleSpeciesLaw) {
  const std::vector<double> w = {1.0};
  const Simulator sim(SpeciesModel::Classical(w));
  const Horizon h(5, 1);
  int hits = 0;
  const int reps = 40000;
  for (int k = 0; k < reps; ++k) {
    const auto o = sim.Run(h, DeriveSeed(3, k));
    const bool unseen_past = o.past_counts.empty();
    const bool seen_future = !o.future_counts.empty();
    EXPECT_EQ(o.s_tT_true, (unseen_past && seen_future) ? 1 : 0);
    hits += static_cast<int>(o.s_tT_true);
  }
  const double p = std::exp(-5.0) * (1 - std::exp(-5.0));
  EXPECT_NEAR(hits / static_cast<double>(reps), p, 4 * std::sqrt(p * (1 - p) / reps));
}

TEST(SimulatorTest, ZeroIntensityIsEmpty) {
  const std::vector<double> w = {0.0, 0.0, 0.0};
  const auto o = simulate(SpeciesModel::Classical(w), Horizon(10, 1), 1);
  EXPECT_TRUE(o.profile_t.empty());
  EXPECT_EQ(o.s_tT_true, 0);
}

TEST(SimulatorTest, MeanNewMatchesClosedForm) {
  const auto m = UniformModel(1000);
  const Horizon h(500, 1);
  EXPECT_NEAR(ExpectedNew(m, h), 238.65121854119110201, 1e-9);
  const Simulator sim(m);
  const auto e = Mc(2000, [&](int k) {
    return static_cast<double>(sim.Run(h, DeriveSeed(8, k)).s_tT_true);
  });
  EXPECT_NEAR(e.mean, 238.65121854119110201, 3 * e.se);
}

TEST(SimulatorTest, MultiplicityFreeReduction) {
  const auto dup = SpeciesModel::Incidence({{{0, 1, 1, 0}, 0.4}, {{2, 2}, 0.6}});
  const auto dedup = SpeciesModel::Incidence({{{0, 1}, 0.4}, {{2}, 0.6}});
  const Horizon h(30, 2);
  for (std::uint64_t s = 0; s < 50; ++s) {
    const auto a = simulate(dup, h, s);
    const auto b = simulate(dedup, h, s);
    EXPECT_EQ(a.s_tT_true, b.s_tT_true);
    EXPECT_EQ(a.profile_t, b.profile_t);
  }
}

// SEP: disjoint models simulated independently add.
TEST(SimulatorProperty, SynchronousExpeditions) {
  const std::vector<double> wa = {0.2, 0.1, 0.05};
  const auto a = SpeciesModel::Classical(wa);
  const auto b = SpeciesModel::Incidence({{{0, 1}, 0.1}, {{2}, 0.3}});
  const Horizon h(40, 1.5);
  const auto w = sgt_weights(h, DefaultSgtSmoothing(h), 20);
  for (std::uint64_t s = 0; s < 30; ++s) {
    const auto oa = simulate(a, h, DeriveSeed(s, 0));
    const auto ob = simulate(b, h, DeriveSeed(s, 1));
    const auto sum = oa.profile_t + ob.profile_t;
    EXPECT_NEAR(linear_estimate(sum, w),
                linear_estimate(oa.profile_t, w) + linear_estimate(ob.profile_t, w),
                1e-9 * (1 + std::abs(linear_estimate(sum, w))));
    EXPECT_EQ(sum.distinct(), oa.profile_t.distinct() + ob.profile_t.distinct());
  }
}

TEST(MseTest, NullEstimatesSecondMoment) {
  const auto m = UniformModel(300);
  const Horizon h(100, 2);
  const auto mse = mc_mse(m, h, Method::Of(MethodKind::kNull), 200, 17);
  const Simulator sim(m);
  double s = 0;
  for (int k = 0; k < 200; ++k) {
    const double v = static_cast<double>(sim.Run(h, DeriveSeed(17, k)).s_tT_true);
    s += v * v;
  }
  EXPECT_NEAR(mse.mean, s / 200, 1e-9 * s);
}

TEST(MseTest, GtUniformMatchesClosedForm) {
  const int k = 100000;
  const auto m = UniformModel(k);
  const Horizon h(100, 0.8);
  const std::vector<double> masses(k, 1.0 / k);
  const Horizon hd = h;
  const double closed = ClassicalLinearMse(gt_weights(hd, gt_exact_depth(hd)), h, masses);
  // Direct per-species sum: E[S_{t,T}] + E[sum 1{N>0} r^{2N}].
  const double lam = h.t() / k;
  double direct = k * std::exp(-lam) * (1 - std::exp(-h.r() * lam));
  direct += k * std::exp(-lam) * std::expm1(lam * h.r() * h.r());
  EXPECT_NEAR(closed, direct, 1e-8 * direct);
  const auto mc = mc_mse(m, h, Method::Of(MethodKind::kGoodToulmin), 2000, 1);
  EXPECT_NEAR(mc.mean, direct, 3 * mc.se);
}

TEST(MseTest, GtAboveMinimaxFloor) {
  const auto m = UniformModel(10000);
  const Horizon h(50, 0.5);
  const auto mc = mc_mse(m, h, Method::Of(MethodKind::kGoodToulmin), 2000, 2);
  EXPECT_GE(mc.mean, h.r() * h.t() - 3 * mc.se);
}

TEST(AdversarialTest, IndependentOracle) {
  EXPECT_NEAR(adversarial_mse(LinearWeights({1, -1, 1}), Horizon(30, 0.7), 0.013),
              56.576524131892969981, 1e-9);
}

TEST(ClosedFormTest, PoissonMoments) {
  const auto m = UniformModel(50);
  EXPECT_NEAR(ExpectedSAtLeast(m, 20, 2), 3.0775967775052489479, 1e-12);
  EXPECT_NEAR(ExpectedPhi(m, 20, 2), 2.681280184142557203, 1e-12);
  EXPECT_NEAR(ExpectedSAtLeast(m, 20, 1) - ExpectedSAtLeast(m, 20, 2),
              ExpectedPhi(m, 20, 1), 1e-12);
}

TEST(ClosedFormTest, Epsilon) {
  const Horizon h(1, 1);
  EXPECT_NEAR(EpsilonClosedForm(SpeciesModel::Incidence({{{0, 1}, 1.0}}), h),
              1.7293294335267746162, 1e-13);
  const std::vector<double> w = {0.3, 0.2, 0.5};
  EXPECT_EQ(EpsilonClosedForm(SpeciesModel::Classical(w), Horizon(7, 2)), 0.0);
  const auto m3 = SpeciesModel::Incidence({{{0, 1, 2}, 0.3}, {{1, 3}, 0.2}});
  // The arity bound needs r <= 1.
  for (double r : {0.5, 1.0}) {
    for (double t : {0.5, 3.0, 20.0}) {
      EXPECT_LE(EpsilonClosedForm(m3, Horizon(t, r)),
                r * (r + 1) * 2 * ExpectedSAtLeast(m3, t, 1) + 1e-12);
    }
  }
}

TEST(ClosedFormTest, DecompositionOnPairModel) {
  const auto m = SpeciesModel::Incidence({{{0, 1}, 0.7}, {{2}, 0.3}});
  const auto rep = error_decomposition_check(m, Horizon(3, 1), 20000, 4);
  EXPECT_TRUE(rep.within_3se) << rep.gap << " vs se " << rep.mc.se;
  EXPECT_TRUE(rep.epsilon_bounded);
}

TEST(FiniteSupportTest, GtVanishes) {
  const std::vector<double> w = {0.5, 0.3, 0.2};
  const auto m = SpeciesModel::Classical(w);
  const Horizon h(1e4 / 0.2, 0.7);
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto o = simulate(m, h, s);
    EXPECT_LT(std::abs(good_toulmin(o.profile_t, h)), 1e-3);
    EXPECT_LT(gt_variance_proxy(o.profile_t, h).value, 1e-3);
  }
}

TEST(ConcentrationTest, ZeroAndUniform) {
  const std::vector<double> z = {0.0};
  const auto r0 = concentration_check(UniformModel(100), Horizon(50, 1), 1, 200, 1, z);
  EXPECT_DOUBLE_EQ(r0.rows[0].bound_lower, 1.0);
  EXPECT_DOUBLE_EQ(r0.rows[0].bound_upper, 1.0);
  EXPECT_TRUE(r0.pass);
  const auto r = concentration_check(UniformModel(500), Horizon(300, 1), 1, 3000, 2);
  EXPECT_EQ(r.arity, 1);
  EXPECT_TRUE(r.pass);
  for (const auto& row : r.rows) {
    EXPECT_LE(row.bound_lower, 1.0);
    EXPECT_GE(row.bound_upper, 0.0);
  }
}

TEST(LaplaceTest, ThreeModels) {
  const std::vector<double> one = {1.0};
  const auto single = laplace_identity_check(one, 5);
  EXPECT_NEAR(single[0].rhs, 0.9932620530009145329, 1e-13);
  const std::vector<double> uni(40, 1.0 / 40);
  for (const auto& row : laplace_identity_check(uni, 30)) EXPECT_LT(row.relerr, 1e-10);
  const auto zipf = TruncatedPowerLaw({0.5, 1.0}, 5000).SpeciesMass();
  for (const auto& row : laplace_identity_check(zipf, 100)) EXPECT_LT(row.relerr, 1e-6);
  const double k = 40;
  EXPECT_NEAR(laplace_identity_check(uni, 30)[0].lhs, k * -std::expm1(-30 / k), 1e-12);
}

TEST(PowerLawTest, TotalIntensityAndMeanDistinct) {
  EXPECT_NEAR(PowerLawTotalIntensity({0.5, 1.0}), 1.6449340668482264365, 1e-12);
  const Horizon h(1e4, 1);
  double expected = 0.0;
  for (double k = 1; k <= 1e7; ++k) expected += -std::expm1(-h.t() / (k * k));
  expected += h.t() / 1e7;
  const auto e = Mc(300, [&](int k) {
    return static_cast<double>(simulate_power_law({0.5, 1.0}, h, DeriveSeed(12, k))
                                   .profile_t.distinct());
  });
  EXPECT_NEAR(e.mean, expected, 4 * e.se);
  const auto a = simulate_power_law({0.5, 1.0}, h, 3);
  EXPECT_EQ(a.profile_t, simulate_power_law({0.5, 1.0}, h, 3).profile_t);
}

TEST(QuantileTest, TypeSeven) {
  EXPECT_DOUBLE_EQ(Quantile({1, 2, 3, 4}, 0.5), 2.5);
  EXPECT_DOUBLE_EQ(Quantile({5, 1, 3}, 1.0), 5.0);
  EXPECT_DOUBLE_EQ(Quantile({1, 2, 3, 4, 5}, 0.95), 4.8);
  EXPECT_THROW(Quantile({}, 0.5), Error);
}

TEST(AlphaRateTest, ReportShape) {
  const std::vector<double> grid = {100, 1000};
  const auto rep = alpha_rate_check(0.5, 1.0, grid, 50, 7);
  ASSERT_EQ(rep.rows.size(), 2u);
  for (const auto& row : rep.rows) EXPECT_EQ(row.reps_used + row.reps_empty, 50);
  EXPECT_GE(rep.p_value, 0.0);
  EXPECT_LE(rep.p_value, 1.0);
  EXPECT_THROW(alpha_rate_check(1.0, 1.0, grid, 50, 7), Error);
}

TEST(AlphaRateTest, TrendTestRejectsGrowthAndHalvesTies) {
  Engine engine(3);
  std::vector<std::vector<double>> flat(3), growing(3);
  for (int g = 0; g < 3; ++g) {
    for (int k = 0; k < 500; ++k) {
      const double u = UniformOpenClosed(engine);
      flat[g].push_back(u);
      growing[g].push_back(u * (1.0 + 0.3 * g));
    }
  }
  EXPECT_GT(upper_tail_trend(flat, 0.95).p_value, 0.01);
  EXPECT_LT(upper_tail_trend(growing, 0.95).p_value, 1e-6);
  // All values tie with the threshold: no evidence of a trend.
  const std::vector<std::vector<double>> tied = {{1, 1, 1}, {1, 1, 1}};
  const auto t = upper_tail_trend(tied, 0.95);
  EXPECT_EQ(t.threshold, 1.0);
  EXPECT_EQ(t.z, 0.0);
  EXPECT_THROW(upper_tail_trend({{1.0}}, 0.95), Error);
}

}  // namespace
}  // namespace unseen

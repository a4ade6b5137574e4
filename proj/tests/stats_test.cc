// Copyright 2026 The relval Authors
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

#include "relval/stats.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "relval/error.h"

namespace relval::stats {
namespace {

// Anderson's statistic from explicitly supplied pooled ranks.
double CvmFromRanks(const std::vector<double>& r, const std::vector<double>& s) {
  const double n = r.size(), m = s.size();
  double u = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) u += n * std::pow(r[i] - (i + 1.0), 2);
  for (std::size_t j = 0; j < s.size(); ++j) u += m * std::pow(s[j] - (j + 1.0), 2);
  return u / (n * m * (n + m)) - (4 * n * m - 1) / (6 * (n + m));
}

TEST(EcdfTest, StepFunction) {
  const std::vector<double> x{3, 1, 2};
  const Ecdf f(x);
  EXPECT_DOUBLE_EQ(f.Evaluate(2.0), 2.0 / 3.0);
  EXPECT_DOUBLE_EQ(f.Evaluate(0.5), 0.0);
  EXPECT_DOUBLE_EQ(f.Evaluate(1e9), 1.0);
  EXPECT_DOUBLE_EQ(f.Evaluate(1.0), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(f.mean(), 2.0);
  EXPECT_TRUE(std::is_sorted(f.values().begin(), f.values().end()));
}

TEST(EcdfTest, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(Ecdf(std::vector<double>{}), DomainError);
  EXPECT_THROW(Ecdf(std::vector<double>{1.0, std::nan("")}), DomainError);
}

TEST(EcdfTest, MonotoneAndBounded) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> x(200);
  for (double& v : x) v = std::round(g(rng) * 10) / 10;
  const Ecdf f(x);
  double prev = 0.0;
  for (double t = -5; t <= 5; t += 0.01) {
    const double y = f.Evaluate(t);
    EXPECT_GE(y, prev);
    EXPECT_GE(y, 0.0);
    EXPECT_LE(y, 1.0);
    prev = y;
  }
}

TEST(CvmStatisticTest, SeparatedPairsFromExplicitRanks) {
  // ranks of {1,2} and {3,4} in the pooled sample are 1,2 and 3,4
  const double oracle = CvmFromRanks({1, 2}, {3, 4});
  EXPECT_DOUBLE_EQ(oracle, 0.375);  // frozen
  EXPECT_DOUBLE_EQ(CvmStatistic(std::vector<double>{1, 2},
                                std::vector<double>{3, 4}),
                   0.375);
}

TEST(CvmStatisticTest, IdenticalSamplesAttainTheMinimum) {
  const std::vector<double> x{1, 2, 3};
  const double oracle = CvmFromRanks({1.5, 3.5, 5.5}, {1.5, 3.5, 5.5});
  EXPECT_NEAR(oracle, 0.0, 1e-12);  // frozen
  const double t = CvmStatistic(x, x);
  EXPECT_NEAR(t, 0.0, 1e-12);
  // every other split of the pooled values gives a statistic at least as large
  std::vector<double> pooled{1, 1, 2, 2, 3, 3};
  std::vector<int> mask{0, 0, 0, 1, 1, 1};
  do {
    std::vector<double> a, b;
    for (int i = 0; i < 6; ++i) (mask[i] ? b : a).push_back(pooled[i]);
    EXPECT_GE(CvmStatistic(a, b), t - 1e-12);
  } while (std::next_permutation(mask.begin(), mask.end()));
}

TEST(CvmStatisticTest, MatchesScipyWithTies) {
  const std::vector<double> a{0.346, 0.822, 0.33, -1.303, 0.905, 0.446, -0.537, 0.581, 0.365, 0.294, 0.028, 0.547, -0.736, -0.163, -0.482, 0.599, 0.04, -0.292, -0.782, -0.257, 0.008, -0.276, 1.294, 1.007, -2.711, -1.889, -0.175, -0.422, 0.214, 0.217, 2.118, -1.112, -0.378, 2.043, 0.647, 0.663, -0.514, -1.648, 0.167, 0.109};
  const std::vector<double> b{-0.727, -0.183, 0.428, -0.445, 0.402, 0.595, 0.536, -0.006, 1.094, 1.391, 0.821, -0.318, 1.232, -0.001, 1.379, -0.572, 1.414, 0.48, -0.749, 0.186, 0.554, 0.773, -0.482, -0.607, 0.7, 0.033, 0.736, 1.26, -1.149, 0.754, 1.725, 0.202, -0.311, 1.252, 0.753, 1.396, 0.155, -0.982, 0.39, 0.054, 1.275, 0.694, -1.131, -0.695, 1.384, 1.18, -0.14, 0.499, 0.946, 0.968, 1.376, 0.756, 0.405, 0.241, 1.556};
  // scipy.stats.cramervonmises_2samp(..., method="asymptotic")
  const CvmResult r = CvmTest(a, b);
  EXPECT_NEAR(r.statistic, 0.6235825358851681, 1e-12);
  EXPECT_NEAR(r.p_asymptotic, 0.01947730341451348, 1e-6);
  const std::vector<double> x{0.1, 0.5, 0.9, 1.3, 2.0};
  const std::vector<double> y{0.2, 0.7, 1.1, 2.5, 3.0, 3.3};
  const CvmResult s = CvmTest(x, y);
  EXPECT_NEAR(s.statistic, 0.16363636363636358, 1e-12);
  EXPECT_NEAR(s.p_asymptotic, 0.39761230310772233, 1e-6);
}

TEST(CvmStatisticTest, RejectsUndersizedSamples) {
  EXPECT_THROW(CvmStatistic(std::vector<double>{1}, std::vector<double>{1, 2}),
               DomainError);
}

TEST(CvmStatisticTest, TheoreticalLowerBound) {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  for (int k = 0; k < 100; ++k) {
    std::vector<double> x(2 + k % 17), y(2 + k % 11);
    for (double& v : x) v = g(rng);
    for (double& v : y) v = g(rng);
    const double n = x.size(), m = y.size();
    EXPECT_GE(CvmStatistic(x, y), -(4 * n * m - 1) / (6 * (n + m)));
  }
}

TEST(CvmStatisticTest, SymmetricAndRankBased) {
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int k = 0; k < 100; ++k) {
    std::vector<double> x(30), y(45);
    for (double& v : x) v = std::round(g(rng) * 5);
    for (double& v : y) v = std::round(g(rng) * 5 + 1);
    const double t = CvmStatistic(x, y);
    EXPECT_EQ(CvmStatistic(y, x), t);
    std::vector<double> tx = x, ty = y;
    for (double& v : tx) v = std::exp(v / 3) + 7;
    for (double& v : ty) v = std::exp(v / 3) + 7;
    EXPECT_EQ(CvmStatistic(tx, ty), t);
  }
}

TEST(CvmStatisticTest, ShiftExceedsNullPercentile) {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> g;
  const auto draw = [&](double shift) {
    std::vector<double> v(500);
    for (double& e : v) e = g(rng) + shift;
    return v;
  };
  // Monte-Carlo null
  std::vector<double> null;
  for (int k = 0; k < 200; ++k) null.push_back(CvmStatistic(draw(0), draw(0)));
  const double q99 = Quantile(null, 0.99);
  EXPECT_GT(CvmStatistic(draw(0), draw(0.5)), q99);
}

TEST(LimitingCdfTest, MatchesScipySeries) {
  const std::pair<double, double> table[] = {
      {0.05, 0.12371906895864906}, {0.1, 0.4151265615932029},
      {0.2, 0.7325295694592229},   {0.4, 0.9277526774641589},
      {0.461, 0.9498928727982415}, {0.743, 0.9899744760185012},
      {1.0, 0.9975395478198642},   {2.0, 0.9999872192637342}};
  for (const auto& [t, want] : table) {
    EXPECT_NEAR(LimitingCvmCdf(t), want, 1e-6) << t;
  }
  EXPECT_EQ(LimitingCvmCdf(0.0), 0.0);
}

TEST(PValueTest, RangeAndMonotone) {
  double prev = 1.0;
  for (double t = -0.2; t < 3.0; t += 0.01) {
    const double p = CvmAsymptoticPValue(t, 50, 60);
    EXPECT_GE(p, 0.0);
    EXPECT_LE(p, 1.0);
    EXPECT_LE(p, prev + 1e-12);
    prev = p;
  }
}

TEST(PValueTest, IdenticalSamplesPermutationIsOne) {
  std::vector<double> x{0.3, 1.2, 2.2, 0.9, 1.7};
  EXPECT_EQ(CvmPermutationPValue(x, x, 999, 5), 1.0);
  PValueOptions opt;
  opt.mode = PValueMode::kPermutation;
  opt.permutations = 199;
  const CvmResult r = CvmTest(x, x, opt);
  ASSERT_TRUE(r.p_permutation.has_value());
  EXPECT_EQ(r.p(), 1.0);
}

TEST(PValueTest, PermutationNeedsEnoughResamples) {
  const std::vector<double> x{1, 2, 3}, y{2, 3, 4};
  EXPECT_THROW(CvmPermutationPValue(x, y, 98, 1), DomainError);
  EXPECT_NO_THROW(CvmPermutationPValue(x, y, 99, 1));
}

TEST(PValueTest, PermutationDeterministicInSeedAndResolution) {
  std::mt19937_64 rng(6);
  std::normal_distribution<double> g;
  std::vector<double> x(40), y(40);
  for (double& v : x) v = g(rng);
  for (double& v : y) v = g(rng) + 0.3;
  const double p = CvmPermutationPValue(x, y, 499, 77);
  EXPECT_EQ(CvmPermutationPValue(x, y, 499, 77), p);
  EXPECT_GE(p, 1.0 / 500.0);
  const double scaled = p * 500.0;
  EXPECT_NEAR(scaled, std::round(scaled), 1e-9);
}

TEST(PValueTest, AsymptoticAgreesWithPermutationSmallRun) {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> g;
  for (int k = 0; k < 5; ++k) {
    std::vector<double> x(200), y(200);
    for (double& v : x) v = g(rng);
    for (double& v : y) v = g(rng);
    PValueOptions opt;
    opt.mode = PValueMode::kPermutation;
    opt.permutations = 4999;
    opt.seed = 100 + k;
    const CvmResult r = CvmTest(x, y, opt);
    EXPECT_NEAR(r.p_asymptotic, *r.p_permutation, 0.03);
  }
}

TEST(QuantileTest, TypeSeven) {
  EXPECT_DOUBLE_EQ(Quantile({0.1, 0.2, 0.3}, 0.5), 0.2);
  EXPECT_DOUBLE_EQ(Quantile({1, 2, 3, 4}, 0.25), 1.75);
  EXPECT_DOUBLE_EQ(Quantile({5}, 0.9), 5.0);
  EXPECT_THROW(Quantile({}, 0.5), DomainError);
}

TEST(SummaryTest, SingleValueAndOrdering) {
  const PValueSummary one = Summarize("A-A", {0.42});
  EXPECT_EQ(one.q25, 0.42);
  EXPECT_EQ(one.median, 0.42);
  EXPECT_EQ(one.q75, 0.42);
  EXPECT_EQ(one.mean, 0.42);
  EXPECT_EQ(one.min, 0.42);
  EXPECT_EQ(one.max, 0.42);
  const PValueSummary three = Summarize("A-R", {0.3, 0.1, 0.2});
  EXPECT_DOUBLE_EQ(three.median, 0.2);
  EXPECT_LE(three.q25, three.median);
  EXPECT_LE(three.median, three.q75);
}

TEST(SummaryTest, GroupsByLabelInOrder) {
  const std::vector<LabeledPValue> v{{"A-A", 0.5}, {"A-RV", 0.001},
                                     {"A-A", 0.7}, {"A-RV", 0.002}};
  const auto s = SummarizePValues(v);
  ASSERT_EQ(s.size(), 2u);
  EXPECT_EQ(s[0].label, "A-A");
  EXPECT_DOUBLE_EQ(s[0].median, 0.6);
  EXPECT_EQ(s[1].label, "A-RV");
  EXPECT_EQ(s[1].p_values.size(), 2u);
}

}  // namespace
}  // namespace relval::stats

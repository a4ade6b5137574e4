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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <utility>

#include "relval/error.h"

namespace relval::stats {
namespace {

// Pooled sample sorted ascending, with midranks and group membership.
struct PooledRanks {
  std::vector<double> ranks;   // 1-based midranks in sorted order
  std::vector<std::uint8_t> in_first;  // membership of each sorted element
};

PooledRanks RankPooled(std::span<const double> x, std::span<const double> y) {
  const std::size_t total = x.size() + y.size();
  std::vector<std::pair<double, bool>> pooled;
  pooled.reserve(total);
  for (double v : x) pooled.emplace_back(v, true);
  for (double v : y) pooled.emplace_back(v, false);
  std::sort(pooled.begin(), pooled.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  PooledRanks out;
  out.ranks.resize(total);
  out.in_first.resize(total);
  std::size_t i = 0;
  while (i < total) {
    std::size_t j = i;
    while (j + 1 < total && pooled[j + 1].first == pooled[i].first) ++j;
    const double midrank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) {
      out.ranks[k] = midrank;
      out.in_first[k] = pooled[k].second;
    }
    i = j + 1;
  }
  return out;
}

// U = n * sum_i (r_i - i)^2 + m * sum_j (s_j - j)^2 for a group assignment.
double RankSumU(const std::vector<double>& ranks, const std::vector<std::uint8_t>& in_first,
                std::size_t n, std::size_t m) {
  double sum_x = 0.0;
  double sum_y = 0.0;
  double i = 0.0;
  double j = 0.0;
  for (std::size_t k = 0; k < ranks.size(); ++k) {
    if (in_first[k]) {
      i += 1.0;
      const double d = ranks[k] - i;
      sum_x += d * d;
    } else {
      j += 1.0;
      const double d = ranks[k] - j;
      sum_y += d * d;
    }
  }
  return static_cast<double>(n) * sum_x + static_cast<double>(m) * sum_y;
}

double StatisticFromU(double u, std::size_t n, std::size_t m) {
  const double nm = static_cast<double>(n) * static_cast<double>(m);
  const double total = static_cast<double>(n + m);
  return u / (nm * total) - (4.0 * nm - 1.0) / (6.0 * total);
}

void RequireSamples(std::span<const double> x, std::span<const double> y) {
  if (x.size() < 2 || y.size() < 2) {
    throw DomainError("Cramer-von Mises test needs at least two values per sample");
  }
  for (auto s : {x, y}) {
    for (double v : s) {
      if (!std::isfinite(v)) throw DomainError("samples must be finite");
    }
  }
}

}  // namespace

Ecdf::Ecdf(std::span<const double> samples)
    : values_(samples.begin(), samples.end()) {
  if (values_.empty()) throw DomainError("ECDF of an empty sample");
  for (double v : values_) {
    if (!std::isfinite(v)) throw DomainError("ECDF samples must be finite");
  }
  std::sort(values_.begin(), values_.end());
  mean_ = std::accumulate(values_.begin(), values_.end(), 0.0) /
          static_cast<double>(values_.size());
}

double Ecdf::Evaluate(double x) const {
  const auto it = std::upper_bound(values_.begin(), values_.end(), x);
  return static_cast<double>(it - values_.begin()) /
         static_cast<double>(values_.size());
}

double CvmStatistic(std::span<const double> x, std::span<const double> y) {
  RequireSamples(x, y);
  const PooledRanks pooled = RankPooled(x, y);
  return StatisticFromU(RankSumU(pooled.ranks, pooled.in_first, x.size(), y.size()),
                        x.size(), y.size());
}

double LimitingCvmCdf(double t) {
  if (!(t > 0.0)) return 0.0;
  if (std::isinf(t)) return 1.0;
  // Anderson & Darling (1952):
  // F(t) = sum_k Gamma(k+1/2) / (Gamma(k+1) pi^{3/2} sqrt(t)) * sqrt(4k+1)
  //        * exp(-q_k) * K_{1/4}(q_k),  q_k = (4k+1)^2 / (16 t).
  // Every term is positive and the terms decay super-exponentially once q_k
  // exceeds a few units.
  const double scale = 1.0 / (std::pow(std::numbers::pi, 1.5) * std::sqrt(t));
  double total = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double y = 4.0 * k + 1.0;
    const double q = y * y / (16.0 * t);
    if (q > 700.0) break;
    const double u =
        std::exp(std::lgamma(k + 0.5) - std::lgamma(k + 1.0)) * scale;
    const double term = u * std::sqrt(y) * std::exp(-q) * std::cyl_bessel_k(0.25, q);
    total += term;
    if (term < 1e-14) break;
  }
  return std::clamp(total, 0.0, 1.0);
}

double CvmAsymptoticPValue(double statistic, std::size_t n, std::size_t m) {
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  const double k = nn * mm;
  const double total = nn + mm;
  // Finite-sample mean and variance of the statistic (Anderson 1962).
  const double mean = (1.0 + 1.0 / total) / 6.0;
  const double variance = (total + 1.0) *
                          (4.0 * k * total - 3.0 * (nn * nn + mm * mm) - 2.0 * k) /
                          (45.0 * total * total * 4.0 * k);
  // Map onto the limiting distribution (mean 1/6, variance 1/45).
  const double standardized = 1.0 / 6.0 + (statistic - mean) / std::sqrt(45.0 * variance);
  if (standardized < 0.003) return 1.0;
  return std::clamp(1.0 - LimitingCvmCdf(standardized), 0.0, 1.0);
}

double CvmPermutationPValue(std::span<const double> x,
                            std::span<const double> y, int permutations,
                            std::uint64_t seed) {
  RequireSamples(x, y);
  if (permutations < 99) {
    throw DomainError("permutation test needs at least 99 reshuffles");
  }
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  PooledRanks pooled = RankPooled(x, y);
  const double observed = RankSumU(pooled.ranks, pooled.in_first, n, m);
  // U takes values on a grid of quarter-integers scaled by n or m; a relative
  // tolerance absorbs rounding in the comparison.
  const double tolerance = 1e-9 * std::max(1.0, observed);

  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> labels = pooled.in_first;
  int at_least = 0;
  for (int p = 0; p < permutations; ++p) {
    // Fisher-Yates over group labels.
    for (std::size_t i = labels.size() - 1; i > 0; --i) {
      std::uniform_int_distribution<std::size_t> pick(0, i);
      const std::size_t j = pick(rng);
      std::swap(labels[i], labels[j]);
    }
    if (RankSumU(pooled.ranks, labels, n, m) >= observed - tolerance) ++at_least;
  }
  return (1.0 + at_least) / (permutations + 1.0);
}

CvmResult CvmTest(std::span<const double> x, std::span<const double> y,
                  const PValueOptions& options) {
  CvmResult result;
  result.statistic = CvmStatistic(x, y);
  result.n = x.size();
  result.m = y.size();
  result.p_asymptotic = CvmAsymptoticPValue(result.statistic, x.size(), y.size());
  if (options.mode == PValueMode::kPermutation) {
    result.p_permutation =
        CvmPermutationPValue(x, y, options.permutations, options.seed);
  }
  return result;
}

double Quantile(std::vector<double> values, double q) {
  if (values.empty()) throw DomainError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw DomainError("quantile level outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double position = q * static_cast<double>(values.size() - 1);
  const auto lower = static_cast<std::size_t>(std::floor(position));
  const std::size_t upper = std::min(lower + 1, values.size() - 1);
  const double frac = position - static_cast<double>(lower);
  return values[lower] + frac * (values[upper] - values[lower]);
}

PValueSummary Summarize(std::string label, std::vector<double> p_values) {
  if (p_values.empty()) throw DomainError("no p-values for label " + label);
  PValueSummary s;
  s.label = std::move(label);
  s.q25 = Quantile(p_values, 0.25);
  s.median = Quantile(p_values, 0.5);
  s.q75 = Quantile(p_values, 0.75);
  s.mean = std::accumulate(p_values.begin(), p_values.end(), 0.0) /
           static_cast<double>(p_values.size());
  const auto [lo, hi] = std::minmax_element(p_values.begin(), p_values.end());
  s.min = *lo;
  s.max = *hi;
  s.p_values = std::move(p_values);
  return s;
}

std::vector<PValueSummary> SummarizePValues(
    std::span<const LabeledPValue> values) {
  std::vector<std::string> order;
  std::vector<std::vector<double>> grouped;
  for (const LabeledPValue& v : values) {
    auto it = std::find(order.begin(), order.end(), v.label);
    if (it == order.end()) {
      order.push_back(v.label);
      grouped.emplace_back();
      it = order.end() - 1;
    }
    grouped[static_cast<std::size_t>(it - order.begin())].push_back(v.p);
  }
  std::vector<PValueSummary> out;
  out.reserve(order.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    out.push_back(Summarize(order[i], std::move(grouped[i])));
  }
  return out;
}

}  // namespace relval::stats

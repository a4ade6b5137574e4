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

#ifndef RELVAL_STATS_H_
#define RELVAL_STATS_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace relval::stats {

// Empirical distribution function of a finite, nonempty sample.
class Ecdf {
 public:
  // Throws DomainError for empty input or non-finite values.
  explicit Ecdf(std::span<const double> samples);

  // Fraction of samples <= x (right-continuous step function).
  double Evaluate(double x) const;
  double mean() const { return mean_; }
  std::size_t size() const { return values_.size(); }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
  double mean_ = 0.0;
};

// Two-sample Cramer-von Mises statistic in Anderson's form, using midranks
// of the pooled sample. Requires both samples to hold at least two values.
double CvmStatistic(std::span<const double> x, std::span<const double> y);

// Cumulative distribution function of the limiting (omega squared)
// distribution, evaluated by its Bessel-function series.
double LimitingCvmCdf(double t);

// Tail probability of `statistic` under the limiting distribution after
// standardizing with the finite-sample mean and variance for sizes n and m.
double CvmAsymptoticPValue(double statistic, std::size_t n, std::size_t m);

enum class PValueMode { kAsymptotic, kPermutation };

struct PValueOptions {
  PValueMode mode = PValueMode::kAsymptotic;
  int permutations = 9999;  // at least 99
  std::uint64_t seed = 20240601;
};

struct CvmResult {
  double statistic = 0.0;
  double p_asymptotic = 1.0;
  std::optional<double> p_permutation;
  std::size_t n = 0;
  std::size_t m = 0;

  // The p-value selected by the requested mode.
  double p() const { return p_permutation ? *p_permutation : p_asymptotic; }
};

// (1 + #{T' >= T}) / (k + 1) over k random reassignments of the pooled
// sample. Throws DomainError when k < 99.
double CvmPermutationPValue(std::span<const double> x,
                            std::span<const double> y, int permutations,
                            std::uint64_t seed);

CvmResult CvmTest(std::span<const double> x, std::span<const double> y,
                  const PValueOptions& options = {});

// Quantile with linear interpolation between order statistics (the
// "type 7" definition). `q` in [0, 1]; `values` nonempty.
double Quantile(std::vector<double> values, double q);

struct LabeledPValue {
  std::string label;
  double p = 0.0;
};

struct PValueSummary {
  std::string label;
  std::vector<double> p_values;
  double q25 = 0.0;
  double median = 0.0;
  double q75 = 0.0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

// One summary per label, in order of first appearance.
std::vector<PValueSummary> SummarizePValues(
    std::span<const LabeledPValue> values);

PValueSummary Summarize(std::string label, std::vector<double> p_values);

}  // namespace relval::stats

#endif  // RELVAL_STATS_H_

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

#ifndef RELVAL_VALIDATION_H_
#define RELVAL_VALIDATION_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "relval/core_model.h"
#include "relval/relevance.h"
#include "relval/stats.h"
#include "relval/surrogate.h"

namespace relval {

enum class ConditionKind { kA, kR, kRV, kRV2, kCustom };

std::string_view ToString(ConditionKind kind);

struct Rv2Options {
  double corridor = 2.0;      // [m]
  bool forward_only = true;   // ray from the ego; false uses the full line
  bool inclusive = true;      // a center exactly on the boundary is removed
};

struct Condition {
  std::string label;
  ConditionKind kind = ConditionKind::kA;
  Rv2Options rv2;
  std::function<Scene(const Scene&)> custom;  // used by kCustom only

  static Condition A() { return {"A", ConditionKind::kA, {}, {}}; }
  static Condition R() { return {"R", ConditionKind::kR, {}, {}}; }
  static Condition RV() { return {"RV", ConditionKind::kRV, {}, {}}; }
  static Condition RV2(Rv2Options o = {}) {
    return {"RV2", ConditionKind::kRV2, o, {}};
  }
};

std::vector<Condition> StandardConditions();

// Input must already be region-filtered. The target agent is always kept.
// Throws InputError for R without verdicts.
Scene ApplyCondition(const Scene& scene, const Condition& condition,
                     const std::vector<RelevanceVerdict>* verdicts = nullptr);

// Center distance to the ego heading axis is within the corridor.
bool InHeadingCorridor(const ObjectState& ego, const ObjectState& object,
                       const Rv2Options& options);

struct ErrorSample {
  std::string condition;
  int run_index = 0;
  std::string scene_token;
  double min_ade = 0.0;  // [m]
  friend bool operator==(const ErrorSample&, const ErrorSample&) = default;
};

struct FailedPrediction {
  std::string condition;
  int run_index = 0;
  std::string scene_token;
  std::string message;
};

struct CampaignConfig {
  int runs = 10;
  std::uint64_t campaign_seed = 7;
  int jobs = 1;
  std::vector<Condition> conditions = StandardConditions();
  EgoCapabilities capabilities;
  WorldAssumptions world;
  RelevanceOptions relevance;
};

struct CampaignResult {
  std::vector<ErrorSample> samples;  // condition order, run, scene order
  std::vector<FailedPrediction> failures;
};

std::uint64_t RunSeed(std::uint64_t campaign_seed, int run_index,
                      std::string_view scene_token);

CampaignResult RunCampaign(const std::vector<Scene>& dataset,
                           const Predictor& predictor,
                           const CampaignConfig& config);

struct PairPValue {
  int run_x = 0;
  int run_y = 0;
  double statistic = 0.0;
  double p = 1.0;
};

// Same label: every unordered run pair. Different labels: every ordered
// (x-run, y-run) pair. Each comparison uses the scenes present in both runs.
// Throws InputError when a label is absent or has fewer than two runs.
std::vector<PairPValue> PairwisePValues(const std::vector<ErrorSample>& samples,
                                        const std::string& label_x,
                                        const std::string& label_y,
                                        const stats::PValueOptions& options = {});

struct Verdict {
  std::string filter_label;
  double median_p = 0.0;
  double mean_p = 0.0;
  double threshold = 0.005;
  double noise_q25 = 0.0;  // A-A quartiles
  double noise_q75 = 0.0;
  bool within_noise_band = false;
  bool falsified = false;
};

Verdict ValidateFilter(const std::vector<ErrorSample>& samples,
                       const std::string& filter_label,
                       double threshold = 0.005,
                       const stats::PValueOptions& options = {},
                       const std::string& reference_label = "A");

// Mean minADE per label, in order of first appearance.
std::vector<std::pair<std::string, double>> ConditionMeans(
    const std::vector<ErrorSample>& samples);

// Mean absolute per-scene minADE difference over all unordered run pairs of
// `label` [m].
double RunToRunNoise(const std::vector<ErrorSample>& samples,
                     const std::string& label);

// Object counts per condition over a dataset, excluding the target agent.
struct FilterFraction {
  std::string label;
  std::size_t in_region = 0;
  std::size_t removed = 0;
  double fraction() const {
    return in_region == 0 ? 0.0 : static_cast<double>(removed) / in_region;
  }
};

FilterFraction MeasureRemoval(const std::vector<Scene>& dataset,
                              const Condition& condition,
                              const CampaignConfig& config);

}  // namespace relval

#endif  // RELVAL_VALIDATION_H_

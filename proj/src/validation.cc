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

#include "relval/validation.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <optional>
#include <set>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include "relval/error.h"

namespace relval {

std::string_view ToString(ConditionKind kind) {
  switch (kind) {
    case ConditionKind::kA: return "A";
    case ConditionKind::kR: return "R";
    case ConditionKind::kRV: return "RV";
    case ConditionKind::kRV2: return "RV2";
    case ConditionKind::kCustom: return "custom";
  }
  return "custom";
}

std::vector<Condition> StandardConditions() {
  return {Condition::A(), Condition::R(), Condition::RV(), Condition::RV2()};
}

bool InHeadingCorridor(const ObjectState& ego, const ObjectState& object,
                       const Rv2Options& options) {
  const Vec2 local = ToLocalFrame(ego, object.position);
  if (options.forward_only && local.x() < 0.0) return false;
  const double d = std::abs(local.y());
  return options.inclusive ? d <= options.corridor : d < options.corridor;
}

Scene ApplyCondition(const Scene& scene, const Condition& condition,
                     const std::vector<RelevanceVerdict>* verdicts) {
  const auto keep_if = [&](auto pred) {
    Scene out = scene;
    out.objects.clear();
    for (const ObjectState& o : scene.objects) {
      if (o.id == scene.target_agent || pred(o)) out.objects.push_back(o);
    }
    return out;
  };
  switch (condition.kind) {
    case ConditionKind::kA:
      return scene;
    case ConditionKind::kRV:
      return keep_if([](const ObjectState&) { return false; });
    case ConditionKind::kRV2:
      return keep_if([&](const ObjectState& o) {
        return o.id == scene.ego.id || o.category != ObjectCategory::kVehicle ||
               !InHeadingCorridor(scene.ego, o, condition.rv2);
      });
    case ConditionKind::kR: {
      if (verdicts == nullptr) {
        throw InputError("condition R requires relevance verdicts");
      }
      std::unordered_set<std::string> relevant;
      for (const RelevanceVerdict& v : *verdicts) {
        if (v.relevant) relevant.insert(v.object_id);
      }
      return keep_if(
          [&](const ObjectState& o) { return relevant.contains(o.id); });
    }
    case ConditionKind::kCustom:
      if (!condition.custom) throw InputError("custom condition has no filter");
      return condition.custom(scene);
  }
  return scene;
}

std::uint64_t RunSeed(std::uint64_t campaign_seed, int run_index,
                      std::string_view scene_token) {
  return MixSeed(MixSeed(campaign_seed, static_cast<std::uint64_t>(run_index)),
                 HashString(scene_token));
}

namespace {

struct SceneInputs {
  Scene region;  // region-filtered
  std::vector<RelevanceVerdict> verdicts;
  std::optional<std::string> error;
};

SceneInputs PrepareScene(const Scene& scene, const CampaignConfig& config,
                         bool need_verdicts) {
  SceneInputs in;
  try {
    in.region = RegionFilter(scene, config.relevance.region);
    if (need_verdicts) {
      const EgoCapabilities caps =
          scene.capability_overrides.ApplyTo(config.capabilities);
      in.verdicts = RelevantObjects(scene, caps, config.world, config.relevance);
    }
  } catch (const std::exception& e) {
    in.error = e.what();
  }
  return in;
}

template <typename Fn>
void ParallelFor(std::size_t n, int jobs, Fn&& fn) {
  const std::size_t workers =
      std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

}  // namespace

CampaignResult RunCampaign(const std::vector<Scene>& dataset,
                           const Predictor& predictor,
                           const CampaignConfig& config) {
  if (dataset.empty()) throw InputError("dataset is empty");
  if (config.runs < 1) throw InputError("runs must be at least 1");
  if (config.conditions.empty()) throw InputError("no conditions");
  const bool need_verdicts =
      std::any_of(config.conditions.begin(), config.conditions.end(),
                  [](const Condition& c) { return c.kind == ConditionKind::kR; });

  std::vector<SceneInputs> inputs(dataset.size());
  ParallelFor(dataset.size(), config.jobs, [&](std::size_t i) {
    inputs[i] = PrepareScene(dataset[i], config, need_verdicts);
  });

  const std::size_t n_scenes = dataset.size();
  const std::size_t n_runs = static_cast<std::size_t>(config.runs);
  const std::size_t total = config.conditions.size() * n_runs * n_scenes;
  std::vector<std::optional<double>> values(total);
  std::vector<std::string> errors(total);

  ParallelFor(total, config.jobs, [&](std::size_t k) {
    const std::size_t scene_idx = k % n_scenes;
    const int run = static_cast<int>((k / n_scenes) % n_runs);
    const Condition& cond = config.conditions[k / (n_scenes * n_runs)];
    const SceneInputs& in = inputs[scene_idx];
    if (in.error) {
      errors[k] = *in.error;
      return;
    }
    try {
      const Scene filtered = ApplyCondition(in.region, cond, &in.verdicts);
      const PredictionSet pred = predictor.Predict(
          filtered, RunSeed(config.campaign_seed, run, dataset[scene_idx].token));
      const double ade =
          MinAdeTopK(pred, Trajectory{dataset[scene_idx].ground_truth_future});
      if (!std::isfinite(ade) || ade < 0.0) {
        throw DomainError("non-finite minADE");
      }
      values[k] = ade;
    } catch (const std::exception& e) {
      errors[k] = e.what();
    }
  });

  CampaignResult result;
  result.samples.reserve(total);
  for (std::size_t k = 0; k < total; ++k) {
    const std::size_t scene_idx = k % n_scenes;
    const int run = static_cast<int>((k / n_scenes) % n_runs);
    const std::string& label = config.conditions[k / (n_scenes * n_runs)].label;
    if (values[k]) {
      result.samples.push_back(
          {label, run, dataset[scene_idx].token, *values[k]});
    } else {
      result.failures.push_back(
          {label, run, dataset[scene_idx].token, errors[k]});
    }
  }
  return result;
}

namespace {

using RunTable = std::map<int, std::unordered_map<std::string, double>>;

RunTable CollectRuns(const std::vector<ErrorSample>& samples,
                     const std::string& label) {
  RunTable runs;
  for (const ErrorSample& s : samples) {
    if (s.condition == label) runs[s.run_index][s.scene_token] = s.min_ade;
  }
  return runs;
}

// Values of both runs restricted to their common scenes, ordered by token.
std::pair<std::vector<double>, std::vector<double>> Matched(
    const std::unordered_map<std::string, double>& a,
    const std::unordered_map<std::string, double>& b) {
  std::vector<std::string> common;
  for (const auto& [token, _] : a) {
    if (b.contains(token)) common.push_back(token);
  }
  std::sort(common.begin(), common.end());
  std::pair<std::vector<double>, std::vector<double>> out;
  for (const std::string& t : common) {
    out.first.push_back(a.at(t));
    out.second.push_back(b.at(t));
  }
  return out;
}

}  // namespace

std::vector<PairPValue> PairwisePValues(const std::vector<ErrorSample>& samples,
                                        const std::string& label_x,
                                        const std::string& label_y,
                                        const stats::PValueOptions& options) {
  const RunTable x = CollectRuns(samples, label_x);
  const RunTable y = label_x == label_y ? x : CollectRuns(samples, label_y);
  if (x.size() < 2 || y.size() < 2) {
    throw InputError("labels " + label_x + " and " + label_y +
                     " need at least two runs each");
  }
  std::vector<PairPValue> out;
  const auto compare = [&](int i, const auto& a, int j, const auto& b) {
    auto [u, v] = Matched(a, b);
    stats::PValueOptions opt = options;
    opt.seed = MixSeed(MixSeed(options.seed, HashString(label_x + "|" + label_y)),
                       static_cast<std::uint64_t>(i) * 1000003u + j);
    const stats::CvmResult r = stats::CvmTest(u, v, opt);
    out.push_back({i, j, r.statistic, r.p()});
  };
  if (label_x == label_y) {
    for (auto i = x.begin(); i != x.end(); ++i) {
      for (auto j = std::next(i); j != x.end(); ++j) {
        compare(i->first, i->second, j->first, j->second);
      }
    }
  } else {
    for (const auto& [i, a] : x) {
      for (const auto& [j, b] : y) compare(i, a, j, b);
    }
  }
  return out;
}

Verdict ValidateFilter(const std::vector<ErrorSample>& samples,
                       const std::string& filter_label, double threshold,
                       const stats::PValueOptions& options,
                       const std::string& reference_label) {
  const auto to_p = [](const std::vector<PairPValue>& pairs) {
    std::vector<double> p;
    p.reserve(pairs.size());
    for (const PairPValue& pp : pairs) p.push_back(pp.p);
    return p;
  };
  const stats::PValueSummary filter = stats::Summarize(
      filter_label,
      to_p(PairwisePValues(samples, reference_label, filter_label, options)));
  const stats::PValueSummary noise = stats::Summarize(
      reference_label,
      to_p(PairwisePValues(samples, reference_label, reference_label, options)));
  Verdict v;
  v.filter_label = filter_label;
  v.median_p = filter.median;
  v.mean_p = filter.mean;
  v.threshold = threshold;
  v.noise_q25 = noise.q25;
  v.noise_q75 = noise.q75;
  v.within_noise_band = v.median_p >= v.noise_q25 && v.median_p <= v.noise_q75;
  v.falsified = v.median_p < threshold;
  return v;
}

std::vector<std::pair<std::string, double>> ConditionMeans(
    const std::vector<ErrorSample>& samples) {
  std::vector<std::pair<std::string, double>> out;
  std::vector<std::size_t> counts;
  for (const ErrorSample& s : samples) {
    auto it = std::find_if(out.begin(), out.end(),
                           [&](const auto& e) { return e.first == s.condition; });
    if (it == out.end()) {
      out.emplace_back(s.condition, 0.0);
      counts.push_back(0);
      it = std::prev(out.end());
    }
    it->second += s.min_ade;
    ++counts[static_cast<std::size_t>(it - out.begin())];
  }
  for (std::size_t i = 0; i < out.size(); ++i) out[i].second /= counts[i];
  return out;
}

double RunToRunNoise(const std::vector<ErrorSample>& samples,
                     const std::string& label) {
  const RunTable runs = CollectRuns(samples, label);
  double sum = 0.0;
  std::size_t count = 0;
  for (auto i = runs.begin(); i != runs.end(); ++i) {
    for (auto j = std::next(i); j != runs.end(); ++j) {
      auto [u, v] = Matched(i->second, j->second);
      for (std::size_t k = 0; k < u.size(); ++k) {
        sum += std::abs(u[k] - v[k]);
        ++count;
      }
    }
  }
  if (count == 0) throw InputError("label " + label + " needs two runs");
  return sum / static_cast<double>(count);
}

FilterFraction MeasureRemoval(const std::vector<Scene>& dataset,
                              const Condition& condition,
                              const CampaignConfig& config) {
  FilterFraction f;
  f.label = condition.label;
  for (const Scene& scene : dataset) {
    const SceneInputs in =
        PrepareScene(scene, config, condition.kind == ConditionKind::kR);
    if (in.error) continue;
    const Scene kept = ApplyCondition(in.region, condition, &in.verdicts);
    const auto context = [&](const Scene& s) {
      return static_cast<std::size_t>(std::count_if(
          s.objects.begin(), s.objects.end(),
          [&](const ObjectState& o) { return o.id != s.target_agent; }));
    };
    f.in_region += context(in.region);
    f.removed += context(in.region) - context(kept);
  }
  return f;
}

}  // namespace relval

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

#ifndef RELVAL_SURROGATE_H_
#define RELVAL_SURROGATE_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relval/core_model.h"

namespace relval {

struct Trajectory {
  std::vector<Vec2> waypoints;  // scene frame, fixed timestep
  friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

// Predicted modes ordered by decreasing confidence.
struct PredictionSet {
  std::vector<Trajectory> modes;
  friend bool operator==(const PredictionSet&, const PredictionSet&) = default;
};

// Anything that maps a (condition-filtered) scene to multi-modal predictions
// for its target agent. Implementations must be deterministic in
// (scene, seed) and safe to call concurrently.
class Predictor {
 public:
  virtual ~Predictor() = default;
  virtual PredictionSet Predict(const Scene& scene,
                                std::uint64_t seed) const = 0;
  virtual int horizon_steps() const = 0;
};

// Mean Euclidean waypoint distance. Throws DomainError on length mismatch.
double AverageDisplacement(const Trajectory& a, const Trajectory& b);

// Minimum average displacement over the modes.
double MinAdeTopK(const PredictionSet& prediction, const Trajectory& truth);

// Intelligent-driver-model parameters plus the attention rule that decides
// which object, if any, the target agent reacts to.
struct InteractionLaw {
  double desired_speed = 13.9;   // [m/s]
  double max_accel = 1.5;        // [m/s^2]
  double comfort_decel = 2.0;    // [m/s^2]
  double time_headway = 1.5;     // [s]
  double standstill_gap = 2.0;   // [m]
  double exponent = 4.0;
  double min_accel = -8.0;       // [m/s^2]
  double corridor_half_width = 2.0;  // [m]
  // A lead is attended while its bumper gap is at most
  // attention_gap + attention_headway * speed at prediction time.
  double attention_gap = 1.5;      // [m]
  double attention_headway = 1.0;  // [s]
};

// The nearest object ahead of the target inside the lateral corridor that is
// stationary or moving within 45 degrees of the target's heading.
struct Lead {
  std::string id;
  double gap = 0.0;           // bumper-to-bumper along the heading [m]
  double longitudinal = 0.0;  // center offset along the heading [m]
  double speed = 0.0;         // along the target heading [m/s]
  bool attended = false;
};

std::optional<Lead> FindLead(const Scene& scene, const InteractionLaw& law);

// Attended lead only.
std::optional<Lead> AttendedLead(const Scene& scene, const InteractionLaw& law);

struct SurrogateConfig {
  InteractionLaw law;
  int horizon_steps = 12;
  double step = 0.5;             // between waypoints [s]
  int modes = 10;
  double integration_dt = 0.1;   // [s]
  double mode_accel_sigma = 1.2;   // spread of per-mode acceleration offsets
  double jitter_sigma = 0.5;       // per-waypoint position jitter [m]
};

// Straight-line longitudinal rollout of the target under the interaction
// law with a constant acceleration offset. The lead, when present, moves at
// constant speed.
Trajectory RolloutTarget(const ObjectState& target,
                         const std::optional<Lead>& lead,
                         double accel_offset, const SurrogateConfig& config);

class SurrogatePredictor : public Predictor {
 public:
  explicit SurrogatePredictor(SurrogateConfig config = {});

  // Throws InputError when the target agent is missing.
  PredictionSet Predict(const Scene& scene, std::uint64_t seed) const override;
  int horizon_steps() const override { return config_.horizon_steps; }
  const SurrogateConfig& config() const { return config_; }

 private:
  SurrogateConfig config_;
};

struct GeneratorConfig {
  SurrogateConfig predictor;
  double attended_lead_fraction = 0.5;
  double far_lead_fraction = 0.3;
  int min_context = 3;
  int max_context = 15;
  double min_speed = 3.0;   // [m/s]
  double max_speed = 13.0;  // [m/s]
  double truth_accel_sigma = 0.5;
  double truth_noise_sigma = 0.2;  // [m]
};

// Seeded urban-like corpus. Each scene's ego is the target agent itself.
std::vector<Scene> GenerateSyntheticDataset(int n_scenes, std::uint64_t seed,
                                            const GeneratorConfig& config = {});

// Stable 64-bit mixing used for all derived seeds.
std::uint64_t MixSeed(std::uint64_t a, std::uint64_t b);
std::uint64_t HashString(std::string_view text);

}  // namespace relval

#endif  // RELVAL_SURROGATE_H_

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

#include "relval/surrogate.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>

#include "relval/error.h"

namespace relval {

std::uint64_t MixSeed(std::uint64_t a, std::uint64_t b) {
  // splitmix64 finalizer over a combined word
  std::uint64_t z = a ^ (b + 0x9e3779b97f4a7c15ULL + (a << 6) + (a >> 2));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::uint64_t HashString(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

double AverageDisplacement(const Trajectory& a, const Trajectory& b) {
  if (a.waypoints.size() != b.waypoints.size() || a.waypoints.empty()) {
    throw DomainError("trajectory horizons differ");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < a.waypoints.size(); ++i) {
    sum += (a.waypoints[i] - b.waypoints[i]).Norm();
  }
  return sum / static_cast<double>(a.waypoints.size());
}

double MinAdeTopK(const PredictionSet& prediction, const Trajectory& truth) {
  if (prediction.modes.empty()) throw DomainError("prediction has no modes");
  double best = std::numeric_limits<double>::infinity();
  for (const Trajectory& mode : prediction.modes) {
    best = std::min(best, AverageDisplacement(mode, truth));
  }
  return best;
}

namespace {

double SpeedAlong(const ObjectState& object, const Vec2& direction) {
  return object.velocity.Dot(direction);
}

bool SameDirection(const ObjectState& object, const Vec2& heading) {
  const double speed = object.velocity.Norm();
  if (speed < 1e-6) return true;
  return object.velocity.Dot(heading) >= speed * std::cos(std::numbers::pi / 4);
}

}  // namespace

std::optional<Lead> FindLead(const Scene& scene, const InteractionLaw& law) {
  const ObjectState& target = scene.Target();
  const Vec2 heading = target.HeadingVector();
  std::optional<Lead> best;
  for (const ObjectState& object : scene.objects) {
    if (object.id == target.id) continue;
    const Vec2 local = ToLocalFrame(target, object.position);
    if (local.x() <= 0.0 || std::abs(local.y()) > law.corridor_half_width) {
      continue;
    }
    if (!SameDirection(object, heading)) continue;
    if (best && local.x() >= best->longitudinal) continue;
    Lead lead;
    lead.id = object.id;
    lead.longitudinal = local.x();
    lead.gap = local.x() - target.half_extent_long - object.half_extent_long;
    lead.speed = std::max(0.0, SpeedAlong(object, heading));
    best = lead;
  }
  if (best) {
    const double v = std::max(0.0, SpeedAlong(target, heading));
    best->attended =
        best->gap <= law.attention_gap + law.attention_headway * v;
  }
  return best;
}

std::optional<Lead> AttendedLead(const Scene& scene,
                                 const InteractionLaw& law) {
  auto lead = FindLead(scene, law);
  if (lead && !lead->attended) return std::nullopt;
  return lead;
}

Trajectory RolloutTarget(const ObjectState& target,
                         const std::optional<Lead>& lead,
                         double accel_offset, const SurrogateConfig& config) {
  const InteractionLaw& law = config.law;
  const Vec2 heading = target.HeadingVector();
  const int substeps = std::max(
      1, static_cast<int>(std::lround(config.step / config.integration_dt)));
  const double dt = config.step / substeps;
  double x = 0.0;
  double v = std::max(0.0, SpeedAlong(target, heading));
  double t = 0.0;
  Trajectory out;
  out.waypoints.reserve(config.horizon_steps);
  for (int k = 0; k < config.horizon_steps; ++k) {
    for (int s = 0; s < substeps; ++s) {
      double accel = law.max_accel *
                     (1.0 - std::pow(v / law.desired_speed, law.exponent));
      if (lead) {
        const double gap = std::max(
            0.1, lead->gap + lead->speed * t - x);
        const double dv = v - lead->speed;
        const double desired =
            law.standstill_gap +
            std::max(0.0, v * law.time_headway +
                              v * dv / (2.0 * std::sqrt(law.max_accel *
                                                        law.comfort_decel)));
        accel -= law.max_accel * (desired / gap) * (desired / gap);
      }
      accel = std::clamp(accel + accel_offset, law.min_accel, law.max_accel);
      const double v_next = std::max(0.0, v + accel * dt);
      x += 0.5 * (v + v_next) * dt;
      v = v_next;
      t += dt;
    }
    out.waypoints.push_back(target.position + x * heading);
  }
  return out;
}

SurrogatePredictor::SurrogatePredictor(SurrogateConfig config)
    : config_(std::move(config)) {
  if (config_.horizon_steps < 1 || config_.modes < 1 || !(config_.step > 0) ||
      !(config_.integration_dt > 0)) {
    throw DomainError("invalid surrogate configuration");
  }
}

PredictionSet SurrogatePredictor::Predict(const Scene& scene,
                                          std::uint64_t seed) const {
  const ObjectState& target = scene.Target();
  const auto lead = AttendedLead(scene, config_.law);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> unit(0.0, 1.0);
  std::vector<double> offsets(config_.modes);
  for (double& o : offsets) o = config_.mode_accel_sigma * unit(rng);
  std::stable_sort(offsets.begin(), offsets.end(), [](double a, double b) {
    return std::abs(a) < std::abs(b);
  });
  PredictionSet out;
  out.modes.reserve(config_.modes);
  for (double offset : offsets) {
    Trajectory mode = RolloutTarget(target, lead, offset, config_);
    for (Vec2& p : mode.waypoints) {
      p = p + Vec2(config_.jitter_sigma * unit(rng),
                   config_.jitter_sigma * unit(rng));
    }
    out.modes.push_back(std::move(mode));
  }
  return out;
}

namespace {

class SceneBuilder {
 public:
  SceneBuilder(std::uint64_t seed, const GeneratorConfig& config)
      : rng_(seed), config_(config) {}

  double Uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng_);
  }
  bool Bernoulli(double p) { return Uniform(0.0, 1.0) < p; }
  double Sign() { return Bernoulli(0.5) ? 1.0 : -1.0; }
  double Normal(double sigma) {
    return std::normal_distribution<double>(0.0, sigma)(rng_);
  }
  int Integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

  ObjectState Place(const ObjectState& target, std::string id,
                    ObjectCategory category, double lon, double lat,
                    double rel_heading, double speed, double half_long,
                    double half_lat) {
    ObjectState o;
    o.id = std::move(id);
    o.category = category;
    const Vec2 h = target.HeadingVector();
    o.position = target.position + lon * h + lat * h.Perp();
    o.heading = std::remainder(target.heading + rel_heading,
                               2.0 * std::numbers::pi);
    o.velocity = speed * Vec2::FromHeading(o.heading);
    o.half_extent_long = half_long;
    o.half_extent_lat = half_lat;
    return o;
  }

  ObjectState Vehicle(const ObjectState& target, std::string id, double lon,
                      double lat, double rel_heading, double speed) {
    return Place(target, std::move(id), ObjectCategory::kVehicle, lon, lat,
                 rel_heading, speed, Uniform(2.0, 2.6), Uniform(0.85, 1.0));
  }

  ObjectState Context(const ObjectState& target, std::string id,
                      double far_limit) {
    const double pi = std::numbers::pi;
    const double pick = Uniform(0.0, 1.0);
    if (pick < 0.22) {  // oncoming traffic in the opposite lane
      return Vehicle(target, id, Uniform(5.0, 80.0), Uniform(3.2, 4.5), pi,
                     Uniform(4.0, 14.0));
    }
    if (pick < 0.36) {  // crossing traffic, away from the corridor
      return Vehicle(target, id, Uniform(15.0, 70.0),
                     Sign() * Uniform(6.0, 45.0), Sign() * pi / 2,
                     Uniform(2.0, 10.0));
    }
    if (pick < 0.54) {
      return Place(target, id, ObjectCategory::kPedestrian,
                   Uniform(-15.0, 75.0), Sign() * Uniform(4.0, 12.0),
                   Uniform(-pi, pi), Uniform(0.0, 1.6), 0.3, 0.3);
    }
    if (pick < 0.66) {  // parked
      ObjectState o = Place(target, id, ObjectCategory::kStaticObstacle,
                            Uniform(4.0, 75.0), Sign() * Uniform(2.8, 3.6),
                            0.0, 0.0, Uniform(2.0, 2.5), 0.9);
      return o;
    }
    if (pick < 0.78) {  // follower
      return Vehicle(target, id, Uniform(-19.0, -7.0), Uniform(-1.5, 1.5),
                     Uniform(-0.05, 0.05), Uniform(2.0, 13.0));
    }
    if (pick < 0.86 && far_limit < 70.0) {  // same-lane traffic far ahead
      return Vehicle(target, id, Uniform(far_limit, 78.0), Uniform(-1.5, 1.5),
                     Uniform(-0.05, 0.05), Uniform(3.0, 13.0));
    }
    // clutter outside the region of interest
    const double mode = Uniform(0.0, 3.0);
    double lon, lat;
    if (mode < 1.0) {
      lon = Uniform(85.0, 150.0);
      lat = Uniform(-30.0, 30.0);
    } else if (mode < 2.0) {
      lon = Uniform(-90.0, -25.0);
      lat = Uniform(-30.0, 30.0);
    } else {
      lon = Uniform(-10.0, 70.0);
      lat = Sign() * Uniform(55.0, 90.0);
    }
    return Vehicle(target, id, lon, lat, Uniform(-pi, pi), Uniform(0.0, 12.0));
  }

  Scene Build(std::string token) {
    const double pi = std::numbers::pi;
    Scene scene;
    scene.token = std::move(token);
    ObjectState target;
    target.id = "target";
    target.category = ObjectCategory::kVehicle;
    target.position = Vec2(Uniform(-300.0, 300.0), Uniform(-300.0, 300.0));
    target.heading = Uniform(-pi, pi);
    const double v = Uniform(config_.min_speed, config_.max_speed);
    target.velocity = v * target.HeadingVector();
    target.half_extent_long = 2.3;
    target.half_extent_lat = 0.95;
    scene.target_agent = target.id;
    scene.ego = target;
    scene.objects.push_back(target);

    const int n_context = Integer(config_.min_context, config_.max_context);
    const InteractionLaw& law = config_.predictor.law;
    double nearest_ahead = 78.0;  // keeps the lead the nearest in-lane object
    int made = 0;
    auto next_id = [&] {
      char buf[16];
      std::snprintf(buf, sizeof buf, "obj-%02d", made + 1);
      ++made;
      return std::string(buf);
    };
    if (Bernoulli(config_.attended_lead_fraction)) {
      ObjectState lead = Vehicle(target, next_id(), 0.0, Uniform(-1.2, 1.2),
                                 Uniform(-0.05, 0.05), Uniform(0.0, 0.6 * v));
      const double reach = law.attention_gap + law.attention_headway * v;
      const double gap = Uniform(1.0, reach);
      const double lon = gap + target.half_extent_long + lead.half_extent_long;
      lead.position = target.position + lon * target.HeadingVector() +
                      ToLocalFrame(target, lead.position).y() *
                          target.HeadingVector().Perp();
      scene.objects.push_back(lead);
      nearest_ahead = lon + 8.0;
    } else if (Bernoulli(config_.far_lead_fraction)) {
      const double reach = law.attention_gap + law.attention_headway * v;
      ObjectState far = Vehicle(target, next_id(),
                                Uniform(reach + 12.0, 75.0), Uniform(-1.5, 1.5),
                                Uniform(-0.05, 0.05), Uniform(0.5 * v, v));
      scene.objects.push_back(far);
      nearest_ahead = ToLocalFrame(target, far.position).x() + 8.0;
    }
    while (made < n_context) {
      scene.objects.push_back(Context(target, next_id(), nearest_ahead));
    }

    SurrogateConfig truth_config = config_.predictor;
    const Trajectory truth = RolloutTarget(
        target, AttendedLead(scene, law),
        Normal(config_.truth_accel_sigma), truth_config);
    scene.ground_truth_future.reserve(truth.waypoints.size());
    for (const Vec2& p : truth.waypoints) {
      scene.ground_truth_future.push_back(
          p + Vec2(Normal(config_.truth_noise_sigma),
                   Normal(config_.truth_noise_sigma)));
    }
    return scene;
  }

 private:
  std::mt19937_64 rng_;
  const GeneratorConfig& config_;
};

}  // namespace

std::vector<Scene> GenerateSyntheticDataset(int n_scenes, std::uint64_t seed,
                                            const GeneratorConfig& config) {
  if (n_scenes < 1) throw DomainError("n_scenes must be at least 1");
  std::vector<Scene> scenes;
  scenes.reserve(n_scenes);
  for (int i = 0; i < n_scenes; ++i) {
    char token[32];
    std::snprintf(token, sizeof token, "scene-%05d", i);
    SceneBuilder builder(MixSeed(seed, HashString(token)), config);
    scenes.push_back(builder.Build(token));
  }
  return scenes;
}

}  // namespace relval

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

#include "relval/core_model.h"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "relval/error.h"

namespace relval {

Vec2::Vec2(double x, double y) : x_(x), y_(y) {
  if (!std::isfinite(x) || !std::isfinite(y)) {
    throw DomainError("Vec2 components must be finite");
  }
}

Vec2 Vec2::Rotated(double angle) const {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  return Vec2(c * x_ - s * y_, s * x_ + c * y_);
}

Vec2 Vec2::FromHeading(double heading) {
  return Vec2(std::cos(heading), std::sin(heading));
}

std::string_view ToString(ObjectCategory category) {
  switch (category) {
    case ObjectCategory::kVehicle:
      return "vehicle";
    case ObjectCategory::kPedestrian:
      return "pedestrian";
    case ObjectCategory::kStaticObstacle:
      return "static_obstacle";
    case ObjectCategory::kOther:
      return "other";
  }
  return "other";
}

std::optional<ObjectCategory> ParseObjectCategory(std::string_view text) {
  for (auto c : {ObjectCategory::kVehicle, ObjectCategory::kPedestrian,
                 ObjectCategory::kStaticObstacle, ObjectCategory::kOther}) {
    if (ToString(c) == text) return c;
  }
  return std::nullopt;
}

void Validate(const ObjectState& object) {
  if (!std::isfinite(object.heading)) {
    throw DomainError("object '" + object.id + "': heading must be finite");
  }
  if (!(object.half_extent_long >= 0.0) || !(object.half_extent_lat >= 0.0) ||
      !std::isfinite(object.half_extent_long) ||
      !std::isfinite(object.half_extent_lat)) {
    throw DomainError("object '" + object.id +
                      "': half extents must be finite and >= 0");
  }
  if (object.category == ObjectCategory::kStaticObstacle &&
      object.velocity.Norm() != 0.0) {
    throw DomainError("object '" + object.id +
                      "': static obstacle with nonzero velocity");
  }
}

void Validate(const EgoCapabilities& capabilities) {
  const auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(capabilities.reaction_time) ||
      capabilities.reaction_time > 10.0) {
    throw CapabilityError("reaction time must lie in (0, 10] s");
  }
  if (!positive(capabilities.guaranteed_brake)) {
    throw CapabilityError("guaranteed braking deceleration must be > 0");
  }
  if (!positive(capabilities.guaranteed_lateral_brake)) {
    throw CapabilityError("guaranteed lateral deceleration must be > 0");
  }
  if (!positive(capabilities.guaranteed_accel)) {
    throw CapabilityError("guaranteed acceleration must be > 0");
  }
}

void Validate(const WorldAssumptions& world) {
  if (!std::isfinite(world.a_max) || world.a_max < 0.0) {
    throw DomainError("a_max must be finite and >= 0");
  }
}

EgoCapabilities CapabilityOverrides::ApplyTo(EgoCapabilities base) const {
  if (reaction_time) base.reaction_time = *reaction_time;
  if (guaranteed_brake) base.guaranteed_brake = *guaranteed_brake;
  if (guaranteed_lateral_brake) {
    base.guaranteed_lateral_brake = *guaranteed_lateral_brake;
  }
  if (guaranteed_accel) base.guaranteed_accel = *guaranteed_accel;
  return base;
}

const ObjectState* Scene::FindObject(std::string_view id) const {
  auto it = std::find_if(objects.begin(), objects.end(),
                         [&](const ObjectState& o) { return o.id == id; });
  return it == objects.end() ? nullptr : &*it;
}

const ObjectState& Scene::Target() const {
  const ObjectState* target = FindObject(target_agent);
  if (target == nullptr) {
    throw InputError("scene '" + token + "': target agent '" + target_agent +
                     "' not among objects");
  }
  return *target;
}

void Validate(const Scene& scene, std::optional<int> horizon_steps) {
  Validate(scene.ego);
  std::set<std::string_view> ids;
  for (const auto& object : scene.objects) {
    Validate(object);
    if (!ids.insert(object.id).second) {
      throw InputError("scene '" + scene.token + "': duplicate object id '" +
                       object.id + "'");
    }
  }
  scene.Target();
  if (horizon_steps &&
      static_cast<int>(scene.ground_truth_future.size()) != *horizon_steps) {
    throw InputError("scene '" + scene.token + "': ground truth has " +
                     std::to_string(scene.ground_truth_future.size()) +
                     " waypoints, expected " + std::to_string(*horizon_steps));
  }
}

RadialTangentialState DecomposeRelativeState(const ObjectState& ego,
                                             const ObjectState& object) {
  const Vec2 offset = object.position - ego.position;
  const double gap = offset.Norm();
  if (!(gap > 1e-9)) {
    throw DegenerateGeometryError("ego and object '" + object.id +
                                  "' share a position");
  }
  const Vec2 u = (1.0 / gap) * offset;
  const Vec2 u_perp = u.Perp();
  const Vec2 heading = object.HeadingVector();
  const Vec2 normal = heading.Perp();

  RadialTangentialState state;
  state.d_0 = gap;
  state.v_1r = ego.velocity.Dot(u);
  state.v_2r = -object.velocity.Dot(u);
  state.v_1perp = std::abs(ego.velocity.Dot(u_perp));
  state.v_2perp = std::abs(object.velocity.Dot(u_perp));

  // Signed lateral offset of the ego from the travel line.
  const double lateral = (ego.position - object.position).Dot(normal);
  state.r_1perp = std::abs(lateral);
  const double toward_line = lateral > 0.0 ? -1.0 : 1.0;
  state.v_1cross = lateral == 0.0 ? std::abs(ego.velocity.Dot(normal))
                                  : toward_line * ego.velocity.Dot(normal);
  state.d_line = (ego.position - object.position).Dot(heading);
  state.v_1line = ego.velocity.Dot(heading);
  state.v_2line = object.velocity.Dot(heading);
  return state;
}

std::string_view ToString(ScenarioClass scenario) {
  switch (scenario) {
    case ScenarioClass::kRTA:
      return "R.TA";
    case ScenarioClass::kRAT:
      return "R.AT";
    case ScenarioClass::kRTT:
      return "R.TT";
    case ScenarioClass::kRAA:
      return "R.AA";
    case ScenarioClass::kTXT:
      return "T.XT";
    case ScenarioClass::kTXA:
      return "T.XA";
  }
  return "?";
}

ScenarioClass ClassifyScenario(const RadialTangentialState& state,
                               const ClassifierConfig& config) {
  const bool object_toward = state.v_2r > 0.0;
  // Angle between the object's velocity and the (undirected) connecting line.
  const double angle = std::atan2(state.v_2perp, std::abs(state.v_2r));
  if (angle > config.tangential_angle) {
    return object_toward ? ScenarioClass::kTXT : ScenarioClass::kTXA;
  }
  const bool ego_toward = state.v_1r > 0.0;
  if (ego_toward) {
    return object_toward ? ScenarioClass::kRTT : ScenarioClass::kRTA;
  }
  return object_toward ? ScenarioClass::kRAT : ScenarioClass::kRAA;
}

Vec2 ToLocalFrame(const ObjectState& reference, const Vec2& point) {
  const Vec2 offset = point - reference.position;
  const Vec2 heading = reference.HeadingVector();
  return Vec2(offset.Dot(heading), heading.Cross(offset));
}

Scene RegionFilter(const Scene& scene, const RegionBounds& bounds) {
  const ObjectState& target = scene.Target();
  Scene out = scene;
  out.objects.clear();
  for (const auto& object : scene.objects) {
    const Vec2 local = ToLocalFrame(target, object.position);
    if (local.x() >= bounds.longitudinal_min &&
        local.x() <= bounds.longitudinal_max &&
        local.y() >= bounds.lateral_min && local.y() <= bounds.lateral_max) {
      out.objects.push_back(object);
    }
  }
  return out;
}

}  // namespace relval

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

#ifndef RELVAL_CORE_MODEL_H_
#define RELVAL_CORE_MODEL_H_

#include <cmath>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace relval {

// Planar vector in the scene frame. Components are always finite.
class Vec2 {
 public:
  constexpr Vec2() = default;
  Vec2(double x, double y);

  double x() const { return x_; }
  double y() const { return y_; }

  double Dot(const Vec2& other) const { return x_ * other.x_ + y_ * other.y_; }
  // z-component of the 3D cross product.
  double Cross(const Vec2& other) const {
    return x_ * other.y_ - y_ * other.x_;
  }
  double Norm() const { return std::hypot(x_, y_); }
  // Counter-clockwise rotation by 90 degrees.
  Vec2 Perp() const { return Vec2(-y_, x_); }
  Vec2 Rotated(double angle) const;

  static Vec2 FromHeading(double heading);

  friend Vec2 operator+(const Vec2& a, const Vec2& b) {
    return Vec2(a.x_ + b.x_, a.y_ + b.y_);
  }
  friend Vec2 operator-(const Vec2& a, const Vec2& b) {
    return Vec2(a.x_ - b.x_, a.y_ - b.y_);
  }
  friend Vec2 operator-(const Vec2& a) { return Vec2(-a.x_, -a.y_); }
  friend Vec2 operator*(double s, const Vec2& a) {
    return Vec2(s * a.x_, s * a.y_);
  }
  friend Vec2 operator*(const Vec2& a, double s) { return s * a; }
  friend bool operator==(const Vec2& a, const Vec2& b) = default;

 private:
  double x_ = 0.0;
  double y_ = 0.0;
};

enum class ObjectCategory { kVehicle, kPedestrian, kStaticObstacle, kOther };

std::string_view ToString(ObjectCategory category);
std::optional<ObjectCategory> ParseObjectCategory(std::string_view text);

struct ObjectState {
  std::string id;
  ObjectCategory category = ObjectCategory::kOther;
  Vec2 position;         // [m]
  double heading = 0.0;  // [rad]
  Vec2 velocity;         // [m/s]
  double half_extent_long = 0.0;  // [m]
  double half_extent_lat = 0.0;   // [m]

  Vec2 HeadingVector() const { return Vec2::FromHeading(heading); }
  friend bool operator==(const ObjectState&, const ObjectState&) = default;
};

// Throws DomainError on negative extents, non-finite heading, or a moving
// static obstacle.
void Validate(const ObjectState& object);

// Guaranteed capabilities of the ego system after its reaction time.
struct EgoCapabilities {
  double reaction_time = 1.0;             // t_1r [s]
  double guaranteed_brake = 4.0;          // a_1rb [m/s^2], longitudinal
  double guaranteed_lateral_brake = 4.0;  // a_1b [m/s^2], perpendicular
  double guaranteed_accel = 1.5;          // a_1g [m/s^2]

  friend bool operator==(const EgoCapabilities&,
                         const EgoCapabilities&) = default;
};

// Throws CapabilityError unless every field is positive and the reaction time
// is at most 10 s.
void Validate(const EgoCapabilities& capabilities);

// Universal worst-case bound on the acceleration magnitude of any participant.
struct WorldAssumptions {
  double a_max = 3.0;  // [m/s^2]

  friend bool operator==(const WorldAssumptions&,
                         const WorldAssumptions&) = default;
};

// a_max == 0 is accepted; it models a world without adversarial motion.
void Validate(const WorldAssumptions& world);

// Per-scene replacements for individual capability fields.
struct CapabilityOverrides {
  std::optional<double> reaction_time;
  std::optional<double> guaranteed_brake;
  std::optional<double> guaranteed_lateral_brake;
  std::optional<double> guaranteed_accel;

  bool empty() const {
    return !reaction_time && !guaranteed_brake && !guaranteed_lateral_brake &&
           !guaranteed_accel;
  }
  EgoCapabilities ApplyTo(EgoCapabilities base) const;
  friend bool operator==(const CapabilityOverrides&,
                         const CapabilityOverrides&) = default;
};

// One prediction instance. `ego` is the viewpoint for relevance and for the
// heading-corridor filter; `target_agent` names the object (in `objects`)
// whose future is predicted. Both may denote the same participant.
struct Scene {
  std::string token;
  ObjectState ego;
  CapabilityOverrides capability_overrides;
  std::vector<ObjectState> objects;
  std::string target_agent;
  std::vector<Vec2> ground_truth_future;

  const ObjectState* FindObject(std::string_view id) const;
  const ObjectState& Target() const;  // throws InputError when missing
  friend bool operator==(const Scene&, const Scene&) = default;
};

// Checks object invariants, unique ids, the target's presence and, when
// `horizon_steps` is given, the ground-truth length.
void Validate(const Scene& scene, std::optional<int> horizon_steps = {});

// Relative motion of an object with respect to the ego.
//
// Radial/tangential components refer to the unit vector u from ego to object.
// The line-frame fields describe the object's travel line (through its
// position along its heading) and are used by the tangential criteria.
struct RadialTangentialState {
  double d_0 = 0.0;      // center gap [m]
  double v_1r = 0.0;     // ego speed toward the object [m/s]
  double v_2r = 0.0;     // object speed toward the ego [m/s]
  double v_1perp = 0.0;  // |ego velocity . u_perp| [m/s]
  double v_2perp = 0.0;  // |object velocity . u_perp| [m/s]
  double r_1perp = 0.0;  // ego distance to the object's travel line [m]
  // Ego speed toward the object's travel line; negative when moving away.
  double v_1cross = 0.0;
  // Signed distance along the travel line from the object to the foot point
  // of the ego; positive when the foot point lies ahead of the object.
  double d_line = 0.0;
  double v_1line = 0.0;  // ego velocity along the object's heading [m/s]
  double v_2line = 0.0;  // object velocity along its own heading [m/s]
};

// Throws DegenerateGeometryError when the centers are closer than 1e-9 m.
RadialTangentialState DecomposeRelativeState(const ObjectState& ego,
                                             const ObjectState& object);

enum class ScenarioClass { kRTA, kRAT, kRTT, kRAA, kTXT, kTXA };

std::string_view ToString(ScenarioClass scenario);

struct ClassifierConfig {
  // A pair is tangential when the angle between the object's velocity and the
  // connecting line exceeds this value.
  double tangential_angle = std::numbers::pi / 4.0;
};

ScenarioClass ClassifyScenario(const RadialTangentialState& state,
                               const ClassifierConfig& config = {});

inline bool IsTangential(ScenarioClass scenario) {
  return scenario == ScenarioClass::kTXT || scenario == ScenarioClass::kTXA;
}

// Axis-aligned box in the target agent's frame (x forward, y left).
struct RegionBounds {
  double longitudinal_min = -20.0;
  double longitudinal_max = 80.0;
  double lateral_min = -50.0;
  double lateral_max = 50.0;
};

// Expresses `point` in the frame of `reference` (x along its heading).
Vec2 ToLocalFrame(const ObjectState& reference, const Vec2& point);

// Keeps the objects whose centers lie inside `bounds` in the target agent's
// frame at prediction time. Bounds are inclusive.
Scene RegionFilter(const Scene& scene, const RegionBounds& bounds = {});

}  // namespace relval

#endif  // RELVAL_CORE_MODEL_H_

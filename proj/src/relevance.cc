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

#include "relval/relevance.h"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "relval/error.h"

namespace relval {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void RequireNonNegative(double value, const char* name) {
  if (!std::isfinite(value) || value < 0.0) {
    throw DomainError(std::string(name) + " must be finite and >= 0");
  }
}

// Piecewise-constant acceleration of one agent: acceleration `accel` up to
// `end`; the agent is at rest afterwards when `rest_at_end` is set.
struct Piece {
  double end = 0.0;
  double accel = 0.0;
  bool rest_at_end = false;
};

struct Profile {
  double v0 = 0.0;
  std::vector<Piece> pieces;  // beyond the last piece the speed is constant

  double AccelAt(double t) const {
    for (const Piece& p : pieces) {
      if (t < p.end) return p.accel;
    }
    return 0.0;
  }
  bool RestsAt(double t) const {
    for (const Piece& p : pieces) {
      if (p.end == t && p.rest_at_end) return true;
    }
    return false;
  }
};

// An agent moving away brakes with `decel` and then stays at rest.
void AppendRecedingBrake(Profile& profile, double start, double end,
                         double speed, double decel) {
  if (speed < 0.0 && decel > 0.0) {
    const double rest = start + (-speed) / decel;
    if (rest < end) {
      profile.pieces.push_back({rest, decel, true});
      profile.pieces.push_back({end, 0.0, false});
      return;
    }
    profile.pieces.push_back({end, decel, false});
    return;
  }
  profile.pieces.push_back({end, 0.0, false});
}

// Exact minimum of gap - x_1(t) - x_2(t) over [0, horizon].
double MinGapOf(double base, const Profile& first, const Profile& second,
                double horizon) {
  std::vector<double> times{horizon};
  for (const Profile* p : {&first, &second}) {
    for (const Piece& piece : p->pieces) {
      if (piece.end > 0.0 && piece.end < horizon) times.push_back(piece.end);
    }
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  double t = 0.0;
  double x = 0.0;  // summed displacement toward each other
  double v1 = first.v0;
  double v2 = second.v0;
  double min_gap = base;
  for (double next : times) {
    const double length = next - t;
    if (length <= 0.0) continue;
    const double mid = t + 0.5 * length;
    const double a1 = first.AccelAt(mid);
    const double a2 = second.AccelAt(mid);
    const double closing = v1 + v2;
    const double accel = a1 + a2;
    // gap(tau) = base - x - closing*tau - accel*tau^2/2, concave iff accel>0.
    if (accel < 0.0) {
      const double vertex = -closing / accel;
      if (vertex > 0.0 && vertex < length) {
        min_gap = std::min(min_gap, base - x - closing * vertex -
                                        0.5 * accel * vertex * vertex);
      }
    }
    x += closing * length + 0.5 * accel * length * length;
    v1 = first.RestsAt(next) ? 0.0 : v1 + a1 * length;
    v2 = second.RestsAt(next) ? 0.0 : v2 + a2 * length;
    min_gap = std::min(min_gap, base - x);
    t = next;
  }
  return min_gap;
}

}  // namespace

std::string_view ToString(Scenario scenario) {
  switch (scenario) {
    case Scenario::kRTA:
      return "R.TA";
    case Scenario::kRAT:
      return "R.AT";
    case Scenario::kRTT:
      return "R.TT";
    case Scenario::kRAA:
      return "R.AA";
    case Scenario::kTXT:
      return "T.XT";
    case Scenario::kTXA:
      return "T.XA";
    case Scenario::kRTTPrime:
      return "R.TT'";
    case Scenario::kTXTPrime:
      return "T.XT'";
  }
  return "?";
}

std::optional<Scenario> ParseScenario(std::string_view text) {
  for (int i = 0; i <= static_cast<int>(Scenario::kTXTPrime); ++i) {
    const auto s = static_cast<Scenario>(i);
    if (ToString(s) == text) return s;
  }
  return std::nullopt;
}

Scenario ToScenario(ScenarioClass scenario_class) {
  switch (scenario_class) {
    case ScenarioClass::kRTA:
      return Scenario::kRTA;
    case ScenarioClass::kRAT:
      return Scenario::kRAT;
    case ScenarioClass::kRTT:
      return Scenario::kRTT;
    case ScenarioClass::kRAA:
      return Scenario::kRAA;
    case ScenarioClass::kTXT:
      return Scenario::kTXT;
    case ScenarioClass::kTXA:
      return Scenario::kTXA;
  }
  return Scenario::kRTA;
}

double RtaMargin(double d_1r0, double v_1r0, double s_1, double s_3r,
                 const EgoCapabilities& ego, const WorldAssumptions& world) {
  RequireNonNegative(d_1r0, "d_1r0");
  RequireNonNegative(v_1r0, "v_1r0");
  RequireNonNegative(s_1, "s_1");
  RequireNonNegative(s_3r, "s_3r");
  Validate(ego);
  Validate(world);
  const double t_r = ego.reaction_time;
  const double a = world.a_max;
  const double v_reacted = v_1r0 + a * t_r;
  return d_1r0 - s_1 - s_3r - (v_1r0 * t_r + 0.5 * a * t_r * t_r) -
         v_reacted * v_reacted / (2.0 * ego.guaranteed_brake);
}

double EgoStopTime(double v_1r0, const EgoCapabilities& ego,
                   const WorldAssumptions& world) {
  return ego.reaction_time +
         (v_1r0 + world.a_max * ego.reaction_time) / ego.guaranteed_brake;
}

double RttMargin(double d_0, double v_1r0, double v_2r0, double extents,
                 const EgoCapabilities& ego, const WorldAssumptions& world,
                 std::optional<double> opponent_horizon) {
  RequireNonNegative(v_1r0, "v_1r0");
  RequireNonNegative(v_2r0, "v_2r0");
  RequireNonNegative(extents, "extents");
  Validate(ego);
  Validate(world);
  const double t_r = ego.reaction_time;
  const double a = world.a_max;
  const double v_reacted = v_1r0 + a * t_r;
  const double t_opp =
      opponent_horizon ? *opponent_horizon : EgoStopTime(v_1r0, ego, world);
  return d_0 - extents - v_1r0 * t_r - 0.5 * a * t_r * t_r -
         v_reacted * v_reacted / (2.0 * ego.guaranteed_brake) -
         v_2r0 * t_opp - 0.5 * a * t_opp * t_opp;
}

double RadialWorstCaseMargin(double gap, double extents, double v_1, double v_2,
                             const EgoCapabilities& ego,
                             const WorldAssumptions& world,
                             double min_horizon) {
  RequireNonNegative(gap, "gap");
  RequireNonNegative(extents, "extents");
  RequireNonNegative(min_horizon, "min_horizon");
  if (!std::isfinite(v_1) || !std::isfinite(v_2)) {
    throw DomainError("speeds must be finite");
  }
  Validate(ego);
  Validate(world);
  const double t_r = ego.reaction_time;
  const double a = world.a_max;

  Profile first{v_1, {}};
  double ego_rest = t_r;
  if (v_1 > 0.0) {
    const double v_reacted = v_1 + a * t_r;
    ego_rest = t_r + v_reacted / ego.guaranteed_brake;
    first.pieces.push_back({t_r, a, false});
    first.pieces.push_back({ego_rest, -ego.guaranteed_brake, true});
  } else {
    AppendRecedingBrake(first, 0.0, t_r, v_1, a);
  }
  const double horizon = std::max(ego_rest, min_horizon);

  Profile second{v_2, {}};
  if (v_2 > 0.0) {
    second.pieces.push_back({horizon, a, false});
  } else {
    AppendRecedingBrake(second, 0.0, horizon, v_2, a);
  }
  return MinGapOf(gap - extents, first, second, horizon);
}

void Validate(const PassingGeometry& g) {
  RequireNonNegative(g.d_1r0, "d_1r0");
  RequireNonNegative(g.d_0, "d_0");
  RequireNonNegative(g.s_1, "s_1");
  RequireNonNegative(g.s_2, "s_2");
  RequireNonNegative(g.s_3r, "s_3r");
  RequireNonNegative(g.s_3t, "s_3t");
  RequireNonNegative(g.v_1r0, "v_1r0");
  if (!std::isfinite(g.v_2r0)) throw DomainError("v_2r0 must be finite");
  if (!(g.d_0 > g.d_1r0)) {
    throw DomainError("opposing vehicle must lie beyond the static object");
  }
}

bool RttPrimeGeometry(const ObjectState& ego, const ObjectState& opposing,
                      const ObjectState& static_object) {
  const Vec2 ego_to_static = static_object.position - ego.position;
  const Vec2 opposing_to_static = static_object.position - opposing.position;
  return ego_to_static.Dot(ego.velocity) > 0.0 &&
         opposing_to_static.Dot(opposing.velocity) > 0.0 &&
         ego_to_static.Dot(opposing_to_static) < 0.0;
}

PassingGeometry MakePassingGeometry(const ObjectState& ego,
                                    const ObjectState& opposing,
                                    const ObjectState& static_object) {
  const RadialTangentialState to_static =
      DecomposeRelativeState(ego, static_object);
  const RadialTangentialState to_opposing =
      DecomposeRelativeState(ego, opposing);
  PassingGeometry g;
  g.d_1r0 = to_static.d_0;
  g.d_0 = to_opposing.d_0;
  g.s_1 = ego.half_extent_long;
  g.s_2 = opposing.half_extent_long;
  g.s_3r = static_object.half_extent_long;
  g.s_3t = static_object.half_extent_lat;
  g.v_1r0 = std::max(0.0, to_static.v_1r);
  g.v_2r0 = to_opposing.v_2r;
  return g;
}

bool RttPrimeApplicable(const ObjectState& ego, const ObjectState& opposing,
                        const ObjectState& static_object,
                        const EgoCapabilities& capabilities,
                        const WorldAssumptions& world) {
  if (static_object.category != ObjectCategory::kStaticObstacle) return false;
  if (!RttPrimeGeometry(ego, opposing, static_object)) return false;
  const RadialTangentialState to_static =
      DecomposeRelativeState(ego, static_object);
  return RtaMargin(to_static.d_0, std::max(0.0, to_static.v_1r),
                   ego.half_extent_long, static_object.half_extent_long,
                   capabilities, world) <= 0.0;
}

ManeuverTimeline RttPrimeEgoManeuver(const PassingGeometry& geometry,
                                     const EgoCapabilities& capabilities,
                                     const WorldAssumptions& world) {
  RequireNonNegative(geometry.v_1r0, "v_1r0");
  RequireNonNegative(geometry.s_1, "s_1");
  RequireNonNegative(geometry.s_3r, "s_3r");
  RequireNonNegative(geometry.s_3t, "s_3t");
  Validate(capabilities);
  Validate(world);
  const double t_r = capabilities.reaction_time;
  const double a = world.a_max;
  const double a_g = capabilities.guaranteed_accel;
  const double v0 = geometry.v_1r0;

  ManeuverTimeline m;
  m.t_1b = v0 == 0.0 ? 0.0 : (a > 0.0 ? std::min(t_r, v0 / a) : t_r);
  m.d_1b = v0 * m.t_1b - 0.5 * a * m.t_1b * m.t_1b;
  m.v_1rb = std::max(0.0, v0 - a * m.t_1b);
  m.tau_1l = 2.0 * std::sqrt((geometry.s_3t + geometry.s_1) / a_g);
  m.d_1a = 2.0 * geometry.s_1 + 2.0 * geometry.s_3r;
  m.tau_1a =
      (-m.v_1rb + std::sqrt(2.0 * a_g * m.d_1a + m.v_1rb * m.v_1rb)) / a_g;
  m.v_1ra = m.v_1rb + a_g * m.tau_1a;
  m.d_1e = m.d_1b + m.v_1rb * m.tau_1l + m.d_1a + m.v_1ra * m.tau_1l;
  return m;
}

OpponentState AdvanceOpponent(double t_e, double v_2r0,
                              const WorldAssumptions& world) {
  RequireNonNegative(t_e, "t_e");
  Validate(world);
  OpponentState s;
  s.t_e = t_e;
  s.d_2e = v_2r0 * t_e + 0.5 * world.a_max * t_e * t_e;
  s.v_2re = v_2r0 + world.a_max * t_e;
  return s;
}

OpponentState RttPrimeOpponentState(const ManeuverTimeline& timeline,
                                    double v_2r0,
                                    const WorldAssumptions& world,
                                    const EgoCapabilities& capabilities) {
  const double t_e =
      capabilities.reaction_time + 2.0 * timeline.tau_1l + timeline.tau_1a;
  return AdvanceOpponent(t_e, v_2r0, world);
}

ManeuverTimeline RttPrimeTimeline(const PassingGeometry& geometry,
                                  const EgoCapabilities& capabilities,
                                  const WorldAssumptions& world) {
  ManeuverTimeline m = RttPrimeEgoManeuver(geometry, capabilities, world);
  const OpponentState opp =
      RttPrimeOpponentState(m, geometry.v_2r0, world, capabilities);
  m.t_e = opp.t_e;
  m.d_2e = opp.d_2e;
  m.v_2re = opp.v_2re;
  return m;
}

double RttPrimeMargin(const PassingGeometry& geometry,
                      const EgoCapabilities& capabilities,
                      const WorldAssumptions& world, OpponentHorizon horizon) {
  Validate(geometry);
  const ManeuverTimeline m = RttPrimeTimeline(geometry, capabilities, world);
  std::optional<double> opponent_horizon;
  if (horizon == OpponentHorizon::kReactionBrakeTime) {
    opponent_horizon = m.t_1b;
  }
  // Head-on check from the state at the end of the passing maneuver; the
  // remaining gap may already be negative.
  const double remaining = geometry.d_0 - m.d_1e - m.d_2e;
  const double v_2 = m.v_2re;
  const double t_opp = opponent_horizon
                           ? *opponent_horizon
                           : EgoStopTime(m.v_1ra, capabilities, world);
  const double a = world.a_max;
  const double t_r = capabilities.reaction_time;
  const double v_reacted = m.v_1ra + a * t_r;
  return remaining - geometry.s_1 - geometry.s_2 - m.v_1ra * t_r -
         0.5 * a * t_r * t_r -
         v_reacted * v_reacted / (2.0 * capabilities.guaranteed_brake) -
         v_2 * t_opp - 0.5 * a * t_opp * t_opp;
}

double TxtPrimeGateThreshold(double v_1perp0,
                             const EgoCapabilities& capabilities,
                             const WorldAssumptions& world) {
  RequireNonNegative(v_1perp0, "v_1perp0");
  Validate(capabilities);
  Validate(world);
  const double t_r = capabilities.reaction_time;
  const double a_b = capabilities.guaranteed_lateral_brake;
  const double a = world.a_max;
  const double ego_stop = v_1perp0 * t_r + v_1perp0 * v_1perp0 / (2.0 * a_b);
  const double t_1b = t_r + (v_1perp0 + t_r * a) / a_b;
  return ego_stop + 0.5 * a * t_1b * t_1b;
}

bool TxtPrimeLateralGate(double v_1perp0, double r_1perp0,
                         const EgoCapabilities& capabilities,
                         const WorldAssumptions& world) {
  RequireNonNegative(r_1perp0, "r_1perp0");
  return r_1perp0 < TxtPrimeGateThreshold(v_1perp0, capabilities, world);
}

double TxtMergingMargin(const RadialTangentialState& state, PairExtents extents,
                        const EgoCapabilities& capabilities,
                        const WorldAssumptions& world) {
  const bool ahead = state.d_line >= 0.0;
  const double gap = std::abs(state.d_line);
  const double v_object = ahead ? state.v_2line : -state.v_2line;
  const double v_ego = ahead ? -state.v_1line : state.v_1line;
  const double v_cross = std::max(0.0, state.v_1cross);
  const double t_r = capabilities.reaction_time;
  const double braking_time =
      t_r + (v_cross + t_r * world.a_max) / capabilities.guaranteed_lateral_brake;
  return RadialWorstCaseMargin(gap, extents.sum(), v_ego, v_object,
                               capabilities, world, braking_time);
}

PairwiseResult TxtPrimeRelevant(const RadialTangentialState& state,
                                PairExtents extents,
                                const EgoCapabilities& capabilities,
                                const WorldAssumptions& world) {
  const double v_cross = std::max(0.0, state.v_1cross);
  if (!TxtPrimeLateralGate(v_cross, state.r_1perp, capabilities, world)) {
    return {false, kInf};
  }
  const double d_min = TxtMergingMargin(state, extents, capabilities, world);
  return {d_min <= 0.0, d_min};
}

PairwiseResult BasePairwiseRelevant(ScenarioClass scenario_class,
                                    const RadialTangentialState& state,
                                    PairExtents extents,
                                    const EgoCapabilities& capabilities,
                                    const WorldAssumptions& world) {
  double d_min = 0.0;
  switch (scenario_class) {
    case ScenarioClass::kRTA:
      d_min = RtaMargin(state.d_0, std::max(0.0, state.v_1r), extents.ego,
                        extents.object, capabilities, world);
      break;
    case ScenarioClass::kRTT:
      d_min = RttMargin(state.d_0, std::max(0.0, state.v_1r),
                        std::max(0.0, state.v_2r), extents.sum(), capabilities,
                        world);
      break;
    case ScenarioClass::kRAT:
    case ScenarioClass::kRAA:
    case ScenarioClass::kTXA:
      d_min = RadialWorstCaseMargin(state.d_0, extents.sum(), state.v_1r,
                                    state.v_2r, capabilities, world);
      break;
    case ScenarioClass::kTXT:
      return TxtPrimeRelevant(state, extents, capabilities, world);
  }
  return {d_min <= 0.0, d_min};
}

std::vector<RelevanceVerdict> RelevantObjects(
    const Scene& scene, const EgoCapabilities& capabilities,
    const WorldAssumptions& world, const RelevanceOptions& options) {
  Validate(capabilities);
  Validate(world);
  const Scene region = RegionFilter(scene, options.region);
  const ObjectState& ego = scene.ego;

  std::vector<const ObjectState*> candidates;
  std::vector<const ObjectState*> static_objects;
  for (const ObjectState& object : region.objects) {
    if (object.id == ego.id) continue;
    candidates.push_back(&object);
    if (object.category == ObjectCategory::kStaticObstacle) {
      static_objects.push_back(&object);
    }
  }

  std::vector<RelevanceVerdict> verdicts;
  verdicts.reserve(candidates.size());
  for (const ObjectState* object : candidates) {
    RelevanceVerdict verdict;
    verdict.object_id = object->id;
    const PairExtents extents{ego.half_extent_long, object->half_extent_long};
    const auto record = [&](Scenario s, const PairwiseResult& r) {
      auto [it, inserted] = verdict.margins.emplace(s, r.d_min);
      if (!inserted) it->second = std::min(it->second, r.d_min);
      if (r.relevant) verdict.triggering_scenarios.insert(s);
    };

    if ((object->position - ego.position).Norm() <= 1e-9) {
      // Coincident centers: treat as an approach from zero distance.
      const double d_min =
          RtaMargin(0.0, ego.velocity.Norm(), extents.ego, extents.object,
                    capabilities, world);
      record(Scenario::kRTA, {d_min <= 0.0, d_min});
    } else {
      const RadialTangentialState state = DecomposeRelativeState(ego, *object);
      const ScenarioClass cls = ClassifyScenario(state, options.classifier);
      record(ToScenario(cls),
             BasePairwiseRelevant(cls, state, extents, capabilities, world));
      if (IsTangential(cls)) {
        record(Scenario::kTXTPrime,
               TxtPrimeRelevant(state, extents, capabilities, world));
      }
      if (options.enable_rtt_prime &&
          object->category != ObjectCategory::kStaticObstacle) {
        for (const ObjectState* obstacle : static_objects) {
          if (obstacle == object ||
              !RttPrimeApplicable(ego, *object, *obstacle, capabilities,
                                  world)) {
            continue;
          }
          const PassingGeometry g =
              MakePassingGeometry(ego, *object, *obstacle);
          if (!(g.d_0 > g.d_1r0)) continue;
          const double d_min = RttPrimeMargin(g, capabilities, world,
                                              options.opponent_horizon);
          record(Scenario::kRTTPrime, {d_min <= 0.0, d_min});
        }
      }
    }
    verdict.relevant = !verdict.triggering_scenarios.empty();
    verdicts.push_back(std::move(verdict));
  }
  std::sort(verdicts.begin(), verdicts.end(),
            [](const RelevanceVerdict& a, const RelevanceVerdict& b) {
              return a.object_id < b.object_id;
            });
  return verdicts;
}

}  // namespace relval

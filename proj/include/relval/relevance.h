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

#ifndef RELVAL_RELEVANCE_H_
#define RELVAL_RELEVANCE_H_

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "relval/core_model.h"

namespace relval {

// Scenario identifiers reported in verdicts: the six pairwise classes plus the
// two urban extensions (passing a static obstacle, intersection gate).
enum class Scenario { kRTA, kRAT, kRTT, kRAA, kTXT, kTXA, kRTTPrime, kTXTPrime };

std::string_view ToString(Scenario scenario);
std::optional<Scenario> ParseScenario(std::string_view text);
Scenario ToScenario(ScenarioClass scenario_class);

// Worst-case margin of the ego approaching a static object: the gap left
// after accelerating with a_max through the reaction time and then braking
// with the guaranteed deceleration. The object is relevant when <= 0.
double RtaMargin(double d_1r0, double v_1r0, double s_1, double s_3r,
                 const EgoCapabilities& ego, const WorldAssumptions& world);

// Head-on margin of two approaching participants. The ego reacts as in
// RtaMargin; the opponent accelerates with a_max until `opponent_horizon`
// (by default the ego's time to standstill).
double RttMargin(double d_0, double v_1r0, double v_2r0, double extents,
                 const EgoCapabilities& ego, const WorldAssumptions& world,
                 std::optional<double> opponent_horizon = std::nullopt);

// Time for the ego to come to rest after accelerating with a_max during the
// reaction time from v_1r0.
double EgoStopTime(double v_1r0, const EgoCapabilities& ego,
                   const WorldAssumptions& world);

// Minimum gap of the general radial worst case for signed approach speeds.
//
// An agent approaching the other (speed > 0) accelerates toward it with
// a_max; an agent moving away brakes with a_max and stays at rest. After the
// reaction time the ego brakes to standstill with its guaranteed
// deceleration. The episode lasts until the ego is at rest, and at least
// `min_horizon`. The minimum over the whole episode is returned.
double RadialWorstCaseMargin(double gap, double extents, double v_1, double v_2,
                             const EgoCapabilities& ego,
                             const WorldAssumptions& world,
                             double min_horizon = 0.0);

// Passing a static obstacle via the opposite lane while an opposing vehicle
// approaches.
struct PassingGeometry {
  double d_1r0 = 0.0;  // ego to static object [m]
  double d_0 = 0.0;    // ego to opposing vehicle [m]
  double s_1 = 0.0;    // ego half length [m]
  double s_2 = 0.0;    // opposing vehicle half length [m]
  double s_3r = 0.0;   // static object half extent along the ego's path [m]
  double s_3t = 0.0;   // static object half extent across the path [m]
  double v_1r0 = 0.0;  // ego speed toward the static object [m/s]
  double v_2r0 = 0.0;  // opposing speed toward the ego [m/s]
};

void Validate(const PassingGeometry& geometry);

struct ManeuverTimeline {
  double t_1b = 0.0;    // end of braking within the reaction time [s]
  double d_1b = 0.0;    // distance covered while braking [m]
  double v_1rb = 0.0;   // speed at the end of the reaction time [m/s]
  double tau_1l = 0.0;  // duration of one lateral lane change [s]
  double tau_1a = 0.0;  // duration of the acceleration alongside [s]
  double d_1a = 0.0;    // distance covered while accelerating [m]
  double v_1ra = 0.0;   // speed after accelerating [m/s]
  double d_1e = 0.0;    // total ego distance [m]
  double t_e = 0.0;     // end of the passing maneuver [s]
  double d_2e = 0.0;    // opposing vehicle distance until t_e [m]
  double v_2re = 0.0;   // opposing vehicle speed at t_e [m/s]
};

struct OpponentState {
  double t_e = 0.0;
  double d_2e = 0.0;
  double v_2re = 0.0;
};

// How long the opposing vehicle keeps accelerating in the final head-on check.
enum class OpponentHorizon {
  kEgoStopTime,        // until the ego is at rest after its final reaction
  kReactionBrakeTime,  // the braking time t_1b of the initial reaction
};

// The three dot-product conditions: ego heading for the static object, the
// opposing vehicle heading for it, and the opposing vehicle behind it.
bool RttPrimeGeometry(const ObjectState& ego, const ObjectState& opposing,
                      const ObjectState& static_object);

// Geometry holds and the static object is relevant to the ego on its own.
bool RttPrimeApplicable(const ObjectState& ego, const ObjectState& opposing,
                        const ObjectState& static_object,
                        const EgoCapabilities& capabilities,
                        const WorldAssumptions& world);

PassingGeometry MakePassingGeometry(const ObjectState& ego,
                                    const ObjectState& opposing,
                                    const ObjectState& static_object);

// Fills the ego part (t_1b through d_1e) of the timeline.
ManeuverTimeline RttPrimeEgoManeuver(const PassingGeometry& geometry,
                                     const EgoCapabilities& capabilities,
                                     const WorldAssumptions& world);

// Opposing vehicle accelerating with a_max toward the ego for t_e seconds.
OpponentState AdvanceOpponent(double t_e, double v_2r0,
                              const WorldAssumptions& world);

OpponentState RttPrimeOpponentState(const ManeuverTimeline& timeline,
                                    double v_2r0,
                                    const WorldAssumptions& world,
                                    const EgoCapabilities& capabilities);

// Ego maneuver followed by the opponent state.
ManeuverTimeline RttPrimeTimeline(const PassingGeometry& geometry,
                                  const EgoCapabilities& capabilities,
                                  const WorldAssumptions& world);

double RttPrimeMargin(
    const PassingGeometry& geometry, const EgoCapabilities& capabilities,
    const WorldAssumptions& world,
    OpponentHorizon horizon = OpponentHorizon::kEgoStopTime);

// Largest lateral distance to another vehicle's travel line for which the
// merging check still applies: ego perpendicular stopping distance plus the
// lateral reach of the other vehicle within the ego's braking time.
double TxtPrimeGateThreshold(double v_1perp0,
                             const EgoCapabilities& capabilities,
                             const WorldAssumptions& world);

bool TxtPrimeLateralGate(double v_1perp0, double r_1perp0,
                         const EgoCapabilities& capabilities,
                         const WorldAssumptions& world);

// Half lengths of the two participants along the radial axis.
struct PairExtents {
  double ego = 0.0;
  double object = 0.0;
  double sum() const { return ego + object; }
};

struct PairwiseResult {
  bool relevant = false;
  double d_min = 0.0;  // +inf when a gate excludes the pair
};

// Radial worst case along the other vehicle's travel line, toward the ego's
// foot point. Lasts at least the ego's perpendicular braking time.
double TxtMergingMargin(const RadialTangentialState& state, PairExtents extents,
                        const EgoCapabilities& capabilities,
                        const WorldAssumptions& world);

PairwiseResult BasePairwiseRelevant(ScenarioClass scenario_class,
                                    const RadialTangentialState& state,
                                    PairExtents extents,
                                    const EgoCapabilities& capabilities,
                                    const WorldAssumptions& world);

// Intersection extension, evaluated for every tangential pair.
PairwiseResult TxtPrimeRelevant(const RadialTangentialState& state,
                                PairExtents extents,
                                const EgoCapabilities& capabilities,
                                const WorldAssumptions& world);

struct RelevanceVerdict {
  std::string object_id;
  bool relevant = false;
  std::set<Scenario> triggering_scenarios;
  std::map<Scenario, double> margins;  // d_min per evaluated scenario [m]

  friend bool operator==(const RelevanceVerdict&,
                         const RelevanceVerdict&) = default;
};

struct RelevanceOptions {
  bool enable_rtt_prime = false;
  OpponentHorizon opponent_horizon = OpponentHorizon::kEgoStopTime;
  ClassifierConfig classifier;
  RegionBounds region;
};

// Verdicts for every object of the region-filtered scene other than the ego,
// sorted by object id. A verdict is the union over all evaluated scenarios.
std::vector<RelevanceVerdict> RelevantObjects(
    const Scene& scene, const EgoCapabilities& capabilities,
    const WorldAssumptions& world, const RelevanceOptions& options = {});

}  // namespace relval

#endif  // RELVAL_RELEVANCE_H_

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

#ifndef RELVAL_KINEMATIC_ORACLE_H_
#define RELVAL_KINEMATIC_ORACLE_H_

#include <limits>
#include <vector>

namespace relval::oracle {

// Duration of a phase that lasts until the end of the episode (or, for a
// braking phase, until standstill).
inline constexpr double kOpenEnded = std::numeric_limits<double>::infinity();

// One piece of a piecewise-constant acceleration profile along a 1D axis.
// Speeds are signed, positive toward the other agent.
struct Phase {
  enum class Kind {
    // Constant signed acceleration; the speed may change sign.
    kAccelerate,
    // Deceleration of magnitude `accel` against the current speed. The speed
    // stops at zero and stays there for the remainder of the phase.
    kBrake,
  };
  Kind kind = Kind::kAccelerate;
  double accel = 0.0;     // [m/s^2]; a magnitude for kBrake
  double duration = 0.0;  // [s]; kOpenEnded allowed

  static Phase Accelerate(double accel, double duration) {
    return {Kind::kAccelerate, accel, duration};
  }
  static Phase Coast(double duration) { return Accelerate(0.0, duration); }
  static Phase Brake(double decel, double duration = kOpenEnded) {
    return {Kind::kBrake, decel, duration};
  }
};

struct AgentPlan {
  double initial_speed = 0.0;
  std::vector<Phase> phases;
};

// Two agents closing along a common axis. The gap shrinks by the sum of both
// agents' displacements toward each other.
//
// The episode lasts until every agent has finished its bounded phases (an
// open-ended braking phase ends at standstill, an open-ended acceleration
// phase never bounds the episode) and at least `horizon` seconds. An agent
// whose plan is exhausted keeps its final speed.
struct PhasePlan {
  AgentPlan first;
  AgentPlan second;
  double initial_gap = 0.0;  // center distance [m]
  double extents = 0.0;      // summed half extents along the axis [m]
  double horizon = 0.0;      // minimum episode length [s]
};

struct AgentOutcome {
  double displacement = 0.0;  // toward the other agent [m]
  double final_speed = 0.0;
  double finish_time = 0.0;   // end of the last bounded phase [s]
};

struct SimulationResult {
  double min_gap = 0.0;  // minimum of (center gap - extents) [m]
  double min_gap_time = 0.0;
  double final_gap = 0.0;
  double duration = 0.0;
  AgentOutcome first;
  AgentOutcome second;
};

// Fixed-step integration of both agents. Steps are shortened to land on phase
// boundaries and standstill events; the minimum is sampled at step ends.
// Requires dt > 0 and an episode of finite length.
SimulationResult SimulateMinGap(const PhasePlan& plan, double dt);

// Convenience for a single agent against a static object.
SimulationResult SimulateSingle(const AgentPlan& agent, double initial_gap,
                                double extents, double dt);

}  // namespace relval::oracle

#endif  // RELVAL_KINEMATIC_ORACLE_H_

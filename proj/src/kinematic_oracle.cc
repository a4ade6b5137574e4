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

#include "relval/kinematic_oracle.h"

#include <algorithm>
#include <cmath>

#include "relval/error.h"

namespace relval::oracle {
namespace {

constexpr double kMaxEpisode = 1.0e4;  // [s]
constexpr double kTimeEps = 1.0e-12;

class AgentStepper {
 public:
  explicit AgentStepper(const AgentPlan& plan)
      : plan_(plan), speed_(plan.initial_speed) {
    for (const Phase& p : plan.phases) {
      if (!(p.duration >= 0.0) || !(p.accel == p.accel)) {
        throw DomainError("phase durations must be >= 0");
      }
      if (p.kind == Phase::Kind::kBrake && p.accel < 0.0) {
        throw DomainError("braking deceleration must be a magnitude");
      }
    }
    SkipFinishedPhases(0.0);
  }

  // True once only an open-ended acceleration (or nothing) remains.
  bool Finished() const {
    if (index_ >= plan_.phases.size()) return true;
    const Phase& p = plan_.phases[index_];
    return p.kind == Phase::Kind::kAccelerate && std::isinf(p.duration);
  }

  double TimeToNextEvent() const {
    if (index_ >= plan_.phases.size()) return kOpenEnded;
    const Phase& p = plan_.phases[index_];
    double next = p.duration - elapsed_;
    if (p.kind == Phase::Kind::kBrake && speed_ != 0.0 && p.accel > 0.0) {
      next = std::min(next, std::abs(speed_) / p.accel);
    }
    return std::max(next, 0.0);
  }

  void Advance(double h, double now) {
    const double accel = CurrentAccel();
    bool reaches_stop = false;
    double step = h;
    if (index_ < plan_.phases.size()) {
      const Phase& p = plan_.phases[index_];
      if (p.kind == Phase::Kind::kBrake && speed_ != 0.0 && p.accel > 0.0) {
        const double stop = std::abs(speed_) / p.accel;
        if (stop <= h * (1.0 + kTimeEps)) {
          reaches_stop = true;
          step = std::min(h, stop);
        }
      }
    }
    displacement_ += speed_ * step + 0.5 * accel * step * step;
    speed_ = reaches_stop ? 0.0 : speed_ + accel * step;
    elapsed_ += h;
    SkipFinishedPhases(now + h);
  }

  double displacement() const { return displacement_; }
  double speed() const { return speed_; }
  double finish_time() const { return finish_time_; }

 private:
  double CurrentAccel() const {
    if (index_ >= plan_.phases.size()) return 0.0;
    const Phase& p = plan_.phases[index_];
    if (p.kind == Phase::Kind::kAccelerate) return p.accel;
    if (speed_ == 0.0) return 0.0;
    return speed_ > 0.0 ? -p.accel : p.accel;
  }

  void SkipFinishedPhases(double now) {
    while (index_ < plan_.phases.size()) {
      const Phase& p = plan_.phases[index_];
      const bool timed_out =
          !std::isinf(p.duration) &&
          elapsed_ >= p.duration - kTimeEps * std::max(1.0, p.duration);
      const bool halted = p.kind == Phase::Kind::kBrake &&
                          std::isinf(p.duration) && speed_ == 0.0;
      if (!timed_out && !halted) break;
      ++index_;
      elapsed_ = 0.0;
      finish_time_ = now;
    }
  }

  const AgentPlan& plan_;
  std::size_t index_ = 0;
  double elapsed_ = 0.0;
  double speed_ = 0.0;
  double displacement_ = 0.0;
  double finish_time_ = 0.0;
};

}  // namespace

SimulationResult SimulateMinGap(const PhasePlan& plan, double dt) {
  if (!(dt > 0.0)) throw DomainError("dt must be > 0");
  AgentStepper first(plan.first);
  AgentStepper second(plan.second);

  const double base = plan.initial_gap - plan.extents;
  SimulationResult result;
  result.min_gap = base;
  double t = 0.0;
  double gap = base;
  while (!(first.Finished() && second.Finished() &&
           t >= plan.horizon - kTimeEps * std::max(1.0, plan.horizon))) {
    if (t > kMaxEpisode) throw DomainError("episode does not terminate");
    double h = dt;
    if (!first.Finished()) h = std::min(h, first.TimeToNextEvent());
    if (!second.Finished()) h = std::min(h, second.TimeToNextEvent());
    if (t < plan.horizon) h = std::min(h, plan.horizon - t);
    first.Advance(h, t);
    second.Advance(h, t);
    t += h;
    gap = base - first.displacement() - second.displacement();
    if (gap < result.min_gap) {
      result.min_gap = gap;
      result.min_gap_time = t;
    }
  }
  result.final_gap = gap;
  result.duration = t;
  result.first = {first.displacement(), first.speed(), first.finish_time()};
  result.second = {second.displacement(), second.speed(),
                   second.finish_time()};
  return result;
}

SimulationResult SimulateSingle(const AgentPlan& agent, double initial_gap,
                                double extents, double dt) {
  PhasePlan plan;
  plan.first = agent;
  plan.initial_gap = initial_gap;
  plan.extents = extents;
  return SimulateMinGap(plan, dt);
}

}  // namespace relval::oracle

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

#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "relval/error.h"

namespace relval::oracle {
namespace {

TEST(OracleTest, ZeroMotionKeepsInitialGap) {
  PhasePlan plan;
  plan.initial_gap = 20.0;
  plan.extents = 3.5;
  plan.horizon = 5.0;
  const auto r = SimulateMinGap(plan, 1e-3);
  EXPECT_DOUBLE_EQ(r.min_gap, 16.5);
  EXPECT_DOUBLE_EQ(r.final_gap, 16.5);
  EXPECT_NEAR(r.duration, 5.0, 1e-9);
}

TEST(OracleTest, BrakingReproducesStoppingDistance) {
  const auto r = SimulateSingle({10.0, {Phase::Brake(4.0)}}, 100.0, 0.0, 1e-3);
  EXPECT_NEAR(r.first.displacement, 12.5, 1e-6);
  EXPECT_EQ(r.first.final_speed, 0.0);
  EXPECT_NEAR(r.first.finish_time, 2.5, 1e-9);
  EXPECT_NEAR(r.min_gap, 87.5, 1e-6);
}

TEST(OracleTest, BoundedBrakeNeverReverses) {
  const auto r =
      SimulateSingle({3.0, {Phase::Brake(2.0, 10.0)}}, 50.0, 0.0, 0.01);
  EXPECT_NEAR(r.first.displacement, 2.25, 1e-9);
  EXPECT_EQ(r.first.final_speed, 0.0);
  EXPECT_NEAR(r.duration, 10.0, 1e-9);
}

TEST(OracleTest, PhaseSequenceAccumulates) {
  // 1 s at +3 from 10, 2 s coasting, then braking with 4
  const AgentPlan ego{10.0, {Phase::Accelerate(3.0, 1.0), Phase::Coast(2.0),
                             Phase::Brake(4.0)}};
  const auto r = SimulateSingle(ego, 200.0, 0.0, 1e-3);
  const double want = (10.0 + 1.5) + 13.0 * 2.0 + 13.0 * 13.0 / 8.0;
  EXPECT_NEAR(r.first.displacement, want, 1e-6);
  EXPECT_NEAR(r.first.finish_time, 3.0 + 13.0 / 4.0, 1e-9);
}

TEST(OracleTest, ExhaustedPlanHoldsSpeedUntilHorizon) {
  PhasePlan plan;
  plan.first = {2.0, {Phase::Accelerate(1.0, 1.0)}};
  plan.initial_gap = 100.0;
  plan.horizon = 3.0;
  const auto r = SimulateMinGap(plan, 0.01);
  EXPECT_NEAR(r.first.displacement, 2.5 + 3.0 * 2.0, 1e-9);
  EXPECT_NEAR(r.first.final_speed, 3.0, 1e-12);
}

TEST(OracleTest, TwoAgentsClose) {
  PhasePlan plan;
  plan.first = {5.0, {Phase::Brake(5.0)}};
  plan.second = {2.0, {Phase::Accelerate(1.0, 2.0)}};
  plan.initial_gap = 30.0;
  plan.extents = 4.0;
  const auto r = SimulateMinGap(plan, 1e-3);
  EXPECT_NEAR(r.min_gap, 26.0 - 2.5 - 6.0, 1e-6);
}

TEST(OracleTest, RejectsBadInput) {
  EXPECT_THROW(SimulateSingle({1.0, {}}, 1.0, 0.0, 0.0), DomainError);
  EXPECT_THROW(SimulateSingle({1.0, {Phase::Coast(-1.0)}}, 1.0, 0.0, 0.1),
               DomainError);
  EXPECT_THROW(SimulateSingle({1.0, {Phase::Brake(-1.0)}}, 1.0, 0.0, 0.1),
               DomainError);
}

// Closing then receding: the minimum lies strictly inside a phase at
// t = 2.5 s where the approach displacement peaks at 6.25 m.
double InteriorMinimumError(double dt) {
  PhasePlan plan;
  plan.first = {5.0, {Phase::Accelerate(-2.0, 5.0)}};
  plan.initial_gap = 10.0;
  const auto r = SimulateMinGap(plan, dt);
  return std::abs(r.min_gap - (10.0 - 6.25));
}

TEST(OracleTest, HalvingStepAtLeastHalvesDeviation) {
  double previous = InteriorMinimumError(0.3);
  EXPECT_GT(previous, 1e-6);
  for (double dt : {0.15, 0.075, 0.0375}) {
    const double e = InteriorMinimumError(dt);
    EXPECT_LE(e, 0.5 * previous + 1e-13) << "dt=" << dt;
    previous = e;
  }
}

TEST(OracleTest, RichardsonConsistencyAtTwoStepSizes) {
  EXPECT_LE(InteriorMinimumError(1e-3), 1e-5);
  EXPECT_LE(InteriorMinimumError(1e-4), 1e-7);
}

TEST(OracleTest, MinGapNonDecreasingInInitialGap) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> v(-10, 15), a(0.5, 5), d(0, 3),
      g(0, 80), inc(0, 10);
  for (int i = 0; i < 500; ++i) {
    PhasePlan plan;
    plan.first = {v(rng), {Phase::Accelerate(a(rng), d(rng)), Phase::Brake(a(rng))}};
    plan.second = {v(rng), {Phase::Accelerate(a(rng) - 2.5, d(rng))}};
    plan.extents = 2.0;
    plan.horizon = d(rng);
    plan.initial_gap = g(rng);
    const double lo = SimulateMinGap(plan, 1e-2).min_gap;
    plan.initial_gap += inc(rng);
    EXPECT_GE(SimulateMinGap(plan, 1e-2).min_gap, lo);
  }
}

}  // namespace
}  // namespace relval::oracle

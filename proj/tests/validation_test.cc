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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <set>

#include "relval/error.h"

namespace relval {
namespace {

ObjectState Make(std::string id, ObjectCategory c, double x, double y,
                 double vx = 0.0) {
  ObjectState o;
  o.id = std::move(id);
  o.category = c;
  o.position = Vec2(x, y);
  o.velocity = Vec2(vx, 0);
  o.half_extent_long = 2.0;
  o.half_extent_lat = 0.9;
  return o;
}

Scene Street() {
  Scene s;
  s.token = "street";
  s.ego = Make("ego", ObjectCategory::kVehicle, 0, 0, 8);
  s.target_agent = "t";
  s.objects = {s.ego,
               Make("t", ObjectCategory::kVehicle, -15, 3.5, 6),
               Make("in19", ObjectCategory::kVehicle, 20, 1.9),
               Make("out21", ObjectCategory::kVehicle, 25, -2.1),
               Make("edge", ObjectCategory::kVehicle, 30, 2.0),
               Make("behind", ObjectCategory::kVehicle, -20, 0.0),
               Make("walker", ObjectCategory::kPedestrian, 10, 0.5)};
  return s;
}

std::set<std::string> Ids(const Scene& s) {
  std::set<std::string> ids;
  for (const auto& o : s.objects) ids.insert(o.id);
  return ids;
}

TEST(ConditionTest, AIsIdentity) {
  const Scene s = Street();
  EXPECT_EQ(ApplyCondition(s, Condition::A()), s);
}

TEST(ConditionTest, RvKeepsOnlyTheTarget) {
  const Scene rv = ApplyCondition(Street(), Condition::RV());
  EXPECT_EQ(Ids(rv), std::set<std::string>{"t"});
  EXPECT_EQ(rv.ego, Street().ego);
  EXPECT_EQ(ApplyCondition(rv, Condition::RV()), rv);
}

TEST(ConditionTest, Rv2CorridorBoundaries) {
  const Scene s = Street();
  const Scene rv2 = ApplyCondition(s, Condition::RV2());
  EXPECT_EQ(Ids(rv2),
            (std::set<std::string>{"ego", "t", "out21", "behind", "walker"}));
  EXPECT_EQ(ApplyCondition(rv2, Condition::RV2()), rv2);

  Rv2Options both_ways;
  both_ways.forward_only = false;
  EXPECT_FALSE(Ids(ApplyCondition(s, Condition::RV2(both_ways))).contains("behind"));

  Rv2Options open;
  open.inclusive = false;
  EXPECT_TRUE(Ids(ApplyCondition(s, Condition::RV2(open))).contains("edge"));
}

TEST(ConditionTest, Rv2NeverRemovesTheTarget) {
  Scene s = Street();
  s.objects[1].position = Vec2(12, 0);
  EXPECT_TRUE(Ids(ApplyCondition(s, Condition::RV2())).contains("t"));
}

TEST(ConditionTest, RNeedsVerdicts) {
  EXPECT_THROW(ApplyCondition(Street(), Condition::R()), InputError);
}

TEST(ConditionTest, RKeepsRelevantAndTarget) {
  const Scene s = Street();
  std::vector<RelevanceVerdict> v(3);
  v[0].object_id = "in19";
  v[0].relevant = true;
  v[1].object_id = "walker";
  v[1].relevant = false;
  v[2].object_id = "t";
  v[2].relevant = false;
  const Scene r = ApplyCondition(s, Condition::R(), &v);
  EXPECT_EQ(Ids(r), (std::set<std::string>{"t", "in19"}));
}

TEST(ConditionTest, CustomFilter) {
  Condition c{"drop-walker", ConditionKind::kCustom, {}, [](const Scene& s) {
                Scene out = s;
                std::erase_if(out.objects,
                              [](const ObjectState& o) { return o.id == "walker"; });
                return out;
              }};
  EXPECT_FALSE(Ids(ApplyCondition(Street(), c)).contains("walker"));
  c.custom = nullptr;
  EXPECT_THROW(ApplyCondition(Street(), c), InputError);
}

class ConstantPredictor : public Predictor {
 public:
  explicit ConstantPredictor(std::string fail_on = "")
      : fail_on_(std::move(fail_on)) {}
  PredictionSet Predict(const Scene& scene, std::uint64_t) const override {
    if (scene.token == fail_on_) throw DomainError("boom");
    PredictionSet p;
    Trajectory t;
    const double shift = static_cast<double>(scene.objects.size());
    for (int i = 0; i < 12; ++i) t.waypoints.emplace_back(i + shift, 0);
    p.modes.push_back(t);
    return p;
  }
  int horizon_steps() const override { return 12; }

 private:
  std::string fail_on_;
};

class CampaignTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    dataset_ = new std::vector<Scene>(GenerateSyntheticDataset(200, 7));
    result_ = new CampaignResult(
        RunCampaign(*dataset_, SurrogatePredictor(), CampaignConfig{}));
  }
  static void TearDownTestSuite() {
    delete dataset_;
    delete result_;
  }
  static std::vector<Scene>* dataset_;
  static CampaignResult* result_;
};
std::vector<Scene>* CampaignTest::dataset_ = nullptr;
CampaignResult* CampaignTest::result_ = nullptr;

TEST_F(CampaignTest, SampleCountAndOrder) {
  const auto& s = result_->samples;
  ASSERT_EQ(s.size(), 200u * 4u * 10u);
  EXPECT_TRUE(result_->failures.empty());
  EXPECT_EQ(s.front().condition, "A");
  EXPECT_EQ(s.front().run_index, 0);
  EXPECT_EQ(s.front().scene_token, (*dataset_)[0].token);
  EXPECT_EQ(s[2000].condition, "R");
  EXPECT_EQ(s[201].run_index, 1);
  for (const auto& e : s) EXPECT_GE(e.min_ade, 0.0);
}

TEST_F(CampaignTest, DeterministicAcrossThreadCounts) {
  CampaignConfig c;
  c.jobs = 4;
  EXPECT_EQ(RunCampaign(*dataset_, SurrogatePredictor(), c).samples,
            result_->samples);
}

TEST_F(CampaignTest, FilteringDoesNotChangeSurrogateOutput) {
  std::map<std::pair<int, std::string>, double> a;
  for (const auto& e : result_->samples) {
    if (e.condition == "A") a[{e.run_index, e.scene_token}] = e.min_ade;
  }
  for (const auto& e : result_->samples) {
    if (e.condition == "R") EXPECT_EQ(e.min_ade, (a[{e.run_index, e.scene_token}]));
  }
}

TEST_F(CampaignTest, PairingCounts) {
  EXPECT_EQ(PairwisePValues(result_->samples, "A", "A").size(), 45u);
  EXPECT_EQ(PairwisePValues(result_->samples, "A", "RV").size(), 100u);
  EXPECT_THROW(PairwisePValues(result_->samples, "A", "nope"), InputError);
}

TEST_F(CampaignTest, VerdictsOnTheSurrogate) {
  const Verdict rv = ValidateFilter(result_->samples, "RV");
  EXPECT_TRUE(rv.falsified);
  const Verdict r = ValidateFilter(result_->samples, "R");
  EXPECT_FALSE(r.falsified);
  EXPECT_GT(r.median_p, 0.005);
  const Verdict never = ValidateFilter(result_->samples, "RV", 0.0);
  EXPECT_FALSE(never.falsified);
  const Verdict again = ValidateFilter(result_->samples, "R");
  EXPECT_EQ(again.median_p, r.median_p);
  EXPECT_EQ(again.noise_q25, r.noise_q25);
}

TEST_F(CampaignTest, NoiseAndMeans) {
  EXPECT_GT(RunToRunNoise(result_->samples, "A"), 0.0);
  const auto means = ConditionMeans(result_->samples);
  ASSERT_EQ(means.size(), 4u);
  EXPECT_EQ(means[0].first, "A");
  EXPECT_GT(means[2].second, means[0].second);
}

TEST_F(CampaignTest, RemovalFractions) {
  const CampaignConfig c;
  EXPECT_EQ(MeasureRemoval(*dataset_, Condition::A(), c).removed, 0u);
  const FilterFraction rv = MeasureRemoval(*dataset_, Condition::RV(), c);
  const FilterFraction rv2 = MeasureRemoval(*dataset_, Condition::RV2(), c);
  EXPECT_GT(rv.in_region, 0u);
  EXPECT_GT(rv.fraction(), rv2.fraction());
  EXPECT_GT(rv2.removed, 0u);
}

TEST(CampaignSmallTest, DeterministicPredictorGivesUnitPermutationP) {
  const auto data = GenerateSyntheticDataset(30, 2);
  CampaignConfig c;
  c.runs = 3;
  c.conditions = {Condition::A()};
  const auto result = RunCampaign(data, ConstantPredictor(), c);
  stats::PValueOptions opt;
  opt.mode = stats::PValueMode::kPermutation;
  opt.permutations = 199;
  for (const auto& pp : PairwisePValues(result.samples, "A", "A", opt)) {
    EXPECT_EQ(pp.p, 1.0);
  }
}

TEST(CampaignSmallTest, FailuresAreRecordedAndExcluded) {
  const auto data = GenerateSyntheticDataset(10, 2);
  CampaignConfig c;
  c.runs = 2;
  c.conditions = {Condition::A(), Condition::RV()};
  const auto result = RunCampaign(data, ConstantPredictor(data[3].token), c);
  EXPECT_EQ(result.samples.size(), 2u * 2u * 9u);
  ASSERT_EQ(result.failures.size(), 4u);
  EXPECT_EQ(result.failures[0].scene_token, data[3].token);
  for (const auto& e : result.samples) EXPECT_NE(e.scene_token, data[3].token);
}

TEST(CampaignSmallTest, SingleRunCannotBePaired) {
  const auto data = GenerateSyntheticDataset(10, 2);
  CampaignConfig c;
  c.runs = 1;
  const auto result = RunCampaign(data, ConstantPredictor(), c);
  EXPECT_THROW(PairwisePValues(result.samples, "A", "A"), InputError);
  EXPECT_THROW(ValidateFilter(result.samples, "R"), InputError);
}

TEST(CampaignSmallTest, BadConfigThrows) {
  CampaignConfig c;
  EXPECT_THROW(RunCampaign({}, ConstantPredictor(), c), InputError);
  c.runs = 0;
  EXPECT_THROW(RunCampaign(GenerateSyntheticDataset(2, 1), ConstantPredictor(), c),
               InputError);
}

TEST(RunSeedTest, DistinctPerRunAndScene) {
  EXPECT_NE(RunSeed(7, 0, "a"), RunSeed(7, 1, "a"));
  EXPECT_NE(RunSeed(7, 0, "a"), RunSeed(7, 0, "b"));
  EXPECT_NE(RunSeed(7, 0, "a"), RunSeed(8, 0, "a"));
  EXPECT_EQ(RunSeed(7, 3, "a"), RunSeed(7, 3, "a"));
}

}  // namespace
}  // namespace relval

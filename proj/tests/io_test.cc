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

#include "relval/io.h"

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>

#include "relval/error.h"
#include "relval/surrogate.h"

namespace relval::io {
namespace {

TEST(Round9Test, KeepsNineDigits) {
  EXPECT_EQ(Round9(1.0), 1.0);
  EXPECT_EQ(Round9(0.1234567891234), 0.123456789);
  EXPECT_EQ(Round9(-12345.678912), -12345.6789);
  EXPECT_EQ(Round9(Round9(3.14159265358979)), Round9(3.14159265358979));
}

TEST(SceneFileTest, TextIsAFixedPoint) {
  const auto scenes = GenerateSyntheticDataset(50, 5);
  std::ostringstream first;
  WriteScenes(first, scenes);
  std::istringstream in(first.str());
  const auto parsed = ReadScenes(in);
  ASSERT_EQ(parsed.size(), scenes.size());
  std::ostringstream second;
  WriteScenes(second, parsed);
  EXPECT_EQ(first.str(), second.str());
  // parsing a second time is lossless
  std::istringstream in2(second.str());
  EXPECT_EQ(ReadScenes(in2), parsed);
}

TEST(SceneFileTest, FieldsSurvive) {
  Scene s = GenerateSyntheticDataset(1, 9)[0];
  s.capability_overrides.reaction_time = 0.75;
  s.capability_overrides.guaranteed_accel = 2.5;
  const Scene back = ParseSceneLine(FormatSceneLine(s));
  EXPECT_EQ(back.token, s.token);
  EXPECT_EQ(back.target_agent, s.target_agent);
  EXPECT_EQ(back.objects.size(), s.objects.size());
  EXPECT_EQ(back.capability_overrides.reaction_time, 0.75);
  EXPECT_EQ(back.capability_overrides.guaranteed_accel, 2.5);
  EXPECT_FALSE(back.capability_overrides.guaranteed_brake);
  EXPECT_EQ(back.ground_truth_future.size(), 12u);
  for (std::size_t i = 0; i < s.objects.size(); ++i) {
    EXPECT_EQ(back.objects[i].id, s.objects[i].id);
    EXPECT_EQ(back.objects[i].category, s.objects[i].category);
    EXPECT_EQ(back.objects[i].position.x(), Round9(s.objects[i].position.x()));
    EXPECT_EQ(back.objects[i].heading, Round9(s.objects[i].heading));
  }
}

TEST(SceneFileTest, MalformedInputIsRejected) {
  const std::string good = FormatSceneLine(GenerateSyntheticDataset(1, 9)[0]);
  EXPECT_NO_THROW(ParseSceneLine(good));
  EXPECT_THROW(ParseSceneLine("{"), InputError);
  EXPECT_THROW(ParseSceneLine("[]"), InputError);
  EXPECT_THROW(ParseSceneLine(R"({"token":"x"})"), InputError);
  std::string bad_category = good;
  bad_category.replace(bad_category.find("\"vehicle\""), 9, "\"boat\"");
  EXPECT_THROW(ParseSceneLine(bad_category), InputError);
  std::string no_target = good;
  no_target.replace(no_target.find("\"target_agent\":\"target\""), 23,
                    "\"target_agent\":\"ghost\"");
  // structurally fine, semantically invalid
  EXPECT_THROW(Validate(ParseSceneLine(no_target), 12), InputError);
  std::istringstream in(good + "\n\n" + "{oops}\n");
  try {
    ReadScenes(in);
    FAIL();
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("line 3"), std::string::npos);
  }
}

TEST(SampleFileTest, HeaderAndRoundTrip) {
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> err(1.0);
  std::vector<ErrorSample> samples;
  for (int i = 0; i < 200; ++i) {
    samples.push_back({i % 2 ? "A" : "RV2", i % 10, "scene-" + std::to_string(i),
                       Round9(err(rng))});
  }
  std::ostringstream out;
  WriteSamples(out, samples);
  EXPECT_EQ(out.str().substr(0, kSampleHeader.size() + 1),
            std::string(kSampleHeader) + "\n");
  EXPECT_EQ(out.str().substr(kSampleHeader.size() + 1, 2), "RV");
  std::istringstream in(out.str());
  EXPECT_EQ(ReadSamples(in), samples);
}

TEST(SampleFileTest, BadRowsAreRejected) {
  const std::string h = std::string(kSampleHeader) + "\n";
  const auto read = [](const std::string& text) {
    std::istringstream in(text);
    return ReadSamples(in);
  };
  EXPECT_EQ(read(h).size(), 0u);
  EXPECT_EQ(read(h + "A,0,s,1.5\n").at(0).min_ade, 1.5);
  EXPECT_THROW(read(""), InputError);
  EXPECT_THROW(read("cond,run,scene,err\nA,0,s,1\n"), InputError);
  EXPECT_THROW(read(h + "A,0,s\n"), InputError);
  EXPECT_THROW(read(h + "A,x,s,1\n"), InputError);
  EXPECT_THROW(read(h + "A,-1,s,1\n"), InputError);
  EXPECT_THROW(read(h + "A,0,s,-0.5\n"), InputError);
  EXPECT_THROW(read(h + "A,0,s,nan\n"), InputError);
  EXPECT_THROW(read(h + "A,0,s,1m\n"), InputError);
  EXPECT_THROW(read(h + ",0,s,1\n"), InputError);
}

TEST(SampleFileTest, FilesOnDisk) {
  const auto dir = std::filesystem::temp_directory_path() / "relval_io_test";
  std::filesystem::create_directories(dir);
  const std::vector<ErrorSample> samples = {{"A", 0, "s", 0.5}, {"R", 1, "s", 2}};
  WriteSampleFile(dir / "s.csv", samples);
  EXPECT_EQ(ReadSampleFile(dir / "s.csv"), samples);
  EXPECT_THROW(ReadSampleFile(dir / "missing.csv"), InputError);
  std::filesystem::remove_all(dir);
}

TEST(VerdictLineTest, Format) {
  RelevanceVerdict v;
  v.object_id = "car";
  v.relevant = true;
  v.triggering_scenarios = {Scenario::kRTA};
  v.margins = {{Scenario::kRTA, -1.25},
               {Scenario::kRTT, std::numeric_limits<double>::infinity()}};
  EXPECT_EQ(FormatVerdictLine("tok", {v}),
            R"({"objects":[{"id":"car","margins":{"R.TA":-1.25,"R.TT":null},)"
            R"("relevant":true,"scenarios":["R.TA"]}],"token":"tok"})");
  EXPECT_EQ(FormatVerdictLine("e", {}), R"({"objects":[],"token":"e"})");
}

TEST(ConfigTest, Parsing) {
  const ConfigMap c = ParseConfig(
      "# campaign\n"
      "seed = 11\n"
      "  runs=4   # fewer\n"
      "\n"
      "seed = 12\n"
      "pvalue_mode = permutation\n");
  EXPECT_EQ(c.size(), 3u);
  EXPECT_EQ(c.at("seed"), "12");
  EXPECT_EQ(c.at("runs"), "4");
  EXPECT_EQ(c.at("pvalue_mode"), "permutation");
  EXPECT_THROW(ParseConfig("novalue\n"), InputError);
  EXPECT_THROW(ParseConfig(" = 3\n"), InputError);
  EXPECT_TRUE(ParseConfig("# only\n\n").empty());
}

}  // namespace
}  // namespace relval::io

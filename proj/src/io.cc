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

#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "relval/error.h"

namespace relval::io {

using nlohmann::json;

double Round9(double value) {
  if (!std::isfinite(value)) return value;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", value);
  return std::strtod(buf, nullptr);
}

namespace {

json ObjectToJson(const ObjectState& o) {
  json j;
  j["id"] = o.id;
  j["category"] = std::string(ToString(o.category));
  j["x"] = Round9(o.position.x());
  j["y"] = Round9(o.position.y());
  j["heading"] = Round9(o.heading);
  j["vx"] = Round9(o.velocity.x());
  j["vy"] = Round9(o.velocity.y());
  j["half_extent_long"] = Round9(o.half_extent_long);
  j["half_extent_lat"] = Round9(o.half_extent_lat);
  return j;
}

double Number(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number()) {
    throw InputError(std::string("missing numeric field '") + key + "'");
  }
  return j[key].get<double>();
}

std::string Text(const json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw InputError(std::string("missing string field '") + key + "'");
  }
  return j[key].get<std::string>();
}

ObjectState ObjectFromJson(const json& j) {
  if (!j.is_object()) throw InputError("object record must be a JSON object");
  ObjectState o;
  o.id = Text(j, "id");
  const std::string category = Text(j, "category");
  const auto parsed = ParseObjectCategory(category);
  if (!parsed) throw InputError("unknown category '" + category + "'");
  o.category = *parsed;
  o.position = Vec2(Number(j, "x"), Number(j, "y"));
  o.heading = Number(j, "heading");
  o.velocity = Vec2(Number(j, "vx"), Number(j, "vy"));
  o.half_extent_long = Number(j, "half_extent_long");
  o.half_extent_lat = Number(j, "half_extent_lat");
  return o;
}

constexpr const char* kOverrideKeys[] = {"reaction_time", "guaranteed_brake",
                                         "guaranteed_lateral_brake",
                                         "guaranteed_accel"};

std::optional<double>* OverrideField(CapabilityOverrides& c, int i) {
  switch (i) {
    case 0: return &c.reaction_time;
    case 1: return &c.guaranteed_brake;
    case 2: return &c.guaranteed_lateral_brake;
    default: return &c.guaranteed_accel;
  }
}

}  // namespace

std::string FormatSceneLine(const Scene& scene) {
  json j;
  j["token"] = scene.token;
  j["ego"] = ObjectToJson(scene.ego);
  json overrides = json::object();
  CapabilityOverrides c = scene.capability_overrides;
  for (int i = 0; i < 4; ++i) {
    if (const auto& v = *OverrideField(c, i)) {
      overrides[kOverrideKeys[i]] = Round9(*v);
    }
  }
  j["capability_overrides"] = overrides;
  json objects = json::array();
  for (const ObjectState& o : scene.objects) objects.push_back(ObjectToJson(o));
  j["objects"] = objects;
  j["target_agent"] = scene.target_agent;
  json future = json::array();
  for (const Vec2& p : scene.ground_truth_future) {
    future.push_back({Round9(p.x()), Round9(p.y())});
  }
  j["ground_truth_future"] = future;
  return j.dump();
}

Scene ParseSceneLine(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw InputError(std::string("malformed scene line: ") + e.what());
  }
  if (!j.is_object()) throw InputError("scene line must be a JSON object");
  try {
    Scene s;
    s.token = Text(j, "token");
    if (!j.contains("ego")) throw InputError("missing field 'ego'");
    s.ego = ObjectFromJson(j["ego"]);
    if (j.contains("capability_overrides")) {
      const json& c = j["capability_overrides"];
      if (!c.is_object()) throw InputError("capability_overrides must be an object");
      for (int i = 0; i < 4; ++i) {
        if (c.contains(kOverrideKeys[i])) {
          *OverrideField(s.capability_overrides, i) = Number(c, kOverrideKeys[i]);
        }
      }
    }
    if (!j.contains("objects") || !j["objects"].is_array()) {
      throw InputError("missing array field 'objects'");
    }
    for (const json& o : j["objects"]) s.objects.push_back(ObjectFromJson(o));
    s.target_agent = Text(j, "target_agent");
    if (j.contains("ground_truth_future")) {
      for (const json& p : j["ground_truth_future"]) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() ||
            !p[1].is_number()) {
          throw InputError("waypoints must be [x, y] pairs");
        }
        s.ground_truth_future.emplace_back(p[0].get<double>(),
                                           p[1].get<double>());
      }
    }
    return s;
  } catch (const DomainError& e) {
    throw InputError(std::string("invalid scene: ") + e.what());
  }
}

void WriteScenes(std::ostream& out, const std::vector<Scene>& scenes) {
  for (const Scene& s : scenes) out << FormatSceneLine(s) << '\n';
}

std::vector<Scene> ReadScenes(std::istream& in) {
  std::vector<Scene> scenes;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      scenes.push_back(ParseSceneLine(line));
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(number) + ": " + e.what());
    }
  }
  return scenes;
}

namespace {

std::ifstream OpenIn(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path.string());
  return in;
}

std::ofstream OpenOut(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write " + path.string());
  return out;
}

}  // namespace

void WriteSceneFile(const std::filesystem::path& path,
                    const std::vector<Scene>& scenes) {
  auto out = OpenOut(path);
  WriteScenes(out, scenes);
}

std::vector<Scene> ReadSceneFile(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return ReadScenes(in);
}

std::string FormatVerdictLine(std::string_view scene_token,
                              const std::vector<RelevanceVerdict>& verdicts) {
  json j;
  j["token"] = std::string(scene_token);
  json objects = json::array();
  for (const RelevanceVerdict& v : verdicts) {
    json o;
    o["id"] = v.object_id;
    o["relevant"] = v.relevant;
    json scenarios = json::array();
    for (Scenario s : v.triggering_scenarios) {
      scenarios.push_back(std::string(ToString(s)));
    }
    o["scenarios"] = scenarios;
    json margins = json::object();
    for (const auto& [s, d] : v.margins) {
      margins[std::string(ToString(s))] =
          std::isfinite(d) ? json(Round9(d)) : json(nullptr);
    }
    o["margins"] = margins;
    objects.push_back(o);
  }
  j["objects"] = objects;
  return j.dump();
}

void WriteSamples(std::ostream& out, const std::vector<ErrorSample>& samples) {
  out << kSampleHeader << '\n';
  char buf[32];
  for (const ErrorSample& s : samples) {
    std::snprintf(buf, sizeof buf, "%.9g", s.min_ade);
    out << s.condition << ',' << s.run_index << ',' << s.scene_token << ','
        << buf << '\n';
  }
}

std::vector<ErrorSample> ReadSamples(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InputError("sample file is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kSampleHeader) {
    throw InputError("sample file header must be '" +
                     std::string(kSampleHeader) + "'");
  }
  std::vector<ErrorSample> samples;
  int number = 1;
  while (std::getline(in, line)) {
    ++number;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    const auto fail = [&](const std::string& why) {
      return InputError("sample line " + std::to_string(number) + ": " + why);
    };
    if (cells.size() != 4) throw fail("expected 4 columns");
    ErrorSample s;
    s.condition = cells[0];
    s.scene_token = cells[2];
    const auto [ptr, ec] = std::from_chars(
        cells[1].data(), cells[1].data() + cells[1].size(), s.run_index);
    if (ec != std::errc() || ptr != cells[1].data() + cells[1].size() ||
        s.run_index < 0) {
      throw fail("bad run_index '" + cells[1] + "'");
    }
    char* end = nullptr;
    errno = 0;
    s.min_ade = std::strtod(cells[3].c_str(), &end);
    if (end == cells[3].c_str() || *end != '\0' || errno != 0 ||
        !std::isfinite(s.min_ade) || s.min_ade < 0.0) {
      throw fail("bad min_ade_m '" + cells[3] + "'");
    }
    if (s.condition.empty() || s.scene_token.empty()) throw fail("empty field");
    samples.push_back(std::move(s));
  }
  return samples;
}

void WriteSampleFile(const std::filesystem::path& path,
                     const std::vector<ErrorSample>& samples) {
  auto out = OpenOut(path);
  WriteSamples(out, samples);
}

std::vector<ErrorSample> ReadSampleFile(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  return ReadSamples(in);
}

ConfigMap ParseConfig(std::string_view text) {
  ConfigMap map;
  std::stringstream ss{std::string(text)};
  std::string line;
  int number = 0;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return std::string();
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  };
  while (std::getline(ss, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError("config line " + std::to_string(number) +
                       ": expected key = value");
    }
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) {
      throw InputError("config line " + std::to_string(number) + ": empty key");
    }
    map[key] = trim(line.substr(eq + 1));
  }
  return map;
}

ConfigMap ReadConfigFile(const std::filesystem::path& path) {
  auto in = OpenIn(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseConfig(ss.str());
}

}  // namespace relval::io

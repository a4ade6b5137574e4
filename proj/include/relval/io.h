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

#ifndef RELVAL_IO_H_
#define RELVAL_IO_H_

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "relval/core_model.h"
#include "relval/relevance.h"
#include "relval/validation.h"

namespace relval::io {

// Rounds to 9 significant digits, the precision of every written float.
double Round9(double value);

// SceneFile: one JSON object per line.
std::string FormatSceneLine(const Scene& scene);
Scene ParseSceneLine(std::string_view line);  // throws InputError

void WriteScenes(std::ostream& out, const std::vector<Scene>& scenes);
std::vector<Scene> ReadScenes(std::istream& in);  // skips blank lines
void WriteSceneFile(const std::filesystem::path& path,
                    const std::vector<Scene>& scenes);
std::vector<Scene> ReadSceneFile(const std::filesystem::path& path);

// One JSON line per scene with the per-object verdicts.
std::string FormatVerdictLine(std::string_view scene_token,
                              const std::vector<RelevanceVerdict>& verdicts);

// SampleFile: CSV with the exact header below.
inline constexpr std::string_view kSampleHeader =
    "condition,run_index,scene_token,min_ade_m";

void WriteSamples(std::ostream& out, const std::vector<ErrorSample>& samples);
std::vector<ErrorSample> ReadSamples(std::istream& in);  // throws InputError
void WriteSampleFile(const std::filesystem::path& path,
                     const std::vector<ErrorSample>& samples);
std::vector<ErrorSample> ReadSampleFile(const std::filesystem::path& path);

// key = value lines; '#' starts a comment. Duplicate keys: last one wins.
using ConfigMap = std::map<std::string, std::string, std::less<>>;
ConfigMap ParseConfig(std::string_view text);
ConfigMap ReadConfigFile(const std::filesystem::path& path);

}  // namespace relval::io

#endif  // RELVAL_IO_H_

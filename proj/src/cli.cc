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

#include "relval/cli.h"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "relval/error.h"
#include "relval/io.h"
#include "relval/relevance.h"
#include "relval/report.h"
#include "relval/stats.h"
#include "relval/surrogate.h"
#include "relval/validation.h"

namespace relval::cli {

namespace {

struct Setting {
  const char* key;
  const char* help;
};

// Every key is accepted in the config file and as --key-with-dashes.
constexpr Setting kSettings[] = {
    {"seed", "master seed for generation, campaigns and permutations"},
    {"jobs", "worker threads for campaigns"},
    {"runs", "repeated prediction runs per condition"},
    {"threshold", "p-value threshold of the verdict"},
    {"pvalue_mode", "asymptotic or permutation"},
    {"permutations", "permutation count in permutation mode"},
    {"reaction_time", "ego reaction time [s]"},
    {"guaranteed_brake", "guaranteed longitudinal deceleration [m/s^2]"},
    {"guaranteed_lateral_brake", "guaranteed lateral deceleration [m/s^2]"},
    {"guaranteed_accel", "guaranteed acceleration [m/s^2]"},
    {"a_max", "bound on any participant's acceleration [m/s^2]"},
    {"enable_rtt_prime", "evaluate the passing scenario (true/false)"},
    {"opponent_horizon", "ego_stop or reaction_brake"},
    {"tangential_angle_deg", "radial/tangential split angle [deg]"},
    {"region_long_min", "region filter bound [m]"},
    {"region_long_max", "region filter bound [m]"},
    {"region_lat_min", "region filter bound [m]"},
    {"region_lat_max", "region filter bound [m]"},
    {"rv2_corridor", "half width of the RV2 corridor [m]"},
    {"rv2_forward_only", "RV2 uses the forward ray only (true/false)"},
    {"horizon_steps", "prediction waypoints"},
    {"step", "time between waypoints [s]"},
    {"modes", "predicted modes"},
    {"mode_accel_sigma", "spread of per-mode acceleration offsets"},
    {"jitter_sigma", "per-waypoint prediction jitter [m]"},
    {"attended_lead_fraction", "generator: scenes with a close lead"},
    {"truth_accel_sigma", "generator: ground-truth acceleration noise"},
    {"truth_noise_sigma", "generator: ground-truth waypoint noise [m]"},
};

std::string Dashed(std::string key) {
  for (char& c : key) {
    if (c == '_') c = '-';
  }
  return key;
}

struct Settings {
  std::uint64_t seed = 7;
  int jobs = 1;
  int runs = 10;
  double threshold = 0.005;
  stats::PValueOptions pvalue;
  EgoCapabilities capabilities;
  WorldAssumptions world;
  RelevanceOptions relevance;
  Rv2Options rv2;
  GeneratorConfig generator;
};

double ToDouble(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out)) {
    throw InputError("setting " + key + ": not a number '" + v + "'");
  }
  return out;
}

template <typename Int>
Int ToInt(const std::string& key, const std::string& v) {
  Int out{};
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw InputError("setting " + key + ": not an integer '" + v + "'");
  }
  return out;
}

bool ToBool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InputError("setting " + key + ": not a boolean '" + v + "'");
}

Settings BuildSettings(const io::ConfigMap& map) {
  Settings s;
  SurrogateConfig& pred = s.generator.predictor;
  for (const auto& [key, v] : map) {
    if (key == "seed") s.seed = ToInt<std::uint64_t>(key, v);
    else if (key == "jobs") s.jobs = ToInt<int>(key, v);
    else if (key == "runs") s.runs = ToInt<int>(key, v);
    else if (key == "threshold") s.threshold = ToDouble(key, v);
    else if (key == "pvalue_mode") {
      if (v == "asymptotic") s.pvalue.mode = stats::PValueMode::kAsymptotic;
      else if (v == "permutation") s.pvalue.mode = stats::PValueMode::kPermutation;
      else throw InputError("pvalue_mode must be asymptotic or permutation");
    } else if (key == "permutations") s.pvalue.permutations = ToInt<int>(key, v);
    else if (key == "reaction_time") s.capabilities.reaction_time = ToDouble(key, v);
    else if (key == "guaranteed_brake") s.capabilities.guaranteed_brake = ToDouble(key, v);
    else if (key == "guaranteed_lateral_brake") s.capabilities.guaranteed_lateral_brake = ToDouble(key, v);
    else if (key == "guaranteed_accel") s.capabilities.guaranteed_accel = ToDouble(key, v);
    else if (key == "a_max") s.world.a_max = ToDouble(key, v);
    else if (key == "enable_rtt_prime") s.relevance.enable_rtt_prime = ToBool(key, v);
    else if (key == "opponent_horizon") {
      if (v == "ego_stop") s.relevance.opponent_horizon = OpponentHorizon::kEgoStopTime;
      else if (v == "reaction_brake") s.relevance.opponent_horizon = OpponentHorizon::kReactionBrakeTime;
      else throw InputError("opponent_horizon must be ego_stop or reaction_brake");
    } else if (key == "tangential_angle_deg") {
      s.relevance.classifier.tangential_angle =
          ToDouble(key, v) * std::numbers::pi / 180.0;
    } else if (key == "region_long_min") s.relevance.region.longitudinal_min = ToDouble(key, v);
    else if (key == "region_long_max") s.relevance.region.longitudinal_max = ToDouble(key, v);
    else if (key == "region_lat_min") s.relevance.region.lateral_min = ToDouble(key, v);
    else if (key == "region_lat_max") s.relevance.region.lateral_max = ToDouble(key, v);
    else if (key == "rv2_corridor") s.rv2.corridor = ToDouble(key, v);
    else if (key == "rv2_forward_only") s.rv2.forward_only = ToBool(key, v);
    else if (key == "horizon_steps") pred.horizon_steps = ToInt<int>(key, v);
    else if (key == "step") pred.step = ToDouble(key, v);
    else if (key == "modes") pred.modes = ToInt<int>(key, v);
    else if (key == "mode_accel_sigma") pred.mode_accel_sigma = ToDouble(key, v);
    else if (key == "jitter_sigma") pred.jitter_sigma = ToDouble(key, v);
    else if (key == "attended_lead_fraction") s.generator.attended_lead_fraction = ToDouble(key, v);
    else if (key == "truth_accel_sigma") s.generator.truth_accel_sigma = ToDouble(key, v);
    else if (key == "truth_noise_sigma") s.generator.truth_noise_sigma = ToDouble(key, v);
    else throw InputError("unknown setting '" + key + "'");
  }
  if (s.jobs < 1) throw InputError("jobs must be at least 1");
  if (s.runs < 2) throw InputError("runs must be at least 2");
  if (!(s.threshold >= 0.0 && s.threshold <= 1.0)) {
    throw InputError("threshold must lie in [0, 1]");
  }
  if (s.pvalue.permutations < 99) throw InputError("permutations must be >= 99");
  s.pvalue.seed = MixSeed(s.seed, 0x70u);
  try {
    Validate(s.capabilities);
    Validate(s.world);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  return s;
}

std::vector<Condition> ParseConditions(const std::string& list,
                                       const Rv2Options& rv2) {
  std::vector<Condition> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "A") out.push_back(Condition::A());
    else if (item == "R") out.push_back(Condition::R());
    else if (item == "RV") out.push_back(Condition::RV());
    else if (item == "RV2") out.push_back(Condition::RV2(rv2));
    else throw InputError("unknown condition '" + item + "'");
  }
  if (out.empty()) throw InputError("no conditions given");
  return out;
}

CampaignConfig MakeCampaignConfig(const Settings& s) {
  CampaignConfig c;
  c.runs = s.runs;
  c.campaign_seed = s.seed;
  c.jobs = s.jobs;
  c.capabilities = s.capabilities;
  c.world = s.world;
  c.relevance = s.relevance;
  c.conditions = {Condition::A(), Condition::R(), Condition::RV(),
                  Condition::RV2(s.rv2)};
  return c;
}

std::string F(double v, const char* fmt = "%.6g") {
  char buf[48];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

std::vector<std::string> Labels(const std::vector<ErrorSample>& samples) {
  std::vector<std::string> labels;
  for (const ErrorSample& s : samples) {
    if (std::find(labels.begin(), labels.end(), s.condition) == labels.end()) {
      labels.push_back(s.condition);
    }
  }
  return labels;
}

std::vector<report::PairingPValues> AllPairings(
    const std::vector<ErrorSample>& samples, const Settings& s,
    const std::string& reference) {
  const auto labels = Labels(samples);
  if (std::find(labels.begin(), labels.end(), reference) == labels.end()) {
    throw InputError("samples contain no reference condition " + reference);
  }
  std::vector<report::PairingPValues> out;
  out.push_back({reference + "-" + reference,
                 PairwisePValues(samples, reference, reference, s.pvalue)});
  for (const std::string& label : labels) {
    if (label == reference) continue;
    out.push_back({reference + "-" + label,
                   PairwisePValues(samples, reference, label, s.pvalue)});
  }
  return out;
}

int CmdGen(const Settings& s, int n, const std::string& path,
           std::ostream& out) {
  if (n < 1) throw InputError("--scenes must be at least 1");
  const auto scenes = GenerateSyntheticDataset(n, s.seed, s.generator);
  io::WriteSceneFile(path, scenes);
  const CampaignConfig c = MakeCampaignConfig(s);
  const FilterFraction rv2 = MeasureRemoval(scenes, Condition::RV2(s.rv2), c);
  std::size_t with_lead = 0;
  for (const Scene& scene : scenes) {
    for (const ObjectState& o : scene.objects) {
      if (o.id != scene.target_agent && o.id != scene.ego.id &&
          o.category == ObjectCategory::kVehicle &&
          InHeadingCorridor(scene.ego, o, s.rv2) &&
          ToLocalFrame(scene.ego, o.position).x() > 0 &&
          ToLocalFrame(scene.ego, o.position).x() <=
              s.relevance.region.longitudinal_max) {
        ++with_lead;
        break;
      }
    }
  }
  out << "scenes=" << scenes.size() << " file=" << path << "\n";
  out << "scenes_with_corridor_lead=" << with_lead << " ("
      << F(100.0 * with_lead / scenes.size(), "%.1f") << "%)\n";
  out << "rv2_removed_fraction=" << F(rv2.fraction(), "%.4f") << " ("
      << rv2.removed << "/" << rv2.in_region << ")\n";
  return kExitOk;
}

int CmdFilter(const Settings& s, const std::string& path,
              const std::string& out_path, std::ostream& out) {
  const auto scenes = io::ReadSceneFile(path);
  std::ofstream verdict_file;
  if (!out_path.empty()) {
    verdict_file.open(out_path);
    if (!verdict_file) throw InputError("cannot write " + out_path);
  }
  std::size_t total = 0, relevant = 0;
  for (const Scene& scene : scenes) {
    Validate(scene);
    const EgoCapabilities caps =
        scene.capability_overrides.ApplyTo(s.capabilities);
    const auto verdicts = RelevantObjects(scene, caps, s.world, s.relevance);
    for (const RelevanceVerdict& v : verdicts) {
      // the target agent is never filtered
      if (v.object_id == scene.target_agent) continue;
      ++total;
      if (v.relevant) ++relevant;
    }
    if (verdict_file.is_open()) {
      verdict_file << io::FormatVerdictLine(scene.token, verdicts) << '\n';
    }
  }
  out << "scenes=" << scenes.size() << " in_region_objects=" << total
      << " relevant=" << relevant << " filtered=" << total - relevant
      << " fraction_filtered="
      << F(total == 0 ? 0.0 : double(total - relevant) / total, "%.4f") << "\n";
  return kExitOk;
}

int CmdCampaign(const Settings& s, const std::string& path,
                const std::string& out_path, const std::string& conditions,
                std::ostream& out, std::ostream& err) {
  const auto scenes = io::ReadSceneFile(path);
  if (scenes.empty()) throw InputError("scene file is empty");
  const SurrogatePredictor predictor(s.generator.predictor);
  for (const Scene& scene : scenes) {
    Validate(scene, predictor.horizon_steps());
  }
  CampaignConfig c = MakeCampaignConfig(s);
  c.conditions = ParseConditions(conditions, s.rv2);
  const CampaignResult result = RunCampaign(scenes, predictor, c);
  for (const FailedPrediction& f : result.failures) {
    err << "prediction failed: condition=" << f.condition
        << " run=" << f.run_index << " scene=" << f.scene_token << ": "
        << f.message << "\n";
  }
  io::WriteSampleFile(out_path, result.samples);
  out << "samples=" << result.samples.size()
      << " failures=" << result.failures.size() << " file=" << out_path
      << "\n";
  for (const auto& [label, mean] : ConditionMeans(result.samples)) {
    out << "mean_min_ade[" << label << "]=" << F(mean, "%.4f") << " m\n";
  }
  for (const Condition& cond : c.conditions) {
    if (cond.kind == ConditionKind::kA) {
      out << "run_to_run_noise[A]="
          << F(RunToRunNoise(result.samples, cond.label), "%.4f") << " m\n";
    } else {
      const FilterFraction f = MeasureRemoval(scenes, cond, c);
      out << "removed_fraction[" << cond.label
          << "]=" << F(f.fraction(), "%.4f") << "\n";
    }
  }
  return kExitOk;
}

int CmdTest(const Settings& s, const std::string& path,
            const std::vector<std::string>& validate, std::ostream& out) {
  const auto samples = io::ReadSampleFile(path);
  const auto pairings = AllPairings(samples, s, "A");
  out << "pairing\tcount\tmedian_p\tq25\tq75\tmean_p\n";
  for (const auto& pairing : pairings) {
    std::vector<double> p;
    for (const PairPValue& pp : pairing.pairs) p.push_back(pp.p);
    const stats::PValueSummary sum = stats::Summarize(pairing.label, p);
    out << pairing.label << '\t' << p.size() << '\t' << F(sum.median) << '\t'
        << F(sum.q25) << '\t' << F(sum.q75) << '\t' << F(sum.mean) << '\n';
  }
  const auto labels = Labels(samples);
  bool any_falsified = false;
  for (const std::string& label : labels) {
    if (label == "A") continue;
    const Verdict v = ValidateFilter(samples, label, s.threshold, s.pvalue);
    const bool checked =
        std::find(validate.begin(), validate.end(), label) != validate.end();
    out << "verdict " << label << ": median_p=" << F(v.median_p)
        << " threshold=" << F(v.threshold) << " noise_band=[" << F(v.noise_q25)
        << ", " << F(v.noise_q75) << "] within_band="
        << (v.within_noise_band ? "yes" : "no")
        << " outcome=" << (v.falsified ? "falsified" : "not_falsified")
        << (checked ? " (validated)" : "") << '\n';
    if (checked && v.falsified) any_falsified = true;
  }
  for (const std::string& label : validate) {
    if (std::find(labels.begin(), labels.end(), label) == labels.end()) {
      throw InputError("samples contain no condition " + label);
    }
  }
  return any_falsified ? kExitFalsified : kExitOk;
}

int CmdReport(const Settings& s, const std::string& path,
              const std::string& dir, std::ostream& out) {
  const auto samples = io::ReadSampleFile(path);
  const auto pairings = AllPairings(samples, s, "A");
  report::WriteReport(dir, samples, pairings, s.threshold);
  out << "report written to " << dir << "\n";
  return kExitOk;
}

}  // namespace

int RunCli(int argc, const char* const* argv, std::ostream& out,
           std::ostream& err) {
  CLI::App app{"Relevance filter validation toolkit", "relval"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  app.add_option("--config", config_path, "key = value settings file");
  std::map<std::string, std::string> flag_values;
  std::map<std::string, CLI::Option*> flag_options;
  for (const Setting& setting : kSettings) {
    flag_options[setting.key] = app.add_option(
        "--" + Dashed(setting.key), flag_values[setting.key], setting.help);
  }

  int n_scenes = 200;
  std::string scenes_path, out_path, samples_path, conditions = "A,R,RV,RV2";
  std::vector<std::string> validate = {"R"};

  CLI::App* gen = app.add_subcommand("gen", "generate a synthetic scene file");
  gen->add_option("--scenes", n_scenes, "number of scenes");
  gen->add_option("--out", out_path, "output scene file")->required();

  CLI::App* filter =
      app.add_subcommand("filter", "relevance verdicts for every scene");
  filter->add_option("--scenes", scenes_path, "scene file")->required();
  filter->add_option("--out", out_path, "verdict file (JSON lines)");

  CLI::App* campaign =
      app.add_subcommand("campaign", "run the prediction campaign");
  campaign->add_option("--scenes", scenes_path, "scene file")->required();
  campaign->add_option("--out", out_path, "sample file")->required();
  campaign->add_option("--conditions", conditions, "comma-separated labels");

  CLI::App* test = app.add_subcommand("test", "p-values and verdicts");
  test->add_option("--samples", samples_path, "sample file")->required();
  test->add_option("--validate", validate,
                   "labels whose falsification sets exit code 3")
      ->delimiter(',');

  CLI::App* rep = app.add_subcommand("report", "ECDF and p-value artifacts");
  rep->add_option("--samples", samples_path, "sample file")->required();
  rep->add_option("--out", out_path, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    io::ConfigMap merged;
    if (!config_path.empty()) merged = io::ReadConfigFile(config_path);
    for (const auto& [key, option] : flag_options) {
      if (option->count() > 0) merged[key] = flag_values[key];
    }
    const Settings settings = BuildSettings(merged);
    if (gen->parsed()) return CmdGen(settings, n_scenes, out_path, out);
    if (filter->parsed()) return CmdFilter(settings, scenes_path, out_path, out);
    if (campaign->parsed()) {
      return CmdCampaign(settings, scenes_path, out_path, conditions, out, err);
    }
    if (test->parsed()) return CmdTest(settings, samples_path, validate, out);
    if (rep->parsed()) return CmdReport(settings, samples_path, out_path, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}

}  // namespace relval::cli

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

#include "relval/report.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "relval/error.h"

namespace relval::report {

namespace {

std::vector<std::pair<std::string, std::vector<double>>> GroupByCondition(
    const std::vector<ErrorSample>& samples) {
  std::vector<std::pair<std::string, std::vector<double>>> groups;
  for (const ErrorSample& s : samples) {
    auto it = std::find_if(groups.begin(), groups.end(),
                           [&](const auto& g) { return g.first == s.condition; });
    if (it == groups.end()) {
      groups.emplace_back(s.condition, std::vector<double>{});
      it = std::prev(groups.end());
    }
    it->second.push_back(s.min_ade);
  }
  return groups;
}

std::string Fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, format, v);
  return buf;
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                          "#9467bd", "#8c564b", "#17becf", "#7f7f7f"};

}  // namespace

void WriteEcdfTable(std::ostream& out,
                    const std::vector<ErrorSample>& samples) {
  out << "condition\tmin_ade_m\tecdf\n";
  for (auto& [label, values] : GroupByCondition(samples)) {
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i + 1 < values.size() && values[i + 1] == values[i]) continue;
      out << label << '\t' << Fmt("%.9g", values[i]) << '\t'
          << Fmt("%.9g", static_cast<double>(i + 1) / n) << '\n';
    }
  }
}

void WriteConditionSummary(std::ostream& out,
                           const std::vector<ErrorSample>& samples) {
  out << "condition\tn\tmean_m\tmedian_m\tq25_m\tq75_m\n";
  for (const auto& [label, values] : GroupByCondition(samples)) {
    double sum = 0.0;
    for (double v : values) sum += v;
    out << label << '\t' << values.size() << '\t'
        << Fmt("%.17g", sum / static_cast<double>(values.size())) << '\t'
        << Fmt("%.9g", stats::Quantile(values, 0.5)) << '\t'
        << Fmt("%.9g", stats::Quantile(values, 0.25)) << '\t'
        << Fmt("%.9g", stats::Quantile(values, 0.75)) << '\n';
  }
}

void WritePValueTable(std::ostream& out,
                      const std::vector<PairingPValues>& pairings) {
  out << "pairing\trun_x\trun_y\tstatistic\tp\n";
  for (const PairingPValues& pairing : pairings) {
    for (const PairPValue& p : pairing.pairs) {
      out << pairing.label << '\t' << p.run_x << '\t' << p.run_y << '\t'
          << Fmt("%.9g", p.statistic) << '\t' << Fmt("%.9g", p.p) << '\n';
    }
  }
}

std::string EcdfSvg(const std::vector<ErrorSample>& samples) {
  constexpr double kW = 640, kH = 420, kL = 60, kR = 140, kT = 20, kB = 50;
  auto groups = GroupByCondition(samples);
  double x_max = 0.0;
  for (auto& [_, values] : groups) {
    std::sort(values.begin(), values.end());
    if (!values.empty()) x_max = std::max(x_max, values.back());
  }
  if (x_max <= 0.0) x_max = 1.0;
  const auto sx = [&](double x) { return kL + (kW - kL - kR) * x / x_max; };
  const auto sy = [&](double y) { return kH - kB - (kH - kT - kB) * y; };
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << kL << "\" y1=\"" << sy(0) << "\" x2=\"" << sx(x_max)
      << "\" y2=\"" << sy(0) << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kL << "\" y1=\"" << sy(0) << "\" x2=\"" << kL
      << "\" y2=\"" << sy(1) << "\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double y = i / 4.0;
    const double x = x_max * i / 4.0;
    svg << "<text x=\"" << kL - 8 << "\" y=\"" << sy(y) + 4
        << "\" text-anchor=\"end\">" << Fmt("%.2f", y) << "</text>\n";
    svg << "<text x=\"" << sx(x) << "\" y=\"" << sy(0) + 18
        << "\" text-anchor=\"middle\">" << Fmt("%.2f", x) << "</text>\n";
  }
  svg << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 10
      << "\" text-anchor=\"middle\">minADE top-10 [m]</text>\n";
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& [label, values] = groups[g];
    const char* color = kPalette[g % std::size(kPalette)];
    const double n = static_cast<double>(values.size());
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\""
        << sx(0) << ',' << sy(0);
    for (std::size_t i = 0; i < values.size(); ++i) {
      svg << ' ' << Fmt("%.2f", sx(values[i])) << ','
          << Fmt("%.2f", sy(i / n)) << ' ' << Fmt("%.2f", sx(values[i])) << ','
          << Fmt("%.2f", sy((i + 1) / n));
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << kW - kR + 20 << "\" y=\"" << kT + 20 + 18 * g
        << "\" fill=\"" << color << "\">" << label << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

std::string PValueBoxplotSvg(const std::vector<stats::PValueSummary>& summaries,
                             double threshold) {
  constexpr double kW = 640, kH = 420, kL = 70, kR = 20, kT = 20, kB = 50;
  constexpr double kFloor = 1e-6;  // log axis lower bound
  const auto sy = [&](double p) {
    const double lp = std::log10(std::clamp(p, kFloor, 1.0));
    return kT + (kH - kT - kB) * (lp / std::log10(kFloor));
  };
  const double slot =
      (kW - kL - kR) / std::max<std::size_t>(1, summaries.size());
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW
      << "\" height=\"" << kH << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (int e = 0; e >= -6; --e) {
    const double y = sy(std::pow(10.0, e));
    svg << "<line x1=\"" << kL << "\" y1=\"" << y << "\" x2=\"" << kW - kR
        << "\" y2=\"" << y << "\" stroke=\"#dddddd\"/>\n";
    svg << "<text x=\"" << kL - 8 << "\" y=\"" << y + 4
        << "\" text-anchor=\"end\">1e" << e << "</text>\n";
  }
  if (threshold > 0.0) {
    const double y = sy(threshold);
    svg << "<line x1=\"" << kL << "\" y1=\"" << y << "\" x2=\"" << kW - kR
        << "\" y2=\"" << y << "\" stroke=\"red\" stroke-dasharray=\"6,4\"/>\n";
  }
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const stats::PValueSummary& s = summaries[i];
    const double cx = kL + slot * (i + 0.5);
    const double hw = slot * 0.25;
    svg << "<line x1=\"" << cx << "\" y1=\"" << sy(s.min) << "\" x2=\"" << cx
        << "\" y2=\"" << sy(s.max) << "\" stroke=\"black\"/>\n";
    svg << "<rect x=\"" << cx - hw << "\" y=\"" << sy(s.q75) << "\" width=\""
        << 2 * hw << "\" height=\"" << std::max(0.5, sy(s.q25) - sy(s.q75))
        << "\" fill=\"#9ecae1\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << cx - hw << "\" y1=\"" << sy(s.median) << "\" x2=\""
        << cx + hw << "\" y2=\"" << sy(s.median)
        << "\" stroke=\"black\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << cx << "\" y=\"" << kH - kB + 18
        << "\" text-anchor=\"middle\">" << s.label << "</text>\n";
  }
  svg << "<text x=\"" << (kL + kW - kR) / 2 << "\" y=\"" << kH - 10
      << "\" text-anchor=\"middle\">p-value per pairing</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

void WriteReport(const std::filesystem::path& directory,
                 const std::vector<ErrorSample>& samples,
                 const std::vector<PairingPValues>& pairings,
                 double threshold) {
  std::error_code ec;
  std::filesystem::create_directories(directory, ec);
  const auto open = [&](const char* name) {
    std::ofstream out(directory / name);
    if (!out) throw InputError("cannot write " + (directory / name).string());
    return out;
  };
  {
    auto out = open("ecdf.tsv");
    WriteEcdfTable(out, samples);
  }
  {
    auto out = open("summary.tsv");
    WriteConditionSummary(out, samples);
  }
  {
    auto out = open("pvalues.tsv");
    WritePValueTable(out, pairings);
  }
  {
    auto out = open("ecdf.svg");
    out << EcdfSvg(samples);
  }
  std::vector<stats::PValueSummary> summaries;
  for (const PairingPValues& pairing : pairings) {
    std::vector<double> p;
    for (const PairPValue& pp : pairing.pairs) p.push_back(pp.p);
    if (!p.empty()) summaries.push_back(stats::Summarize(pairing.label, p));
  }
  auto out = open("pvalues.svg");
  out << PValueBoxplotSvg(summaries, threshold);
}

}  // namespace relval::report

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

#ifndef RELVAL_REPORT_H_
#define RELVAL_REPORT_H_

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "relval/stats.h"
#include "relval/validation.h"

namespace relval::report {

// Tab-separated ECDF steps of the pooled minADE samples per condition:
// condition, min_ade_m, ecdf.
void WriteEcdfTable(std::ostream& out, const std::vector<ErrorSample>& samples);

// condition, n, mean_m, median_m, q25_m, q75_m. Means are printed with
// round-trip precision.
void WriteConditionSummary(std::ostream& out,
                           const std::vector<ErrorSample>& samples);

// Pairing label (e.g. "A-RV"), run_x, run_y, statistic, p.
struct PairingPValues {
  std::string label;
  std::vector<PairPValue> pairs;
};

void WritePValueTable(std::ostream& out,
                      const std::vector<PairingPValues>& pairings);

std::string EcdfSvg(const std::vector<ErrorSample>& samples);
std::string PValueBoxplotSvg(const std::vector<stats::PValueSummary>& summaries,
                             double threshold);

// Writes ecdf.tsv, summary.tsv, pvalues.tsv, ecdf.svg and pvalues.svg.
void WriteReport(const std::filesystem::path& directory,
                 const std::vector<ErrorSample>& samples,
                 const std::vector<PairingPValues>& pairings, double threshold);

}  // namespace relval::report

#endif  // RELVAL_REPORT_H_

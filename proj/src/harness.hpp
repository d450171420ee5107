// Copyright 2026 The twralloc Authors
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

#ifndef TWRALLOC_HARNESS_HPP
#define TWRALLOC_HARNESS_HPP

#include <string>
#include <vector>

#include "config_file.hpp"
#include "dual_solver.hpp"

namespace twr {

/// One (relay power level, scheme, realization) outcome. For the dual_bound
/// pseudo-scheme, sum_rate and objective carry the dual upper bound rather
/// than an achieved rate. dual_value and gap are NaN for schemes without a
/// bound. wall_ms is informational only and never written to result files,
/// which must be byte-identical across runs.
struct RealizationRecord {
  double power_db = 0.0;
  Scheme scheme = Scheme::kProposed;
  int realization = 0;
  std::uint64_t seed = 0;
  double sum_rate = 0.0;   // unweighted bits/s/Hz
  double objective = 0.0;  // weighted
  double dual_value = 0.0;
  double gap = 0.0;
  int iterations = 0;
  bool converged = false;
  double wall_ms = 0.0;
};

struct SummaryRow {
  double power_db = 0.0;
  Scheme scheme = Scheme::kProposed;
  double mean_rate = 0.0;
  double stderr_rate = 0.0;
  int n = 0;
};

struct ExperimentResult {
  ExperimentSpec spec;
  std::vector<RealizationRecord> records;  // level-major, then realization
  std::vector<SummaryRow> summary;
};

/// Runs every requested scheme on identical channel draws: realization r of
/// every power level and scheme consumes the channels seeded by
/// derive_seed(master_seed, r), so comparisons are paired. threads = 0 uses
/// all cores; the output is identical for any thread count.
ExperimentResult run_experiment(const ExperimentSpec& spec,
                                unsigned threads = 0);

/// Proportional fairness weight rule w_u = 1 / T_u. Throws std::domain_error
/// on a nonpositive accumulated rate.
std::vector<double> update_weights(const std::vector<double>& accumulated);

/// Epoch-looped fairness study: solves `epochs` fresh realizations with the
/// proposed scheme, accumulating per-MS rates. When proportional is set the
/// weights follow update_weights (bootstrap epoch uses w = 1) with a small
/// floor on the accumulated rates; otherwise weights stay at 1. Returns the
/// accumulated per-MS rates.
std::vector<double> run_fairness(const NetworkConfig& config,
                                 std::uint64_t master_seed, int epochs,
                                 bool proportional);

/// Writes summary.csv, records.csv and manifest.json into dir (created if
/// missing) via write-to-temp-then-rename. Output bytes depend only on the
/// result contents.
void emit_results(const ExperimentResult& result, const std::string& dir);

}  // namespace twr

#endif  // TWRALLOC_HARNESS_HPP

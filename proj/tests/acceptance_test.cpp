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

// Acceptance gate: each criterion prints one "PASS cN" or "FAIL cN" line and
// the process exits nonzero when any requested criterion fails. Criterion
// names are taken from argv; with no arguments every criterion runs. All
// tolerances are pinned here, next to the checks that use them.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "assignment.hpp"
#include "baselines.hpp"
#include "channel.hpp"
#include "config_file.hpp"
#include "dual_solver.hpp"
#include "harness.hpp"
#include "oracle.hpp"
#include "oracles.hpp"
#include "power_opt.hpp"
#include "rate_model.hpp"
#include "rng.hpp"

namespace {

using twr::Allocation;
using twr::ChannelRealization;
using twr::NetworkConfig;
using twr::PowerSolverConfig;
using twr::ProfitMatrix;
using twr::Rng;
using twr::SolverReport;
using twr::TupleContext;
using twr::TupleGrid;
using twr::testing::log_uniform;
using twr::testing::random_context;
using twr::testing::reference_profit;
using twr::testing::reference_rate;

// Every primal/dual pair produced while the binary runs is recorded here so
// the weak-duality criterion covers all of them, not only its own batch.
struct WeakDualityLedger {
  bool ok = true;
  double worst_slack = std::numeric_limits<double>::infinity();
  long checks = 0;

  void note(double primal, double dual) {
    const double slack = dual + 1e-9 * std::fabs(dual) - primal;
    worst_slack = std::min(worst_slack, slack);
    ++checks;
    if (!(slack >= 0.0)) ok = false;
  }
};

WeakDualityLedger g_duality;

SolverReport tracked_solve(const TupleGrid& grid) {
  SolverReport report = twr::solve(grid);
  g_duality.note(report.primal_value, report.dual_value);
  return report;
}

NetworkConfig make_network(int num_ms, int num_rs, int n) {
  NetworkConfig config;
  config.num_ms = num_ms;
  config.num_rs = num_rs;
  config.num_subcarriers = n;
  config.rs_power_budget.assign(num_rs, 10.0);  // 10 dB relay power
  config.ms_weights.assign(num_ms, 1.0);
  config.bs_power_per_subcarrier = 10.0 / n;  // 10 dB per node
  config.ms_power_per_subcarrier = 10.0 / n;
  return config;
}

struct ScalarDraw {
  TupleContext ctx;
  double lambda = 0.0;
  double weight = 0.0;
  double cap = 0.0;
};

// Half the draws aim the price at an interior stationary point, the other
// half sweep prices broadly; every price stays well above the solver's
// internal floor so the returned power answers the drawn price itself.
ScalarDraw draw_scalar_problem(Rng& rng, int index) {
  ScalarDraw d;
  d.ctx = random_context(rng);
  d.weight = log_uniform(rng, 0.1, 10.0);
  d.cap = log_uniform(rng, 0.1, 100.0);
  if (index % 2 == 0) {
    const double target =
        d.cap * twr::uniform_range(rng, 0.05, 0.95);
    d.lambda = d.weight * twr::sum_rate_derivative(d.ctx, target);
  }
  if (!(d.lambda >= 1e-6) || !std::isfinite(d.lambda)) {
    d.lambda = log_uniform(rng, 1e-6, 1e3);
  }
  return d;
}

bool is_interior(double p_star, double cap) {
  return p_star > 1e-9 * cap && p_star < 0.97 * cap;
}

// c1: the scalar power optimizer beats a dense value grid and satisfies the
// first-order condition measured by an independent finite difference.
bool criterion_scalar_power() {
  Rng rng(0xacc001);
  const int kDraws = 10000;
  const int kGridPoints = 1000;
  long interior_checked = 0;
  for (int t = 0; t < kDraws; ++t) {
    const ScalarDraw d = draw_scalar_problem(rng, t);
    const PowerSolverConfig cfg = PowerSolverConfig::for_budget(d.cap);
    const double p_star = twr::optimal_power(d.ctx, d.lambda, d.weight, cfg);
    const double v_star = reference_profit(d.ctx, d.lambda, d.weight, p_star);
    const auto [p_grid, v_grid] = twr::testing::grid_best_power(
        d.ctx, d.lambda, d.weight, d.cap, kGridPoints);
    (void)p_grid;
    if (!(v_star >= v_grid - 1e-9)) {
      std::fprintf(stderr,
                   "c1: grid value %.17g beats solver value %.17g (draw %d)\n",
                   v_grid, v_star, t);
      return false;
    }
    if (is_interior(p_star, d.cap)) {
      // Five-point stencil with a one-percent step: truncation and rounding
      // both stay near 1e-7 of the price across the drawn ranges.
      const double h = 1e-2 * p_star;
      const double fd = twr::testing::central_difference_5(
          [&](double p) { return d.weight * reference_rate(d.ctx, p); },
          p_star, h);
      if (!(std::fabs(fd - d.lambda) <= 1e-6 * d.lambda)) {
        std::fprintf(stderr,
                     "c1: stationarity residual %.3g at draw %d "
                     "(price %.6g, power %.6g)\n",
                     std::fabs(fd - d.lambda) / d.lambda, t, d.lambda, p_star);
        return false;
      }
      ++interior_checked;
    }
  }
  std::fprintf(stderr, "c1: %ld interior solutions checked\n",
               interior_checked);
  return interior_checked >= 1000;
}

// c2: interior stationary points are roots of the independently re-derived
// degree-four stationarity polynomial.
bool criterion_stationarity_polynomial() {
  Rng rng(0xacc002);
  const int kNeeded = 1000;
  int collected = 0;
  for (int t = 0; t < 100000 && collected < kNeeded; ++t) {
    const ScalarDraw d = draw_scalar_problem(rng, t);
    const PowerSolverConfig cfg = PowerSolverConfig::for_budget(d.cap);
    const double p_star = twr::optimal_power(d.ctx, d.lambda, d.weight, cfg);
    if (!is_interior(p_star, d.cap)) continue;
    ++collected;
    const auto coeffs =
        twr::testing::stationarity_quartic(d.ctx, d.lambda, d.weight);
    const double residual =
        twr::testing::quartic_relative_residual(coeffs, p_star);
    if (!(residual <= 1e-6)) {
      std::fprintf(stderr, "c2: relative residual %.3g at sample %d\n",
                   residual, collected);
      return false;
    }
  }
  std::fprintf(stderr, "c2: %d interior solutions checked\n", collected);
  return collected == kNeeded;
}

// c3: the rate is concave in relay power: chord slopes never increase along
// a log-spaced power grid.
bool criterion_concavity() {
  Rng rng(0xacc003);
  const int kContexts = 10000;
  const int kPoints = 41;
  for (int t = 0; t < kContexts; ++t) {
    const TupleContext ctx = random_context(rng);
    std::vector<double> p(1, 0.0);
    for (int s = 0; s < kPoints; ++s) {
      p.push_back(1e-6 * std::pow(10.0, 9.0 * s / (kPoints - 1)));
    }
    double prev_slope = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s + 1 < p.size(); ++s) {
      const double slope = (twr::sum_rate(ctx, p[s + 1]) -
                            twr::sum_rate(ctx, p[s])) /
                           (p[s + 1] - p[s]);
      if (!(slope <= prev_slope + 1e-9)) {
        std::fprintf(stderr,
                     "c3: slope rises from %.17g to %.17g near p=%.6g "
                     "(context %d)\n",
                     prev_slope, slope, p[s], t);
        return false;
      }
      prev_slope = slope;
    }
  }
  return true;
}

// c4: the pairing solver's objective equals exhaustive enumeration over
// every permutation and drop subset, bitwise.
bool criterion_pairing_exactness() {
  Rng rng(0xacc004);
  const int kMatrices = 1000;
  for (int t = 0; t < kMatrices; ++t) {
    const int n = 2 + t % 6;
    ProfitMatrix matrix;
    matrix.n = n;
    matrix.values.resize(static_cast<std::size_t>(n) * n);
    matrix.argmax_ms.assign(static_cast<std::size_t>(n) * n, 0);
    matrix.argmax_rs.assign(static_cast<std::size_t>(n) * n, 0);
    matrix.power.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (auto& v : matrix.values) {
      v = twr::uniform01(rng) < 0.05 ? 0.0 : twr::uniform_range(rng, -1.0, 1.0);
    }

    const Allocation alloc = twr::solve_pairing(matrix);
    double total = 0.0;
    for (const auto& tup : alloc.active_tuples) {
      total += matrix.values[static_cast<std::size_t>(tup.i) * n + tup.j];
    }
    const double brute = twr::testing::brute_force_matching(matrix.values, n);
    if (total != brute) {
      std::fprintf(stderr, "c4: pairing %.17g != enumeration %.17g (n=%d)\n",
                   total, brute, n);
      return false;
    }
  }
  return true;
}

// c5: on exhaustively solvable instances the full pipeline reaches at least
// 98% of the gridded global optimum.
bool criterion_oracle_ratio() {
  const NetworkConfig config = make_network(2, 2, 2);
  double worst = std::numeric_limits<double>::infinity();
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const ChannelRealization channels =
        twr::sample_realization(config, seed);
    const TupleGrid grid(config, channels);
    const twr::OracleResult oracle =
        twr::oracle_solve(channels, config, 200);
    const SolverReport report = tracked_solve(grid);
    const double ratio = report.primal_value / oracle.value;
    worst = std::min(worst, ratio);
    if (!(report.primal_value >= 0.98 * oracle.value)) {
      std::fprintf(stderr, "c5: ratio %.6f at seed %llu\n", ratio,
                   static_cast<unsigned long long>(seed));
      return false;
    }
  }
  std::fprintf(stderr, "c5: worst primal/reference ratio %.6f\n", worst);
  return true;
}

// c6: the refined primal never exceeds any dual value, on every instance
// solved by this process and on a dedicated varied-shape batch.
bool criterion_weak_duality() {
  Rng rng(0xacc006);
  const int shapes[][3] = {{1, 1, 2}, {2, 2, 2}, {3, 2, 4},
                           {2, 3, 3}, {4, 3, 8}, {3, 3, 6}};
  for (const auto& shape : shapes) {
    const NetworkConfig config =
        make_network(shape[0], shape[1], shape[2]);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const ChannelRealization channels =
          twr::sample_realization(config, seed);
      const TupleGrid grid(config, channels);
      const SolverReport report = tracked_solve(grid);
      const twr::SolverOptions opts;
      const twr::DualState init = twr::init_dual_state(config, opts);
      for (int draw = 0; draw < 5; ++draw) {
        std::vector<double> lambda(init.lambda);
        for (auto& l : lambda) l *= log_uniform(rng, 0.01, 100.0);
        const twr::DualEvaluation eval = twr::evaluate_dual(lambda, grid);
        g_duality.note(report.primal_value, eval.dual_value);
      }
    }
  }
  std::fprintf(stderr, "c6: %ld primal/dual pairs, worst slack %.3g\n",
               g_duality.checks, g_duality.worst_slack);
  return g_duality.ok && g_duality.checks > 0;
}

// Shared 200-realization batch at the full experiment shape, reused by the
// gap-trend and scheme-separation criteria when both run in one invocation.
struct TrendBatch {
  double mean_gap_32 = 0.0;
  double mean_gap_8 = 0.0;
  double mean_proposed = 0.0;
  double mean_epa = 0.0;
  double mean_rra = 0.0;
};

const TrendBatch& trend_batch() {
  static std::optional<TrendBatch> cache;
  if (cache) return *cache;

  const int kRealizations = 200;
  const std::uint64_t kMasterSeed = 1;
  const NetworkConfig wide = make_network(4, 3, 32);
  const NetworkConfig narrow = make_network(4, 3, 8);
  TrendBatch batch;
  for (int r = 0; r < kRealizations; ++r) {
    const std::uint64_t seed =
        twr::derive_seed(kMasterSeed, static_cast<std::uint64_t>(r));

    const ChannelRealization ch32 = twr::sample_realization(wide, seed);
    const TupleGrid grid32(wide, ch32);
    const SolverReport proposed = tracked_solve(grid32);
    batch.mean_gap_32 += proposed.gap;
    batch.mean_proposed += proposed.primal_value;
    batch.mean_epa += twr::epa_solve(grid32).primal_value;
    Rng rra_rng(twr::derive_seed(seed, 0x88a4));
    batch.mean_rra += twr::rra_solve(grid32, rra_rng).primal_value;

    const ChannelRealization ch8 = twr::sample_realization(narrow, seed);
    const TupleGrid grid8(narrow, ch8);
    batch.mean_gap_8 += tracked_solve(grid8).gap;
  }
  batch.mean_gap_32 /= kRealizations;
  batch.mean_gap_8 /= kRealizations;
  batch.mean_proposed /= kRealizations;
  batch.mean_epa /= kRealizations;
  batch.mean_rra /= kRealizations;
  std::fprintf(stderr,
               "trend batch: gap(32 subcarriers) %.3g, gap(8) %.3g, "
               "mean rates proposed %.4f, equal-power %.4f, random %.4f\n",
               batch.mean_gap_32, batch.mean_gap_8, batch.mean_proposed,
               batch.mean_epa, batch.mean_rra);
  cache = batch;
  return *cache;
}

// c7: the duality gap is small at the full shape and shrinks (or holds) as
// the subcarrier count grows, on paired seeds.
bool criterion_gap_trend() {
  const TrendBatch& batch = trend_batch();
  return batch.mean_gap_32 <= 0.05 && batch.mean_gap_32 <= batch.mean_gap_8;
}

// c8: mean throughput separation against both baselines on paired draws.
bool criterion_scheme_separation() {
  const TrendBatch& batch = trend_batch();
  std::fprintf(stderr, "c8: mean ratios %.4f over equal-power, %.4f over random\n",
               batch.mean_proposed / batch.mean_epa,
               batch.mean_proposed / batch.mean_rra);
  return batch.mean_proposed >= 1.25 * batch.mean_epa &&
         batch.mean_proposed >= 2.5 * batch.mean_rra;
}

bool feasible(const SolverReport& report, const TupleGrid& grid,
              const NetworkConfig& config, const char* label) {
  std::set<int> used_i, used_j;
  for (const auto& t : report.allocation.active_tuples) {
    const bool in_range = t.u >= 0 && t.u < config.num_ms && t.k >= 0 &&
                          t.k < config.num_rs && t.i >= 0 &&
                          t.i < config.num_subcarriers && t.j >= 0 &&
                          t.j < config.num_subcarriers && t.p_relay >= 0.0;
    if (!in_range || !used_i.insert(t.i).second ||
        !used_j.insert(t.j).second) {
      std::fprintf(stderr, "c9: exclusivity violation in %s\n", label);
      return false;
    }
  }
  const auto totals =
      twr::relay_power_totals(report.allocation, config.num_rs);
  for (int k = 0; k < config.num_rs; ++k) {
    if (!(totals[k] <= grid.budget(k) * (1.0 + 1e-6))) {
      std::fprintf(stderr, "c9: relay %d spends %.17g of budget %.17g in %s\n",
                   k, totals[k], grid.budget(k), label);
      return false;
    }
  }
  return true;
}

// c9: every allocation any scheme emits is exclusive per subcarrier and
// within the relay budgets.
bool criterion_feasibility() {
  const int shapes[][3] = {{2, 2, 2}, {3, 2, 4}, {2, 3, 3}, {4, 3, 8}};
  for (const auto& shape : shapes) {
    const NetworkConfig config =
        make_network(shape[0], shape[1], shape[2]);
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const ChannelRealization channels =
          twr::sample_realization(config, seed);
      const TupleGrid grid(config, channels);
      Rng rra_rng(twr::derive_seed(seed, 0x88a4));
      if (!feasible(tracked_solve(grid), grid, config, "proposed") ||
          !feasible(twr::epa_solve(grid), grid, config, "equal power") ||
          !feasible(twr::rra_solve(grid, rra_rng), grid, config, "random")) {
        return false;
      }
    }
  }
  const NetworkConfig wide = make_network(4, 3, 32);
  for (std::uint64_t seed = 1; seed <= 2; ++seed) {
    const ChannelRealization channels =
        twr::sample_realization(wide, seed);
    const TupleGrid grid(wide, channels);
    if (!feasible(tracked_solve(grid), grid, wide, "proposed wide")) {
      return false;
    }
  }
  return true;
}

double median_pairing_millis(int n, int trials, Rng& rng) {
  std::vector<double> times;
  times.reserve(trials);
  for (int t = 0; t <= trials; ++t) {
    ProfitMatrix matrix;
    matrix.n = n;
    matrix.values.resize(static_cast<std::size_t>(n) * n);
    matrix.argmax_ms.assign(static_cast<std::size_t>(n) * n, 0);
    matrix.argmax_rs.assign(static_cast<std::size_t>(n) * n, 0);
    matrix.power.assign(static_cast<std::size_t>(n) * n, 0.0);
    for (auto& v : matrix.values) v = twr::uniform01(rng);

    const auto begin = std::chrono::steady_clock::now();
    const Allocation alloc = twr::solve_pairing(matrix);
    const auto end = std::chrono::steady_clock::now();
    if (alloc.active_tuples.empty()) std::abort();  // keep the call alive
    if (t == 0) continue;                           // warmup
    times.push_back(
        std::chrono::duration<double, std::milli>(end - begin).count());
  }
  std::sort(times.begin(), times.end());
  return times[times.size() / 2];
}

// c10: doubling the matrix size from 64 to 128 costs at most 3x the cubic
// growth factor on the median pairing time.
bool criterion_pairing_scaling() {
  Rng rng(0xacc010);
  const double t64 = median_pairing_millis(64, 21, rng);
  const double t128 = median_pairing_millis(128, 21, rng);
  std::fprintf(stderr, "c10: median pairing times %.3f ms -> %.3f ms\n", t64,
               t128);
  return t128 <= 24.0 * t64;
}

// c11: two executions of the same experiment produce byte-identical files.
bool criterion_determinism() {
  namespace fs = std::filesystem;
  const twr::ExperimentSpec spec = twr::parse_experiment_text(
      "num_ms = 2\nnum_rs = 2\nnum_subcarriers = 2\n"
      "bs_power_db = 10\nms_power_db = 10\n"
      "schemes = proposed, epa, rra, dual_bound\n"
      "num_realizations = 5\nrs_power_sweep_db = 0, 10\nmaster_seed = 7\n");

  const fs::path base = fs::temp_directory_path();
  const fs::path dirs[2] = {base / "twralloc_accept_a",
                            base / "twralloc_accept_b"};
  for (int run = 0; run < 2; ++run) {
    fs::remove_all(dirs[run]);
    const twr::ExperimentResult result = twr::run_experiment(spec);
    twr::emit_results(result, dirs[run].string());
  }

  bool ok = true;
  for (const char* name : {"summary.csv", "records.csv", "manifest.json"}) {
    std::string contents[2];
    for (int run = 0; run < 2; ++run) {
      std::ifstream in(dirs[run] / name, std::ios::binary);
      std::ostringstream buffer;
      buffer << in.rdbuf();
      contents[run] = buffer.str();
    }
    if (contents[0].empty() || contents[0] != contents[1]) {
      std::fprintf(stderr, "c11: %s differs between runs\n", name);
      ok = false;
    }
  }
  for (const auto& dir : dirs) fs::remove_all(dir);
  return ok;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<bool()>>> criteria = {
      {"c1", criterion_scalar_power},
      {"c2", criterion_stationarity_polynomial},
      {"c3", criterion_concavity},
      {"c4", criterion_pairing_exactness},
      {"c5", criterion_oracle_ratio},
      {"c6", criterion_weak_duality},
      {"c7", criterion_gap_trend},
      {"c8", criterion_scheme_separation},
      {"c9", criterion_feasibility},
      {"c10", criterion_pairing_scaling},
      {"c11", criterion_determinism},
  };

  std::vector<std::string> requested;
  for (int i = 1; i < argc; ++i) requested.emplace_back(argv[i]);
  if (requested.empty()) {
    for (const auto& [name, fn] : criteria) requested.push_back(name);
  }

  bool all_ok = true;
  for (const auto& name : requested) {
    const auto it =
        std::find_if(criteria.begin(), criteria.end(),
                     [&](const auto& c) { return c.first == name; });
    if (it == criteria.end()) {
      std::fprintf(stderr, "unknown criterion '%s'\n", name.c_str());
      return 2;
    }
    bool ok = false;
    try {
      ok = it->second();
    } catch (const std::exception& e) {
      std::fprintf(stderr, "%s raised: %s\n", name.c_str(), e.what());
    }
    std::printf("%s %s\n", ok ? "PASS" : "FAIL", name.c_str());
    std::fflush(stdout);
    all_ok = all_ok && ok;
  }
  return all_ok ? 0 : 1;
}

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

#include "harness.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <stdexcept>

#include "json.hpp"

#include "baselines.hpp"
#include "parallel.hpp"
#include "rng.hpp"
#include "version.hpp"

namespace twr {

namespace {
constexpr double kRateFloor = 1e-9;  // keeps 1/T finite for starved MSs

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

double unweighted_rate(const SolverReport& report, const TupleGrid& grid) {
  const std::vector<double> rates = per_ms_rates(report.allocation, grid);
  double total = 0.0;
  for (double r : rates) total += r;
  return total;
}

void fill_record(RealizationRecord* rec, const SolverReport& report,
                 const TupleGrid& grid) {
  rec->sum_rate = unweighted_rate(report, grid);
  rec->objective = report.primal_value;
  rec->dual_value = report.has_dual
                        ? report.dual_value
                        : std::numeric_limits<double>::quiet_NaN();
  rec->gap = report.has_dual ? report.gap
                             : std::numeric_limits<double>::quiet_NaN();
  rec->iterations = report.iterations;
  rec->converged = report.converged;
}

// Runs all schemes of one realization at one power level. Weights may be
// overridden per scheme (proportional mode); rates_out, when given, receives
// each scheme's per-MS rates for weight accumulation.
void run_realization(const ExperimentSpec& spec,
                     const NetworkConfig& level_config, double power_db,
                     int realization,
                     const std::vector<std::vector<double>>* scheme_weights,
                     std::vector<std::vector<double>>* rates_out,
                     RealizationRecord* slots) {
  const std::uint64_t seed = derive_seed(spec.master_seed,
                                         static_cast<std::uint64_t>(realization));
  const ChannelRealization channels = sample_realization(level_config, seed);

  std::optional<TupleGrid> shared_grid;
  if (scheme_weights == nullptr) shared_grid.emplace(level_config, channels);

  std::optional<SolverReport> proposed;
  std::optional<TupleGrid> proposed_grid_keep;  // outlives the scheme loop
  const TupleGrid* proposed_grid = nullptr;

  for (std::size_t s = 0; s < spec.schemes.size(); ++s) {
    const Scheme scheme = spec.schemes[s];
    RealizationRecord& rec = slots[s];
    rec.power_db = power_db;
    rec.scheme = scheme;
    rec.realization = realization;
    rec.seed = seed;

    // A dual_bound slot reuses the proposed solve when one already ran for
    // this realization. In proportional mode both slots then accumulate the
    // same rates, so their weights stay identical and the reuse stays exact.
    const bool shares_proposed =
        scheme == Scheme::kDualBound && proposed.has_value();

    std::optional<TupleGrid> own_grid;
    const TupleGrid* grid = nullptr;
    if (scheme_weights == nullptr) {
      grid = &*shared_grid;
    } else if (shares_proposed) {
      grid = proposed_grid;
    } else {
      NetworkConfig cfg = level_config;
      cfg.ms_weights = (*scheme_weights)[s];
      if (scheme == Scheme::kProposed || scheme == Scheme::kDualBound) {
        proposed_grid_keep.emplace(cfg, channels);
        grid = &*proposed_grid_keep;
      } else {
        own_grid.emplace(cfg, channels);
        grid = &*own_grid;
      }
    }

    const double t0 = now_ms();
    std::optional<SolverReport> own_report;
    const SolverReport* used = nullptr;
    const TupleGrid* used_grid = grid;
    try {
      switch (scheme) {
        case Scheme::kProposed:
          proposed = solve(*grid);
          proposed_grid = grid;
          used = &*proposed;
          break;
        case Scheme::kEpa:
          own_report = epa_solve(*grid);
          used = &*own_report;
          break;
        case Scheme::kRra: {
          Rng rng(derive_seed(seed, 0x88a4));
          own_report = rra_solve(*grid, rng);
          used = &*own_report;
          break;
        }
        case Scheme::kDualBound:
          if (!shares_proposed) {
            proposed = solve(*grid);
            proposed_grid = grid;
          }
          used = &*proposed;
          used_grid = proposed_grid;
          break;
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("realization " + std::to_string(realization) +
                               " (seed " + std::to_string(seed) +
                               "): " + e.what());
    }
    fill_record(&rec, *used, *used_grid);
    if (scheme == Scheme::kDualBound) {
      rec.sum_rate = used->dual_value;
      rec.objective = used->dual_value;
    }
    rec.wall_ms = now_ms() - t0;

    if (rates_out != nullptr) {
      (*rates_out)[s] = per_ms_rates(used->allocation, *used_grid);
    }
  }
}
}  // namespace

std::vector<double> update_weights(const std::vector<double>& accumulated) {
  std::vector<double> weights(accumulated.size());
  for (std::size_t u = 0; u < accumulated.size(); ++u) {
    if (!(accumulated[u] > 0) || !std::isfinite(accumulated[u])) {
      throw std::domain_error("update_weights: accumulated rate must be > 0");
    }
    weights[u] = 1.0 / accumulated[u];
  }
  return weights;
}

ExperimentResult run_experiment(const ExperimentSpec& spec, unsigned threads) {
  spec.validate();
  const NetworkConfig base = spec.resolved_network();
  const int num_realizations = spec.num_realizations;
  const std::size_t num_schemes = spec.schemes.size();

  ExperimentResult result;
  result.spec = spec;
  result.records.resize(spec.rs_power_sweep_db.size() *
                        static_cast<std::size_t>(num_realizations) *
                        num_schemes);

  for (std::size_t level = 0; level < spec.rs_power_sweep_db.size(); ++level) {
    const double power_db = spec.rs_power_sweep_db[level];
    NetworkConfig level_config = base;
    level_config.rs_power_budget.assign(base.num_rs,
                                        std::pow(10.0, power_db / 10.0));
    const std::size_t level_base =
        level * static_cast<std::size_t>(num_realizations) * num_schemes;

    if (spec.fairness_mode == FairnessMode::kFixedWeights) {
      parallel_for(
          static_cast<std::size_t>(num_realizations),
          [&](std::size_t r) {
            run_realization(spec, level_config, power_db, static_cast<int>(r),
                            nullptr, nullptr,
                            &result.records[level_base + r * num_schemes]);
          },
          threads);
    } else {
      // Weights evolve over realizations, separately per scheme, so this
      // mode runs sequentially.
      std::vector<std::vector<double>> accumulated(
          num_schemes, std::vector<double>(base.num_ms, 0.0));
      std::vector<std::vector<double>> weights(
          num_schemes, std::vector<double>(base.num_ms, 1.0));
      std::vector<std::vector<double>> rates(num_schemes);
      for (int r = 0; r < num_realizations; ++r) {
        run_realization(spec, level_config, power_db, r, &weights, &rates,
                        &result.records[level_base + r * num_schemes]);
        for (std::size_t s = 0; s < num_schemes; ++s) {
          std::vector<double> floored(base.num_ms);
          for (int u = 0; u < base.num_ms; ++u) {
            accumulated[s][u] += rates[s][u];
            floored[u] = std::max(accumulated[s][u], kRateFloor);
          }
          weights[s] = update_weights(floored);
        }
      }
    }
  }

  for (std::size_t level = 0; level < spec.rs_power_sweep_db.size(); ++level) {
    for (std::size_t s = 0; s < num_schemes; ++s) {
      double sum = 0.0;
      for (int r = 0; r < num_realizations; ++r) {
        sum += result
                   .records[(level * num_realizations + r) * num_schemes + s]
                   .sum_rate;
      }
      const double mean = sum / num_realizations;
      double sq = 0.0;
      for (int r = 0; r < num_realizations; ++r) {
        const double d =
            result.records[(level * num_realizations + r) * num_schemes + s]
                .sum_rate -
            mean;
        sq += d * d;
      }
      SummaryRow row;
      row.power_db = spec.rs_power_sweep_db[level];
      row.scheme = spec.schemes[s];
      row.mean_rate = mean;
      row.stderr_rate =
          num_realizations > 1
              ? std::sqrt(sq / (num_realizations - 1) / num_realizations)
              : 0.0;
      row.n = num_realizations;
      result.summary.push_back(row);
    }
  }
  return result;
}

std::vector<double> run_fairness(const NetworkConfig& config,
                                 std::uint64_t master_seed, int epochs,
                                 bool proportional) {
  if (epochs < 1) throw std::invalid_argument("run_fairness: epochs must be >= 1");
  NetworkConfig cfg = config;
  cfg.ms_weights.assign(config.num_ms, 1.0);
  std::vector<double> accumulated(config.num_ms, 0.0);
  for (int e = 0; e < epochs; ++e) {
    const ChannelRealization channels =
        sample_realization(cfg, derive_seed(master_seed, e));
    const TupleGrid grid(cfg, channels);
    const SolverReport report = solve(grid);
    const std::vector<double> rates = per_ms_rates(report.allocation, grid);
    std::vector<double> floored(config.num_ms);
    for (int u = 0; u < config.num_ms; ++u) {
      accumulated[u] += rates[u];
      floored[u] = std::max(accumulated[u], kRateFloor);
    }
    if (proportional) cfg.ms_weights = update_weights(floored);
  }
  return accumulated;
}

namespace {
std::string format_g17(double v) {
  if (std::isnan(v)) return "";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_atomic(const std::filesystem::path& path,
                  const std::string& content) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("emit_results: cannot write '" + tmp.string() +
                               "'");
    }
    out << content;
    if (!out.good()) {
      throw std::runtime_error("emit_results: write failed for '" +
                               tmp.string() + "'");
    }
  }
  std::filesystem::rename(tmp, path);
}
}  // namespace

void emit_results(const ExperimentResult& result, const std::string& dir) {
  const std::filesystem::path out_dir = dir.empty() ? "." : dir;
  std::filesystem::create_directories(out_dir);

  std::string summary = "power_db,scheme,mean_rate,stderr,n\n";
  for (const auto& row : result.summary) {
    summary += format_g17(row.power_db);
    summary += ",";
    summary += scheme_name(row.scheme);
    summary += ",";
    summary += format_g17(row.mean_rate);
    summary += ",";
    summary += format_g17(row.stderr_rate);
    summary += ",";
    summary += std::to_string(row.n);
    summary += "\n";
  }
  write_atomic(out_dir / "summary.csv", summary);

  std::string records =
      "power_db,scheme,realization,seed,sum_rate,objective,dual_value,gap,"
      "iterations,converged\n";
  for (const auto& rec : result.records) {
    records += format_g17(rec.power_db);
    records += ",";
    records += scheme_name(rec.scheme);
    records += ",";
    records += std::to_string(rec.realization);
    records += ",";
    records += std::to_string(rec.seed);
    records += ",";
    records += format_g17(rec.sum_rate);
    records += ",";
    records += format_g17(rec.objective);
    records += ",";
    records += format_g17(rec.dual_value);
    records += ",";
    records += format_g17(rec.gap);
    records += ",";
    records += std::to_string(rec.iterations);
    records += ",";
    records += rec.converged ? "1" : "0";
    records += "\n";
  }
  write_atomic(out_dir / "records.csv", records);

  nlohmann::json manifest;
  manifest["version"] = kVersionString;
  manifest["master_seed"] = result.spec.master_seed;
  nlohmann::json config;
  for (const auto& key : known_keys()) {
    config[key] = get_key(result.spec, key);
  }
  manifest["config"] = config;
  write_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

}  // namespace twr

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

// Command line front end for the twralloc solver. Talks to the library
// exclusively through the C interface in twralloc.h.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "twralloc.h"

namespace {

struct ConfigDeleter {
  void operator()(twr_config* p) const { twr_config_free(p); }
};
struct ChannelsDeleter {
  void operator()(twr_channels* p) const { twr_channels_free(p); }
};
struct ReportDeleter {
  void operator()(twr_report* p) const { twr_report_free(p); }
};

using ConfigPtr = std::unique_ptr<twr_config, ConfigDeleter>;
using ChannelsPtr = std::unique_ptr<twr_channels, ChannelsDeleter>;
using ReportPtr = std::unique_ptr<twr_report, ReportDeleter>;

struct StringDeleter {
  void operator()(char* p) const { twr_string_free(p); }
};
using StringPtr = std::unique_ptr<char, StringDeleter>;

int fail(const char* what) {
  std::fprintf(stderr, "twralloc: %s: %s\n", what, twr_last_error());
  return 1;
}

bool ok(twr_status s) { return s == TWR_OK; }

ConfigPtr load_config(const std::string& path, int* exit_code) {
  twr_config* raw = nullptr;
  if (!ok(twr_config_load(path.c_str(), &raw))) {
    *exit_code = fail("loading config");
    return nullptr;
  }
  return ConfigPtr(raw);
}

bool apply_override(twr_config* cfg, const char* key, const std::string& value,
                    int* exit_code) {
  if (value.empty()) return true;
  if (!ok(twr_config_set(cfg, key, value.c_str()))) {
    *exit_code = fail("setting option");
    return false;
  }
  return true;
}

nlohmann::json tuples_json(const twr_report* rep) {
  nlohmann::json tuples = nlohmann::json::array();
  size_t n = 0;
  twr_report_num_tuples(rep, &n);
  for (size_t t = 0; t < n; ++t) {
    int ms = 0, rs = 0, sc_first = 0, sc_second = 0;
    double p = 0.0;
    twr_report_tuple(rep, t, &ms, &rs, &sc_first, &sc_second, &p);
    nlohmann::json row;
    row["ms"] = ms;
    row["rs"] = rs;
    row["sc_first"] = sc_first;
    row["sc_second"] = sc_second;
    row["relay_power"] = p;
    tuples.push_back(row);
  }
  return tuples;
}

nlohmann::json report_json(const twr_report* rep) {
  double objective = 0.0, sum_rate = 0.0, dual = 0.0, gap = 0.0;
  int has_bound = 0, iterations = 0, converged = 0;
  twr_report_objective(rep, &objective);
  twr_report_sum_rate(rep, &sum_rate);
  twr_report_dual(rep, &dual, &has_bound);
  twr_report_gap(rep, &gap);
  twr_report_iterations(rep, &iterations);
  twr_report_converged(rep, &converged);
  nlohmann::json j;
  j["objective"] = objective;
  j["sum_rate"] = sum_rate;
  if (has_bound != 0) {
    j["dual"] = dual;
    j["gap"] = gap;
  } else {
    j["dual"] = nullptr;
    j["gap"] = nullptr;
  }
  j["iterations"] = iterations;
  j["converged"] = converged != 0;
  j["tuples"] = tuples_json(rep);
  return j;
}

int cmd_run(const std::string& config_path, const std::string& schemes,
            int realizations, const std::string& seed,
            const std::string& sweep, const std::string& out_dir) {
  int exit_code = 0;
  ConfigPtr cfg = load_config(config_path, &exit_code);
  if (!cfg) return exit_code;
  if (!apply_override(cfg.get(), "schemes", schemes, &exit_code) ||
      !apply_override(cfg.get(), "num_realizations",
                      realizations >= 0 ? std::to_string(realizations) : "",
                      &exit_code) ||
      !apply_override(cfg.get(), "master_seed", seed, &exit_code) ||
      !apply_override(cfg.get(), "rs_power_sweep_db", sweep, &exit_code) ||
      !apply_override(cfg.get(), "output_path", out_dir, &exit_code)) {
    return exit_code;
  }
  char* dir_raw = nullptr;
  if (!ok(twr_config_get(cfg.get(), "output_path", &dir_raw))) {
    return fail("reading output path");
  }
  StringPtr dir(dir_raw);
  char* summary_raw = nullptr;
  if (!ok(twr_run_experiment(cfg.get(), dir.get(), &summary_raw))) {
    return fail("running experiment");
  }
  StringPtr summary(summary_raw);
  std::fputs(summary.get(), stdout);
  std::fprintf(stderr, "results written to %s\n", dir.get());
  return 0;
}

int cmd_dump_channels(const std::string& config_path, std::uint64_t seed) {
  int exit_code = 0;
  ConfigPtr cfg = load_config(config_path, &exit_code);
  if (!cfg) return exit_code;
  twr_channels* ch_raw = nullptr;
  if (!ok(twr_channels_sample(cfg.get(), seed, &ch_raw))) {
    return fail("sampling channels");
  }
  ChannelsPtr ch(ch_raw);
  char* json_raw = nullptr;
  if (!ok(twr_channels_to_json(ch.get(), &json_raw))) {
    return fail("serializing channels");
  }
  StringPtr json(json_raw);
  std::fputs(json.get(), stdout);
  return 0;
}

int cmd_solve(const std::string& config_path, std::uint64_t seed,
              const std::string& scheme, const std::string& history_path) {
  int exit_code = 0;
  ConfigPtr cfg = load_config(config_path, &exit_code);
  if (!cfg) return exit_code;
  twr_channels* ch_raw = nullptr;
  if (!ok(twr_channels_sample(cfg.get(), seed, &ch_raw))) {
    return fail("sampling channels");
  }
  ChannelsPtr ch(ch_raw);
  twr_report* rep_raw = nullptr;
  if (!ok(twr_solve(cfg.get(), ch.get(), scheme.c_str(), seed, &rep_raw))) {
    return fail("solving");
  }
  ReportPtr rep(rep_raw);
  nlohmann::json j = report_json(rep.get());
  j["scheme"] = scheme;
  j["seed"] = seed;
  std::fputs((j.dump(2) + "\n").c_str(), stdout);
  if (!history_path.empty()) {
    char* csv_raw = nullptr;
    if (!ok(twr_report_history_csv(rep.get(), &csv_raw))) {
      return fail("exporting history");
    }
    StringPtr csv(csv_raw);
    std::ofstream out(history_path, std::ios::binary | std::ios::trunc);
    out << csv.get();
    if (!out.good()) {
      std::fprintf(stderr, "twralloc: cannot write %s\n",
                   history_path.c_str());
      return 1;
    }
  }
  return 0;
}

int cmd_oracle(const std::string& config_path, std::uint64_t seed, int steps) {
  int exit_code = 0;
  ConfigPtr cfg = load_config(config_path, &exit_code);
  if (!cfg) return exit_code;
  twr_channels* ch_raw = nullptr;
  if (!ok(twr_channels_sample(cfg.get(), seed, &ch_raw))) {
    return fail("sampling channels");
  }
  ChannelsPtr ch(ch_raw);

  twr_report* oracle_raw = nullptr;
  if (!ok(twr_solve_oracle(cfg.get(), ch.get(), steps, &oracle_raw))) {
    return fail("running reference solver");
  }
  ReportPtr oracle(oracle_raw);
  twr_report* solver_raw = nullptr;
  if (!ok(twr_solve(cfg.get(), ch.get(), "proposed", seed, &solver_raw))) {
    return fail("solving");
  }
  ReportPtr solver(solver_raw);

  double oracle_value = 0.0, solver_value = 0.0;
  twr_report_objective(oracle.get(), &oracle_value);
  twr_report_objective(solver.get(), &solver_value);
  nlohmann::json j;
  j["seed"] = seed;
  j["reference"] = report_json(oracle.get());
  j["solver"] = report_json(solver.get());
  j["ratio"] = oracle_value > 0 ? solver_value / oracle_value : 1.0;
  std::fputs((j.dump(2) + "\n").c_str(), stdout);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resource allocation for OFDMA two-way relay networks"};
  app.set_version_flag("--version", twr_version());
  app.require_subcommand(1);

  std::string config_path;
  std::string schemes;
  int realizations = -1;
  std::string master_seed;
  std::string sweep;
  std::string out_dir;
  CLI::App* run = app.add_subcommand(
      "run", "Monte Carlo experiment over a relay power sweep");
  run->add_option("--config", config_path, "experiment config file")
      ->required();
  run->add_option("--scheme", schemes,
                  "comma separated subset of proposed,epa,rra,dual_bound");
  run->add_option("--realizations", realizations,
                  "number of channel realizations");
  run->add_option("--seed", master_seed, "master seed");
  run->add_option("--power-sweep-db", sweep,
                  "comma separated relay power levels in dB");
  run->add_option("--out", out_dir, "output directory");

  std::string dump_config;
  std::uint64_t dump_seed = 0;
  CLI::App* dump = app.add_subcommand(
      "dump-channels", "Print one channel realization as JSON");
  dump->add_option("--config", dump_config, "experiment config file")
      ->required();
  dump->add_option("--seed", dump_seed, "channel seed")->required();

  std::string solve_config;
  std::uint64_t solve_seed = 0;
  std::string solve_scheme = "proposed";
  std::string history_path;
  CLI::App* solve =
      app.add_subcommand("solve", "Solve one realization and print the "
                                  "allocation as JSON");
  solve->add_option("--config", solve_config, "experiment config file")
      ->required();
  solve->add_option("--seed", solve_seed, "channel seed")->required();
  solve->add_option("--scheme", solve_scheme,
                    "proposed, epa, rra or dual_bound");
  solve->add_option("--history-csv", history_path,
                    "write per iteration progress to this file");

  std::string oracle_config;
  std::uint64_t oracle_seed = 0;
  int oracle_steps = 0;
  CLI::App* oracle = app.add_subcommand(
      "oracle", "Compare the solver against exhaustive search (tiny "
                "networks only)");
  oracle->add_option("--config", oracle_config, "experiment config file")
      ->required();
  oracle->add_option("--seed", oracle_seed, "channel seed")->required();
  oracle->add_option("--steps", oracle_steps,
                     "power grid resolution (default 200)");

  CLI11_PARSE(app, argc, argv);

  if (run->parsed()) {
    return cmd_run(config_path, schemes, realizations, master_seed, sweep,
                   out_dir);
  }
  if (dump->parsed()) return cmd_dump_channels(dump_config, dump_seed);
  if (solve->parsed()) {
    return cmd_solve(solve_config, solve_seed, solve_scheme, history_path);
  }
  if (oracle->parsed()) return cmd_oracle(oracle_config, oracle_seed, oracle_steps);
  return 1;
}

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

#include "twralloc.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"

#include "baselines.hpp"
#include "config_file.hpp"
#include "dual_solver.hpp"
#include "harness.hpp"
#include "oracle.hpp"
#include "rng.hpp"
#include "version.hpp"

struct twr_config {
  twr::ExperimentSpec spec;
};

struct twr_channels {
  twr::NetworkConfig config;  // resolved network the draw was made with
  twr::ChannelRealization data;
};

struct twr_report {
  twr::SolverReport report;
  double sum_rate = 0.0;
};

namespace {

thread_local std::string g_last_error;

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

template <typename Fn>
twr_status guarded(Fn&& fn) noexcept {
  try {
    fn();
    return TWR_OK;
  } catch (const std::invalid_argument& e) {
    g_last_error = e.what();
    return TWR_ERR_INVALID_ARGUMENT;
  } catch (const std::domain_error& e) {
    g_last_error = e.what();
    return TWR_ERR_INVALID_ARGUMENT;
  } catch (const std::filesystem::filesystem_error& e) {
    g_last_error = e.what();
    return TWR_ERR_IO;
  } catch (const std::ios_base::failure& e) {
    g_last_error = e.what();
    return TWR_ERR_IO;
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return TWR_ERR_RUNTIME;
  } catch (const std::runtime_error& e) {
    g_last_error = e.what();
    return TWR_ERR_RUNTIME;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return TWR_ERR_UNKNOWN;
  } catch (...) {
    g_last_error = "unknown error";
    return TWR_ERR_UNKNOWN;
  }
}

std::string format_g17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

nlohmann::json complex_json(const std::complex<double>& z) {
  return nlohmann::json::array({z.real(), z.imag()});
}

twr_report* make_report(twr::SolverReport&& report, const twr::TupleGrid& grid) {
  auto* out = new twr_report;
  double total = 0.0;
  for (double r : twr::per_ms_rates(report.allocation, grid)) total += r;
  out->report = std::move(report);
  out->sum_rate = total;
  return out;
}

}  // namespace

extern "C" {

const char* twr_last_error(void) { return g_last_error.c_str(); }

const char* twr_version(void) { return twr::kVersionString; }

void twr_string_free(char* s) { delete[] s; }

twr_config* twr_config_create(void) {
  return new (std::nothrow) twr_config;
}

twr_status twr_config_load(const char* path, twr_config** out) {
  return guarded([&] {
    require(path != nullptr, "twr_config_load: path is NULL");
    require(out != nullptr, "twr_config_load: out is NULL");
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      throw std::ios_base::failure(std::string("cannot open '") + path + "'");
    }
    std::ostringstream text;
    text << in.rdbuf();
    if (in.bad()) {
      throw std::ios_base::failure(std::string("cannot read '") + path + "'");
    }
    auto cfg = std::make_unique<twr_config>();
    cfg->spec = twr::parse_experiment_text(text.str());
    *out = cfg.release();
  });
}

twr_status twr_config_parse(const char* text, twr_config** out) {
  return guarded([&] {
    require(text != nullptr, "twr_config_parse: text is NULL");
    require(out != nullptr, "twr_config_parse: out is NULL");
    auto cfg = std::make_unique<twr_config>();
    cfg->spec = twr::parse_experiment_text(text);
    *out = cfg.release();
  });
}

void twr_config_free(twr_config* cfg) { delete cfg; }

twr_status twr_config_set(twr_config* cfg, const char* key,
                          const char* value) {
  return guarded([&] {
    require(cfg != nullptr, "twr_config_set: cfg is NULL");
    require(key != nullptr, "twr_config_set: key is NULL");
    require(value != nullptr, "twr_config_set: value is NULL");
    twr::apply_key(cfg->spec, key, value);
  });
}

twr_status twr_config_get(const twr_config* cfg, const char* key,
                          char** out_value) {
  return guarded([&] {
    require(cfg != nullptr, "twr_config_get: cfg is NULL");
    require(key != nullptr, "twr_config_get: key is NULL");
    require(out_value != nullptr, "twr_config_get: out_value is NULL");
    *out_value = dup_string(twr::get_key(cfg->spec, key));
  });
}

twr_status twr_channels_sample(const twr_config* cfg, uint64_t seed,
                               twr_channels** out) {
  return guarded([&] {
    require(cfg != nullptr, "twr_channels_sample: cfg is NULL");
    require(out != nullptr, "twr_channels_sample: out is NULL");
    auto ch = std::make_unique<twr_channels>();
    ch->config = cfg->spec.resolved_network();
    ch->data = twr::sample_realization(ch->config, seed);
    *out = ch.release();
  });
}

void twr_channels_free(twr_channels* ch) { delete ch; }

twr_status twr_channels_to_json(const twr_channels* ch, char** out_json) {
  return guarded([&] {
    require(ch != nullptr, "twr_channels_to_json: ch is NULL");
    require(out_json != nullptr, "twr_channels_to_json: out_json is NULL");
    const twr::ChannelRealization& d = ch->data;
    nlohmann::json j;
    j["seed"] = d.seed;
    j["num_ms"] = d.num_ms;
    j["num_rs"] = d.num_rs;
    j["num_subcarriers"] = d.num_subcarriers;
    nlohmann::json pos;
    pos["bs"] = {d.positions.bs.x, d.positions.bs.y};
    nlohmann::json rs = nlohmann::json::array();
    for (const auto& p : d.positions.rs) rs.push_back({p.x, p.y});
    pos["rs"] = rs;
    nlohmann::json ms = nlohmann::json::array();
    for (const auto& p : d.positions.ms) ms.push_back({p.x, p.y});
    pos["ms"] = ms;
    j["positions"] = pos;

    nlohmann::json h_mac = nlohmann::json::array();
    for (int k = 0; k < d.num_rs; ++k) {
      nlohmann::json row = nlohmann::json::array();
      for (int i = 0; i < d.num_subcarriers; ++i) row.push_back(complex_json(d.hm(k, i)));
      h_mac.push_back(row);
    }
    j["h_mac"] = h_mac;

    nlohmann::json f_mac = nlohmann::json::array();
    for (int u = 0; u < d.num_ms; ++u) {
      nlohmann::json per_rs = nlohmann::json::array();
      for (int k = 0; k < d.num_rs; ++k) {
        nlohmann::json row = nlohmann::json::array();
        for (int i = 0; i < d.num_subcarriers; ++i) {
          row.push_back(complex_json(d.fm(u, k, i)));
        }
        per_rs.push_back(row);
      }
      f_mac.push_back(per_rs);
    }
    j["f_mac"] = f_mac;

    nlohmann::json h_bc = nlohmann::json::array();
    for (int k = 0; k < d.num_rs; ++k) {
      nlohmann::json row = nlohmann::json::array();
      for (int jj = 0; jj < d.num_subcarriers; ++jj) {
        row.push_back(complex_json(d.hb(k, jj)));
      }
      h_bc.push_back(row);
    }
    j["h_bc"] = h_bc;

    nlohmann::json f_bc = nlohmann::json::array();
    for (int k = 0; k < d.num_rs; ++k) {
      nlohmann::json per_ms = nlohmann::json::array();
      for (int u = 0; u < d.num_ms; ++u) {
        nlohmann::json row = nlohmann::json::array();
        for (int jj = 0; jj < d.num_subcarriers; ++jj) {
          row.push_back(complex_json(d.fb(k, u, jj)));
        }
        per_ms.push_back(row);
      }
      f_bc.push_back(per_ms);
    }
    j["f_bc"] = f_bc;

    *out_json = dup_string(j.dump(2) + "\n");
  });
}

twr_status twr_solve(const twr_config* cfg, const twr_channels* ch,
                     const char* scheme, uint64_t rng_seed, twr_report** out) {
  return guarded([&] {
    require(cfg != nullptr, "twr_solve: cfg is NULL");
    require(ch != nullptr, "twr_solve: ch is NULL");
    require(scheme != nullptr, "twr_solve: scheme is NULL");
    require(out != nullptr, "twr_solve: out is NULL");
    const twr::Scheme s = twr::parse_scheme(scheme);
    const twr::NetworkConfig network = cfg->spec.resolved_network();
    const twr::TupleGrid grid(network, ch->data);
    twr::SolverReport report;
    switch (s) {
      case twr::Scheme::kProposed:
      case twr::Scheme::kDualBound:
        report = twr::solve(grid);
        break;
      case twr::Scheme::kEpa:
        report = twr::epa_solve(grid);
        break;
      case twr::Scheme::kRra: {
        twr::Rng rng(twr::derive_seed(rng_seed, 0x88a4));
        report = twr::rra_solve(grid, rng);
        break;
      }
    }
    *out = make_report(std::move(report), grid);
  });
}

twr_status twr_solve_oracle(const twr_config* cfg, const twr_channels* ch,
                            int steps, twr_report** out) {
  return guarded([&] {
    require(cfg != nullptr, "twr_solve_oracle: cfg is NULL");
    require(ch != nullptr, "twr_solve_oracle: ch is NULL");
    require(out != nullptr, "twr_solve_oracle: out is NULL");
    const twr::NetworkConfig network = cfg->spec.resolved_network();
    const twr::TupleGrid grid(network, ch->data);
    const twr::OracleResult oracle =
        twr::oracle_solve(ch->data, network, steps <= 0 ? 200 : steps);
    twr::SolverReport report;
    report.allocation = oracle.allocation;
    report.primal_value = oracle.value;
    report.has_dual = false;
    report.dual_value = std::numeric_limits<double>::quiet_NaN();
    report.gap = std::numeric_limits<double>::quiet_NaN();
    report.iterations = 0;
    report.converged = true;
    *out = make_report(std::move(report), grid);
  });
}

void twr_report_free(twr_report* rep) { delete rep; }

twr_status twr_report_objective(const twr_report* rep, double* out) {
  return guarded([&] {
    require(rep != nullptr, "twr_report_objective: rep is NULL");
    require(out != nullptr, "twr_report_objective: out is NULL");
    *out = rep->report.primal_value;
  });
}

twr_status twr_report_sum_rate(const twr_report* rep, double* out) {
  return guarded([&] {
    require(rep != nullptr, "twr_report_sum_rate: rep is NULL");
    require(out != nullptr, "twr_report_sum_rate: out is NULL");
    *out = rep->sum_rate;
  });
}

twr_status twr_report_dual(const twr_report* rep, double* out,
                           int* has_bound) {
  return guarded([&] {
    require(rep != nullptr, "twr_report_dual: rep is NULL");
    require(out != nullptr, "twr_report_dual: out is NULL");
    *out = rep->report.has_dual ? rep->report.dual_value
                                : std::numeric_limits<double>::quiet_NaN();
    if (has_bound != nullptr) *has_bound = rep->report.has_dual ? 1 : 0;
  });
}

twr_status twr_report_gap(const twr_report* rep, double* out) {
  return guarded([&] {
    require(rep != nullptr, "twr_report_gap: rep is NULL");
    require(out != nullptr, "twr_report_gap: out is NULL");
    *out = rep->report.has_dual ? rep->report.gap
                                : std::numeric_limits<double>::quiet_NaN();
  });
}

twr_status twr_report_iterations(const twr_report* rep, int* out) {
  return guarded([&] {
    require(rep != nullptr, "twr_report_iterations: rep is NULL");
    require(out != nullptr, "twr_report_iterations: out is NULL");
    *out = rep->report.iterations;
  });
}

twr_status twr_report_converged(const twr_report* rep, int* out) {
  return guarded([&] {
    require(rep != nullptr, "twr_report_converged: rep is NULL");
    require(out != nullptr, "twr_report_converged: out is NULL");
    *out = rep->report.converged ? 1 : 0;
  });
}

twr_status twr_report_num_tuples(const twr_report* rep, size_t* out) {
  return guarded([&] {
    require(rep != nullptr, "twr_report_num_tuples: rep is NULL");
    require(out != nullptr, "twr_report_num_tuples: out is NULL");
    *out = rep->report.allocation.active_tuples.size();
  });
}

twr_status twr_report_tuple(const twr_report* rep, size_t index, int* ms,
                            int* rs, int* sc_first, int* sc_second,
                            double* relay_power) {
  return guarded([&] {
    require(rep != nullptr, "twr_report_tuple: rep is NULL");
    require(index < rep->report.allocation.active_tuples.size(),
            "twr_report_tuple: index out of range");
    const twr::ActiveTuple& t = rep->report.allocation.active_tuples[index];
    if (ms != nullptr) *ms = t.u;
    if (rs != nullptr) *rs = t.k;
    if (sc_first != nullptr) *sc_first = t.i;
    if (sc_second != nullptr) *sc_second = t.j;
    if (relay_power != nullptr) *relay_power = t.p_relay;
  });
}

twr_status twr_report_history_csv(const twr_report* rep, char** out_csv) {
  return guarded([&] {
    require(rep != nullptr, "twr_report_history_csv: rep is NULL");
    require(out_csv != nullptr, "twr_report_history_csv: out_csv is NULL");
    std::string csv = "iter,dual,primal_feasible,gap,subgrad_norm,omega\n";
    for (const twr::IterationRecord& it : rep->report.history) {
      csv += std::to_string(it.l);
      csv += ",";
      csv += format_g17(it.dual_value);
      csv += ",";
      csv += format_g17(it.primal_feasible_value);
      csv += ",";
      csv += format_g17(it.gap);
      csv += ",";
      csv += format_g17(it.subgrad_norm);
      csv += ",";
      csv += format_g17(it.step_omega);
      csv += "\n";
    }
    *out_csv = dup_string(csv);
  });
}

twr_status twr_run_experiment(const twr_config* cfg, const char* out_dir,
                              char** out_summary_json) {
  return guarded([&] {
    require(cfg != nullptr, "twr_run_experiment: cfg is NULL");
    const twr::ExperimentResult result = twr::run_experiment(cfg->spec);
    if (out_dir != nullptr) twr::emit_results(result, out_dir);
    if (out_summary_json != nullptr) {
      nlohmann::json rows = nlohmann::json::array();
      for (const twr::SummaryRow& row : result.summary) {
        nlohmann::json r;
        r["power_db"] = row.power_db;
        r["scheme"] = twr::scheme_name(row.scheme);
        r["mean_rate"] = row.mean_rate;
        r["stderr"] = row.stderr_rate;
        r["n"] = row.n;
        rows.push_back(r);
      }
      *out_summary_json = dup_string(rows.dump(2) + "\n");
    }
  });
}

}  // extern "C"

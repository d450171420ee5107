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

#include "config_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace twr {

namespace {
std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    if (pos == std::string::npos) {
      parts.push_back(trim(s.substr(start)));
      break;
    }
    parts.push_back(trim(s.substr(start, pos - start)));
    start = pos + 1;
  }
  return parts;
}

double parse_double(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("config: bad number for '" + key + "': " +
                                value);
  }
  return out;
}

long long parse_int(const std::string& key, const std::string& value) {
  long long out = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("config: bad integer for '" + key + "': " +
                                value);
  }
  return out;
}

std::uint64_t parse_uint64(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const char* begin = value.data();
  const char* end = begin + value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, out);
  if (ec != std::errc() || ptr != end) {
    throw std::invalid_argument("config: bad seed for '" + key + "': " +
                                value);
  }
  return out;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw std::invalid_argument("config: bad boolean for '" + key + "': " +
                              value);
}

std::vector<double> parse_list(const std::string& key,
                               const std::string& value) {
  std::vector<double> out;
  for (const auto& part : split(value, ',')) {
    if (part.empty()) {
      throw std::invalid_argument("config: empty list entry for '" + key +
                                  "'");
    }
    out.push_back(parse_double(key, part));
  }
  return out;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string format_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t t = 0; t < v.size(); ++t) {
    if (t > 0) out += ",";
    out += format_double(v[t]);
  }
  return out;
}
}  // namespace

const char* scheme_name(Scheme s) {
  switch (s) {
    case Scheme::kProposed:
      return "proposed";
    case Scheme::kEpa:
      return "epa";
    case Scheme::kRra:
      return "rra";
    case Scheme::kDualBound:
      return "dual_bound";
  }
  return "unknown";
}

Scheme parse_scheme(const std::string& name) {
  if (name == "proposed") return Scheme::kProposed;
  if (name == "epa") return Scheme::kEpa;
  if (name == "rra") return Scheme::kRra;
  if (name == "dual_bound") return Scheme::kDualBound;
  throw std::invalid_argument("config: unknown scheme '" + name + "'");
}

void ExperimentSpec::validate() const {
  if (num_realizations < 1) {
    throw std::invalid_argument("config: num_realizations must be >= 1");
  }
  if (rs_power_sweep_db.empty()) {
    throw std::invalid_argument("config: rs_power_sweep_db must be non-empty");
  }
  if (schemes.empty()) {
    throw std::invalid_argument("config: schemes must be non-empty");
  }
  if (fairness_epochs < 1) {
    throw std::invalid_argument("config: fairness_epochs must be >= 1");
  }
  resolved_network();  // throws if the network block is inconsistent
}

NetworkConfig ExperimentSpec::resolved_network() const {
  NetworkConfig net = network;
  if (net.rs_power_budget.empty()) {
    net.rs_power_budget.assign(std::max(net.num_rs, 1), 10.0);
  }
  if (net.ms_weights.empty()) {
    net.ms_weights.assign(std::max(net.num_ms, 1), 1.0);
  }
  if (net.rs_power_budget.size() == 1 && net.num_rs > 1) {
    net.rs_power_budget.assign(net.num_rs, net.rs_power_budget[0]);
  }
  if (net.ms_weights.size() == 1 && net.num_ms > 1) {
    net.ms_weights.assign(net.num_ms, net.ms_weights[0]);
  }
  if (net.num_subcarriers >= 1) {
    if (bs_power_db.has_value()) {
      net.bs_power_per_subcarrier =
          std::pow(10.0, *bs_power_db / 10.0) / net.num_subcarriers;
    }
    if (ms_power_db.has_value()) {
      net.ms_power_per_subcarrier =
          std::pow(10.0, *ms_power_db / 10.0) / net.num_subcarriers;
    }
  }
  if (rs_power_db.has_value()) {
    net.rs_power_budget.assign(std::max(net.num_rs, 1),
                               std::pow(10.0, *rs_power_db / 10.0));
  }
  net.validate();
  return net;
}

void apply_key(ExperimentSpec& spec, const std::string& key,
               const std::string& value) {
  NetworkConfig& net = spec.network;
  if (key == "num_ms") {
    net.num_ms = static_cast<int>(parse_int(key, value));
  } else if (key == "num_rs") {
    net.num_rs = static_cast<int>(parse_int(key, value));
  } else if (key == "num_subcarriers") {
    net.num_subcarriers = static_cast<int>(parse_int(key, value));
  } else if (key == "bs_power_per_subcarrier") {
    net.bs_power_per_subcarrier = parse_double(key, value);
  } else if (key == "ms_power_per_subcarrier") {
    net.ms_power_per_subcarrier = parse_double(key, value);
  } else if (key == "rs_power_budget") {
    net.rs_power_budget = parse_list(key, value);
  } else if (key == "ms_weights") {
    net.ms_weights = parse_list(key, value);
  } else if (key == "cell_radius") {
    net.cell_radius = parse_double(key, value);
  } else if (key == "rs_ring_radius") {
    net.rs_ring_radius = parse_double(key, value);
  } else if (key == "path_loss_exponent") {
    net.path_loss_exponent = parse_double(key, value);
  } else if (key == "shadowing_sigma_db") {
    net.shadowing_sigma_db = parse_double(key, value);
  } else if (key == "reciprocal_fading") {
    net.reciprocal_fading = parse_bool(key, value);
  } else if (key == "bs_power_db") {
    spec.bs_power_db = parse_double(key, value);
  } else if (key == "ms_power_db") {
    spec.ms_power_db = parse_double(key, value);
  } else if (key == "rs_power_db") {
    spec.rs_power_db = parse_double(key, value);
  } else if (key == "schemes") {
    spec.schemes.clear();
    for (const auto& name : split(value, ',')) {
      spec.schemes.push_back(parse_scheme(name));
    }
  } else if (key == "num_realizations") {
    spec.num_realizations = static_cast<int>(parse_int(key, value));
  } else if (key == "rs_power_sweep_db") {
    spec.rs_power_sweep_db = parse_list(key, value);
  } else if (key == "master_seed") {
    spec.master_seed = parse_uint64(key, value);
  } else if (key == "fairness_mode") {
    if (value == "fixed_weights") {
      spec.fairness_mode = FairnessMode::kFixedWeights;
    } else if (value == "proportional") {
      spec.fairness_mode = FairnessMode::kProportional;
    } else {
      throw std::invalid_argument("config: bad fairness_mode '" + value + "'");
    }
  } else if (key == "fairness_epochs") {
    spec.fairness_epochs = static_cast<int>(parse_int(key, value));
  } else if (key == "output_path") {
    spec.output_path = value;
  } else {
    throw std::invalid_argument("config: unknown key '" + key + "'");
  }
}

std::string get_key(const ExperimentSpec& spec, const std::string& key) {
  const NetworkConfig& net = spec.network;
  if (key == "num_ms") return std::to_string(net.num_ms);
  if (key == "num_rs") return std::to_string(net.num_rs);
  if (key == "num_subcarriers") return std::to_string(net.num_subcarriers);
  if (key == "bs_power_per_subcarrier") {
    return format_double(net.bs_power_per_subcarrier);
  }
  if (key == "ms_power_per_subcarrier") {
    return format_double(net.ms_power_per_subcarrier);
  }
  if (key == "rs_power_budget") return format_list(net.rs_power_budget);
  if (key == "ms_weights") return format_list(net.ms_weights);
  if (key == "cell_radius") return format_double(net.cell_radius);
  if (key == "rs_ring_radius") return format_double(net.rs_ring_radius);
  if (key == "path_loss_exponent") {
    return format_double(net.path_loss_exponent);
  }
  if (key == "shadowing_sigma_db") {
    return format_double(net.shadowing_sigma_db);
  }
  if (key == "reciprocal_fading") {
    return net.reciprocal_fading ? "true" : "false";
  }
  if (key == "bs_power_db") {
    return spec.bs_power_db ? format_double(*spec.bs_power_db) : "";
  }
  if (key == "ms_power_db") {
    return spec.ms_power_db ? format_double(*spec.ms_power_db) : "";
  }
  if (key == "rs_power_db") {
    return spec.rs_power_db ? format_double(*spec.rs_power_db) : "";
  }
  if (key == "schemes") {
    std::string out;
    for (std::size_t t = 0; t < spec.schemes.size(); ++t) {
      if (t > 0) out += ",";
      out += scheme_name(spec.schemes[t]);
    }
    return out;
  }
  if (key == "num_realizations") return std::to_string(spec.num_realizations);
  if (key == "rs_power_sweep_db") return format_list(spec.rs_power_sweep_db);
  if (key == "master_seed") return std::to_string(spec.master_seed);
  if (key == "fairness_mode") {
    return spec.fairness_mode == FairnessMode::kProportional
               ? "proportional"
               : "fixed_weights";
  }
  if (key == "fairness_epochs") return std::to_string(spec.fairness_epochs);
  if (key == "output_path") return spec.output_path;
  throw std::invalid_argument("config: unknown key '" + key + "'");
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "num_ms",
      "num_rs",
      "num_subcarriers",
      "bs_power_per_subcarrier",
      "ms_power_per_subcarrier",
      "rs_power_budget",
      "ms_weights",
      "cell_radius",
      "rs_ring_radius",
      "path_loss_exponent",
      "shadowing_sigma_db",
      "reciprocal_fading",
      "bs_power_db",
      "ms_power_db",
      "rs_power_db",
      "schemes",
      "num_realizations",
      "rs_power_sweep_db",
      "master_seed",
      "fairness_mode",
      "fairness_epochs",
      "output_path",
  };
  return keys;
}

ExperimentSpec parse_experiment_text(const std::string& text) {
  ExperimentSpec spec;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument("config: line " + std::to_string(line_no) +
                                  " is not 'key = value'");
    }
    apply_key(spec, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return spec;
}

ExperimentSpec load_experiment_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("config: cannot open '" + path + "'");
  }
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_text(buffer.str());
}

}  // namespace twr

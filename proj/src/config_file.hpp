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

#ifndef TWRALLOC_CONFIG_FILE_HPP
#define TWRALLOC_CONFIG_FILE_HPP

#include <optional>
#include <string>
#include <vector>

#include "channel.hpp"

namespace twr {

enum class Scheme { kProposed, kEpa, kRra, kDualBound };

const char* scheme_name(Scheme s);
/// Throws std::invalid_argument on an unknown name.
Scheme parse_scheme(const std::string& name);

enum class FairnessMode { kFixedWeights, kProportional };

/// Full description of one Monte Carlo experiment. The network block holds
/// linear per-subcarrier powers; the optional *_power_db fields express the
/// per-node dB settings and take precedence when present (resolved_network
/// applies them, splitting node power evenly over the subcarriers). The
/// embedded network starts with empty budget and weight lists so that
/// num_rs / num_ms edits cannot leave stale sizes behind; resolved_network
/// fills unset lists with the defaults (budget 10 per relay, weight 1).
struct ExperimentSpec {
  ExperimentSpec() {
    network.rs_power_budget.clear();
    network.ms_weights.clear();
  }

  NetworkConfig network;
  std::optional<double> bs_power_db;
  std::optional<double> ms_power_db;
  std::optional<double> rs_power_db;
  std::vector<Scheme> schemes{Scheme::kProposed, Scheme::kEpa, Scheme::kRra};
  int num_realizations = 200;
  std::vector<double> rs_power_sweep_db{0.0, 5.0, 10.0, 15.0, 20.0};
  std::uint64_t master_seed = 1;
  FairnessMode fairness_mode = FairnessMode::kFixedWeights;
  int fairness_epochs = 50;
  std::string output_path = "results";

  /// Throws std::invalid_argument when any field is out of contract.
  void validate() const;

  /// The network config with dB overrides applied and length-1 budget or
  /// weight lists broadcast to num_rs / num_ms entries. Validated.
  NetworkConfig resolved_network() const;
};

/// Applies one flat key. Throws std::invalid_argument on unknown keys or
/// unparseable values. Keys: num_ms, num_rs, num_subcarriers,
/// bs_power_per_subcarrier, ms_power_per_subcarrier, rs_power_budget,
/// ms_weights, cell_radius, rs_ring_radius, path_loss_exponent,
/// shadowing_sigma_db, reciprocal_fading, bs_power_db, ms_power_db,
/// rs_power_db, schemes, num_realizations, rs_power_sweep_db, master_seed,
/// fairness_mode, fairness_epochs, output_path. List values are
/// comma-separated.
void apply_key(ExperimentSpec& spec, const std::string& key,
               const std::string& value);

/// Current value of one key, in the same text form apply_key accepts.
std::string get_key(const ExperimentSpec& spec, const std::string& key);

/// Every key apply_key/get_key understand, in a fixed order.
const std::vector<std::string>& known_keys();

/// Parses "key = value" lines; '#' starts a comment, blank lines are
/// ignored. Later keys override earlier ones.
ExperimentSpec parse_experiment_text(const std::string& text);

/// parse_experiment_text on a file's contents. Throws std::runtime_error
/// when the file cannot be read.
ExperimentSpec load_experiment_file(const std::string& path);

}  // namespace twr

#endif  // TWRALLOC_CONFIG_FILE_HPP

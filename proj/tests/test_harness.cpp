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

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "rng.hpp"

using twr::ExperimentResult;
using twr::ExperimentSpec;
using twr::RealizationRecord;
using twr::Scheme;

namespace {

ExperimentSpec tiny_spec() {
  ExperimentSpec spec = twr::parse_experiment_text(
      "num_ms = 2\nnum_rs = 2\nnum_subcarriers = 2\n"
      "bs_power_db = 10\nms_power_db = 10\n"
      "shadowing_sigma_db = 5.8\n"
      "schemes = proposed, epa, rra, dual_bound\n"
      "num_realizations = 3\n"
      "rs_power_sweep_db = 0, 10\n"
      "master_seed = 7\n");
  return spec;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const auto pos = line.find(',', start);
    if (pos == std::string::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, pos - start));
    start = pos + 1;
  }
  return fields;
}

bool same_record(const RealizationRecord& a, const RealizationRecord& b) {
  const auto eq = [](double x, double y) {
    return (std::isnan(x) && std::isnan(y)) || x == y;
  };
  return a.power_db == b.power_db && a.scheme == b.scheme &&
         a.realization == b.realization && a.seed == b.seed &&
         eq(a.sum_rate, b.sum_rate) && eq(a.objective, b.objective) &&
         eq(a.dual_value, b.dual_value) && eq(a.gap, b.gap) &&
         a.iterations == b.iterations && a.converged == b.converged;
}

}  // namespace

TEST_CASE("experiment records are level-major with paired seeds") {
  const ExperimentSpec spec = tiny_spec();
  const ExperimentResult result = twr::run_experiment(spec, 1);

  const int num_levels = 2, num_real = 3, num_schemes = 4;
  REQUIRE(result.records.size() ==
          static_cast<std::size_t>(num_levels * num_real * num_schemes));
  REQUIRE(result.summary.size() ==
          static_cast<std::size_t>(num_levels * num_schemes));

  std::size_t idx = 0;
  for (int level = 0; level < num_levels; ++level) {
    for (int r = 0; r < num_real; ++r) {
      for (int s = 0; s < num_schemes; ++s, ++idx) {
        const auto& rec = result.records[idx];
        CHECK(rec.power_db == spec.rs_power_sweep_db[level]);
        CHECK(rec.realization == r);
        CHECK(rec.scheme == spec.schemes[s]);
        CHECK(rec.seed == twr::derive_seed(spec.master_seed,
                                           static_cast<std::uint64_t>(r)));
      }
    }
  }

  std::size_t row = 0;
  for (int level = 0; level < num_levels; ++level) {
    for (int s = 0; s < num_schemes; ++s, ++row) {
      const auto& sum = result.summary[row];
      CHECK(sum.power_db == spec.rs_power_sweep_db[level]);
      CHECK(sum.scheme == spec.schemes[s]);
      CHECK(sum.n == num_real);
    }
  }
}

TEST_CASE("summary statistics recompute from the records") {
  const ExperimentSpec spec = tiny_spec();
  const ExperimentResult result = twr::run_experiment(spec, 1);
  for (const auto& row : result.summary) {
    std::vector<double> values;
    for (const auto& rec : result.records) {
      if (rec.power_db == row.power_db && rec.scheme == row.scheme) {
        values.push_back(rec.sum_rate);
      }
    }
    REQUIRE(values.size() == static_cast<std::size_t>(row.n));
    double mean = 0.0;
    for (const double v : values) mean += v;
    mean /= values.size();
    double var = 0.0;
    for (const double v : values) var += (v - mean) * (v - mean);
    const double stderr_want =
        values.size() > 1
            ? std::sqrt(var / ((values.size() - 1.0) * values.size()))
            : 0.0;
    CHECK(row.mean_rate == doctest::Approx(mean).epsilon(1e-12));
    CHECK(row.stderr_rate == doctest::Approx(stderr_want).epsilon(1e-12));
  }
}

TEST_CASE("higher relay budget never hurts on the same channels") {
  const ExperimentSpec spec = tiny_spec();
  const ExperimentResult result = twr::run_experiment(spec, 1);

  // Channels are identical across sweep levels, the random scheme keeps its
  // pairing, and rates increase with relay power, so realization by
  // realization the equal-power and random schemes can only improve.
  std::map<std::pair<int, int>, std::map<double, double>> by_key;
  for (const auto& rec : result.records) {
    if (rec.scheme == Scheme::kEpa || rec.scheme == Scheme::kRra) {
      by_key[{static_cast<int>(rec.scheme), rec.realization}][rec.power_db] =
          rec.sum_rate;
    }
  }
  for (const auto& [key, levels] : by_key) {
    REQUIRE(levels.size() == 2);
    CHECK(levels.at(0.0) <= levels.at(10.0) * (1.0 + 1e-12));
  }

  for (const auto& row : result.summary) {
    if (row.scheme != Scheme::kProposed || row.power_db != 0.0) continue;
    for (const auto& other : result.summary) {
      if (other.scheme == Scheme::kProposed && other.power_db == 10.0) {
        CHECK(row.mean_rate < other.mean_rate);
      }
    }
  }
}

TEST_CASE("dual bound records mirror the proposed solve") {
  for (const char* schemes : {"proposed, dual_bound", "dual_bound, proposed"}) {
    ExperimentSpec spec = tiny_spec();
    twr::apply_key(spec, "schemes", schemes);
    const ExperimentResult result = twr::run_experiment(spec, 1);
    std::map<std::pair<double, int>, const RealizationRecord*> proposed, bound;
    for (const auto& rec : result.records) {
      if (rec.scheme == Scheme::kProposed) {
        proposed[{rec.power_db, rec.realization}] = &rec;
      } else if (rec.scheme == Scheme::kDualBound) {
        bound[{rec.power_db, rec.realization}] = &rec;
      }
    }
    REQUIRE(proposed.size() == 6);
    REQUIRE(bound.size() == 6);
    for (const auto& [key, p] : proposed) {
      const auto* b = bound.at(key);
      CHECK(b->sum_rate == p->dual_value);
      CHECK(b->objective == p->dual_value);
      CHECK(b->dual_value == p->dual_value);
      CHECK(b->gap == p->gap);
      CHECK(b->iterations == p->iterations);
      CHECK(b->converged == p->converged);
      CHECK(p->objective <= p->dual_value * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("experiment output is identical for any thread count") {
  const ExperimentSpec spec = tiny_spec();
  const ExperimentResult a = twr::run_experiment(spec, 1);
  const ExperimentResult b = twr::run_experiment(spec, 3);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t t = 0; t < a.records.size(); ++t) {
    CHECK(same_record(a.records[t], b.records[t]));
  }
}

TEST_CASE("experiment rejects an invalid specification") {
  ExperimentSpec spec = tiny_spec();
  spec.num_realizations = 0;
  CHECK_THROWS_AS(twr::run_experiment(spec, 1), std::invalid_argument);
}

TEST_CASE("proportional weights invert accumulated rates") {
  const std::vector<double> weights =
      twr::update_weights({2.0, 0.5, 1.0});
  REQUIRE(weights.size() == 3);
  CHECK(weights[0] == 0.5);
  CHECK(weights[1] == 2.0);
  CHECK(weights[2] == 1.0);
  CHECK_THROWS_AS(twr::update_weights({1.0, 0.0}), std::domain_error);
  CHECK_THROWS_AS(twr::update_weights({-1.0}), std::domain_error);
  CHECK_THROWS_AS(twr::update_weights({std::nan("")}), std::domain_error);
}

TEST_CASE("fairness study is deterministic and responds to the mode") {
  const ExperimentSpec spec = tiny_spec();
  const auto net = spec.resolved_network();
  const auto fixed_a = twr::run_fairness(net, 5, 4, false);
  const auto fixed_b = twr::run_fairness(net, 5, 4, false);
  REQUIRE(fixed_a.size() == 2);
  CHECK(fixed_a == fixed_b);
  for (const double r : fixed_a) {
    CHECK(r >= 0.0);
    CHECK(std::isfinite(r));
  }
  const auto prop = twr::run_fairness(net, 5, 4, true);
  REQUIRE(prop.size() == 2);
  CHECK(prop != fixed_a);
}

TEST_CASE("result files are byte-stable and carry the manifest") {
  namespace fs = std::filesystem;
  const ExperimentSpec spec = tiny_spec();
  const ExperimentResult result = twr::run_experiment(spec, 1);

  const fs::path base = fs::temp_directory_path();
  const fs::path dir_a = base / "twralloc_emit_a";
  const fs::path dir_b = base / "twralloc_emit_b";
  fs::remove_all(dir_a);
  fs::remove_all(dir_b);

  twr::emit_results(result, dir_a.string());
  twr::emit_results(result, dir_a.string());  // overwrite in place
  twr::emit_results(result, dir_b.string());

  for (const char* name : {"summary.csv", "records.csv", "manifest.json"}) {
    const std::string a = read_file(dir_a / name);
    const std::string b = read_file(dir_b / name);
    CHECK(a == b);
    CHECK_FALSE(a.empty());
  }

  const std::string summary = read_file(dir_a / "summary.csv");
  CHECK(summary.rfind("power_db,scheme,mean_rate,stderr,n\n", 0) == 0);

  const std::string records = read_file(dir_a / "records.csv");
  CHECK(records.rfind("power_db,scheme,realization,seed,sum_rate,objective,"
                      "dual_value,gap,iterations,converged\n",
                      0) == 0);

  // Schemes without a dual bound leave those fields empty instead of NaN.
  std::istringstream lines(records);
  std::string line;
  std::getline(lines, line);  // header
  bool saw_epa = false, saw_proposed = false;
  while (std::getline(lines, line)) {
    const auto fields = split_csv_line(line);
    REQUIRE(fields.size() == 10);
    CHECK((fields[9] == "0" || fields[9] == "1"));
    if (fields[1] == "epa") {
      saw_epa = true;
      CHECK(fields[6].empty());
      CHECK(fields[7].empty());
    }
    if (fields[1] == "proposed") {
      saw_proposed = true;
      CHECK_FALSE(fields[6].empty());
      CHECK_FALSE(fields[7].empty());
    }
  }
  CHECK(saw_epa);
  CHECK(saw_proposed);

  const auto manifest = nlohmann::json::parse(read_file(dir_a / "manifest.json"));
  CHECK(manifest.at("master_seed").get<std::uint64_t>() == 7);
  CHECK(manifest.at("config").at("num_ms").get<std::string>() == "2");
  CHECK(manifest.at("config").at("schemes").get<std::string>() ==
        "proposed,epa,rra,dual_bound");
  CHECK(manifest.at("version").is_string());

  fs::remove_all(dir_a);
  fs::remove_all(dir_b);
}

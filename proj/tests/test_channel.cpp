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

#include "channel.hpp"

#include <cmath>

#include "doctest.h"

#include "rng.hpp"

using twr::ChannelRealization;
using twr::NetworkConfig;
using twr::Rng;

namespace {

NetworkConfig small_config() {
  NetworkConfig config;
  config.num_ms = 3;
  config.num_rs = 2;
  config.num_subcarriers = 4;
  config.rs_power_budget = {10.0, 10.0};
  config.ms_weights = {1.0, 1.0, 1.0};
  return config;
}

}  // namespace

TEST_CASE("sample_realization is a pure function of config and seed") {
  const NetworkConfig config = small_config();
  const ChannelRealization a = twr::sample_realization(config, 42);
  const ChannelRealization b = twr::sample_realization(config, 42);
  CHECK(a.h_mac == b.h_mac);
  CHECK(a.f_mac == b.f_mac);
  CHECK(a.h_bc == b.h_bc);
  CHECK(a.f_bc == b.f_bc);
  CHECK(a.positions.ms.size() == b.positions.ms.size());
  for (std::size_t u = 0; u < a.positions.ms.size(); ++u) {
    CHECK(a.positions.ms[u].x == b.positions.ms[u].x);
    CHECK(a.positions.ms[u].y == b.positions.ms[u].y);
  }
  CHECK(a.seed == 42);

  const ChannelRealization c = twr::sample_realization(config, 43);
  CHECK(a.h_mac != c.h_mac);
}

TEST_CASE("sampled tensors have the documented shapes and pass validation") {
  const NetworkConfig config = small_config();
  const ChannelRealization ch = twr::sample_realization(config, 7);
  CHECK(ch.num_ms == 3);
  CHECK(ch.num_rs == 2);
  CHECK(ch.num_subcarriers == 4);
  CHECK(ch.h_mac.size() == 2 * 4);
  CHECK(ch.h_bc.size() == 2 * 4);
  CHECK(ch.f_mac.size() == 3 * 2 * 4);
  CHECK(ch.f_bc.size() == 2 * 3 * 4);
  CHECK_NOTHROW(ch.validate());
}

TEST_CASE("node placement geometry") {
  NetworkConfig config = small_config();
  config.num_rs = 3;
  config.rs_power_budget = {10.0, 10.0, 10.0};
  const ChannelRealization ch = twr::sample_realization(config, 11);

  CHECK(ch.positions.bs.x == 0.0);
  CHECK(ch.positions.bs.y == 0.0);

  REQUIRE(ch.positions.rs.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    const double r = std::hypot(ch.positions.rs[k].x, ch.positions.rs[k].y);
    CHECK(r == doctest::Approx(config.rs_ring_radius).epsilon(1e-12));
    const double angle =
        std::atan2(ch.positions.rs[k].y, ch.positions.rs[k].x);
    const double want = 2.0 * std::acos(-1.0) * k / 3.0;
    const double normalized = angle < 0 ? angle + 2.0 * std::acos(-1.0) : angle;
    CHECK(normalized == doctest::Approx(want).epsilon(1e-9));
  }

  for (const auto& ms : ch.positions.ms) {
    const double r = std::hypot(ms.x, ms.y);
    CHECK(r >= config.rs_ring_radius);
    CHECK(r <= config.cell_radius);
  }
}

TEST_CASE("mobile stations fill the annulus uniformly by area") {
  NetworkConfig config = small_config();
  config.num_ms = 4000;
  config.ms_weights.assign(4000, 1.0);
  const ChannelRealization ch = twr::sample_realization(config, 5);
  // r^2 is uniform on [ring^2, cell^2], so its mean is the midpoint.
  double mean_r2 = 0.0;
  for (const auto& ms : ch.positions.ms) {
    mean_r2 += (ms.x * ms.x + ms.y * ms.y) / config.num_ms;
  }
  const double lo = config.rs_ring_radius * config.rs_ring_radius;
  const double hi = config.cell_radius * config.cell_radius;
  CHECK(mean_r2 > lo + 0.40 * (hi - lo));
  CHECK(mean_r2 < lo + 0.60 * (hi - lo));
}

TEST_CASE("path loss is one at the cell edge and follows the exponent") {
  const NetworkConfig config = small_config();
  CHECK(twr::path_loss(config.cell_radius, config) == doctest::Approx(1.0));
  CHECK(twr::path_loss(config.cell_radius / 2.0, config) ==
        doctest::Approx(16.0).epsilon(1e-12));
  NetworkConfig cubic = config;
  cubic.path_loss_exponent = 3.0;
  CHECK(twr::path_loss(cubic.cell_radius / 2.0, cubic) ==
        doctest::Approx(8.0).epsilon(1e-12));
}

TEST_CASE("zero shadowing sigma makes the shadowing factor exactly one") {
  NetworkConfig config = small_config();
  config.shadowing_sigma_db = 0.0;
  Rng rng(123);
  for (int i = 0; i < 10; ++i) CHECK(twr::shadowing_linear(config, rng) == 1.0);
}

TEST_CASE("small scale power averages to the large scale profile") {
  NetworkConfig config = small_config();
  config.shadowing_sigma_db = 0.0;  // isolate path loss
  config.num_subcarriers = 4096;
  const ChannelRealization ch = twr::sample_realization(config, 17);
  const double d = twr::distance(ch.positions.bs, ch.positions.rs[0]);
  const double pl = twr::path_loss(d, config);
  double mean = 0.0;
  for (int i = 0; i < config.num_subcarriers; ++i) {
    mean += std::norm(ch.hm(0, i)) / config.num_subcarriers;
  }
  CHECK(mean == doctest::Approx(pl).epsilon(0.10));
}

TEST_CASE("reciprocal fading copies the MAC draw into the BC phase") {
  NetworkConfig config = small_config();
  config.reciprocal_fading = true;
  const ChannelRealization ch = twr::sample_realization(config, 21);
  for (int k = 0; k < config.num_rs; ++k) {
    for (int j = 0; j < config.num_subcarriers; ++j) {
      CHECK(ch.hb(k, j) == ch.hm(k, j));
      for (int u = 0; u < config.num_ms; ++u) {
        CHECK(ch.fb(k, u, j) == ch.fm(u, k, j));
      }
    }
  }

  config.reciprocal_fading = false;
  const ChannelRealization indep = twr::sample_realization(config, 21);
  CHECK(indep.hb(0, 0) != indep.hm(0, 0));
}

TEST_CASE("config validation rejects out of contract values") {
  CHECK_NOTHROW(small_config().validate());
  NetworkConfig c = small_config();
  c.num_ms = 0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.bs_power_per_subcarrier = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.rs_power_budget = {10.0};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.rs_power_budget[1] = -1.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.ms_weights[0] = -0.5;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.rs_ring_radius = c.cell_radius;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.path_loss_exponent = 0.0;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
}

TEST_CASE("realization validation rejects corrupted tensors") {
  const NetworkConfig config = small_config();
  ChannelRealization ch = twr::sample_realization(config, 3);
  ch.h_mac[0] = {0.0, 0.0};
  CHECK_THROWS_AS(ch.validate(), std::runtime_error);
  ch = twr::sample_realization(config, 3);
  ch.f_bc.pop_back();
  CHECK_THROWS_AS(ch.validate(), std::runtime_error);
}

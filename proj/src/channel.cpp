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
#include <stdexcept>
#include <string>

namespace twr {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;

void require(bool ok, const std::string& what) {
  if (!ok) throw std::invalid_argument("NetworkConfig: " + what);
}
}  // namespace

void NetworkConfig::validate() const {
  require(num_ms >= 1, "num_ms must be >= 1");
  require(num_rs >= 1, "num_rs must be >= 1");
  require(num_subcarriers >= 1, "num_subcarriers must be >= 1");
  require(bs_power_per_subcarrier > 0 && std::isfinite(bs_power_per_subcarrier),
          "bs_power_per_subcarrier must be positive");
  require(ms_power_per_subcarrier > 0 && std::isfinite(ms_power_per_subcarrier),
          "ms_power_per_subcarrier must be positive");
  require(rs_power_budget.size() == static_cast<std::size_t>(num_rs),
          "rs_power_budget must have num_rs entries");
  for (double p : rs_power_budget)
    require(p > 0 && std::isfinite(p), "rs power budgets must be positive");
  require(ms_weights.size() == static_cast<std::size_t>(num_ms),
          "ms_weights must have num_ms entries");
  for (double w : ms_weights)
    require(w >= 0 && std::isfinite(w), "ms weights must be nonnegative");
  require(cell_radius > 0, "cell_radius must be positive");
  require(rs_ring_radius > 0, "rs_ring_radius must be positive");
  require(rs_ring_radius < cell_radius, "rs_ring_radius must be < cell_radius");
  require(path_loss_exponent > 0, "path_loss_exponent must be positive");
  require(shadowing_sigma_db >= 0, "shadowing_sigma_db must be nonnegative");
}

void ChannelRealization::validate() const {
  const auto k = static_cast<std::size_t>(num_rs);
  const auto m = static_cast<std::size_t>(num_ms);
  const auto n = static_cast<std::size_t>(num_subcarriers);
  if (h_mac.size() != k * n || h_bc.size() != k * n ||
      f_mac.size() != m * k * n || f_bc.size() != k * m * n) {
    throw std::runtime_error("ChannelRealization: tensor dimension mismatch");
  }
  auto check = [](const std::vector<std::complex<double>>& t) {
    for (const auto& g : t) {
      if (!std::isfinite(g.real()) || !std::isfinite(g.imag()) ||
          std::norm(g) <= 0.0) {
        throw std::runtime_error("ChannelRealization: non-finite or zero gain");
      }
    }
  };
  check(h_mac);
  check(f_mac);
  check(h_bc);
  check(f_bc);
}

double distance(const Vec2& a, const Vec2& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

double path_loss(double d, const NetworkConfig& config) {
  return std::pow(d / config.cell_radius, -config.path_loss_exponent);
}

double shadowing_linear(const NetworkConfig& config, Rng& rng) {
  const double x_db = config.shadowing_sigma_db * gaussian(rng);
  return std::pow(10.0, x_db / 10.0);
}

NodePositions place_nodes(const NetworkConfig& config, Rng& rng) {
  NodePositions pos;
  pos.bs = {0.0, 0.0};
  pos.rs.resize(config.num_rs);
  for (int k = 0; k < config.num_rs; ++k) {
    const double angle = kTwoPi * k / config.num_rs;
    pos.rs[k] = {config.rs_ring_radius * std::cos(angle),
                 config.rs_ring_radius * std::sin(angle)};
  }
  pos.ms.resize(config.num_ms);
  const double r0sq = config.rs_ring_radius * config.rs_ring_radius;
  const double r1sq = config.cell_radius * config.cell_radius;
  for (int u = 0; u < config.num_ms; ++u) {
    // Uniform by area over the annulus: r = sqrt(r0^2 + U*(r1^2 - r0^2)).
    const double r = std::sqrt(r0sq + uniform01(rng) * (r1sq - r0sq));
    const double angle = kTwoPi * uniform01(rng);
    pos.ms[u] = {r * std::cos(angle), r * std::sin(angle)};
  }
  return pos;
}

ChannelRealization sample_channels(const NetworkConfig& config,
                                   const NodePositions& positions, Rng& rng) {
  const int m_count = config.num_ms;
  const int k_count = config.num_rs;
  const int n = config.num_subcarriers;

  ChannelRealization ch;
  ch.num_ms = m_count;
  ch.num_rs = k_count;
  ch.num_subcarriers = n;
  ch.positions = positions;
  ch.h_mac.resize(static_cast<std::size_t>(k_count) * n);
  ch.h_bc.resize(static_cast<std::size_t>(k_count) * n);
  ch.f_mac.resize(static_cast<std::size_t>(m_count) * k_count * n);
  ch.f_bc.resize(static_cast<std::size_t>(k_count) * m_count * n);

  // Large-scale amplitude per physical link, shared by both phases and by
  // every subcarrier of that link. Drawn first, in fixed order.
  std::vector<double> bs_rs_amp(k_count);
  for (int k = 0; k < k_count; ++k) {
    const double d = distance(positions.bs, positions.rs[k]);
    bs_rs_amp[k] = std::sqrt(path_loss(d, config) * shadowing_linear(config, rng));
  }
  std::vector<double> ms_rs_amp(static_cast<std::size_t>(m_count) * k_count);
  for (int u = 0; u < m_count; ++u) {
    for (int k = 0; k < k_count; ++k) {
      const double d = distance(positions.ms[u], positions.rs[k]);
      ms_rs_amp[static_cast<std::size_t>(u) * k_count + k] =
          std::sqrt(path_loss(d, config) * shadowing_linear(config, rng));
    }
  }

  // Small-scale fading, i.i.d. per subcarrier. MAC phase first, then BC.
  for (int k = 0; k < k_count; ++k)
    for (int i = 0; i < n; ++i)
      ch.h_mac[static_cast<std::size_t>(k) * n + i] =
          bs_rs_amp[k] * circular_gaussian(rng);
  for (int u = 0; u < m_count; ++u)
    for (int k = 0; k < k_count; ++k)
      for (int i = 0; i < n; ++i)
        ch.f_mac[(static_cast<std::size_t>(u) * k_count + k) * n + i] =
            ms_rs_amp[static_cast<std::size_t>(u) * k_count + k] *
            circular_gaussian(rng);

  if (config.reciprocal_fading) {
    for (int k = 0; k < k_count; ++k)
      for (int j = 0; j < n; ++j)
        ch.h_bc[static_cast<std::size_t>(k) * n + j] = ch.hm(k, j);
    for (int k = 0; k < k_count; ++k)
      for (int u = 0; u < m_count; ++u)
        for (int j = 0; j < n; ++j)
          ch.f_bc[(static_cast<std::size_t>(k) * m_count + u) * n + j] =
              ch.fm(u, k, j);
  } else {
    for (int k = 0; k < k_count; ++k)
      for (int j = 0; j < n; ++j)
        ch.h_bc[static_cast<std::size_t>(k) * n + j] =
            bs_rs_amp[k] * circular_gaussian(rng);
    for (int k = 0; k < k_count; ++k)
      for (int u = 0; u < m_count; ++u)
        for (int j = 0; j < n; ++j)
          ch.f_bc[(static_cast<std::size_t>(k) * m_count + u) * n + j] =
              ms_rs_amp[static_cast<std::size_t>(u) * k_count + k] *
              circular_gaussian(rng);
  }

  ch.validate();
  return ch;
}

ChannelRealization sample_realization(const NetworkConfig& config,
                                      std::uint64_t seed) {
  config.validate();
  Rng rng(seed);
  const NodePositions positions = place_nodes(config, rng);
  ChannelRealization ch = sample_channels(config, positions, rng);
  ch.seed = seed;
  return ch;
}

}  // namespace twr

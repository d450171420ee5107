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

#ifndef TWRALLOC_CHANNEL_HPP
#define TWRALLOC_CHANNEL_HPP

#include <complex>
#include <cstdint>
#include <vector>

#include "rng.hpp"

namespace twr {

/// Static description of one cell: node counts, per-node power settings
/// (noise-normalized linear units), scheduling weights and geometry.
struct NetworkConfig {
  int num_ms = 4;
  int num_rs = 3;
  int num_subcarriers = 32;
  double bs_power_per_subcarrier = 10.0 / 32.0;
  double ms_power_per_subcarrier = 10.0 / 32.0;
  std::vector<double> rs_power_budget{10.0, 10.0, 10.0};  // per relay, total
  std::vector<double> ms_weights{1.0, 1.0, 1.0, 1.0};
  double cell_radius = 2000.0;      // meters
  double rs_ring_radius = 1000.0;   // meters
  double path_loss_exponent = 4.0;
  double shadowing_sigma_db = 5.8;
  // When set, BC-phase small-scale fading reuses the MAC-phase draw on the
  // same physical link instead of being drawn independently.
  bool reciprocal_fading = false;

  /// Throws std::invalid_argument if any field is out of contract.
  void validate() const;
};

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct NodePositions {
  Vec2 bs;
  std::vector<Vec2> rs;
  std::vector<Vec2> ms;
};

/// One draw of every per-subcarrier complex gain for both phases, plus the
/// geometry it was sampled from. Tensor layouts (flat, row-major):
///   h_mac[k][i]      BS -> RS k, MAC subcarrier i        (K x N)
///   f_mac[u][k][i]   MS u -> RS k, MAC subcarrier i      (M x K x N)
///   h_bc[k][j]       RS k -> BS, BC subcarrier j         (K x N)
///   f_bc[k][u][j]    RS k -> MS u, BC subcarrier j       (K x M x N)
struct ChannelRealization {
  int num_ms = 0;
  int num_rs = 0;
  int num_subcarriers = 0;
  std::vector<std::complex<double>> h_mac;
  std::vector<std::complex<double>> f_mac;
  std::vector<std::complex<double>> h_bc;
  std::vector<std::complex<double>> f_bc;
  NodePositions positions;
  std::uint64_t seed = 0;

  const std::complex<double>& hm(int k, int i) const {
    return h_mac[static_cast<std::size_t>(k) * num_subcarriers + i];
  }
  const std::complex<double>& fm(int u, int k, int i) const {
    return f_mac[(static_cast<std::size_t>(u) * num_rs + k) * num_subcarriers + i];
  }
  const std::complex<double>& hb(int k, int j) const {
    return h_bc[static_cast<std::size_t>(k) * num_subcarriers + j];
  }
  const std::complex<double>& fb(int k, int u, int j) const {
    return f_bc[(static_cast<std::size_t>(k) * num_ms + u) * num_subcarriers + j];
  }

  /// Throws std::runtime_error on dimension mismatch or non-finite gains.
  void validate() const;
};

double distance(const Vec2& a, const Vec2& b);

/// Free-space-style power attenuation (d / cell_radius)^(-exponent),
/// normalized so the loss is 1 at the cell edge. d must be > 0.
double path_loss(double d, const NetworkConfig& config);

/// One log-normal shadowing draw, linear scale: 10^(X/10), X ~ N(0, sigma^2).
double shadowing_linear(const NetworkConfig& config, Rng& rng);

/// BS at the origin, RSs equally spaced in angle on the ring starting at
/// angle 0, MSs uniform by area over the annulus between the RS ring and
/// the cell edge.
NodePositions place_nodes(const NetworkConfig& config, Rng& rng);

/// Draws every channel gain for the given geometry. Large-scale terms
/// (path loss and shadowing) are drawn once per physical link and shared
/// between phases and subcarriers; Rayleigh small-scale terms are i.i.d.
/// per subcarrier, independently per phase unless reciprocal_fading is set.
/// Draw order is fixed so that equal (config, rng state) gives bit-identical
/// output.
ChannelRealization sample_channels(const NetworkConfig& config,
                                   const NodePositions& positions, Rng& rng);

/// place_nodes + sample_channels from a fresh stream seeded with `seed`.
ChannelRealization sample_realization(const NetworkConfig& config,
                                      std::uint64_t seed);

}  // namespace twr

#endif  // TWRALLOC_CHANNEL_HPP

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

#ifndef TWRALLOC_RATE_MODEL_HPP
#define TWRALLOC_RATE_MODEL_HPP

#include "channel.hpp"

namespace twr {

/// Everything the rate of one candidate tuple (MS u, RS k, MAC subcarrier i,
/// BC subcarrier j) depends on, with channel gains already squared to linear
/// power gains. `m` is the AF noise-amplification constant
/// 1 + p_b*gain_hm + p_u*gain_fm shared by both directions of the tuple.
struct TupleContext {
  int u = 0;
  int k = 0;
  int i = 0;
  int j = 0;
  double gain_fm = 0.0;  // |MS u -> RS k on i|^2, MAC phase
  double gain_hm = 0.0;  // |BS -> RS k on i|^2, MAC phase
  double gain_hb = 0.0;  // |RS k -> BS on j|^2, BC phase
  double gain_fb = 0.0;  // |RS k -> MS u on j|^2, BC phase
  double p_b = 0.0;      // BS power on (k, i)
  double p_u = 0.0;      // MS power on (k, i)
  double m = 1.0;

  static TupleContext from_channels(const NetworkConfig& config,
                                    const ChannelRealization& channels, int u,
                                    int k, int i, int j);

  /// Throws std::domain_error on negative or non-finite fields, or when m
  /// does not equal its defining expression.
  void validate() const;
};

/// Two-way AF sum rate of the tuple in bits/s/Hz as a function of the relay
/// power: the uplink direction carries the MS signal (power p_u*gain_fm at
/// the relay) out over gain_hb, the downlink direction carries the BS signal
/// (power p_b*gain_hm) out over gain_fb, each costing half a channel use:
///
///   R(p) = 1/2 log2(1 + a*g1*p / (g1*p + m)) +
///          1/2 log2(1 + b*g2*p / (g2*p + m)),
///   a = p_u*gain_fm, b = p_b*gain_hm, g1 = gain_hb, g2 = gain_fb.
///
/// Returns exactly 0 at p_relay = 0. Strictly increasing and concave in
/// p_relay whenever a*g1 + b*g2 > 0.
double sum_rate(const TupleContext& ctx, double p_relay);

/// Limit of sum_rate as p_relay -> infinity:
/// 1/2 log2(1 + a) + 1/2 log2(1 + b).
double sum_rate_limit(const TupleContext& ctx);

/// Exact derivative dR/dp of sum_rate in rational form:
///   m/(2 ln 2) * (a*g1/D1 + b*g2/D2),
///   D1 = ((1+a)*g1*p + m)(g1*p + m), D2 = ((1+b)*g2*p + m)(g2*p + m).
/// Strictly decreasing in p_relay, which makes the first-order condition of
/// w*R(p) - lambda*p a bracketed sign change.
double sum_rate_derivative(const TupleContext& ctx, double p_relay);

/// Value of serving this tuple at relay power p_star under dual price
/// lambda_k: w_u * R(p_star) - lambda_k * p_star. May be negative.
double profit(const TupleContext& ctx, double lambda_k, double w_u,
              double p_star);

}  // namespace twr

#endif  // TWRALLOC_RATE_MODEL_HPP

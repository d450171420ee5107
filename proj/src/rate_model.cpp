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

#include "rate_model.hpp"

#include <cmath>
#include <stdexcept>

namespace twr {

namespace {
constexpr double kLn2 = 0.69314718055994530941723212145818;

bool bad(double x) { return x < 0.0 || !std::isfinite(x); }
}  // namespace

TupleContext TupleContext::from_channels(const NetworkConfig& config,
                                         const ChannelRealization& channels,
                                         int u, int k, int i, int j) {
  TupleContext ctx;
  ctx.u = u;
  ctx.k = k;
  ctx.i = i;
  ctx.j = j;
  ctx.gain_fm = std::norm(channels.fm(u, k, i));
  ctx.gain_hm = std::norm(channels.hm(k, i));
  ctx.gain_hb = std::norm(channels.hb(k, j));
  ctx.gain_fb = std::norm(channels.fb(k, u, j));
  ctx.p_b = config.bs_power_per_subcarrier;
  ctx.p_u = config.ms_power_per_subcarrier;
  ctx.m = 1.0 + ctx.p_b * ctx.gain_hm + ctx.p_u * ctx.gain_fm;
  return ctx;
}

void TupleContext::validate() const {
  if (bad(gain_fm) || bad(gain_hm) || bad(gain_hb) || bad(gain_fb) ||
      bad(p_b) || bad(p_u)) {
    throw std::domain_error("TupleContext: negative or non-finite field");
  }
  if (m != 1.0 + p_b * gain_hm + p_u * gain_fm) {
    throw std::domain_error("TupleContext: m does not match its definition");
  }
}

double sum_rate(const TupleContext& ctx, double p_relay) {
  if (bad(p_relay)) throw std::domain_error("sum_rate: bad relay power");
  if (p_relay == 0.0) return 0.0;
  const double a = ctx.p_u * ctx.gain_fm;
  const double b = ctx.p_b * ctx.gain_hm;
  double bits = 0.0;
  if (a > 0.0 && ctx.gain_hb > 0.0) {
    const double s = ctx.gain_hb * p_relay;
    bits += std::log1p(a * s / (s + ctx.m));
  }
  if (b > 0.0 && ctx.gain_fb > 0.0) {
    const double s = ctx.gain_fb * p_relay;
    bits += std::log1p(b * s / (s + ctx.m));
  }
  return 0.5 * bits / kLn2;
}

double sum_rate_limit(const TupleContext& ctx) {
  const double a = ctx.p_u * ctx.gain_fm;
  const double b = ctx.p_b * ctx.gain_hm;
  double bits = 0.0;
  if (ctx.gain_hb > 0.0) bits += std::log1p(a);
  if (ctx.gain_fb > 0.0) bits += std::log1p(b);
  return 0.5 * bits / kLn2;
}

double sum_rate_derivative(const TupleContext& ctx, double p_relay) {
  if (bad(p_relay)) {
    throw std::domain_error("sum_rate_derivative: bad relay power");
  }
  const double a = ctx.p_u * ctx.gain_fm;
  const double b = ctx.p_b * ctx.gain_hm;
  const double m = ctx.m;
  double slope = 0.0;
  if (a > 0.0 && ctx.gain_hb > 0.0) {
    const double s = ctx.gain_hb * p_relay;
    slope += a * ctx.gain_hb / ((s + a * s + m) * (s + m));
  }
  if (b > 0.0 && ctx.gain_fb > 0.0) {
    const double s = ctx.gain_fb * p_relay;
    slope += b * ctx.gain_fb / ((s + b * s + m) * (s + m));
  }
  return 0.5 * m * slope / kLn2;
}

double profit(const TupleContext& ctx, double lambda_k, double w_u,
              double p_star) {
  if (bad(lambda_k) || bad(w_u)) {
    throw std::domain_error("profit: bad price or weight");
  }
  return w_u * sum_rate(ctx, p_star) - lambda_k * p_star;
}

}  // namespace twr

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

#include "power_opt.hpp"

#include <cmath>
#include <stdexcept>

namespace twr {

PowerSolverConfig PowerSolverConfig::for_budget(double p_k) {
  PowerSolverConfig cfg;
  cfg.p_cap = p_k;
  cfg.root_tol = 1e-9 * p_k;
  return cfg;
}

void PowerSolverConfig::validate() const {
  if (!(p_cap > 0) || !(root_tol > 0) || !(lambda_floor > 0) ||
      max_bisect_iters < 1) {
    throw std::invalid_argument("PowerSolverConfig: nonpositive parameter");
  }
}

double optimal_power(const TupleContext& ctx, double lambda_k, double w_u,
                     const PowerSolverConfig& cfg) {
  if (lambda_k < 0 || !std::isfinite(lambda_k) || w_u < 0 ||
      !std::isfinite(w_u)) {
    throw std::domain_error("optimal_power: bad price or weight");
  }
  if (w_u == 0.0) return 0.0;
  const double lam = std::max(lambda_k, cfg.lambda_floor);

  if (w_u * sum_rate_derivative(ctx, 0.0) <= lam) return 0.0;
  if (w_u * sum_rate_derivative(ctx, cfg.p_cap) >= lam) return cfg.p_cap;

  // g(p) = w dR/dp - lam is strictly decreasing with g(0) > 0 > g(p_cap).
  // The bracket is driven all the way to double resolution: each step is a
  // cheap rational evaluation, and a fully polished root keeps the
  // first-order residual at rounding scale even when the optimum sits far
  // below the saturation knee.
  double lo = 0.0;
  double hi = cfg.p_cap;
  for (int it = 0; it < cfg.max_bisect_iters; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) return mid;  // bracket at double resolution
    if (w_u * sum_rate_derivative(ctx, mid) > lam) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (hi - lo > cfg.root_tol) {
    throw std::runtime_error("optimal_power: bisection failed to converge");
  }
  return 0.5 * (lo + hi);
}

namespace {
double total_demand(const std::vector<TupleContext>& tuples,
                    const std::vector<double>& weights, double mu,
                    const PowerSolverConfig& cfg, std::vector<double>* powers) {
  double sum = 0.0;
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    const double p = optimal_power(tuples[t], mu, weights[t], cfg);
    (*powers)[t] = p;
    sum += p;
  }
  return sum;
}
}  // namespace

std::vector<double> refine_relay_powers(const std::vector<TupleContext>& tuples,
                                        const std::vector<double>& weights,
                                        double budget,
                                        const PowerSolverConfig& cfg,
                                        double* mu_out) {
  if (tuples.size() != weights.size()) {
    throw std::invalid_argument("refine_relay_powers: size mismatch");
  }
  if (!(budget > 0) || !std::isfinite(budget)) {
    throw std::invalid_argument("refine_relay_powers: bad budget");
  }
  std::vector<double> powers(tuples.size(), 0.0);
  if (tuples.empty()) {
    if (mu_out != nullptr) *mu_out = cfg.lambda_floor;
    return powers;
  }

  double mu_lo = cfg.lambda_floor;
  double demand = total_demand(tuples, weights, mu_lo, cfg, &powers);
  if (demand <= budget) {
    if (mu_out != nullptr) *mu_out = mu_lo;
    return powers;  // budget slack at the price floor
  }

  // Demand is continuous and non-increasing in mu and vanishes for large mu,
  // so doubling brackets the budget crossing.
  double mu_hi = std::max(1e-6, 2.0 * cfg.lambda_floor);
  std::vector<double> hi_powers(tuples.size(), 0.0);
  double hi_demand = total_demand(tuples, weights, mu_hi, cfg, &hi_powers);
  int guard = 0;
  while (hi_demand > budget) {
    mu_lo = mu_hi;
    mu_hi *= 2.0;
    hi_demand = total_demand(tuples, weights, mu_hi, cfg, &hi_powers);
    if (++guard > 200) {
      throw std::runtime_error("refine_relay_powers: bracket expansion failed");
    }
  }

  for (int it = 0; it < 200; ++it) {
    const double mu = 0.5 * (mu_lo + mu_hi);
    if (mu <= mu_lo || mu >= mu_hi) break;
    demand = total_demand(tuples, weights, mu, cfg, &powers);
    if (std::abs(demand - budget) <= 1e-9 * budget) {
      if (mu_out != nullptr) *mu_out = mu;
      return powers;
    }
    if (demand > budget) {
      mu_lo = mu;
    } else {
      mu_hi = mu;
      hi_powers = powers;
    }
    if (mu_hi - mu_lo <= 1e-13 * mu_hi) break;
  }
  // Fall back to the high side of the bracket, whose demand is feasible.
  if (mu_out != nullptr) *mu_out = mu_hi;
  return hi_powers;
}

}  // namespace twr

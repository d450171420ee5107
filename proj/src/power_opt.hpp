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

#ifndef TWRALLOC_POWER_OPT_HPP
#define TWRALLOC_POWER_OPT_HPP

#include <vector>

#include "rate_model.hpp"

namespace twr {

/// Knobs for the scalar power optimizer. p_cap is the owning relay's total
/// budget: no single tuple may ever use more, which keeps the objective
/// bounded even at a zero dual price.
struct PowerSolverConfig {
  double p_cap = 1.0;
  double root_tol = 1e-9;       // bracket width that counts as converged
  int max_bisect_iters = 200;
  double lambda_floor = 1e-8;   // smallest price treated as positive

  /// Standard settings for a relay with total budget p_k:
  /// p_cap = p_k, root_tol = 1e-9 * p_k.
  static PowerSolverConfig for_budget(double p_k);

  /// Throws std::invalid_argument on nonpositive tolerances or cap.
  void validate() const;
};

/// argmax over p in [0, p_cap] of w_u * sum_rate(ctx, p) - lambda_k * p.
///
/// The objective is concave, so its derivative g(p) = w_u * dR/dp - lambda_k
/// is strictly decreasing: g(0) <= 0 gives 0, g(p_cap) >= 0 gives p_cap,
/// otherwise the unique sign change is bisected until the bracket collapses
/// at double resolution. The iterations are cheap rational evaluations and a
/// fully polished root keeps the first-order residual at rounding scale.
/// Prices below lambda_floor are floored. Stateless, safe to call
/// concurrently.
double optimal_power(const TupleContext& ctx, double lambda_k, double w_u,
                     const PowerSolverConfig& cfg);

/// Splits one relay's power budget across the tuples assigned to it:
///
///   max sum_t weights[t] * sum_rate(tuples[t], p_t)
///   s.t. sum_t p_t <= budget, p_t >= 0,
///
/// by bisecting a per-relay price mu until the total demanded power
/// sum_t optimal_power(tuples[t], mu, weights[t]) meets the budget, or
/// mu = lambda_floor if the budget is slack there. Returned powers sum to
/// at most budget * (1 + 1e-9), and active tuples share the same marginal
/// value w * dR/dp = mu (the water-filling condition). If mu_out is given
/// it receives the final price.
std::vector<double> refine_relay_powers(const std::vector<TupleContext>& tuples,
                                        const std::vector<double>& weights,
                                        double budget,
                                        const PowerSolverConfig& cfg,
                                        double* mu_out = nullptr);

}  // namespace twr

#endif  // TWRALLOC_POWER_OPT_HPP

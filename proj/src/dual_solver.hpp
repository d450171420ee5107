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

#ifndef TWRALLOC_DUAL_SOLVER_HPP
#define TWRALLOC_DUAL_SOLVER_HPP

#include <cstdint>
#include <vector>

#include "assignment.hpp"

namespace twr {

struct SolverOptions {
  double tol_lambda = 1e-4;     // relative convergence threshold on the step
  int max_iters = 500;
  double lambda_floor = 1e-8;
  double omega0_scale = 0.1;    // step seed as a fraction of max initial price
  bool random_init = false;     // draw the initial prices instead of scaling
  std::uint64_t init_seed = 0;  // stream for random_init

  void validate() const;
};

struct IterationRecord {
  int l = 0;
  double dual_value = 0.0;
  double primal_feasible_value = 0.0;  // candidate with powers scaled to fit
  double gap = 0.0;
  double subgrad_norm = 0.0;
  double step_omega = 0.0;
};

/// Mutable state of the projected subgradient iteration on the prices.
struct DualState {
  std::vector<double> lambda;
  int iteration = 0;
  double omega0 = 0.0;
  double step_omega = 0.0;
  std::vector<double> subgradient;  // per relay: budget minus demanded power
  double dual_value = 0.0;
  double best_dual = 0.0;
  std::vector<IterationRecord> history;
};

struct SolverReport {
  Allocation allocation;     // refined, budget-feasible powers
  double primal_value = 0.0;
  bool has_dual = false;     // baselines produce no bound
  double dual_value = 0.0;   // best (lowest) dual value seen
  double gap = 0.0;          // (dual - primal) / dual
  int iterations = 0;
  bool converged = false;
  std::vector<double> lambda;  // prices at the best dual iterate
  std::vector<IterationRecord> history;
};

struct DualEvaluation {
  double dual_value = 0.0;
  Allocation candidate;             // tuples with price-optimal powers
  std::vector<double> subgradient;  // per relay: budget minus demanded power
};

/// Initial prices: lambda_k = (sum of weights) * K / (M * P_k), a scale
/// matching typical marginal utilities, or a random draw around that scale
/// when opts.random_init is set. omega0 = omega0_scale * max initial price.
DualState init_dual_state(const std::vector<double>& ms_weights,
                          const std::vector<double>& rs_power_budget,
                          const SolverOptions& opts);
DualState init_dual_state(const NetworkConfig& config,
                          const SolverOptions& opts);

/// One evaluation of the dual function at fixed prices: profit matrix,
/// pairing, then dual_value = sum of selected profits + sum_k lambda_k * P_k.
/// The subgradient entry for relay k is P_k minus the power its selected
/// tuples demand at these prices.
DualEvaluation evaluate_dual(const std::vector<double>& lambda,
                             const TupleGrid& grid);

/// Projected subgradient update with diminishing steps: the price of an
/// overdrawn relay rises, the price of a slack relay falls, floored at
/// lambda_floor. step_omega = omega0 / sqrt(l + 1); increments l.
void subgradient_step(DualState& state, const SolverOptions& opts);

/// Full pipeline: iterate evaluate_dual / subgradient_step until the price
/// step is below tol_lambda (relative) or max_iters, take the allocation of
/// the best dual iterate, restore budget feasibility with refine_relay_powers
/// and report primal, dual bound and gap.
SolverReport solve(const TupleGrid& grid, const SolverOptions& opts = {});
SolverReport solve(const ChannelRealization& channels,
                   const NetworkConfig& config,
                   const SolverOptions& opts = {});

/// Rate each MS accrues under the allocation (unweighted), length M.
std::vector<double> per_ms_rates(const Allocation& alloc,
                                 const TupleGrid& grid);

/// Objective value sum_u w_u * rate_u of the allocation.
double weighted_value(const Allocation& alloc, const TupleGrid& grid);

}  // namespace twr

#endif  // TWRALLOC_DUAL_SOLVER_HPP

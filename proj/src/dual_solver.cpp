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

#include "dual_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "rng.hpp"

namespace twr {

void SolverOptions::validate() const {
  if (!(tol_lambda > 0) || max_iters < 1 || !(lambda_floor > 0) ||
      !(omega0_scale > 0)) {
    throw std::invalid_argument("SolverOptions: nonpositive parameter");
  }
}

DualState init_dual_state(const std::vector<double>& ms_weights,
                          const std::vector<double>& rs_power_budget,
                          const SolverOptions& opts) {
  opts.validate();
  if (ms_weights.empty() || rs_power_budget.empty()) {
    throw std::invalid_argument("init_dual_state: empty weights or budgets");
  }
  double weight_sum = 0.0;
  for (double w : ms_weights) weight_sum += w;
  const auto num_ms = static_cast<double>(ms_weights.size());
  const auto num_rs = static_cast<double>(rs_power_budget.size());

  DualState state;
  state.lambda.resize(rs_power_budget.size());
  for (std::size_t k = 0; k < rs_power_budget.size(); ++k) {
    const double scale = weight_sum * num_rs / (num_ms * rs_power_budget[k]);
    state.lambda[k] = std::max(scale, opts.lambda_floor);
  }
  if (opts.random_init) {
    Rng rng(derive_seed(opts.init_seed, 0xd0a1));
    for (double& l : state.lambda) {
      l = std::max(2.0 * l * uniform01_open(rng), opts.lambda_floor);
    }
  }
  state.omega0 =
      opts.omega0_scale * *std::max_element(state.lambda.begin(),
                                            state.lambda.end());
  state.step_omega = state.omega0;
  state.subgradient.assign(rs_power_budget.size(), 0.0);
  state.best_dual = std::numeric_limits<double>::infinity();
  return state;
}

DualState init_dual_state(const NetworkConfig& config,
                          const SolverOptions& opts) {
  config.validate();
  return init_dual_state(config.ms_weights, config.rs_power_budget, opts);
}

DualEvaluation evaluate_dual(const std::vector<double>& lambda,
                             const TupleGrid& grid) {
  DualEvaluation eval;
  const ProfitMatrix matrix = build_profit_matrix(grid, lambda);
  eval.candidate = solve_pairing(matrix);
  eval.dual_value = selected_value_sum(matrix, eval.candidate);
  for (int k = 0; k < grid.num_rs(); ++k) {
    eval.dual_value += lambda[k] * grid.budget(k);
  }
  eval.subgradient.assign(grid.num_rs(), 0.0);
  for (int k = 0; k < grid.num_rs(); ++k) {
    eval.subgradient[k] = grid.budget(k);
  }
  for (const auto& t : eval.candidate.active_tuples) {
    eval.subgradient[t.k] -= t.p_relay;
  }
  return eval;
}

void subgradient_step(DualState& state, const SolverOptions& opts) {
  state.step_omega = state.omega0 / std::sqrt(state.iteration + 1.0);
  for (std::size_t k = 0; k < state.lambda.size(); ++k) {
    // The subgradient is the budget slack, so descending the dual walks
    // against it: demand above budget pushes the price up.
    state.lambda[k] = std::max(
        state.lambda[k] - state.step_omega * state.subgradient[k],
        opts.lambda_floor);
  }
  ++state.iteration;
}

namespace {
double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Cheap feasible value of a candidate whose powers may overdraw: scale each
// relay's powers down to its budget, then price the rates.
double scaled_feasible_value(const Allocation& candidate,
                             const TupleGrid& grid) {
  std::vector<double> totals =
      relay_power_totals(candidate, grid.num_rs());
  std::vector<double> scale(totals.size(), 1.0);
  for (std::size_t k = 0; k < totals.size(); ++k) {
    if (totals[k] > grid.budget(static_cast<int>(k))) {
      scale[k] = grid.budget(static_cast<int>(k)) / totals[k];
    }
  }
  double value = 0.0;
  for (const auto& t : candidate.active_tuples) {
    const TupleContext ctx = grid.make(t.u, t.k, t.i, t.j);
    value += grid.weight(t.u) * sum_rate(ctx, t.p_relay * scale[t.k]);
  }
  return value;
}

void refine_allocation(Allocation& alloc, const TupleGrid& grid) {
  for (int k = 0; k < grid.num_rs(); ++k) {
    std::vector<TupleContext> tuples;
    std::vector<double> weights;
    std::vector<std::size_t> slots;
    for (std::size_t t = 0; t < alloc.active_tuples.size(); ++t) {
      if (alloc.active_tuples[t].k != k) continue;
      const auto& at = alloc.active_tuples[t];
      tuples.push_back(grid.make(at.u, at.k, at.i, at.j));
      weights.push_back(grid.weight(at.u));
      slots.push_back(t);
    }
    if (tuples.empty()) continue;
    const PowerSolverConfig cfg = PowerSolverConfig::for_budget(grid.budget(k));
    const std::vector<double> powers =
        refine_relay_powers(tuples, weights, grid.budget(k), cfg);
    for (std::size_t t = 0; t < slots.size(); ++t) {
      alloc.active_tuples[slots[t]].p_relay = powers[t];
    }
  }
}
}  // namespace

std::vector<double> per_ms_rates(const Allocation& alloc,
                                 const TupleGrid& grid) {
  std::vector<double> rates(grid.num_ms(), 0.0);
  for (const auto& t : alloc.active_tuples) {
    rates[t.u] += sum_rate(grid.make(t.u, t.k, t.i, t.j), t.p_relay);
  }
  return rates;
}

double weighted_value(const Allocation& alloc, const TupleGrid& grid) {
  const std::vector<double> rates = per_ms_rates(alloc, grid);
  double value = 0.0;
  for (int u = 0; u < grid.num_ms(); ++u) {
    value += grid.weight(u) * rates[u];
  }
  return value;
}

SolverReport solve(const TupleGrid& grid, const SolverOptions& opts) {
  opts.validate();
  std::vector<double> weights(grid.num_ms()), budgets(grid.num_rs());
  for (int u = 0; u < grid.num_ms(); ++u) weights[u] = grid.weight(u);
  for (int k = 0; k < grid.num_rs(); ++k) budgets[k] = grid.budget(k);

  DualState state = init_dual_state(weights, budgets, opts);
  Allocation best_candidate;
  std::vector<double> best_lambda = state.lambda;
  bool converged = false;
  int iterations = 0;

  for (int l = 0; l < opts.max_iters; ++l) {
    DualEvaluation eval = evaluate_dual(state.lambda, grid);
    ++iterations;
    state.dual_value = eval.dual_value;
    state.subgradient = eval.subgradient;
    const double feasible = scaled_feasible_value(eval.candidate, grid);
    if (eval.dual_value < state.best_dual) {
      state.best_dual = eval.dual_value;
      best_candidate = std::move(eval.candidate);
      best_lambda = state.lambda;
    }

    IterationRecord rec;
    rec.l = l;
    rec.dual_value = eval.dual_value;
    rec.primal_feasible_value = feasible;
    rec.gap = eval.dual_value > 0.0
                  ? (eval.dual_value - feasible) / eval.dual_value
                  : 0.0;
    rec.subgrad_norm = norm2(eval.subgradient);
    rec.step_omega = state.omega0 / std::sqrt(l + 1.0);
    state.history.push_back(rec);

    const std::vector<double> before = state.lambda;
    subgradient_step(state, opts);
    double step_norm = 0.0;
    for (std::size_t k = 0; k < before.size(); ++k) {
      const double d = state.lambda[k] - before[k];
      step_norm += d * d;
    }
    if (std::sqrt(step_norm) <= opts.tol_lambda * norm2(before)) {
      converged = true;
      break;
    }
  }

  refine_allocation(best_candidate, grid);
  best_candidate.validate();

  SolverReport report;
  report.allocation = std::move(best_candidate);
  report.primal_value = weighted_value(report.allocation, grid);
  report.has_dual = true;
  report.dual_value = state.best_dual;
  report.gap = state.best_dual != 0.0
                   ? (state.best_dual - report.primal_value) / state.best_dual
                   : 0.0;
  report.iterations = iterations;
  report.converged = converged;
  report.lambda = best_lambda;
  report.history = std::move(state.history);

  if (report.primal_value >
      report.dual_value + 1e-9 * std::abs(report.dual_value)) {
    throw std::logic_error("solve: primal exceeded the dual bound");
  }
  return report;
}

SolverReport solve(const ChannelRealization& channels,
                   const NetworkConfig& config, const SolverOptions& opts) {
  return solve(TupleGrid(config, channels), opts);
}

}  // namespace twr

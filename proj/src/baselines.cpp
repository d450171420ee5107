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

#include "baselines.hpp"

#include <limits>
#include <numeric>

namespace twr {

namespace {
SolverReport report_for(Allocation alloc, const TupleGrid& grid) {
  alloc.validate();
  SolverReport report;
  report.allocation = std::move(alloc);
  report.primal_value = weighted_value(report.allocation, grid);
  report.has_dual = false;
  report.dual_value = std::numeric_limits<double>::quiet_NaN();
  report.gap = std::numeric_limits<double>::quiet_NaN();
  report.iterations = 0;
  report.converged = true;
  return report;
}
}  // namespace

SolverReport epa_solve(const TupleGrid& grid) {
  const int n = grid.size();
  ProfitMatrix matrix;
  matrix.n = n;
  matrix.values.resize(static_cast<std::size_t>(n) * n);
  matrix.argmax_ms.resize(static_cast<std::size_t>(n) * n);
  matrix.argmax_rs.resize(static_cast<std::size_t>(n) * n);
  matrix.power.resize(static_cast<std::size_t>(n) * n);

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      double best = -std::numeric_limits<double>::infinity();
      int best_u = 0, best_k = 0;
      double best_p = 0.0;
      for (int u = 0; u < grid.num_ms(); ++u) {
        for (int k = 0; k < grid.num_rs(); ++k) {
          const double p = grid.budget(k) / n;
          const double rate =
              grid.weight(u) * sum_rate(grid.make(u, k, i, j), p);
          if (rate > best) {
            best = rate;
            best_u = u;
            best_k = k;
            best_p = p;
          }
        }
      }
      const auto cell = static_cast<std::size_t>(i) * n + j;
      matrix.values[cell] = best;
      matrix.argmax_ms[cell] = best_u;
      matrix.argmax_rs[cell] = best_k;
      matrix.power[cell] = best_p;
    }
  }
  return report_for(solve_pairing(matrix), grid);
}

SolverReport epa_solve(const ChannelRealization& channels,
                       const NetworkConfig& config) {
  return epa_solve(TupleGrid(config, channels));
}

SolverReport rra_solve(const TupleGrid& grid, Rng& rng) {
  const int n = grid.size();
  std::vector<int> sigma(n);
  std::iota(sigma.begin(), sigma.end(), 0);
  for (int i = n - 1; i >= 1; --i) {
    const auto swap_with = uniform_below(rng, static_cast<std::size_t>(i) + 1);
    std::swap(sigma[i], sigma[swap_with]);
  }

  Allocation alloc;
  alloc.active_tuples.reserve(n);
  for (int i = 0; i < n; ++i) {
    const int u = static_cast<int>(uniform_below(rng, grid.num_ms()));
    const int k = static_cast<int>(uniform_below(rng, grid.num_rs()));
    alloc.active_tuples.push_back({u, k, i, sigma[i], grid.budget(k) / n});
  }
  return report_for(std::move(alloc), grid);
}

SolverReport rra_solve(const ChannelRealization& channels,
                       const NetworkConfig& config, Rng& rng) {
  return rra_solve(TupleGrid(config, channels), rng);
}

}  // namespace twr

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

#include "oracle.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace twr {

namespace {
// Number of (pairing, tuple-choice) leaves: sum over r matched pairs of
// C(N,r)^2 * r! * (MK)^r.
double leaf_count(int n, int mk) {
  double total = 0.0;
  for (int r = 0; r <= n; ++r) {
    double c = 1.0;
    for (int t = 0; t < r; ++t) {
      c *= static_cast<double>(n - t) * (n - t) / (t + 1) * mk;
    }
    total += c;
  }
  return total;
}

// Maximize sum_t f[t][q_t] over nonnegative integer q with sum(q) <= steps,
// where every f[t] is non-decreasing. Returns the best value and fills q.
double split_budget(const std::vector<const double*>& f, int steps,
                    std::vector<int>* q) {
  const int count = static_cast<int>(f.size());
  std::vector<std::vector<double>> dp(count,
                                      std::vector<double>(steps + 1, 0.0));
  std::vector<std::vector<int>> choice(count,
                                       std::vector<int>(steps + 1, 0));
  for (int s = 0; s <= steps; ++s) dp[0][s] = f[0][s];
  for (int t = 1; t < count; ++t) {
    for (int s = 0; s <= steps; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      int best_q = 0;
      for (int use = 0; use <= s; ++use) {
        const double v = f[t][use] + dp[t - 1][s - use];
        if (v > best) {
          best = v;
          best_q = use;
        }
      }
      dp[t][s] = best;
      choice[t][s] = best_q;
    }
  }
  q->assign(count, 0);
  int s = steps;
  for (int t = count - 1; t >= 1; --t) {
    (*q)[t] = choice[t][s];
    s -= (*q)[t];
  }
  (*q)[0] = s;
  return dp[count - 1][steps];
}

struct Enumerator {
  const TupleGrid& grid;
  int steps;
  std::vector<std::vector<double>> table;  // per tuple: value at each grid step
  std::vector<double> delta;               // per relay: budget / steps

  std::vector<int> pick_j, pick_u, pick_k;  // per MAC subcarrier, -1 = unused
  std::vector<char> used_j;

  double best_value = -std::numeric_limits<double>::infinity();
  Allocation best_alloc;

  explicit Enumerator(const TupleGrid& g, int s) : grid(g), steps(s) {
    const int n = grid.size();
    delta.resize(grid.num_rs());
    for (int k = 0; k < grid.num_rs(); ++k) {
      delta[k] = grid.budget(k) / steps;
    }
    table.resize(static_cast<std::size_t>(grid.num_ms()) * grid.num_rs() * n *
                 n);
    for (int u = 0; u < grid.num_ms(); ++u) {
      for (int k = 0; k < grid.num_rs(); ++k) {
        for (int i = 0; i < n; ++i) {
          for (int j = 0; j < n; ++j) {
            auto& row = table[tuple_index(u, k, i, j)];
            row.resize(steps + 1);
            const TupleContext ctx = grid.make(u, k, i, j);
            for (int q = 0; q <= steps; ++q) {
              row[q] = grid.weight(u) * sum_rate(ctx, q * delta[k]);
            }
          }
        }
      }
    }
    pick_j.assign(n, -1);
    pick_u.assign(n, -1);
    pick_k.assign(n, -1);
    used_j.assign(n, 0);
  }

  std::size_t tuple_index(int u, int k, int i, int j) const {
    const int n = grid.size();
    return ((static_cast<std::size_t>(u) * grid.num_rs() + k) * n + i) * n + j;
  }

  void evaluate_leaf() {
    const int n = grid.size();
    double value = 0.0;
    Allocation alloc;
    for (int k = 0; k < grid.num_rs(); ++k) {
      std::vector<const double*> rows;
      std::vector<int> is;
      for (int i = 0; i < n; ++i) {
        if (pick_j[i] < 0 || pick_k[i] != k) continue;
        rows.push_back(table[tuple_index(pick_u[i], k, i, pick_j[i])].data());
        is.push_back(i);
      }
      if (rows.empty()) continue;
      std::vector<int> q;
      value += split_budget(rows, steps, &q);
      for (std::size_t t = 0; t < is.size(); ++t) {
        const int i = is[t];
        alloc.active_tuples.push_back(
            {pick_u[i], k, i, pick_j[i], q[t] * delta[k]});
      }
    }
    if (value > best_value) {
      best_value = value;
      best_alloc = std::move(alloc);
    }
  }

  void recurse(int i) {
    const int n = grid.size();
    if (i == n) {
      evaluate_leaf();
      return;
    }
    for (int j = 0; j < n; ++j) {
      if (used_j[j]) continue;
      used_j[j] = 1;
      pick_j[i] = j;
      for (int u = 0; u < grid.num_ms(); ++u) {
        for (int k = 0; k < grid.num_rs(); ++k) {
          pick_u[i] = u;
          pick_k[i] = k;
          recurse(i + 1);
        }
      }
      used_j[j] = 0;
    }
    pick_j[i] = -1;  // leave MAC subcarrier i unused
    pick_u[i] = -1;
    pick_k[i] = -1;
    recurse(i + 1);
  }
};
}  // namespace

double grid_relay_value(const std::vector<TupleContext>& tuples,
                        const std::vector<double>& weights, double budget,
                        int steps) {
  if (tuples.size() != weights.size() || tuples.empty()) {
    throw std::invalid_argument("grid_relay_value: bad tuple list");
  }
  if (steps < 1 || !(budget > 0)) {
    throw std::invalid_argument("grid_relay_value: bad grid");
  }
  const double delta = budget / steps;
  std::vector<std::vector<double>> rows(tuples.size());
  std::vector<const double*> f(tuples.size());
  for (std::size_t t = 0; t < tuples.size(); ++t) {
    rows[t].resize(steps + 1);
    for (int q = 0; q <= steps; ++q) {
      rows[t][q] = weights[t] * sum_rate(tuples[t], q * delta);
    }
    f[t] = rows[t].data();
  }
  std::vector<int> q;
  return split_budget(f, steps, &q);
}

OracleResult oracle_solve(const ChannelRealization& channels,
                          const NetworkConfig& config, int steps) {
  config.validate();
  if (steps < 1) throw std::invalid_argument("oracle_solve: steps must be >= 1");
  const int n = config.num_subcarriers;
  const int mk = config.num_ms * config.num_rs;
  const double leaves = leaf_count(n, mk);
  const double work = leaves * n * static_cast<double>(steps) * steps;
  if (n > 4 || work > 4e8) {
    throw std::invalid_argument(
        "oracle_solve: instance too large for exhaustive enumeration; "
        "reduce the subcarrier count or the grid steps");
  }

  const TupleGrid grid(config, channels);
  Enumerator e(grid, steps);
  e.recurse(0);

  OracleResult result;
  result.value = e.best_value;
  result.allocation = std::move(e.best_alloc);
  result.allocation.validate();
  return result;
}

}  // namespace twr

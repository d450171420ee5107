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

#include "assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace twr {

namespace {
constexpr double kLn2 = 0.69314718055994530941723212145818;

// Shortest-augmenting-path assignment (Jonker-Volgenant style) minimizing
// total cost over perfect matchings of an n x n matrix. Returns row -> col.
// Entries may be negative; ties resolve to the lowest column index.
std::vector<int> min_cost_assignment(const std::vector<double>& cost, int n) {
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> pot_row(n + 1, 0.0), pot_col(n + 1, 0.0);
  std::vector<int> matched_row(n + 1, 0);  // column -> row, 1-based
  std::vector<int> prev_col(n + 1, 0);
  for (int row = 1; row <= n; ++row) {
    matched_row[0] = row;
    int j0 = 0;
    std::vector<double> min_slack(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int r = matched_row[j0];
      int j_next = -1;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double slack = cost[static_cast<std::size_t>(r - 1) * n + j - 1] -
                             pot_row[r] - pot_col[j];
        if (slack < min_slack[j]) {
          min_slack[j] = slack;
          prev_col[j] = j0;
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          j_next = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          pot_row[matched_row[j]] += delta;
          pot_col[j] -= delta;
        } else {
          min_slack[j] -= delta;
        }
      }
      j0 = j_next;
    } while (matched_row[j0] != 0);
    do {
      const int j1 = prev_col[j0];
      matched_row[j0] = matched_row[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (matched_row[j] > 0) row_to_col[matched_row[j] - 1] = j - 1;
  }
  return row_to_col;
}
}  // namespace

void Allocation::validate() const {
  std::vector<int> rows, cols;
  rows.reserve(active_tuples.size());
  cols.reserve(active_tuples.size());
  for (const auto& t : active_tuples) {
    if (t.p_relay < 0 || !std::isfinite(t.p_relay)) {
      throw std::runtime_error("Allocation: negative or non-finite power");
    }
    rows.push_back(t.i);
    cols.push_back(t.j);
  }
  std::sort(rows.begin(), rows.end());
  std::sort(cols.begin(), cols.end());
  if (std::adjacent_find(rows.begin(), rows.end()) != rows.end() ||
      std::adjacent_find(cols.begin(), cols.end()) != cols.end()) {
    throw std::runtime_error("Allocation: subcarrier used more than once");
  }
}

std::vector<double> relay_power_totals(const Allocation& alloc, int num_rs) {
  std::vector<double> totals(num_rs, 0.0);
  for (const auto& t : alloc.active_tuples) totals[t.k] += t.p_relay;
  return totals;
}

TupleGrid::TupleGrid(const NetworkConfig& config,
                     const ChannelRealization& channels)
    : m_(config.num_ms),
      k_(config.num_rs),
      n_(config.num_subcarriers),
      pb_(config.bs_power_per_subcarrier),
      pu_(config.ms_power_per_subcarrier),
      weights_(config.ms_weights),
      budgets_(config.rs_power_budget) {
  config.validate();
  channels.validate();
  if (channels.num_ms != m_ || channels.num_rs != k_ ||
      channels.num_subcarriers != n_) {
    throw std::invalid_argument("TupleGrid: config/channel shape mismatch");
  }
  const auto mk = static_cast<std::size_t>(m_) * k_;
  gfm_.resize(mk * n_);
  ghm_.resize(static_cast<std::size_t>(k_) * n_);
  ghb_.resize(static_cast<std::size_t>(k_) * n_);
  gfb_.resize(static_cast<std::size_t>(k_) * m_ * n_);
  noise_m_.resize(mk * n_);
  for (int k = 0; k < k_; ++k) {
    for (int i = 0; i < n_; ++i) {
      ghm_[static_cast<std::size_t>(k) * n_ + i] = std::norm(channels.hm(k, i));
      ghb_[static_cast<std::size_t>(k) * n_ + i] = std::norm(channels.hb(k, i));
    }
  }
  for (int u = 0; u < m_; ++u) {
    for (int k = 0; k < k_; ++k) {
      for (int i = 0; i < n_; ++i) {
        const auto uki = (static_cast<std::size_t>(u) * k_ + k) * n_ + i;
        gfm_[uki] = std::norm(channels.fm(u, k, i));
        gfb_[(static_cast<std::size_t>(k) * m_ + u) * n_ + i] =
            std::norm(channels.fb(k, u, i));
        noise_m_[uki] = 1.0 + pb_ * ghm_[static_cast<std::size_t>(k) * n_ + i] +
                        pu_ * gfm_[uki];
      }
    }
  }

  // Price-independent cap on any tuple value involving (u, k, i): profit
  // <= w_u * R(p) <= w_u * lim_{p->inf} R(p), which does not depend on j.
  cands_.resize(n_);
  for (int i = 0; i < n_; ++i) {
    auto& list = cands_[i];
    list.reserve(mk);
    for (int u = 0; u < m_; ++u) {
      for (int k = 0; k < k_; ++k) {
        const auto uki = (static_cast<std::size_t>(u) * k_ + k) * n_ + i;
        const double a = pu_ * gfm_[uki];
        const double b = pb_ * ghm_[static_cast<std::size_t>(k) * n_ + i];
        const double cap =
            weights_[u] * 0.5 * (std::log1p(a) + std::log1p(b)) / kLn2;
        list.push_back({cap, u, k});
      }
    }
    std::sort(list.begin(), list.end(),
              [](const Candidate& x, const Candidate& y) {
                if (x.bound != y.bound) return x.bound > y.bound;
                if (x.u != y.u) return x.u < y.u;
                return x.k < y.k;
              });
  }
}

TupleContext TupleGrid::make(int u, int k, int i, int j) const {
  TupleContext ctx;
  ctx.u = u;
  ctx.k = k;
  ctx.i = i;
  ctx.j = j;
  const auto uki = (static_cast<std::size_t>(u) * k_ + k) * n_ + i;
  ctx.gain_fm = gfm_[uki];
  ctx.gain_hm = ghm_[static_cast<std::size_t>(k) * n_ + i];
  ctx.gain_hb = ghb_[static_cast<std::size_t>(k) * n_ + j];
  ctx.gain_fb = gfb_[(static_cast<std::size_t>(k) * m_ + u) * n_ + j];
  ctx.p_b = pb_;
  ctx.p_u = pu_;
  ctx.m = noise_m_[uki];
  return ctx;
}

ProfitMatrix build_profit_matrix(const TupleGrid& grid,
                                 const std::vector<double>& lambda) {
  if (lambda.size() != static_cast<std::size_t>(grid.num_rs())) {
    throw std::invalid_argument("build_profit_matrix: lambda size mismatch");
  }
  for (double l : lambda) {
    if (l < 0 || !std::isfinite(l)) {
      throw std::invalid_argument("build_profit_matrix: bad dual price");
    }
  }
  const int n = grid.size();
  std::vector<PowerSolverConfig> cfgs;
  cfgs.reserve(grid.num_rs());
  for (int k = 0; k < grid.num_rs(); ++k) {
    cfgs.push_back(PowerSolverConfig::for_budget(grid.budget(k)));
  }

  ProfitMatrix matrix;
  matrix.n = n;
  matrix.values.resize(static_cast<std::size_t>(n) * n);
  matrix.argmax_ms.resize(static_cast<std::size_t>(n) * n);
  matrix.argmax_rs.resize(static_cast<std::size_t>(n) * n);
  matrix.power.resize(static_cast<std::size_t>(n) * n);

  for (int i = 0; i < n; ++i) {
    const auto& cands = grid.candidates(i);
    for (int j = 0; j < n; ++j) {
      double best = -std::numeric_limits<double>::infinity();
      int best_u = 0, best_k = 0;
      double best_p = 0.0;
      for (const auto& c : cands) {
        // Candidates are bound-sorted, so once the cap drops strictly below
        // the incumbent nothing later can win or tie.
        if (c.bound < best) break;
        const TupleContext ctx = grid.make(c.u, c.k, i, j);
        const double w = grid.weight(c.u);
        const double p = optimal_power(ctx, lambda[c.k], w, cfgs[c.k]);
        const double x = profit(ctx, lambda[c.k], w, p);
        if (x > best || (x == best && (c.u < best_u ||
                                       (c.u == best_u && c.k < best_k)))) {
          best = x;
          best_u = c.u;
          best_k = c.k;
          best_p = p;
        }
      }
      const auto cell = static_cast<std::size_t>(i) * n + j;
      matrix.values[cell] = best;
      matrix.argmax_ms[cell] = best_u;
      matrix.argmax_rs[cell] = best_k;
      matrix.power[cell] = best_p;
    }
  }
  return matrix;
}

ProfitMatrix build_profit_matrix(const ChannelRealization& channels,
                                 const NetworkConfig& config,
                                 const std::vector<double>& lambda) {
  return build_profit_matrix(TupleGrid(config, channels), lambda);
}

Allocation solve_pairing(const ProfitMatrix& matrix) {
  const int n = matrix.n;
  if (matrix.values.size() != static_cast<std::size_t>(n) * n) {
    throw std::invalid_argument("solve_pairing: malformed matrix");
  }
  for (double v : matrix.values) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("solve_pairing: non-finite matrix entry");
    }
  }
  // Unassigned pairs are allowed, so a negative cell is never worth taking:
  // match on values clamped at 0, then drop selections that carry no value.
  std::vector<double> cost(static_cast<std::size_t>(n) * n);
  for (std::size_t c = 0; c < cost.size(); ++c) {
    cost[c] = -std::max(matrix.values[c], 0.0);
  }
  const std::vector<int> row_to_col = min_cost_assignment(cost, n);

  Allocation alloc;
  for (int i = 0; i < n; ++i) {
    const int j = row_to_col[i];
    const auto cell = static_cast<std::size_t>(i) * n + j;
    if (matrix.values[cell] <= 0.0) continue;
    alloc.active_tuples.push_back({matrix.argmax_ms[cell],
                                   matrix.argmax_rs[cell], i, j,
                                   matrix.power[cell]});
  }
  return alloc;
}

double selected_value_sum(const ProfitMatrix& matrix, const Allocation& alloc) {
  double sum = 0.0;
  for (const auto& t : alloc.active_tuples) sum += matrix.value(t.i, t.j);
  return sum;
}

}  // namespace twr

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

#ifndef TWRALLOC_ASSIGNMENT_HPP
#define TWRALLOC_ASSIGNMENT_HPP

#include <vector>

#include "power_opt.hpp"
#include "rate_model.hpp"

namespace twr {

/// Per subcarrier pair (i, j): the best value over all (MS, RS) tuples, who
/// achieves it, and the relay power behind it. Row-major N x N.
struct ProfitMatrix {
  int n = 0;
  std::vector<double> values;
  std::vector<int> argmax_ms;
  std::vector<int> argmax_rs;
  std::vector<double> power;

  double value(int i, int j) const {
    return values[static_cast<std::size_t>(i) * n + j];
  }
};

struct ActiveTuple {
  int u = 0;
  int k = 0;
  int i = 0;
  int j = 0;
  double p_relay = 0.0;
};

/// A feasible assignment: each MAC subcarrier i and each BC subcarrier j
/// appears in at most one tuple.
struct Allocation {
  std::vector<ActiveTuple> active_tuples;

  /// Throws std::runtime_error on repeated i, repeated j, or negative power.
  void validate() const;
};

/// Sum of allocated relay power per relay; length num_rs.
std::vector<double> relay_power_totals(const Allocation& alloc, int num_rs);

/// Precomputed per-realization lookup: squared channel gains, the per-tuple
/// noise constants, and for every MAC subcarrier a candidate (MS, RS) list
/// sorted by descending price-independent profit bound w_u * sum-rate limit.
/// Lets the per-cell tuple scan stop as soon as no remaining candidate can
/// beat the best value found.
class TupleGrid {
 public:
  TupleGrid(const NetworkConfig& config, const ChannelRealization& channels);

  int num_ms() const { return m_; }
  int num_rs() const { return k_; }
  int size() const { return n_; }
  double weight(int u) const { return weights_[u]; }
  double budget(int k) const { return budgets_[k]; }

  /// Assembles the context for one tuple; bit-identical to
  /// TupleContext::from_channels on the originating inputs.
  TupleContext make(int u, int k, int i, int j) const;

  struct Candidate {
    double bound = 0.0;
    int u = 0;
    int k = 0;
  };
  const std::vector<Candidate>& candidates(int i) const { return cands_[i]; }

 private:
  int m_ = 0;
  int k_ = 0;
  int n_ = 0;
  double pb_ = 0.0;
  double pu_ = 0.0;
  std::vector<double> weights_;
  std::vector<double> budgets_;
  std::vector<double> gfm_;      // M x K x N
  std::vector<double> ghm_;      // K x N
  std::vector<double> ghb_;      // K x N
  std::vector<double> gfb_;      // K x M x N
  std::vector<double> noise_m_;  // M x K x N
  std::vector<std::vector<Candidate>> cands_;
};

/// For each subcarrier pair (i, j), maximizes the tuple value
/// profit = w_u * R(p*) - lambda_k * p* over all (u, k), with p* from
/// optimal_power at price lambda[k]. Ties go to the lowest u, then lowest k.
ProfitMatrix build_profit_matrix(const TupleGrid& grid,
                                 const std::vector<double>& lambda);

/// Convenience overload that builds the grid internally.
ProfitMatrix build_profit_matrix(const ChannelRealization& channels,
                                 const NetworkConfig& config,
                                 const std::vector<double>& lambda);

/// Max-weight one-to-one pairing of MAC rows to BC columns where leaving a
/// pair unused is allowed: Hungarian assignment on values clamped below at
/// zero, then selected cells whose original value is <= 0 are dropped.
/// O(n^3) worst case. The tuples carry the matrix argmax indices and powers.
Allocation solve_pairing(const ProfitMatrix& matrix);

/// Sum of matrix values over the allocation's (i, j) cells.
double selected_value_sum(const ProfitMatrix& matrix, const Allocation& alloc);

}  // namespace twr

#endif  // TWRALLOC_ASSIGNMENT_HPP

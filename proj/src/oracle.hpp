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

#ifndef TWRALLOC_ORACLE_HPP
#define TWRALLOC_ORACLE_HPP

#include "assignment.hpp"

namespace twr {

struct OracleResult {
  double value = 0.0;     // best gridded weighted sum rate
  Allocation allocation;  // a maximizing assignment with gridded powers
};

/// Exhaustive reference solver for tiny instances: enumerates every feasible
/// pairing of MAC to BC subcarriers including leaving subcarriers unused,
/// every (MS, RS) choice per pair, and for each relay every split of its
/// budget over a uniform grid of `steps` increments. The returned value is a
/// lower bound on the true optimum that tightens as steps grows. Throws
/// std::invalid_argument when the enumeration would be intractable.
OracleResult oracle_solve(const ChannelRealization& channels,
                          const NetworkConfig& config, int steps = 200);

/// Best gridded value of one relay's budget split across fixed tuples:
/// max sum_t weights[t] * sum_rate(tuples[t], q_t * budget / steps) over
/// nonnegative integers q_t with sum <= steps.
double grid_relay_value(const std::vector<TupleContext>& tuples,
                        const std::vector<double>& weights, double budget,
                        int steps);

}  // namespace twr

#endif  // TWRALLOC_ORACLE_HPP

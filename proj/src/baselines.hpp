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

#ifndef TWRALLOC_BASELINES_HPP
#define TWRALLOC_BASELINES_HPP

#include "dual_solver.hpp"
#include "rng.hpp"

namespace twr {

/// Equal power assignment: every relay spreads its budget uniformly over the
/// subcarriers (p = P_k / N per tuple), the (MS, RS) choice per pair and the
/// pairing itself are still optimized on the weighted-rate matrix. Always
/// budget-feasible. No dual bound (has_dual = false).
SolverReport epa_solve(const TupleGrid& grid);
SolverReport epa_solve(const ChannelRealization& channels,
                       const NetworkConfig& config);

/// Random resource allocation: a uniform random pairing permutation, a
/// uniform random (MS, RS) per pair, p = P_k / N. Deterministic given the
/// rng state.
SolverReport rra_solve(const TupleGrid& grid, Rng& rng);
SolverReport rra_solve(const ChannelRealization& channels,
                       const NetworkConfig& config, Rng& rng);

}  // namespace twr

#endif  // TWRALLOC_BASELINES_HPP

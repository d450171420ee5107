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

#ifndef TWRALLOC_RNG_HPP
#define TWRALLOC_RNG_HPP

#include <complex>
#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace twr {

// mt19937_64 is bit-stable across standard libraries; all variate
// transforms below are hand-rolled so that streams are reproducible
// independent of the platform's <random> distribution implementations.
using Rng = std::mt19937_64;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Domain-separated child seed, e.g. one stream per realization.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a,
                                 std::uint64_t b = 0) {
  return splitmix64(splitmix64(master ^ 0x7c0f1ab1f0ddf00dULL) + a * 2 + b);
}

// Uniform on [0, 1).
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform on (0, 1); never returns an endpoint, safe under log().
inline double uniform01_open(Rng& rng) {
  return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

inline double uniform_range(Rng& rng, double lo, double hi) {
  return lo + (hi - lo) * uniform01(rng);
}

// Uniform integer in [0, n); n must be >= 1 and well below 2^52.
inline std::size_t uniform_below(Rng& rng, std::size_t n) {
  return static_cast<std::size_t>(uniform01(rng) * static_cast<double>(n));
}

// Box-Muller pair of independent standard normals.
inline std::pair<double, double> gaussian_pair(Rng& rng) {
  const double u1 = uniform01_open(rng);
  const double u2 = uniform01(rng);
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double t = 6.283185307179586476925286766559 * u2;
  return {r * std::cos(t), r * std::sin(t)};
}

inline double gaussian(Rng& rng) { return gaussian_pair(rng).first; }

// Circularly-symmetric complex Gaussian with E|z|^2 = 1.
inline std::complex<double> circular_gaussian(Rng& rng) {
  const auto [a, b] = gaussian_pair(rng);
  return {a * 0x1.6a09e667f3bcdp-1, b * 0x1.6a09e667f3bcdp-1};  // 1/sqrt(2)
}

}  // namespace twr

#endif  // TWRALLOC_RNG_HPP

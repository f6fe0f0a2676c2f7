// Copyright 2026 The fracgame Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FRACGAME_UTIL_HPP_
#define FRACGAME_UTIL_HPP_

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace fracgame {

// --- Digests -----------------------------------------------------------

// 64-bit FNV-1a over a byte string.
std::uint64_t fnv1a64(std::string_view data);

// Lower-case 16-hex-digit rendering of a 64-bit value.
std::string hex64(std::uint64_t v);

// splitmix64 mixing step; used to derive independent sub-seeds.
std::uint64_t splitmix64(std::uint64_t& state);

// --- Deterministic randomness ------------------------------------------
//
// Trials must be reproducible bit-for-bit from (seed, stream, trial index),
// independent of evaluation order and worker count.  Each trial therefore
// owns an engine seeded through splitmix64, and all floating-point draws are
// produced by explicit bit manipulation rather than by the (implementation-
// defined) standard distributions.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::string_view stream, std::uint64_t trial);

  // Uniform in [0, 1).
  double uniform();
  // Uniform in [a, b).
  double uniform(double a, double b);
  // Uniform integer in {0, ..., n-1}; n >= 1.
  std::uint64_t uniform_index(std::uint64_t n);
  // Uniformly random direction on the unit sphere in R^n.
  std::vector<double> unit_vector(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

// --- Small dense-vector helpers ----------------------------------------
//
// States are tiny (n = 1 or 2) and live in flat arrays; these helpers keep
// the call sites readable without dragging in a linear-algebra dependency.

inline double vec_norm(std::span<const double> v) {
  double s = 0.0;
  for (double c : v) s += c * c;
  return std::sqrt(s);
}

inline double vec_dist(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return std::sqrt(s);
}

inline double vec_dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

}  // namespace fracgame

#endif  // FRACGAME_UTIL_HPP_

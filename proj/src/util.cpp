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

#include "fracgame/util.hpp"

#include <stdexcept>

namespace fracgame {

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= static_cast<std::uint64_t>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xF];
    v >>= 4;
  }
  return out;
}

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

TrialRng::TrialRng(std::uint64_t seed, std::string_view stream,
                   std::uint64_t trial) {
  std::uint64_t state = seed ^ fnv1a64(stream);
  std::uint64_t a = splitmix64(state);
  state ^= trial * 0xD1B54A32D192ED03ULL + 0x8BB84B93962EACC9ULL;
  std::uint64_t b = splitmix64(state);
  engine_.seed(a ^ (b + 0x9E3779B97F4A7C15ULL + (a << 6) + (a >> 2)));
}

double TrialRng::uniform() {
  // 53 uniform mantissa bits; avoids the implementation-defined behaviour of
  // std::uniform_real_distribution.
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double TrialRng::uniform(double a, double b) { return a + (b - a) * uniform(); }

std::uint64_t TrialRng::uniform_index(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: n must be >= 1");
  // Rejection-free mapping through the 53-bit uniform; the bias is far below
  // anything observable for the small n used here.
  std::uint64_t i = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
  return i >= n ? n - 1 : i;
}

std::vector<double> TrialRng::unit_vector(std::size_t n) {
  // Rejection on the unit ball, then normalization; for the tiny dimensions
  // used here this is deterministic, unbiased and cheap.
  std::vector<double> v(n);
  while (true) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = uniform(-1.0, 1.0);
      s += v[i] * v[i];
    }
    if (s > 1e-12 && s <= 1.0) {
      const double inv = 1.0 / std::sqrt(s);
      for (double& c : v) c *= inv;
      return v;
    }
  }
}

}  // namespace fracgame

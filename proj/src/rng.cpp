// Copyright 2026 The mgplan Authors.
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

#include "mgplan/rng.hpp"

#include <cmath>
#include <numeric>

#include "mgplan/errors.hpp"

namespace mgplan {

int Rng::uniform_int(int n) {
  if (n <= 0) throw ParameterError("uniform_int: n must be positive");
  const std::uint64_t un = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = UINT64_MAX - UINT64_MAX % un;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<int>(x % un);
}

double Rng::exponential() {
  // uniform01() < 1 strictly, so the argument of log1p stays in (-1, 0].
  return -std::log1p(-uniform01());
}

int Rng::categorical(std::span<const double> probs) {
  if (probs.empty()) throw ParameterError("categorical: empty distribution");
  const double u = uniform01();
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

std::vector<int> Rng::sample_distinct(int n, int k) {
  if (k < 0 || k > n) throw ParameterError("sample_distinct: need 0 <= k <= n");
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  std::vector<int> out;
  out.reserve(k);
  for (int i = 0; i < k; ++i) {
    const int j = i + uniform_int(n - i);
    std::swap(pool[i], pool[j]);
    out.push_back(pool[i]);
  }
  return out;
}

std::vector<double> Rng::dirichlet_uniform(int k) {
  if (k <= 0) throw ParameterError("dirichlet_uniform: k must be positive");
  std::vector<double> w(k);
  double total = 0.0;
  for (double& x : w) {
    x = exponential();
    total += x;
  }
  for (double& x : w) x /= total;
  return w;
}

std::uint64_t Rng::mix(std::uint64_t seed, std::uint64_t stream) {
  // SplitMix64 finalizer over seed advanced by the stream index.
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace mgplan

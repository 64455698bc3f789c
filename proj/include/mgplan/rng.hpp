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

#ifndef MGPLAN_RNG_HPP_
#define MGPLAN_RNG_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace mgplan {

// Deterministic random source. std::mt19937_64's output sequence is pinned by
// the C++ standard, and every distribution here is hand-rolled, so any seed
// reproduces bit-for-bit on every platform. std::*_distribution classes are
// implementation-defined and must not be used anywhere in this library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  // Uniform on {0, ..., n-1}, unbiased via rejection.
  int uniform_int(int n);

  // Exponential(1); strictly positive since uniform01() < 1.
  double exponential() ;

  // Index draw from a probability vector by cumulative scan; the final
  // interval absorbs rounding slack.
  int categorical(std::span<const double> probs);

  // k distinct values from {0, ..., n-1} by partial Fisher-Yates; returned in
  // draw order.
  std::vector<int> sample_distinct(int n, int k);

  // Dirichlet(1,...,1) of dimension k: normalized i.i.d. exponentials.
  std::vector<double> dirichlet_uniform(int k);

  // SplitMix64 stream derivation: child seed for (seed, stream). Used to give
  // parallel work items independent, thread-count-invariant streams.
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream);

 private:
  std::mt19937_64 engine_;
};

}  // namespace mgplan

#endif  // MGPLAN_RNG_HPP_

// Copyright 2026 The MDRD Authors. All Rights Reserved.
//
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

#ifndef MDRD_NUMERICS_RNG_HPP_
#define MDRD_NUMERICS_RNG_HPP_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace mdrd::num {

/// splitmix64 finalizer; used to derive independent child seeds.
std::uint64_t mix64(std::uint64_t x);

/// Reproducible random stream.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The standard distributions are implementation-defined, so every
/// derived quantity (uniform doubles, normals, bounded integers, shuffles) is
/// computed here from raw engine output. Identical seeds therefore give
/// identical integer/uniform streams on every conforming platform; normal()
/// additionally depends on the platform's log/sin/cos.
class SeededRng {
 public:
  static constexpr const char* kAlgorithm = "mt19937_64+splitmix64-derive";

  explicit SeededRng(std::uint64_t seed = 0) : seed_(seed), engine_(seed) {}

  std::uint64_t seed() const { return seed_; }

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller.
  double normal();

  /// Uniform integer in [0, n); n > 0. Rejection sampling, no modulo bias.
  std::uint64_t below(std::uint64_t n);

  template <typename T>
  void shuffle(std::span<T> items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

  /// Independent child stream keyed by `stream`; does not advance this one.
  SeededRng derive(std::uint64_t stream) const;

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Seed of the `index`-th derived stream of `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

}  // namespace mdrd::num

#endif  // MDRD_NUMERICS_RNG_HPP_

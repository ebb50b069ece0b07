// Copyright 2026 The kglauber Authors
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

// Reproducible randomness. An RngStream is a counter-based generator keyed by
// (seed, path): the key is a hash chain over the spawn path, and output i of
// a stream is a bijective mix of key + i * gamma. Any draw can therefore be
// computed independently of every other draw, which is what lets the
// recursive sampler hand coordinates to arbitrary workers without changing
// its output.

#pragma once

#include "kglauber/model.hpp"

#include <cstddef>
#include <cstdint>
#include <vector>

namespace kglauber {

class ThreadPool;

/// SplitMix64 finalizer; a bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class RngStream {
 public:
  explicit RngStream(std::uint64_t seed);

  /// Child stream keyed by (seed, path ++ branch). Does not touch *this.
  RngStream split(std::uint64_t branch) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t key() const { return key_; }
  std::uint64_t position() const { return counter_; }

  /// Counter-addressed draws; independent of the sequential position.
  std::uint64_t bits_at(std::uint64_t i) const {
    return mix64(key_ + (i + 1) * kGamma);
  }
  /// Uniform on [0,1) with 53 random bits.
  double uniform_at(std::uint64_t i) const {
    return static_cast<double>(bits_at(i) >> 11) * 0x1.0p-53;
  }
  /// Uniform on (0,1]; safe to take the log of.
  double open_uniform_at(std::uint64_t i) const {
    return static_cast<double>((bits_at(i) >> 11) + 1) * 0x1.0p-53;
  }

  std::uint64_t next_u64() { return bits_at(counter_++); }
  double next_uniform() { return uniform_at(counter_++); }
  double next_open_uniform() { return open_uniform_at(counter_++); }
  /// Unbiased integer in [0, bound) (Lemire's multiply-and-reject).
  std::uint64_t next_below(std::uint64_t bound);

  // UniformRandomBitGenerator, so std:: distributions accept a stream.
  using result_type = std::uint64_t;
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return next_u64(); }

 private:
  static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
  RngStream(std::uint64_t seed, std::uint64_t key) : seed_(seed), key_(key) {}

  std::uint64_t seed_;
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

/// Uniform s-subset of [0, m) by partial Fisher-Yates on an index array.
SubsetIndex sample_subset(RngStream& rng, std::size_t m, std::size_t s);

/// Same law through random keys: index i receives key rng.bits_at(i) and the
/// s smallest keys win. Keys are independent of each other, so the sort may
/// run on a pool.
SubsetIndex sample_subset_by_keys(const RngStream& rng, std::size_t m,
                                  std::size_t s);

/// Reusable partial Fisher-Yates. The workspace is restored after every draw,
/// so one draw costs O(s log s) instead of O(m).
class SubsetSampler {
 public:
  explicit SubsetSampler(std::size_t m);
  std::size_t parent_size() const { return perm_.size(); }
  /// Writes the sorted members into `out`.
  void draw(RngStream& rng, std::size_t s, std::vector<std::size_t>& out);

 private:
  std::vector<std::size_t> perm_;
  std::vector<std::size_t> swaps_;
};

/// Coordinate k is +1 iff rng.uniform_at(k) < q.prob_plus()[k]. Each
/// coordinate reads its own counter of the stream, so the draw is the same
/// however coordinates are split across workers.
SpinVector sample_product(const RngStream& rng, const ProductDistribution& q,
                          ThreadPool* pool = nullptr);

/// Raw form used by the hot paths: spins in `out`, one per probability.
void sample_product_into(const RngStream& rng, std::span<const double> prob_plus,
                         std::span<Spin> out);

}  // namespace kglauber

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

#include "kglauber/sampling.hpp"

#include "kglauber/error.hpp"
#include "kglauber/thread_pool.hpp"

#include <algorithm>
#include <numeric>
#include <string>

namespace kglauber {

RngStream::RngStream(std::uint64_t seed) : seed_(seed), key_(mix64(seed ^ 0x6a09e667f3bcc909ULL)) {}

RngStream RngStream::split(std::uint64_t branch) const {
  // Two rounds so that nearby (key, branch) pairs land far apart.
  const std::uint64_t child = mix64(key_ ^ mix64(branch + 0x3c6ef372fe94f82bULL));
  return RngStream(seed_, mix64(child + kGamma));
}

std::uint64_t RngStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgument("next_below: bound must be positive");
  unsigned __int128 prod = static_cast<unsigned __int128>(next_u64()) * bound;
  auto low = static_cast<std::uint64_t>(prod);
  if (low < bound) {
    const std::uint64_t threshold = (0 - bound) % bound;
    while (low < threshold) {
      prod = static_cast<unsigned __int128>(next_u64()) * bound;
      low = static_cast<std::uint64_t>(prod);
    }
  }
  return static_cast<std::uint64_t>(prod >> 64);
}

// --- subsets -----------------------------------------------------------------

namespace {

void check_subset_args(std::size_t m, std::size_t s) {
  if (s < 1 || s > m)
    throw InvalidArgument("sample_subset: need 1 <= s <= m (s=" + std::to_string(s) +
                          ", m=" + std::to_string(m) + ")");
}

}  // namespace

SubsetSampler::SubsetSampler(std::size_t m) : perm_(m) {
  std::iota(perm_.begin(), perm_.end(), std::size_t{0});
}

void SubsetSampler::draw(RngStream& rng, std::size_t s, std::vector<std::size_t>& out) {
  const std::size_t m = perm_.size();
  check_subset_args(m, s);
  swaps_.resize(s);
  for (std::size_t i = 0; i < s; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.next_below(m - i));
    swaps_[i] = j;
    std::swap(perm_[i], perm_[j]);
  }
  out.assign(perm_.begin(), perm_.begin() + static_cast<std::ptrdiff_t>(s));
  for (std::size_t i = s; i-- > 0;) std::swap(perm_[i], perm_[swaps_[i]]);
  std::sort(out.begin(), out.end());
}

SubsetIndex sample_subset(RngStream& rng, std::size_t m, std::size_t s) {
  check_subset_args(m, s);
  SubsetSampler sampler(m);
  std::vector<std::size_t> members;
  sampler.draw(rng, s, members);
  return SubsetIndex(m, std::move(members));
}

SubsetIndex sample_subset_by_keys(const RngStream& rng, std::size_t m, std::size_t s) {
  check_subset_args(m, s);
  // Ties between 64-bit keys are broken by index; they occur with
  // probability ~ m^2 / 2^64.
  std::vector<std::pair<std::uint64_t, std::size_t>> keyed(m);
  for (std::size_t i = 0; i < m; ++i) keyed[i] = {rng.bits_at(i), i};
  std::nth_element(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(s - 1),
                   keyed.end());
  std::vector<std::size_t> members(s);
  for (std::size_t k = 0; k < s; ++k) members[k] = keyed[k].second;
  std::sort(members.begin(), members.end());
  return SubsetIndex(m, std::move(members));
}

// --- product draws -----------------------------------------------------------

void sample_product_into(const RngStream& rng, std::span<const double> prob_plus,
                         std::span<Spin> out) {
  for (std::size_t k = 0; k < prob_plus.size(); ++k)
    out[k] = rng.uniform_at(k) < prob_plus[k] ? Spin{1} : Spin{-1};
}

SpinVector sample_product(const RngStream& rng, const ProductDistribution& q,
                          ThreadPool* pool) {
  const auto p = q.prob_plus();
  std::vector<Spin> values(p.size());
  maybe_parallel_for(pool, p.size(), p.size(), std::size_t{1} << 16,
                     [&](std::size_t begin, std::size_t end) {
                       for (std::size_t k = begin; k < end; ++k)
                         values[k] = rng.uniform_at(k) < p[k] ? Spin{1} : Spin{-1};
                     });
  return SpinVector({q.indices().begin(), q.indices().end()}, std::move(values));
}

}  // namespace kglauber

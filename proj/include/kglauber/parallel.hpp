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

// Recursive parallel Ising sampler.
//
// A call on an index set R of size m with effective field h looks at
// F = ||J_{RxR}||_F. If F <= c3 the call is a leaf: one approximate rejection
// sample with product proposal q ~ exp(<h,x>), log-weight g(x) = x'J_{RxR}x/2
// and cutoff C4 ln(n/eps). Otherwise it runs
//     s = ceil(c1 m / (ln(n/eps) F)),   T = floor(C2 ln(n/eps) m / s)
// steps of s-Glauber dynamics from a product start, drawing each block
// x_S | x_{R\S} by a recursive call with field J_{S x R\S} y_{R\S} + h_S.
// Here n is always the root problem size.
//
// The T steps are a Markov chain and run in order. What runs in parallel is
// the work inside a batch of `block_size` consecutive steps: the subsets
// (they depend only on the random stream) and the row products J_{S,R} y
// against the configuration at the start of the batch. Each step then
// corrects its field for spins that changed earlier in the batch. Every row
// product is computed by a single worker in a fixed order, so the output is
// bit-identical for any thread count.

#pragma once

#include "kglauber/model.hpp"
#include "kglauber/sampling.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace kglauber {

class ThreadPool;

struct SamplerConfig {
  double c1 = 0.125;  ///< subset-size constant
  double c3 = 0.25;   ///< leaf threshold on ||J_{RxR}||_F
  double C2 = 16.0;   ///< outer-loop length constant
  double C4 = 4.0;    ///< rejection cutoff constant
  double eps = 0.1;   ///< target accuracy, in (0, 1/2)
  std::size_t threads = 1;
  std::size_t max_depth = 64;
  /// Outer steps batched per parallel phase. Part of the numerical
  /// definition of the output (it fixes how fields are accumulated), so it
  /// must not be tied to the thread count.
  std::size_t block_size = 32;
  /// Minimum multiply-adds in a phase before it is handed to the pool.
  std::size_t parallel_grain = std::size_t{1} << 15;
  /// Rejection try cap per leaf; 0 selects default_max_tries.
  std::uint64_t max_tries = 0;

  /// Throws InvalidArgument unless all constants are positive,
  /// eps in (0, 1/2), c1 <= c3/2, threads >= 1, block_size >= 1.
  void validate() const;
};

/// Defaults for models with ||J|| <= 1 - norm_bound_c: c3 = 0.25,
/// c1 = c3/2, C4 = 4 and C2 = min(8 / norm_bound_c, 64).
SamplerConfig default_config(double norm_bound_c, double eps);

/// ceil(c1 m / (log_factor * frob)).
std::size_t block_subset_size(double c1, std::size_t m, double log_factor,
                              double frob);
/// floor(C2 log_factor m / s).
std::uint64_t outer_step_count(double C2, double log_factor, std::size_t m,
                               std::size_t s);

struct RunTelemetry {
  std::uint64_t node_count = 0;
  std::uint64_t max_depth_seen = 0;
  std::uint64_t leaf_count = 0;
  std::uint64_t total_rejection_tries = 0;
  /// T and s chosen at the root (0 when the root is a leaf).
  std::uint64_t root_outer_steps = 0;
  std::uint64_t root_subset_size = 0;
  /// Children spawned by non-root nodes and the number of non-root nodes;
  /// their ratio is the empirical offspring mean below the root.
  std::uint64_t nonroot_children = 0;
  std::uint64_t nonroot_nodes = 0;
  /// Sum of ||J_{RxR}||_F and node count per depth.
  std::vector<double> level_frobenius_sum;
  std::vector<std::uint64_t> level_nodes;
  double wall_time_s = 0.0;
  std::uint64_t seed = 0;

  /// Mean ||J_{RxR}||_F per depth.
  std::vector<double> per_level_subset_frobenius() const;
  double mean_children_below_root() const;
  /// Adds counters, maxes depth. Associative and commutative on everything
  /// it touches; root_*, wall_time_s and seed are left alone.
  void merge(const RunTelemetry& other);
};

/// What an observer sees when a node starts: global indices of R, its
/// effective field, and the full configuration outside R as held by the
/// ancestors at that moment (entries inside R are unspecified).
struct NodeVisit {
  std::size_t depth = 0;
  std::vector<std::size_t> members;
  Vector field;
  std::vector<Spin> context;
  double frobenius = 0.0;
  bool leaf = false;
};
using NodeObserver = std::function<void(const NodeVisit&)>;

struct SampleResult {
  SpinVector sample;
  RunTelemetry telemetry;
};

class ParallelIsingSampler {
 public:
  /// Keeps a reference to `model`; it must outlive the sampler.
  ParallelIsingSampler(const IsingModel& model, SamplerConfig cfg);
  ~ParallelIsingSampler();
  ParallelIsingSampler(const ParallelIsingSampler&) = delete;
  ParallelIsingSampler& operator=(const ParallelIsingSampler&) = delete;

  /// Sample from mu_{J,h} on all coordinates.
  SampleResult sample(std::uint64_t seed);
  /// Sample from mu_{J_{RxR}, h_eff}. Result is indexed by R.
  SampleResult sample(const SubsetIndex& R, const Vector& h_eff,
                      const RngStream& rng);

  void set_observer(NodeObserver observer) { observer_ = std::move(observer); }
  const SamplerConfig& config() const { return cfg_; }
  /// ln(n/eps) for the root size n.
  double log_factor() const { return log_factor_; }
  /// C4 ln(n/eps).
  double rejection_cutoff() const { return cfg_.C4 * log_factor_; }

 private:
  struct Node;
  std::vector<Spin> solve(const Node& node, const RngStream& rng,
                          std::size_t depth, RunTelemetry& tel);
  std::vector<Spin> leaf(const Node& node, const RngStream& rng,
                         RunTelemetry& tel);

  const IsingModel& model_;
  SamplerConfig cfg_;
  double log_factor_;
  std::uint64_t max_tries_;
  std::unique_ptr<ThreadPool> pool_;
  NodeObserver observer_;
  std::vector<Spin> context_;
};

/// One-shot convenience wrapper around ParallelIsingSampler.
SampleResult parallel_ising_sample(const IsingModel& model, const SubsetIndex& R,
                                   const Vector& h_eff, const SamplerConfig& cfg,
                                   const RngStream& rng);

}  // namespace kglauber

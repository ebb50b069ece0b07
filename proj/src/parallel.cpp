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

#include "kglauber/parallel.hpp"

#include "kglauber/error.hpp"
#include "kglauber/rejection.hpp"
#include "kglauber/thread_pool.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

namespace kglauber {

namespace {

// Stream branches below a node's stream. Outer step t uses split(t); the
// initial product draw sits far above any reachable t.
constexpr std::uint64_t kInitBranch = ~std::uint64_t{0};
constexpr std::uint64_t kSubsetBranch = 0;
constexpr std::uint64_t kChildBranch = 1;

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

// x'Jx/2 over a local matrix, one column at a time.
double half_quadratic(const Matrix& J, std::span<const Spin> x) {
  double g = 0.0;
  const std::size_t m = x.size();
  for (std::size_t b = 1; b < m; ++b) {
    const auto col = J.col(static_cast<Eigen::Index>(b));
    double acc = 0.0;
    for (std::size_t a = 0; a < b; ++a) acc += col[static_cast<Eigen::Index>(a)] * x[a];
    g += acc * x[b];
  }
  return g;
}

}  // namespace

void SamplerConfig::validate() const {
  if (!positive_finite(c1) || !positive_finite(c3) || !positive_finite(C2) ||
      !positive_finite(C4))
    throw InvalidArgument("sampler constants c1, c3, C2, C4 must be positive and finite");
  if (!(eps > 0.0 && eps < 0.5))
    throw InvalidArgument("eps must lie in (0, 1/2) (got " + std::to_string(eps) + ")");
  if (c1 > c3 / 2.0)
    throw InvalidArgument("need c1 <= c3/2 (c1=" + std::to_string(c1) +
                          ", c3=" + std::to_string(c3) + ")");
  if (threads < 1) throw InvalidArgument("threads must be at least 1");
  if (block_size < 1) throw InvalidArgument("block_size must be at least 1");
}

SamplerConfig default_config(double norm_bound_c, double eps) {
  if (!(norm_bound_c > 0.0 && norm_bound_c <= 1.0))
    throw InvalidArgument("norm bound margin c must lie in (0, 1]");
  SamplerConfig cfg;
  cfg.c3 = 0.25;
  cfg.c1 = cfg.c3 / 2.0;
  cfg.C4 = 4.0;
  cfg.C2 = std::min(8.0 / norm_bound_c, 64.0);
  cfg.eps = eps;
  cfg.validate();
  return cfg;
}

std::size_t block_subset_size(double c1, std::size_t m, double log_factor,
                              double frob) {
  if (!positive_finite(log_factor) || !positive_finite(frob))
    throw InvalidArgument("block_subset_size: log factor and norm must be positive");
  const double s = std::ceil(c1 * static_cast<double>(m) / (log_factor * frob));
  return static_cast<std::size_t>(std::max(s, 1.0));
}

std::uint64_t outer_step_count(double C2, double log_factor, std::size_t m,
                               std::size_t s) {
  if (s == 0) throw InvalidArgument("outer_step_count: s must be positive");
  return static_cast<std::uint64_t>(
      std::floor(C2 * log_factor * static_cast<double>(m) / static_cast<double>(s)));
}

// --- telemetry ---------------------------------------------------------------

std::vector<double> RunTelemetry::per_level_subset_frobenius() const {
  std::vector<double> out(level_nodes.size(), 0.0);
  for (std::size_t d = 0; d < out.size(); ++d)
    if (level_nodes[d] > 0)
      out[d] = level_frobenius_sum[d] / static_cast<double>(level_nodes[d]);
  return out;
}

double RunTelemetry::mean_children_below_root() const {
  return nonroot_nodes == 0 ? 0.0
                            : static_cast<double>(nonroot_children) /
                                  static_cast<double>(nonroot_nodes);
}

void RunTelemetry::merge(const RunTelemetry& other) {
  node_count += other.node_count;
  max_depth_seen = std::max(max_depth_seen, other.max_depth_seen);
  leaf_count += other.leaf_count;
  total_rejection_tries += other.total_rejection_tries;
  nonroot_children += other.nonroot_children;
  nonroot_nodes += other.nonroot_nodes;
  const std::size_t levels = std::max(level_nodes.size(), other.level_nodes.size());
  level_nodes.resize(levels, 0);
  level_frobenius_sum.resize(levels, 0.0);
  for (std::size_t d = 0; d < other.level_nodes.size(); ++d) {
    level_nodes[d] += other.level_nodes[d];
    level_frobenius_sum[d] += other.level_frobenius_sum[d];
  }
}

// --- sampler -----------------------------------------------------------------

struct ParallelIsingSampler::Node {
  std::vector<std::size_t> members;  // global indices of R
  Matrix owned;                      // J_{RxR} unless borrowed from the model
  const Matrix* J = nullptr;
  Vector h;

  const Matrix& couplings() const { return *J; }
};

ParallelIsingSampler::ParallelIsingSampler(const IsingModel& model, SamplerConfig cfg)
    : model_(model), cfg_(cfg) {
  cfg_.validate();
  if (model_.size() == 0) throw InvalidArgument("model must have at least one spin");
  log_factor_ = std::log(static_cast<double>(model_.size()) / cfg_.eps);
  max_tries_ = cfg_.max_tries != 0
                   ? cfg_.max_tries
                   : default_max_tries(rejection_cutoff(), model_.size(), cfg_.eps);
  if (cfg_.threads > 1) pool_ = std::make_unique<ThreadPool>(cfg_.threads);
}

ParallelIsingSampler::~ParallelIsingSampler() = default;

SampleResult ParallelIsingSampler::sample(std::uint64_t seed) {
  return sample(SubsetIndex::full(model_.size()), model_.field(), RngStream(seed));
}

SampleResult ParallelIsingSampler::sample(const SubsetIndex& R, const Vector& h_eff,
                                          const RngStream& rng) {
  if (R.parent_size() != model_.size())
    throw InvalidArgument("sample: subset parent size differs from the model");
  if (static_cast<std::size_t>(h_eff.size()) != R.size())
    throw InvalidArgument("sample: field length differs from the subset size");
  if (!h_eff.allFinite()) throw InvalidArgument("sample: field must be finite");

  const auto start = std::chrono::steady_clock::now();
  Node root;
  root.members.assign(R.members().begin(), R.members().end());
  root.h = h_eff;
  if (R.size() == model_.size()) {
    root.J = &model_.couplings();
  } else {
    const auto m = static_cast<Eigen::Index>(R.size());
    root.owned.resize(m, m);
    for (Eigen::Index b = 0; b < m; ++b)
      for (Eigen::Index a = 0; a < m; ++a)
        root.owned(a, b) = model_.couplings()(R[a], R[b]);
    root.J = &root.owned;
  }
  context_.assign(model_.size(), Spin{0});

  SampleResult result;
  result.telemetry.seed = rng.seed();
  std::vector<Spin> y = solve(root, rng, 0, result.telemetry);
  result.sample = SpinVector(std::move(root.members), std::move(y));
  result.telemetry.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

std::vector<Spin> ParallelIsingSampler::solve(const Node& node, const RngStream& rng,
                                              std::size_t depth, RunTelemetry& tel) {
  if (depth > cfg_.max_depth)
    throw RuntimeGuard("recursion depth exceeded max_depth=" +
                       std::to_string(cfg_.max_depth));
  const Matrix& J = node.couplings();
  const std::size_t m = node.members.size();
  const double frob = J.norm();
  const bool is_leaf = frob <= cfg_.c3;

  ++tel.node_count;
  tel.max_depth_seen = std::max<std::uint64_t>(tel.max_depth_seen, depth);
  if (tel.level_nodes.size() <= depth) {
    tel.level_nodes.resize(depth + 1, 0);
    tel.level_frobenius_sum.resize(depth + 1, 0.0);
  }
  ++tel.level_nodes[depth];
  tel.level_frobenius_sum[depth] += frob;
  if (depth > 0) ++tel.nonroot_nodes;

  if (observer_) {
    NodeVisit visit;
    visit.depth = depth;
    visit.members = node.members;
    visit.field = node.h;
    visit.context = context_;
    visit.frobenius = frob;
    visit.leaf = is_leaf;
    observer_(visit);
  }
  if (is_leaf) return leaf(node, rng, tel);

  const std::size_t s = block_subset_size(cfg_.c1, m, log_factor_, frob);
  if (s >= m)
    throw RuntimeGuard("block size " + std::to_string(s) + " does not shrink a node of size " +
                       std::to_string(m));
  const std::uint64_t T = outer_step_count(cfg_.C2, log_factor_, m, s);
  if (depth == 0) {
    tel.root_outer_steps = T;
    tel.root_subset_size = s;
  } else {
    tel.nonroot_children += T;
  }

  std::vector<Spin> y(m);
  {
    std::vector<double> p(m);
    for (std::size_t i = 0; i < m; ++i)
      p[i] = sigmoid(2.0 * node.h[static_cast<Eigen::Index>(i)]);
    sample_product_into(rng.split(kInitBranch), p, y);
  }
  if (observer_)
    for (std::size_t i = 0; i < m; ++i) context_[node.members[i]] = y[i];

  const std::size_t B = cfg_.block_size;
  std::vector<std::vector<std::size_t>> subsets(B);
  std::vector<std::vector<double>> base(B);
  Vector y0(static_cast<Eigen::Index>(m));
  std::vector<std::size_t> changed;
  std::vector<char> is_changed(m, 0);

  for (std::uint64_t t0 = 0; t0 < T; t0 += B) {
    const auto nb = static_cast<std::size_t>(std::min<std::uint64_t>(B, T - t0));
    for (std::size_t i = 0; i < m; ++i) y0[static_cast<Eigen::Index>(i)] = y[i];

    // Subsets and row products against y0; each step is owned by one worker.
    maybe_parallel_for(pool_.get(), nb, nb * s * m, cfg_.parallel_grain,
                       [&](std::size_t begin, std::size_t end) {
                         SubsetSampler sampler(m);
                         for (std::size_t b = begin; b < end; ++b) {
                           RngStream sub = rng.split(t0 + b).split(kSubsetBranch);
                           sampler.draw(sub, s, subsets[b]);
                           base[b].resize(s);
                           for (std::size_t a = 0; a < s; ++a)
                             base[b][a] = J.col(static_cast<Eigen::Index>(subsets[b][a])).dot(y0);
                         }
                       });

    for (std::size_t b = 0; b < nb; ++b) {
      const auto& S = subsets[b];
      Node child;
      child.members.resize(s);
      child.owned.resize(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s));
      child.h.resize(static_cast<Eigen::Index>(s));
      for (std::size_t a = 0; a < s; ++a) {
        const auto col = J.col(static_cast<Eigen::Index>(S[a]));
        double f = node.h[static_cast<Eigen::Index>(S[a])] + base[b][a];
        for (const std::size_t j : changed)
          f += col[static_cast<Eigen::Index>(j)] * (y[j] - y0[static_cast<Eigen::Index>(j)]);
        for (std::size_t c = 0; c < s; ++c) {
          const double v = col[static_cast<Eigen::Index>(S[c])];
          f -= v * y[S[c]];
          child.owned(static_cast<Eigen::Index>(c), static_cast<Eigen::Index>(a)) = v;
        }
        child.h[static_cast<Eigen::Index>(a)] = f;
        child.members[a] = node.members[S[a]];
      }
      child.J = &child.owned;

      const std::vector<Spin> z =
          solve(child, rng.split(t0 + b).split(kChildBranch), depth + 1, tel);
      for (std::size_t a = 0; a < s; ++a) {
        const std::size_t i = S[a];
        if (z[a] == y[i]) continue;
        y[i] = z[a];
        if (!is_changed[i]) {
          is_changed[i] = 1;
          changed.push_back(i);
        }
        if (observer_) context_[node.members[i]] = z[a];
      }
    }
    for (const std::size_t j : changed) is_changed[j] = 0;
    changed.clear();
  }
  return y;
}

std::vector<Spin> ParallelIsingSampler::leaf(const Node& node, const RngStream& rng,
                                             RunTelemetry& tel) {
  // Same streams and acceptance test as approx_rejection_sample with a
  // product proposal and g = x'Jx/2, without the per-try allocations.
  const Matrix& J = node.couplings();
  const std::size_t m = node.members.size();
  std::vector<double> p(m);
  for (std::size_t i = 0; i < m; ++i) p[i] = sigmoid(2.0 * node.h[static_cast<Eigen::Index>(i)]);
  const double log_c = std::log(rejection_cutoff());
  std::vector<Spin> x(m), z(m);
  ++tel.leaf_count;
  for (std::uint64_t a = 0; a < max_tries_; ++a) {
    const RngStream attempt = rng.split(a);
    sample_product_into(attempt.split(0), p, x);
    sample_product_into(attempt.split(1), p, z);
    const double log_r = half_quadratic(J, x) - half_quadratic(J, z);
    const double log_u = std::log(attempt.split(2).open_uniform_at(0));
    if (log_u <= log_r - log_c) {
      tel.total_rejection_tries += a + 1;
      return x;
    }
  }
  tel.total_rejection_tries += max_tries_;
  throw RuntimeGuard("leaf rejection sampler: no acceptance in " +
                     std::to_string(max_tries_) + " tries");
}

SampleResult parallel_ising_sample(const IsingModel& model, const SubsetIndex& R,
                                   const Vector& h_eff, const SamplerConfig& cfg,
                                   const RngStream& rng) {
  ParallelIsingSampler sampler(model, cfg);
  return sampler.sample(R, h_eff, rng);
}

}  // namespace kglauber

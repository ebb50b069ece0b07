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

// Two-draw approximate rejection sampling for targets known only up to
// dP/dQ ~ exp(g). Each attempt draws X, Z ~ Q and U ~ Uniform(0,1] and
// accepts X when U <= exp(g(X) - g(Z)) / c. The output law satisfies
// dPhat/dQ(x) ~ E[min(R, c) | X = x] with R = exp(g(X) - g(Z)).

#pragma once

#include "kglauber/model.hpp"
#include "kglauber/sampling.hpp"

#include <cstdint>
#include <functional>

namespace kglauber {

struct RejectionOutcome {
  SpinVector sample;
  std::uint64_t tries = 0;
  /// g(X) - g(Z) for the accepted attempt.
  double accepted_log_ratio = 0.0;
};

/// Draws one proposal from the given stream. Must be a pure function of it.
using ProposalSampler = std::function<SpinVector(const RngStream&)>;
using LogWeight = std::function<double(const SpinVector&)>;

/// Attempt a (0-based) uses stream A = rng.split(a): X from A.split(0), Z
/// from A.split(1), U = A.split(2).open_uniform_at(0). The test is carried
/// out in log space, ln U <= g(X) - g(Z) - ln c. Throws RuntimeGuard after
/// max_tries rejections and InvalidArgument unless c >= 1, max_tries >= 1.
RejectionOutcome approx_rejection_sample(const ProposalSampler& proposal,
                                         const LogWeight& g, double c,
                                         const RngStream& rng,
                                         std::uint64_t max_tries);

/// ceil(40 c ln(n/eps)).
std::uint64_t default_max_tries(double c, std::size_t n, double eps);

/// Monte Carlo estimates (each with a standard error) of
///   p_accept  = E[min(R,c)] / c
///   tail      = E[(R-c) 1{R>=c}]
///   mean_r    = E[R]
///   tv_bound  = tail / mean_r   (delta-method standard error)
struct RejectionDiagnostics {
  double p_accept_hat = 0, p_accept_se = 0;
  double tail_hat = 0, tail_se = 0;
  double mean_r_hat = 0, mean_r_se = 0;
  double tv_bound_hat = 0, tv_bound_se = 0;
  std::uint64_t trials = 0;
};

/// Trial t draws X, Z from rng.split(t).split(0/1).
RejectionDiagnostics rejection_diagnostics(const ProposalSampler& proposal,
                                           const LogWeight& g, double c,
                                           std::uint64_t trials,
                                           const RngStream& rng);

}  // namespace kglauber

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

#include "kglauber/rejection.hpp"

#include "kglauber/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>
#include <utility>

namespace kglauber {

namespace {

void check_cutoff(double c) {
  if (!(c >= 1.0) || !std::isfinite(c))
    throw InvalidArgument("rejection cutoff c must be finite and >= 1 (got " +
                          std::to_string(c) + ")");
}

}  // namespace

std::uint64_t default_max_tries(double c, std::size_t n, double eps) {
  const double v = std::ceil(40.0 * c * std::log(static_cast<double>(n) / eps));
  return v < 1.0 ? 1 : static_cast<std::uint64_t>(v);
}

RejectionOutcome approx_rejection_sample(const ProposalSampler& proposal,
                                         const LogWeight& g, double c,
                                         const RngStream& rng,
                                         std::uint64_t max_tries) {
  check_cutoff(c);
  if (max_tries < 1) throw InvalidArgument("max_tries must be at least 1");
  const double log_c = std::log(c);
  for (std::uint64_t a = 0; a < max_tries; ++a) {
    const RngStream attempt = rng.split(a);
    SpinVector x = proposal(attempt.split(0));
    const SpinVector z = proposal(attempt.split(1));
    const double log_r = g(x) - g(z);
    const double log_u = std::log(attempt.split(2).open_uniform_at(0));
    if (log_u <= log_r - log_c) return {std::move(x), a + 1, log_r};
  }
  throw RuntimeGuard("approximate rejection sampler: no acceptance in " +
                     std::to_string(max_tries) + " tries");
}

RejectionDiagnostics rejection_diagnostics(const ProposalSampler& proposal,
                                           const LogWeight& g, double c,
                                           std::uint64_t trials,
                                           const RngStream& rng) {
  check_cutoff(c);
  if (trials < 1) throw InvalidArgument("trials must be at least 1");

  // Running sums for min(R,c), (R-c)+, R and the cross moment needed by the
  // delta method for tail / mean_r.
  double s_min = 0, s_min2 = 0, s_tail = 0, s_tail2 = 0, s_r = 0, s_r2 = 0, s_tr = 0;
  for (std::uint64_t t = 0; t < trials; ++t) {
    const RngStream trial = rng.split(t);
    const double r = std::exp(g(proposal(trial.split(0))) - g(proposal(trial.split(1))));
    const double mn = std::min(r, c);
    const double tail = r >= c ? r - c : 0.0;
    s_min += mn;
    s_min2 += mn * mn;
    s_tail += tail;
    s_tail2 += tail * tail;
    s_r += r;
    s_r2 += r * r;
    s_tr += tail * r;
  }
  const double N = static_cast<double>(trials);
  auto mean_se = [N](double s, double s2) {
    const double m = s / N;
    const double var = N > 1 ? std::max(0.0, (s2 - N * m * m) / (N - 1)) : 0.0;
    return std::pair{m, std::sqrt(var / N)};
  };

  RejectionDiagnostics d;
  d.trials = trials;
  const auto [m_min, se_min] = mean_se(s_min, s_min2);
  d.p_accept_hat = m_min / c;
  d.p_accept_se = se_min / c;
  std::tie(d.tail_hat, d.tail_se) = mean_se(s_tail, s_tail2);
  std::tie(d.mean_r_hat, d.mean_r_se) = mean_se(s_r, s_r2);
  d.tv_bound_hat = d.tail_hat / d.mean_r_hat;

  // Var(T/R) ~ (Var T - 2 ratio Cov(T,R) + ratio^2 Var R) / (N E[R]^2)
  if (N > 1) {
    const double ratio = d.tv_bound_hat;
    const double var_t = d.tail_se * d.tail_se * N;
    const double var_r = d.mean_r_se * d.mean_r_se * N;
    const double cov = (s_tr - N * d.tail_hat * d.mean_r_hat) / (N - 1);
    const double v = (var_t - 2 * ratio * cov + ratio * ratio * var_r) /
                     (N * d.mean_r_hat * d.mean_r_hat);
    d.tv_bound_se = std::sqrt(std::max(0.0, v));
  }
  return d;
}

}  // namespace kglauber

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

#include "kglauber/glauber.hpp"

#include "kglauber/error.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace kglauber {

namespace {

void check_state(const IsingModel& model, const ChainState& state) {
  if (state.x.size() != model.size() || !state.x.is_full())
    throw InvalidArgument("chain state must be a full configuration of the model");
}

double local_field(const IsingModel& model, std::span<const Spin> x, std::size_t i) {
  const auto col = model.couplings().col(static_cast<Eigen::Index>(i));
  double f = model.field()[static_cast<Eigen::Index>(i)];
  for (std::size_t j = 0; j < x.size(); ++j) f += col[static_cast<Eigen::Index>(j)] * x[j];
  return f;  // J_ii = 0, so x_i itself does not contribute
}

}  // namespace

void glauber_update(const IsingModel& model, std::span<Spin> x, RngStream& rng) {
  const auto i = static_cast<std::size_t>(rng.next_below(x.size()));
  const double p_plus = sigmoid(2.0 * local_field(model, x, i));
  x[i] = rng.next_uniform() < p_plus ? Spin{1} : Spin{-1};
}

ChainState glauber_step(const IsingModel& model, ChainState state, RngStream& rng) {
  check_state(model, state);
  std::vector<Spin> x(state.x.values().begin(), state.x.values().end());
  glauber_update(model, x, rng);
  return {SpinVector::full(std::move(x)), state.step_count + 1};
}

ChainState k_glauber_step_exact(const IsingModel& model, ChainState state,
                                std::size_t k, RngStream& rng) {
  check_state(model, state);
  const std::size_t n = model.size();
  if (k < 1 || k > n)
    throw InvalidArgument("k-Glauber: need 1 <= k <= n (k=" + std::to_string(k) + ")");
  if (k > kMaxExactBlock)
    throw SizeGuard("k-Glauber: k=" + std::to_string(k) + " exceeds the enumeration cap " +
                    std::to_string(kMaxExactBlock));

  std::vector<Spin> x(state.x.values().begin(), state.x.values().end());
  const SubsetIndex S = sample_subset(rng, n, k);
  const auto& J = model.couplings();

  // Field from outside S only.
  std::vector<double> f(k);
  for (std::size_t a = 0; a < k; ++a) {
    double acc = local_field(model, x, S[a]);
    for (std::size_t b = 0; b < k; ++b) acc -= J(S[b], S[a]) * x[S[b]];
    f[a] = acc;
  }

  // Log-weights of the 2^k assignments; bit a of the index sets x_{S[a]} = +1.
  const std::uint64_t states = std::uint64_t{1} << k;
  std::vector<double> logw(states);
  double max_lw = -std::numeric_limits<double>::infinity();
  std::vector<Spin> y(k);
  for (std::uint64_t bits = 0; bits < states; ++bits) {
    for (std::size_t a = 0; a < k; ++a) y[a] = ((bits >> a) & 1U) ? 1 : -1;
    double lw = 0.0;
    for (std::size_t a = 0; a < k; ++a) {
      lw += f[a] * y[a];
      for (std::size_t b = a + 1; b < k; ++b) lw += J(S[a], S[b]) * y[a] * y[b];
    }
    logw[bits] = lw;
    if (lw > max_lw) max_lw = lw;
  }
  double total = 0.0;
  for (double& w : logw) {
    w = std::exp(w - max_lw);
    total += w;
  }

  const double target = rng.next_uniform() * total;
  double acc = 0.0;
  std::uint64_t chosen = states - 1;
  for (std::uint64_t bits = 0; bits < states; ++bits) {
    acc += logw[bits];
    if (target < acc) {
      chosen = bits;
      break;
    }
  }
  for (std::size_t a = 0; a < k; ++a) x[S[a]] = ((chosen >> a) & 1U) ? 1 : -1;
  return {SpinVector::full(std::move(x)), state.step_count + 1};
}

Stepper glauber_stepper() {
  return [](const IsingModel& m, ChainState s, RngStream& r) {
    return glauber_step(m, std::move(s), r);
  };
}

Stepper k_glauber_stepper(std::size_t k) {
  return [k](const IsingModel& m, ChainState s, RngStream& r) {
    return k_glauber_step_exact(m, std::move(s), k, r);
  };
}

ChainState run_chain(const IsingModel& model, const SpinVector& x0,
                     const Stepper& stepper, std::uint64_t steps,
                     const RngStream& rng) {
  ChainState state{x0, 0};
  check_state(model, state);
  for (std::uint64_t t = 0; t < steps; ++t) {
    RngStream step_rng = rng.split(t);
    state = stepper(model, std::move(state), step_rng);
  }
  state.step_count = steps;
  return state;
}

}  // namespace kglauber

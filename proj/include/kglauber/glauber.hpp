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

// Reference chains: random-scan Glauber and exact k-Glauber dynamics.

#pragma once

#include "kglauber/model.hpp"
#include "kglauber/sampling.hpp"

#include <cstdint>
#include <functional>
#include <span>

namespace kglauber {

struct ChainState {
  SpinVector x;
  std::uint64_t step_count = 0;
};

/// Largest k accepted by k_glauber_step_exact (it enumerates 2^k weights).
inline constexpr std::size_t kMaxExactBlock = 20;

/// Picks i uniformly and sets x_i = +1 with probability
/// sigmoid(2 (<J_i, x> + h_i)).
ChainState glauber_step(const IsingModel& model, ChainState state, RngStream& rng);
/// In-place form of glauber_step on a full configuration; same draws.
void glauber_update(const IsingModel& model, std::span<Spin> x, RngStream& rng);

/// Picks a uniform k-subset S and redraws x_S from mu(X_S | X_{S^c}) by
/// enumerating its 2^k weights.
ChainState k_glauber_step_exact(const IsingModel& model, ChainState state,
                                std::size_t k, RngStream& rng);

using Stepper =
    std::function<ChainState(const IsingModel&, ChainState, RngStream&)>;

Stepper glauber_stepper();
Stepper k_glauber_stepper(std::size_t k);

/// Applies `stepper` `steps` times. Step t draws from rng.split(t).
ChainState run_chain(const IsingModel& model, const SpinVector& x0,
                     const Stepper& stepper, std::uint64_t steps,
                     const RngStream& rng);

}  // namespace kglauber

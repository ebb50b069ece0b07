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

// The kglauber command line: sample, verify, spectra, hanson-wright, bench.

#pragma once

#include "kglauber/model.hpp"

#include <cstdint>
#include <exception>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace kglauber::cli {

enum ExitCode : int {
  kOk = 0,
  kCheckFailed = 1,
  kUsage = 2,
  kParse = 3,
  kSizeGuard = 4,
  kRuntimeGuard = 5,
  kNonConvergence = 6,
  kInternal = 70,
};

int exit_code_for(const std::exception& e);

/// Runs one command; args exclude the program name.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

struct CheckResult {
  std::string suite;
  std::string name;
  bool pass = false;
  std::string detail;
};

/// suite is one of operators, spectra, rejection, end2end, all.
std::vector<CheckResult> run_suite(const std::string& suite, std::size_t n_max,
                                   std::uint64_t seed, std::uint64_t end2end_runs);

struct HansonWrightRow {
  double frob = 0.0;
  double t = 0.0;
  double tail_hat = 0.0;
  double bound = 0.0;
  bool pass = false;
};

struct HansonWrightReport {
  std::vector<HansonWrightRow> rows;
  /// Largest grid value f such that every grid value <= f passes at every t.
  double largest_passing_frob = 0.0;
  /// 2 * largest_passing_frob: the log-weight x'Jx/2 has A = J/2.
  double recommended_c3 = 0.0;
  /// True when the passing grid values form a prefix of the sorted grid.
  bool monotone = true;
};

/// Random symmetric zero-diagonal A of dimension `dim` scaled to each
/// Frobenius value, Rademacher X, Z; empirical Pr(|Z'AZ - X'AX| >= t)
/// against 2 exp(-2t).
HansonWrightReport hanson_wright_probe(std::vector<double> frob_grid,
                                       const std::vector<double>& t_grid,
                                       std::size_t dim, std::uint64_t trials,
                                       std::uint64_t seed);

struct BenchRow {
  std::size_t n = 0;
  double beta = 0.0;
  std::size_t threads = 1;
  double wall_time_parallel = 0.0;
  double wall_time_glauber_baseline = 0.0;
  std::uint64_t outer_steps = 0;
  double frobenius_norm = 0.0;
  std::uint64_t seed = 0;
  std::uint64_t output_hash = 0;
};

/// ceil(n ln n / (1 - norm)) * 8.
std::uint64_t glauber_baseline_steps(std::size_t n, double norm);

std::vector<BenchRow> bench(std::size_t n, double beta, double eps,
                            const std::vector<std::size_t>& threads_list,
                            const std::vector<std::uint64_t>& seeds);

/// FNV-1a over the spin bytes.
std::uint64_t hash_spins(std::span<const Spin> x);

}  // namespace kglauber::cli

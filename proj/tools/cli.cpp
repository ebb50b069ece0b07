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

#include "cli.hpp"

#include "kglauber/error.hpp"
#include "kglauber/exact.hpp"
#include "kglauber/io.hpp"
#include "kglauber/parallel.hpp"
#include "kglauber/thread_pool.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>

namespace kglauber::cli {

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const InvalidArgument*>(&e)) return kUsage;
  if (dynamic_cast<const ParseError*>(&e)) return kParse;
  if (dynamic_cast<const SizeGuard*>(&e)) return kSizeGuard;
  if (dynamic_cast<const RuntimeGuard*>(&e)) return kRuntimeGuard;
  if (dynamic_cast<const NonConvergence*>(&e)) return kNonConvergence;
  return kInternal;
}

namespace {

// Writes to `path`, or to `fallback` when the path is empty.
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) {
    if (path.empty()) {
      stream_ = &fallback;
      return;
    }
    file_ = std::make_unique<std::ofstream>(path);
    if (!*file_) throw ParseError("cannot open '" + path + "' for writing");
    stream_ = file_.get();
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

std::string num(double v) { return io::format_double(v); }

struct SampleFlags {
  std::string J_path, h_path, J_format = "auto", out, telemetry;
  double eps = 0.1;
  std::uint64_t seed = 0;
  std::size_t threads = 0;
  std::optional<double> c1, c3, C2, C4;
  std::size_t max_depth = 64;
  std::size_t block_size = 32;
};

int cmd_sample(const SampleFlags& f, std::ostream& out) {
  io::MatrixFormat fmt = io::MatrixFormat::kAuto;
  if (f.J_format == "dense") fmt = io::MatrixFormat::kDense;
  if (f.J_format == "sparse") fmt = io::MatrixFormat::kSparse;
  const Matrix J = io::load_matrix(f.J_path, fmt);
  const Vector h = f.h_path.empty() ? Vector::Zero(J.rows()) : io::load_vector(f.h_path);
  const IsingModel model = new_ising(J, h);

  // Defaults scale C2 with the margin 1 - ||J||; an explicit --C2 makes the
  // norm irrelevant.
  SamplerConfig cfg;
  if (!f.C2) {
    const double norm = operator_norm(model, 1e-6);
    if (!(norm < 1.0))
      throw InvalidArgument("||J|| = " + num(norm) + " >= 1; pass --C2 to run anyway");
    cfg = default_config(1.0 - norm, 0.25);
  }
  cfg.eps = f.eps;
  if (f.c3) cfg.c3 = *f.c3;
  cfg.c1 = f.c1 ? *f.c1 : cfg.c3 / 2.0;
  if (f.C2) cfg.C2 = *f.C2;
  if (f.C4) cfg.C4 = *f.C4;
  cfg.threads = f.threads != 0 ? f.threads : threads_from_env(1);
  cfg.max_depth = f.max_depth;
  cfg.block_size = f.block_size;

  ParallelIsingSampler sampler(model, cfg);
  const SampleResult res = sampler.sample(f.seed);
  {
    Sink s(f.out, out);
    io::write_spins(*s, res.sample);
  }
  if (!f.telemetry.empty()) {
    Sink s(f.telemetry, out);
    *s << io::telemetry_to_json(res.telemetry);
  }
  return kOk;
}

int cmd_verify(const std::string& suite, std::size_t n_max, std::uint64_t seed,
               std::uint64_t runs, std::ostream& out) {
  const auto results = run_suite(suite, n_max, seed, runs);
  std::size_t failed = 0;
  for (const auto& r : results) {
    out << (r.pass ? "PASS " : "FAIL ") << r.suite << ": " << r.name << " (" << r.detail
        << ")\n";
    failed += r.pass ? 0 : 1;
  }
  out << results.size() - failed << "/" << results.size() << " checks passed\n";
  return failed == 0 ? kOk : kCheckFailed;
}

int cmd_spectra(std::size_t n, double norm, double field, std::uint64_t seed,
                const std::string& path, std::ostream& out) {
  const IsingModel model = random_model(n, norm, field, seed);
  Ladder ladder(enumerate_distribution(model));
  const double kn = chi2_down_contraction(ladder, n);
  io::CsvTable t;
  t.header = {"level", "kappa_chi2", "kappa_bound", "gap", "bl_gap_formula"};
  for (std::size_t m = 1; m <= n; ++m) {
    const double bl = bernoulli_laplace_formula(n, m);
    t.rows.push_back({std::to_string(m), num(chi2_down_contraction(ladder, m)),
                      num(monotonicity_bound(n, m, kn, bl)),
                      num(1.0 - down_up_second_eigenvalue(ladder, m)), num(bl)});
  }
  Sink s(path, out);
  io::write_csv(*s, t);
  return kOk;
}

int cmd_hanson_wright(const std::vector<double>& frob, const std::vector<double>& tg,
                      std::size_t dim, std::uint64_t trials, std::uint64_t seed,
                      const std::string& path, std::ostream& out) {
  const HansonWrightReport rep = hanson_wright_probe(frob, tg, dim, trials, seed);
  io::CsvTable t;
  t.header = {"frob", "t", "tail_hat", "bound", "pass"};
  for (const auto& r : rep.rows)
    t.rows.push_back({num(r.frob), num(r.t), num(r.tail_hat), num(r.bound), r.pass ? "1" : "0"});
  {
    Sink s(path, out);
    io::write_csv(*s, t);
  }
  if (!path.empty()) {
    out << "largest passing ||A||_F: " << rep.largest_passing_frob << "\n"
        << "recommended c3: " << rep.recommended_c3 << "\n"
        << "pass set monotone in grid: " << (rep.monotone ? "yes" : "no") << "\n";
  }
  return kOk;
}

int cmd_bench(std::size_t n, double beta, double eps, const std::vector<std::size_t>& threads,
              const std::vector<std::uint64_t>& seeds, const std::string& path,
              std::ostream& out) {
  const auto rows = bench(n, beta, eps, threads, seeds);
  io::CsvTable t;
  t.header = {"n", "beta", "threads", "wall_time_parallel", "wall_time_glauber_baseline",
              "outer_steps", "frobenius_norm", "seed", "output_hash"};
  for (const auto& r : rows)
    t.rows.push_back({std::to_string(r.n), num(r.beta), std::to_string(r.threads),
                      num(r.wall_time_parallel), num(r.wall_time_glauber_baseline),
                      std::to_string(r.outer_steps), num(r.frobenius_norm),
                      std::to_string(r.seed), std::to_string(r.output_hash)});
  {
    Sink s(path, out);
    io::write_csv(*s, t);
  }
  if (!path.empty()) {
    for (const std::size_t th : threads) {
      std::vector<double> times;
      for (const auto& r : rows)
        if (r.threads == th) times.push_back(r.wall_time_parallel);
      std::nth_element(times.begin(), times.begin() + static_cast<std::ptrdiff_t>(times.size() / 2),
                       times.end());
      out << "threads=" << th << " median wall time " << times[times.size() / 2] << " s\n";
    }
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parallel k-Glauber Ising sampler and exact verification tools", "kglauber"};
  app.require_subcommand(1);

  SampleFlags sf;
  auto* sample = app.add_subcommand("sample", "Draw one configuration");
  sample->set_help_flag("--help", "Print this help message and exit");
  sample->add_option("--J", sf.J_path, "Coupling matrix file")->required();
  sample->add_option("--h", sf.h_path, "Field vector file (default zero)");
  sample->add_option("--J-format", sf.J_format, "auto, dense or sparse")
      ->check(CLI::IsMember({"auto", "dense", "sparse"}));
  sample->add_option("--eps", sf.eps, "Target accuracy in (0, 1/2)");
  sample->add_option("--seed", sf.seed);
  sample->add_option("--threads", sf.threads, "Worker threads (else KGLAUBER_THREADS, else 1)");
  sample->add_option("--c1", sf.c1);
  sample->add_option("--c3", sf.c3);
  sample->add_option("--C2", sf.C2);
  sample->add_option("--C4", sf.C4);
  sample->add_option("--max-depth", sf.max_depth);
  sample->add_option("--block-size", sf.block_size);
  sample->add_option("--out", sf.out, "Spin output file (default stdout)");
  sample->add_option("--telemetry", sf.telemetry, "Telemetry JSON file");

  std::string suite = "all";
  std::size_t n_max = 6;
  std::uint64_t verify_seed = 1, runs = 20000;
  auto* verify = app.add_subcommand("verify", "Run exact verification suites");
  verify->add_option("--suite", suite)
      ->check(CLI::IsMember({"operators", "spectra", "rejection", "end2end", "all"}));
  verify->add_option("--n-max", n_max);
  verify->add_option("--seed", verify_seed);
  verify->add_option("--runs", runs, "Sampler runs for the end2end suite");

  std::size_t sp_n = 6;
  double sp_norm = 0.5, sp_field = 0.3;
  std::uint64_t sp_seed = 1;
  std::string sp_out;
  auto* spectra = app.add_subcommand("spectra", "Per-level contraction table of a random model");
  spectra->add_option("--n", sp_n);
  spectra->add_option("--norm", sp_norm);
  spectra->add_option("--field", sp_field);
  spectra->add_option("--seed", sp_seed);
  spectra->add_option("--out", sp_out);

  std::vector<double> frob_grid, t_grid;
  for (int i = 0; i <= 20; ++i) frob_grid.push_back(0.05 * i);
  for (int i = 1; i <= 20; ++i) t_grid.push_back(0.25 * i);
  std::size_t hw_dim = 20;
  std::uint64_t hw_trials = 20000, hw_seed = 1;
  std::string hw_out;
  auto* hw = app.add_subcommand("hanson-wright", "Calibrate the leaf threshold");
  hw->add_option("--frob-grid", frob_grid)->delimiter(',');
  hw->add_option("--t-grid", t_grid)->delimiter(',');
  hw->add_option("--dim", hw_dim);
  hw->add_option("--trials", hw_trials);
  hw->add_option("--seed", hw_seed);
  hw->add_option("--out", hw_out);

  std::size_t b_n = 2000;
  double b_beta = 0.2, b_eps = 0.1;
  std::vector<std::size_t> b_threads{1, 8};
  std::vector<std::uint64_t> b_seeds{1, 2, 3};
  std::string b_out;
  auto* bn = app.add_subcommand("bench", "Time the sampler on SK instances");
  bn->add_option("--n", b_n);
  bn->add_option("--beta", b_beta);
  bn->add_option("--eps", b_eps);
  bn->add_option("--threads-list", b_threads)->delimiter(',');
  bn->add_option("--seeds", b_seeds)->delimiter(',');
  bn->add_option("--out", b_out);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*sample) return cmd_sample(sf, out);
    if (*verify) return cmd_verify(suite, n_max, verify_seed, runs, out);
    if (*spectra) return cmd_spectra(sp_n, sp_norm, sp_field, sp_seed, sp_out, out);
    if (*hw) return cmd_hanson_wright(frob_grid, t_grid, hw_dim, hw_trials, hw_seed, hw_out, out);
    if (*bn) return cmd_bench(b_n, b_beta, b_eps, b_threads, b_seeds, b_out, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kUsage;
}

}  // namespace kglauber::cli

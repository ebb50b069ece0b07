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
#include "kglauber/io.hpp"
#include "kglauber/parallel.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <unistd.h>

using namespace kglauber;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("kglauber_cli_" + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

}  // namespace

TEST_CASE("exit codes by error kind") {
  CHECK(cli::exit_code_for(InvalidArgument("x")) == 2);
  CHECK(cli::exit_code_for(ParseError("x")) == 3);
  CHECK(cli::exit_code_for(SizeGuard("x")) == 4);
  CHECK(cli::exit_code_for(RuntimeGuard("x")) == 5);
  CHECK(cli::exit_code_for(NonConvergence("x")) == 6);
  CHECK(cli::exit_code_for(std::runtime_error("x")) == 70);
}

TEST_CASE("sample on a free model") {
  TempDir dir;
  {
    std::ofstream J(dir / "J.csv");
    J << "0,0,0,0\n0,0,0,0\n0,0,0,0\n0,0,0,0\n";
  }
  const Run r = run({"sample", "--J", dir / "J.csv", "--seed", "3", "--out", dir / "x.txt",
                     "--telemetry", dir / "t.json"});
  REQUIRE(r.code == 0);
  std::ifstream xs(dir / "x.txt");
  const auto spins = io::read_spins(xs);
  CHECK(spins.size() == 4);
  const RunTelemetry t = io::telemetry_from_json(slurp(dir / "t.json"));
  CHECK(t.node_count == 1);
  CHECK(t.seed == 3);

  const Run again = run({"sample", "--J", dir / "J.csv", "--seed", "3"});
  CHECK(again.code == 0);
  CHECK(again.out == slurp(dir / "x.txt"));
}

TEST_CASE("sample is reproducible and honours fields and overrides") {
  TempDir dir;
  const IsingModel m = random_model(10, 0.5, 0.3, 2);
  {
    std::ofstream J(dir / "J.txt");
    io::write_sparse_matrix(J, m.couplings());
    std::ofstream h(dir / "h.txt");
    io::write_vector(h, m.field());
  }
  const std::vector<std::string> base{"sample", "--J", dir / "J.txt", "--h", dir / "h.txt",
                                      "--seed", "11", "--c3", "0.5", "--threads", "2"};
  const Run a = run(base);
  const Run b = run(base);
  REQUIRE(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(std::count(a.out.begin(), a.out.end(), '\n') == 10);

  auto with = base;
  with.insert(with.end(), {"--J-format", "dense"});
  CHECK(run(with).code == 3);
}

TEST_CASE("sample errors") {
  TempDir dir;
  {
    std::ofstream bad(dir / "bad.csv");
    bad << "1,2\n3\n";
    std::ofstream strong(dir / "strong.csv");
    strong << "0,2\n2,0\n";
  }
  CHECK(run({"sample", "--J", dir / "bad.csv"}).code == 3);
  CHECK(run({"sample", "--J", dir / "missing.csv"}).code == 3);
  const Run s = run({"sample", "--J", dir / "strong.csv"});
  CHECK(s.code == 2);
  CHECK(s.err.find("--C2") != std::string::npos);
  CHECK(run({"sample", "--J", dir / "strong.csv", "--C2", "4", "--seed", "1"}).code == 0);
  CHECK(run({"sample", "--J", dir / "strong.csv", "--eps", "0.7"}).code == 2);
  CHECK(run({"sample"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"nonsense"}).code == 2);
}

TEST_CASE("verify") {
  const Run ok = run({"verify", "--suite", "operators", "--n-max", "5"});
  CHECK(ok.code == 0);
  CHECK(ok.out.find("FAIL") == std::string::npos);
  CHECK(ok.out.find("checks passed") != std::string::npos);
  CHECK(run({"verify", "--suite", "bogus"}).code == 2);
  for (const std::string suite : {"spectra", "rejection"}) {
    const auto res = cli::run_suite(suite, 5, 1, 1000);
    CHECK(!res.empty());
    for (const auto& c : res) CHECK_MESSAGE(c.pass, c.suite << ": " << c.name << " " << c.detail);
  }
}

TEST_CASE("spectra CSV") {
  TempDir dir;
  REQUIRE(run({"spectra", "--n", "5", "--norm", "0.5", "--out", dir / "s.csv"}).code == 0);
  std::ifstream in(dir / "s.csv");
  const io::CsvTable t = io::read_csv(in);
  CHECK(t.header == std::vector<std::string>{"level", "kappa_chi2", "kappa_bound", "gap", "bl_gap_formula"});
  CHECK(t.rows.size() == 5);
  for (const auto& row : t.rows) {
    const double kappa = std::stod(row[1]), bound = std::stod(row[2]), gap = std::stod(row[3]);
    CHECK(kappa >= bound - 1e-9);
    CHECK(std::abs(kappa - gap) < 1e-10);
  }
  CHECK(run({"spectra", "--n", "12"}).code == 4);
}

TEST_CASE("Hanson-Wright probe") {
  SUBCASE("zero matrix has no tail") {
    const auto rep = cli::hanson_wright_probe({0.0}, {0.25, 1.0}, 10, 1000, 1);
    for (const auto& r : rep.rows) CHECK(r.tail_hat == 0.0);
    CHECK(rep.largest_passing_frob == 0.0);
  }
  SUBCASE("dimension 2 against its 16-outcome law") {
    // A = [[0,a],[a,0]] with ||A||_F = 1: D = 2a(z0 z1 - x0 x1) takes
    // -4a, 0, 4a with probabilities 1/4, 1/2, 1/4.
    const double a = 1 / std::sqrt(2.0);
    const std::uint64_t N = 40000;
    const auto rep = cli::hanson_wright_probe({1.0}, {1.0, 4 * a - 1e-9, 4 * a + 1e-9}, 2, N, 7);
    REQUIRE(rep.rows.size() == 3);
    const double sd = std::sqrt(0.25 / N);
    CHECK(std::abs(rep.rows[0].tail_hat - 0.5) <= 3 * sd);
    CHECK(std::abs(rep.rows[1].tail_hat - 0.5) <= 3 * sd);
    CHECK(rep.rows[2].tail_hat == 0.0);
    CHECK(rep.rows[0].bound == doctest::Approx(2 * std::exp(-2.0)));
  }
  SUBCASE("default grid through the CLI") {
    TempDir dir;
    const Run r = run({"hanson-wright", "--trials", "4000", "--out", dir / "hw.csv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("pass set monotone in grid: yes") != std::string::npos);
    const auto rep = cli::hanson_wright_probe(
        {0.0, 0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4, 0.45, 0.5, 0.6, 0.8, 1.0}, {0.25, 0.5, 1, 2, 3},
        20, 4000, 0);
    CHECK(rep.recommended_c3 > 0.0);
    CHECK(rep.recommended_c3 == doctest::Approx(2 * rep.largest_passing_frob));
    CHECK(rep.monotone);
  }
  CHECK_THROWS_AS(cli::hanson_wright_probe({1.0}, {1.0}, 1, 10, 1), InvalidArgument);
}

TEST_CASE("bench rows") {
  const double eps = 0.1;
  const auto rows = cli::bench(300, 0.2, eps, {1, 2}, {4});
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].output_hash == rows[1].output_hash);
  const IsingModel m = sk_model(300, 0.2, 4);
  CHECK(rows[0].frobenius_norm == m.couplings().norm());
  const SamplerConfig cfg = default_config(1.0 - operator_norm(m, 1e-3), eps);
  const double lf = std::log(300 / eps);
  const std::size_t s = block_subset_size(cfg.c1, 300, lf, m.couplings().norm());
  CHECK(rows[0].outer_steps == outer_step_count(cfg.C2, lf, 300, s));
  CHECK(cli::glauber_baseline_steps(100, 0.5) ==
        static_cast<std::uint64_t>(std::ceil(100 * std::log(100.0) / 0.5)) * 8);
}

TEST_CASE("hash_spins is FNV-1a") {
  const std::vector<Spin> x{1, -1};
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Spin s : x) {
    h ^= static_cast<std::uint8_t>(s);
    h *= 0x100000001b3ULL;
  }
  CHECK(cli::hash_spins(x) == h);
}

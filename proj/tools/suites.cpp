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
#include "kglauber/glauber.hpp"
#include "kglauber/parallel.hpp"
#include "kglauber/sampling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

namespace kglauber::cli {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << v;
  return os.str();
}

void add(std::vector<CheckResult>& out, const std::string& suite, const std::string& name,
         bool pass, const std::string& detail) {
  out.push_back({suite, name, pass, detail});
}

// --- operators ---------------------------------------------------------------

void operators_suite(std::size_t n_max, std::uint64_t seed, std::vector<CheckResult>& out) {
  const std::string S = "operators";
  for (std::size_t n = 2; n <= std::min(n_max, kMaxLadder); ++n) {
    const IsingModel model = random_model(n, 0.5, 0.3, seed + n);
    Ladder ladder(enumerate_distribution(model));
    double rows = 0, adjoint = 0, marginal = 0;
    for (std::size_t m = 1; m <= n; ++m) {
      const auto& D = ladder.down(m);
      const auto& U = ladder.up(m);
      rows = std::max({rows, D.row_sum_residual(), U.row_sum_residual()});
      const auto& up = ladder.level(m).measure;
      const auto& low = ladder.level(m - 1).measure;
      for (Eigen::Index a = 0; a < D.P.rows(); ++a)
        for (Eigen::Index b = 0; b < D.P.cols(); ++b)
          adjoint = std::max(adjoint, std::abs(up[a] * D.P(a, b) - low[b] * U.P(b, a)));
      const Eigen::Map<const Eigen::RowVectorXd> mu(up.data(), static_cast<Eigen::Index>(up.size()));
      const Eigen::Map<const Eigen::RowVectorXd> nu(low.data(), static_cast<Eigen::Index>(low.size()));
      marginal = std::max(marginal, (mu * D.P - nu).cwiseAbs().maxCoeff());
    }
    const std::string tag = " n=" + std::to_string(n);
    add(out, S, "row-stochastic" + tag, rows < 1e-12, fmt(rows));
    add(out, S, "adjointness" + tag, adjoint < 1e-12, fmt(adjoint));
    add(out, S, "marginal consistency" + tag, marginal < 1e-12, fmt(marginal));

    const MarkovMatrix g1 = glauber_transition_matrix(model);
    const MarkovMatrix k1 = k_glauber_transition_matrix(model, 1);
    const double diff = (g1.P - k1.P).cwiseAbs().maxCoeff();
    add(out, S, "1-Glauber two routes" + tag, diff < 1e-12, fmt(diff));
    double db = 0, st = 0;
    for (std::size_t k = 1; k <= n; ++k) {
      const MarkovMatrix Pk = k_glauber_transition_matrix(model, k);
      db = std::max({db, Pk.detailed_balance_residual(), Pk.row_sum_residual()});
      st = std::max(st, Pk.stationarity_residual());
    }
    add(out, S, "k-Glauber reversible" + tag, db < 1e-12 && st < 1e-12,
        fmt(std::max(db, st)));
  }
}

// --- spectra -----------------------------------------------------------------

void spectra_suite(std::size_t n_max, std::uint64_t seed, std::vector<CheckResult>& out) {
  const std::string S = "spectra";
  for (std::size_t n = 1; n <= std::min<std::size_t>(n_max, 12); ++n) {
    double worst = 0;
    for (std::size_t k = 1; k <= n; ++k)
      worst = std::max(worst, std::abs(bernoulli_laplace_gap(n, k) - bernoulli_laplace_formula(n, k)));
    add(out, S, "Bernoulli-Laplace gap n=" + std::to_string(n), worst < 1e-10, fmt(worst));
  }
  for (std::size_t n = 2; n <= std::min(n_max, kMaxLadder); ++n) {
    const IsingModel model = random_model(n, 0.6, 0.3, seed + 100 + n);
    Ladder ladder(enumerate_distribution(model));
    const double kn = chi2_down_contraction(ladder, n);
    double mono = 1.0, dual = 0.0;
    for (std::size_t m = 1; m <= n; ++m) {
      const double km = chi2_down_contraction(ladder, m);
      mono = std::min(mono, km - monotonicity_bound(n, m, kn, bernoulli_laplace_formula(n, m)));
      if (n <= 7) dual = std::max(dual, std::abs(1.0 - km - down_up_second_eigenvalue(ladder, m)));
    }
    const std::string tag = " n=" + std::to_string(n);
    add(out, S, "contraction monotonicity" + tag, mono >= -1e-9, "slack " + fmt(mono));
    if (n <= 7) add(out, S, "singular values vs down-up eigenvalues" + tag, dual < 1e-9, fmt(dual));
    double slack = 1.0;
    for (std::size_t k = 1; k <= n; ++k)
      slack = std::min(slack, verify_k_speedup(model, k).slack());
    add(out, S, "k-Glauber speedup bound" + tag, slack >= -1e-9, "slack " + fmt(slack));
  }
}

// --- rejection ---------------------------------------------------------------

void rejection_suite(std::size_t n_max, std::uint64_t seed, std::vector<CheckResult>& out) {
  const std::string S = "rejection";
  for (std::size_t n = 2; n <= std::min<std::size_t>(n_max, 8); ++n) {
    const IsingModel model = random_model(n, 0.4, 0.5, seed + 200 + n);
    const std::size_t N = std::size_t{1} << n;
    std::vector<double> q(N), g(N);
    std::vector<double> field(model.field().data(), model.field().data() + n);
    const ProductDistribution prod = product_proposal(field);
    for (std::uint64_t b = 0; b < N; ++b) {
      const SpinVector x = SpinVector::from_bits(n, b);
      q[b] = std::exp(prod.log_prob(x.values()));
      g[b] = log_ratio_quadratic(model, SubsetIndex::full(n), x);
    }
    double law = 0, tv = 1, acc = 1;
    for (const double c : {1.0, 1.5, 2.0, 4.0, 16.0}) {
      const RejectionLaw a = rejection_law_by_attempts(q, g, c);
      const auto f = rejection_law_by_formula(q, g, c);
      for (std::size_t i = 0; i < N; ++i) law = std::max(law, std::abs(a.output[i] - f[i]));
      tv = std::min(tv, a.tv_bound() + 1e-12 - a.tv_output_target);
      acc = std::min(acc, a.p_accept - 1.0 / (2.0 * c));
    }
    const std::string tag = " n=" + std::to_string(n);
    add(out, S, "output law two routes" + tag, law < 1e-10, fmt(law));
    add(out, S, "TV within tail bound" + tag, tv >= 0, "slack " + fmt(tv));
    add(out, S, "acceptance >= 1/(2c)" + tag, acc >= 0, "slack " + fmt(acc));
  }
}

// --- end2end -----------------------------------------------------------------

void end2end_suite(std::size_t n_max, std::uint64_t seed, std::uint64_t runs,
                   std::vector<CheckResult>& out) {
  const std::string S = "end2end";
  const std::size_t n = std::min<std::size_t>(std::max<std::size_t>(n_max, 2), 10);
  const IsingModel model = random_model(n, 0.5, 0.3, seed + 300);
  const ExactDistribution exact = enumerate_distribution(model);
  const double frob = model.couplings().norm();
  for (const bool forced : {false, true}) {
    SamplerConfig cfg = default_config(0.5, 0.1);
    cfg.c3 = forced ? 0.95 * frob : frob + 1.0;
    cfg.c1 = cfg.c3 / 2.0;
    ParallelIsingSampler sampler(model, cfg);
    std::vector<std::uint64_t> bits(runs);
    for (std::uint64_t r = 0; r < runs; ++r) bits[r] = sampler.sample(seed * 1000003 + r).sample.to_bits();
    const EmpiricalTv tv = empirical_tv_bits(bits, exact);
    const double limit = cfg.eps + 3.0 * tv.conf_radius;
    add(out, S, std::string(forced ? "forced recursion" : "root leaf") + " n=" + std::to_string(n),
        tv.tv_hat <= limit, "tv " + fmt(tv.tv_hat) + " limit " + fmt(limit));
  }
}

}  // namespace

std::vector<CheckResult> run_suite(const std::string& suite, std::size_t n_max,
                                   std::uint64_t seed, std::uint64_t end2end_runs) {
  std::vector<CheckResult> out;
  const bool all = suite == "all";
  if (!all && suite != "operators" && suite != "spectra" && suite != "rejection" &&
      suite != "end2end")
    throw InvalidArgument("unknown suite '" + suite + "'");
  if (all || suite == "operators") operators_suite(n_max, seed, out);
  if (all || suite == "spectra") spectra_suite(n_max, seed, out);
  if (all || suite == "rejection") rejection_suite(n_max, seed, out);
  if (all || suite == "end2end") end2end_suite(n_max, seed, end2end_runs, out);
  return out;
}

// --- Hanson-Wright -----------------------------------------------------------

HansonWrightReport hanson_wright_probe(std::vector<double> frob_grid,
                                       const std::vector<double>& t_grid, std::size_t dim,
                                       std::uint64_t trials, std::uint64_t seed) {
  if (dim < 2) throw InvalidArgument("hanson-wright: dimension must be at least 2");
  if (trials < 1) throw InvalidArgument("hanson-wright: trials must be positive");
  for (const double f : frob_grid)
    if (!(f >= 0.0)) throw InvalidArgument("hanson-wright: Frobenius values must be >= 0");
  std::sort(frob_grid.begin(), frob_grid.end());

  const RngStream root(seed);
  Matrix base = Matrix::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  {
    RngStream r = root.split(0);
    std::normal_distribution<double> normal;
    for (Eigen::Index j = 1; j < base.cols(); ++j)
      for (Eigen::Index i = 0; i < j; ++i) base(i, j) = base(j, i) = normal(r);
    base /= base.norm();
  }

  HansonWrightReport rep;
  bool prefix_open = true;
  std::vector<double> d(trials);
  Vector x(base.rows()), z(base.rows());
  for (std::size_t gi = 0; gi < frob_grid.size(); ++gi) {
    const double f = frob_grid[gi];
    const Matrix A = base * f;
    const RngStream stream = root.split(1).split(gi);
    for (std::uint64_t t = 0; t < trials; ++t) {
      const RngStream tr = stream.split(t);
      for (Eigen::Index i = 0; i < x.size(); ++i) {
        x[i] = (tr.bits_at(static_cast<std::uint64_t>(i)) >> 63) ? 1.0 : -1.0;
        z[i] = (tr.bits_at(static_cast<std::uint64_t>(i + x.size())) >> 63) ? 1.0 : -1.0;
      }
      d[t] = std::abs(z.dot(A * z) - x.dot(A * x));
    }
    bool all_pass = true;
    for (const double t : t_grid) {
      const auto hits = std::count_if(d.begin(), d.end(), [t](double v) { return v >= t; });
      HansonWrightRow row;
      row.frob = f;
      row.t = t;
      row.tail_hat = static_cast<double>(hits) / static_cast<double>(trials);
      row.bound = 2.0 * std::exp(-2.0 * t);
      row.pass = row.tail_hat <= row.bound;
      all_pass = all_pass && row.pass;
      rep.rows.push_back(row);
    }
    if (all_pass && prefix_open) rep.largest_passing_frob = f;
    if (all_pass && !prefix_open) rep.monotone = false;
    if (!all_pass) prefix_open = false;
  }
  rep.recommended_c3 = 2.0 * rep.largest_passing_frob;
  return rep;
}

// --- bench -------------------------------------------------------------------

std::uint64_t glauber_baseline_steps(std::size_t n, double norm) {
  if (!(norm < 1.0)) throw InvalidArgument("Glauber baseline needs ||J|| < 1");
  const double nd = static_cast<double>(n);
  return static_cast<std::uint64_t>(std::ceil(nd * std::log(nd) / (1.0 - norm))) * 8;
}

std::uint64_t hash_spins(std::span<const Spin> x) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const Spin s : x) {
    h ^= static_cast<std::uint8_t>(s);
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<BenchRow> bench(std::size_t n, double beta, double eps,
                            const std::vector<std::size_t>& threads_list,
                            const std::vector<std::uint64_t>& seeds) {
  using clock = std::chrono::steady_clock;
  std::vector<BenchRow> rows;
  for (const std::uint64_t seed : seeds) {
    const IsingModel model = sk_model(n, beta, seed);
    const double norm = operator_norm(model, 1e-3);
    if (!(norm < 1.0))
      throw InvalidArgument("bench: SK instance has ||J|| = " + std::to_string(norm) + " >= 1");
    const SamplerConfig base = default_config(1.0 - norm, eps);

    const std::uint64_t steps = glauber_baseline_steps(n, norm);
    RngStream grng = RngStream(seed).split(0x61);
    std::vector<Spin> x(n);
    sample_product_into(grng.split(0), std::vector<double>(n, 0.5), x);
    const auto g0 = clock::now();
    for (std::uint64_t t = 0; t < steps; ++t) glauber_update(model, x, grng);
    const double baseline = std::chrono::duration<double>(clock::now() - g0).count();

    for (const std::size_t threads : threads_list) {
      SamplerConfig cfg = base;
      cfg.threads = threads;
      ParallelIsingSampler sampler(model, cfg);
      const SampleResult res = sampler.sample(seed);
      BenchRow row;
      row.n = n;
      row.beta = beta;
      row.threads = threads;
      row.wall_time_parallel = res.telemetry.wall_time_s;
      row.wall_time_glauber_baseline = baseline;
      row.outer_steps = res.telemetry.root_outer_steps;
      row.frobenius_norm = model.couplings().norm();
      row.seed = seed;
      row.output_hash = hash_spins(res.sample.values());
      rows.push_back(row);
    }
  }
  return rows;
}

}  // namespace kglauber::cli

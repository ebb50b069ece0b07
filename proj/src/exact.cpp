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

#include "kglauber/exact.hpp"

#include "kglauber/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <limits>
#include <random>
#include <string>

namespace kglauber {

namespace {

double binomial(std::size_t n, std::size_t k) {
  if (k > n) return 0.0;
  double r = 1.0;
  for (std::size_t i = 1; i <= k; ++i)
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
  return std::round(r);
}

void require_size(std::size_t n, std::size_t cap, const char* what) {
  if (n > cap)
    throw SizeGuard(std::string(what) + ": n=" + std::to_string(n) + " exceeds the cap " +
                    std::to_string(cap));
}

// Normalizes log-weights in place into probabilities; returns log of the sum.
double normalize_logs(std::vector<double>& w) {
  const double mx = *std::max_element(w.begin(), w.end());
  double total = 0.0;
  for (double& v : w) {
    v = std::exp(v - mx);
    total += v;
  }
  for (double& v : w) v /= total;
  return mx + std::log(total);
}

// Eigenvalues of a symmetric matrix, descending.
std::vector<double> symmetric_eigenvalues(const Matrix& A) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(A, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw NonConvergence("symmetric eigensolver failed");
  const Vector& ev = es.eigenvalues();
  std::vector<double> out(ev.data(), ev.data() + ev.size());
  std::sort(out.rbegin(), out.rend());
  return out;
}

// Eigenvalues of the Gram matrix of the smaller side of W, descending.
std::vector<double> squared_singular_values(const Matrix& W) {
  if (W.rows() <= W.cols()) return symmetric_eigenvalues(W * W.transpose());
  return symmetric_eigenvalues(W.transpose() * W);
}

Matrix weighted(const Matrix& P, const std::vector<double>& mu_rows,
                const std::vector<double>& mu_cols) {
  Matrix W = P;
  for (Eigen::Index r = 0; r < W.rows(); ++r)
    W.row(r) *= std::sqrt(mu_rows[static_cast<std::size_t>(r)]);
  for (Eigen::Index c = 0; c < W.cols(); ++c) {
    const double m = mu_cols[static_cast<std::size_t>(c)];
    if (m <= 0.0) throw InvalidArgument("weighted operator: column measure must be positive");
    W.col(c) /= std::sqrt(m);
  }
  return W;
}

double second_or_zero(const std::vector<double>& ev) {
  return ev.size() < 2 ? 0.0 : std::max(ev[1], 0.0);
}

}  // namespace

// --- distributions -----------------------------------------------------------

ExactDistribution enumerate_distribution(const IsingModel& model) {
  const std::size_t n = model.size();
  require_size(n, kMaxEnumeration, "enumerate_distribution");
  const auto& J = model.couplings();
  const auto& h = model.field();
  const std::uint64_t states = std::uint64_t{1} << n;

  // E(all minus) directly, then each state from the one with its top set bit
  // cleared: flipping x_i from -1 to +1 adds 2 (h_i + sum_j J_ij x_j).
  std::vector<double> logw(states);
  double e0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    e0 -= h[static_cast<Eigen::Index>(i)];
    for (std::size_t j = i + 1; j < n; ++j) e0 += J(i, j);
  }
  logw[0] = e0;
  for (std::uint64_t bits = 1; bits < states; ++bits) {
    const auto i = static_cast<std::size_t>(std::bit_width(bits) - 1);
    const std::uint64_t prev = bits ^ (std::uint64_t{1} << i);
    double f = h[static_cast<Eigen::Index>(i)];
    for (std::size_t j = 0; j < i; ++j) f += J(i, j) * (((prev >> j) & 1U) ? 1.0 : -1.0);
    for (std::size_t j = i + 1; j < n; ++j) f -= J(i, j);
    logw[bits] = logw[prev] + 2.0 * f;
  }
  ExactDistribution d;
  d.n = n;
  d.log_partition = normalize_logs(logw);
  d.probabilities = std::move(logw);
  return d;
}

std::uint64_t sample_exact(const ExactDistribution& dist, RngStream& rng) {
  const double u = rng.next_uniform();
  double acc = 0.0;
  std::uint64_t last = 0;
  for (std::uint64_t b = 0; b < dist.probabilities.size(); ++b) {
    const double p = dist.probabilities[b];
    if (p <= 0.0) continue;
    acc += p;
    last = b;
    if (u < acc) return b;
  }
  return last;
}

Divergences divergences(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InvalidArgument("divergences: length mismatch");
  Divergences d;
  for (std::size_t i = 0; i < p.size(); ++i) {
    d.tv += std::abs(p[i] - q[i]);
    if (q[i] <= 0.0) {
      if (p[i] > 0.0) throw InvalidArgument("divergences: p not absolutely continuous wrt q");
      continue;
    }
    if (p[i] > 0.0) d.kl += p[i] * std::log(p[i] / q[i]);
    const double diff = p[i] - q[i];
    d.chi2 += diff * diff / q[i];
  }
  d.tv *= 0.5;
  d.kl = std::max(d.kl, 0.0);
  return d;
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) throw InvalidArgument("total_variation: length mismatch");
  double tv = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) tv += std::abs(p[i] - q[i]);
  return 0.5 * tv;
}

double kl_divergence(std::span<const double> p, std::span<const double> q) {
  return divergences(p, q).kl;
}

// --- Markov matrices ---------------------------------------------------------

double MarkovMatrix::row_sum_residual() const {
  return (P.rowwise().sum().array() - 1.0).abs().maxCoeff();
}

double MarkovMatrix::stationarity_residual() const {
  const Eigen::Map<const Eigen::RowVectorXd> pi(stationary.data(),
                                                static_cast<Eigen::Index>(stationary.size()));
  return (pi * P - pi).cwiseAbs().maxCoeff();
}

double MarkovMatrix::detailed_balance_residual() const {
  double r = 0.0;
  for (Eigen::Index x = 0; x < P.rows(); ++x)
    for (Eigen::Index y = x + 1; y < P.cols(); ++y)
      r = std::max(r, std::abs(stationary[static_cast<std::size_t>(x)] * P(x, y) -
                               stationary[static_cast<std::size_t>(y)] * P(y, x)));
  return r;
}

MarkovMatrix glauber_transition_matrix(const IsingModel& model) {
  const std::size_t n = model.size();
  require_size(n, kMaxTransitionMatrix, "glauber_transition_matrix");
  const auto states = static_cast<Eigen::Index>(std::uint64_t{1} << n);
  const auto& J = model.couplings();
  MarkovMatrix mc;
  mc.P = Matrix::Zero(states, states);
  for (Eigen::Index x = 0; x < states; ++x) {
    for (std::size_t i = 0; i < n; ++i) {
      double f = model.field()[static_cast<Eigen::Index>(i)];
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) f += J(i, j) * (((x >> j) & 1) ? 1.0 : -1.0);
      const double p_plus = sigmoid(2.0 * f);
      const Eigen::Index up = x | (Eigen::Index{1} << i);
      const Eigen::Index down = x & ~(Eigen::Index{1} << i);
      mc.P(x, up) += p_plus / static_cast<double>(n);
      mc.P(x, down) += (1.0 - p_plus) / static_cast<double>(n);
    }
  }
  mc.stationary = enumerate_distribution(model).probabilities;
  return mc;
}

MarkovMatrix k_glauber_transition_matrix(const IsingModel& model, std::size_t k) {
  const std::size_t n = model.size();
  require_size(n, kMaxTransitionMatrix, "k_glauber_transition_matrix");
  if (k < 1 || k > n) throw InvalidArgument("k_glauber_transition_matrix: need 1 <= k <= n");
  const ExactDistribution dist = enumerate_distribution(model);
  const std::uint64_t states = std::uint64_t{1} << n;
  const double weight = 1.0 / binomial(n, k);

  MarkovMatrix mc;
  mc.P = Matrix::Zero(static_cast<Eigen::Index>(states), static_cast<Eigen::Index>(states));
  std::vector<std::uint64_t> group;
  std::vector<double> w;
  for (std::uint64_t S = 0; S < states; ++S) {
    if (static_cast<std::size_t>(std::popcount(S)) != k) continue;
    for (std::uint64_t outer = 0; outer < states; ++outer) {
      if (outer & S) continue;
      group.clear();
      w.clear();
      double total = 0.0;
      for (std::uint64_t sub = 0;; sub = (sub - S) & S) {
        group.push_back(outer | sub);
        w.push_back(dist[outer | sub]);
        total += w.back();
        if (sub == S) break;
      }
      for (const std::uint64_t x : group)
        for (std::size_t g = 0; g < group.size(); ++g)
          mc.P(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(group[g])) +=
              weight * w[g] / total;
    }
  }
  mc.stationary = dist.probabilities;
  return mc;
}

std::vector<double> reversible_spectrum(const MarkovMatrix& chain) {
  const double db = chain.detailed_balance_residual();
  if (db > 1e-8)
    throw InvalidArgument("reversible_spectrum: detailed-balance residual " +
                          std::to_string(db) + " exceeds 1e-8");
  Matrix A = weighted(chain.P, chain.stationary, chain.stationary);
  A = 0.5 * (A + A.transpose()).eval();
  return symmetric_eigenvalues(A);
}

double second_eigenvalue(const MarkovMatrix& chain) {
  const auto ev = reversible_spectrum(chain);
  return ev.size() < 2 ? 0.0 : ev[1];
}

double spectral_gap(const MarkovMatrix& chain) { return 1.0 - second_eigenvalue(chain); }

// --- partial configuration spaces --------------------------------------------

std::size_t PartialConfigSpace::find(std::uint64_t ground_set) const {
  const auto it = std::lower_bound(
      by_ground_set.begin(), by_ground_set.end(), ground_set,
      [](const std::pair<std::uint64_t, std::uint32_t>& e, std::uint64_t v) {
        return e.first < v;
      });
  if (it == by_ground_set.end() || it->first != ground_set) return size();
  return it->second;
}

void PartialConfigSpace::index() {
  by_ground_set.resize(ground_sets.size());
  for (std::size_t i = 0; i < ground_sets.size(); ++i)
    by_ground_set[i] = {ground_sets[i], static_cast<std::uint32_t>(i)};
  std::sort(by_ground_set.begin(), by_ground_set.end());
}

PartialConfigSpace build_partial_space(const ExactDistribution& dist, std::size_t m) {
  const std::size_t n = dist.n;
  require_size(n, kMaxLadder, "build_partial_space");
  if (m > n) throw InvalidArgument("build_partial_space: level exceeds n");
  const std::uint64_t states = std::uint64_t{1} << n;
  const double inv_binom = 1.0 / binomial(n, m);

  PartialConfigSpace sp;
  sp.n = n;
  sp.level = m;
  std::vector<double> marginal;
  for (std::uint64_t A = 0; A < states; ++A) {
    if (static_cast<std::size_t>(std::popcount(A)) != m) continue;
    // Marginal indexed directly by the sub-mask x_A.
    marginal.assign(states, 0.0);
    for (std::uint64_t x = 0; x < states; ++x) marginal[x & A] += dist[x];
    for (std::uint64_t sub = 0;; sub = (sub - A) & A) {
      std::uint64_t ground = 0;
      for (std::size_t i = 0; i < n; ++i)
        if ((A >> i) & 1U) ground |= std::uint64_t{1} << (2 * i + (((sub >> i) & 1U) ? 1 : 0));
      sp.ground_sets.push_back(ground);
      sp.subset.push_back(static_cast<std::uint32_t>(A));
      sp.assignment.push_back(static_cast<std::uint32_t>(sub));
      sp.measure.push_back(marginal[sub] * inv_binom);
      if (sub == A) break;
    }
  }
  sp.index();
  return sp;
}

PartialConfigSpace uniform_subsets(std::size_t n, std::size_t k) {
  require_size(n, kMaxEnumeration, "uniform_subsets");
  if (k > n) throw InvalidArgument("uniform_subsets: k exceeds n");
  PartialConfigSpace sp;
  sp.n = n;
  sp.level = k;
  const double p = 1.0 / binomial(n, k);
  for (std::uint64_t A = 0; A < (std::uint64_t{1} << n); ++A) {
    if (static_cast<std::size_t>(std::popcount(A)) != k) continue;
    sp.ground_sets.push_back(A);
    sp.subset.push_back(static_cast<std::uint32_t>(A));
    sp.assignment.push_back(0);
    sp.measure.push_back(p);
  }
  sp.index();
  return sp;
}

MarkovMatrix down_operator(const PartialConfigSpace& upper,
                           const PartialConfigSpace& lower) {
  if (upper.level != lower.level + 1 || upper.level == 0)
    throw InvalidArgument("down_operator: levels must be adjacent");
  MarkovMatrix mc;
  mc.P = Matrix::Zero(static_cast<Eigen::Index>(upper.size()),
                      static_cast<Eigen::Index>(lower.size()));
  const double w = 1.0 / static_cast<double>(upper.level);
  for (std::size_t a = 0; a < upper.size(); ++a) {
    for (std::uint64_t rest = upper.ground_sets[a]; rest != 0; rest &= rest - 1) {
      const std::uint64_t e = rest & (~rest + 1);
      const std::size_t b = lower.find(upper.ground_sets[a] ^ e);
      if (b == lower.size()) throw InvalidArgument("down_operator: face missing from lower level");
      mc.P(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) += w;
    }
  }
  mc.stationary = upper.measure;
  return mc;
}

MarkovMatrix up_operator(const PartialConfigSpace& lower,
                         const PartialConfigSpace& upper) {
  if (upper.level != lower.level + 1)
    throw InvalidArgument("up_operator: levels must be adjacent");
  MarkovMatrix mc;
  mc.P = Matrix::Zero(static_cast<Eigen::Index>(lower.size()),
                      static_cast<Eigen::Index>(upper.size()));
  for (std::size_t a = 0; a < upper.size(); ++a) {
    for (std::uint64_t rest = upper.ground_sets[a]; rest != 0; rest &= rest - 1) {
      const std::uint64_t e = rest & (~rest + 1);
      const std::size_t b = lower.find(upper.ground_sets[a] ^ e);
      if (b == lower.size()) throw InvalidArgument("up_operator: face missing from lower level");
      mc.P(static_cast<Eigen::Index>(b), static_cast<Eigen::Index>(a)) = upper.measure[a];
    }
  }
  for (Eigen::Index b = 0; b < mc.P.rows(); ++b) {
    const double total = mc.P.row(b).sum();
    if (total <= 0.0) throw InvalidArgument("up_operator: lower state has no mass above it");
    mc.P.row(b) /= total;
  }
  mc.stationary = lower.measure;
  return mc;
}

// --- ladder ------------------------------------------------------------------

Ladder::Ladder(ExactDistribution dist)
    : dist_(std::move(dist)), levels_(dist_.n + 1), downs_(dist_.n + 1), ups_(dist_.n + 1) {
  require_size(dist_.n, kMaxLadder, "Ladder");
}

Ladder Ladder::uniform_product(std::size_t n) {
  require_size(n, kMaxLadder, "Ladder::uniform_product");
  ExactDistribution d;
  d.n = n;
  d.probabilities.assign(std::size_t{1} << n, std::ldexp(1.0, -static_cast<int>(n)));
  d.log_partition = static_cast<double>(n) * std::log(2.0);
  return Ladder(std::move(d));
}

const PartialConfigSpace& Ladder::level(std::size_t m) {
  if (m > n()) throw InvalidArgument("Ladder::level: m exceeds n");
  if (!levels_[m])
    levels_[m] = std::make_unique<PartialConfigSpace>(build_partial_space(dist_, m));
  return *levels_[m];
}

const MarkovMatrix& Ladder::down(std::size_t m) {
  if (m < 1 || m > n()) throw InvalidArgument("Ladder::down: need 1 <= m <= n");
  if (!downs_[m]) downs_[m] = std::make_unique<MarkovMatrix>(down_operator(level(m), level(m - 1)));
  return *downs_[m];
}

const MarkovMatrix& Ladder::up(std::size_t m) {
  if (m < 1 || m > n()) throw InvalidArgument("Ladder::up: need 1 <= m <= n");
  if (!ups_[m]) ups_[m] = std::make_unique<MarkovMatrix>(up_operator(level(m - 1), level(m)));
  return *ups_[m];
}

// --- contraction -------------------------------------------------------------

std::vector<double> weighted_squared_singular_values(const MarkovMatrix& down,
                                                     const PartialConfigSpace& upper,
                                                     const PartialConfigSpace& lower) {
  return squared_singular_values(weighted(down.P, upper.measure, lower.measure));
}

double down_up_second_eigenvalue(Ladder& ladder, std::size_t m) {
  const Matrix& D = ladder.down(m).P;
  const Matrix& U = ladder.up(m).P;
  // DU and UD share their nonzero spectrum; eigensolve the smaller one,
  // symmetrized against its own stationary measure.
  const bool lower_smaller = D.cols() < D.rows();
  MarkovMatrix walk;
  walk.P = lower_smaller ? Matrix(U * D) : Matrix(D * U);
  walk.stationary = lower_smaller ? ladder.level(m - 1).measure : ladder.level(m).measure;
  return second_or_zero(reversible_spectrum(walk));
}

double chi2_down_contraction(Ladder& ladder, std::size_t m) {
  const auto sv = weighted_squared_singular_values(ladder.down(m), ladder.level(m),
                                                   ladder.level(m - 1));
  return 1.0 - second_or_zero(sv);
}

double bernoulli_laplace_gap(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) throw InvalidArgument("bernoulli_laplace_gap: need 1 <= k <= n");
  const PartialConfigSpace upper = uniform_subsets(n, k);
  const PartialConfigSpace lower = uniform_subsets(n, k - 1);
  return 1.0 - second_or_zero(
                   weighted_squared_singular_values(down_operator(upper, lower), upper, lower));
}

double bernoulli_laplace_formula(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) throw InvalidArgument("bernoulli_laplace_formula: need 1 <= k <= n");
  return static_cast<double>(n) / (static_cast<double>(k) * static_cast<double>(n - k + 1));
}

double monotonicity_bound(std::size_t n, std::size_t m, double kappa_n, double kappa_bl) {
  const double nd = static_cast<double>(n);
  return nd * kappa_n * kappa_bl / (nd * kappa_n + static_cast<double>(m) * kappa_bl);
}

namespace {

Matrix composite_down(Ladder& ladder, std::size_t k, std::size_t l) {
  Matrix D = Matrix::Identity(static_cast<Eigen::Index>(ladder.level(k).size()),
                              static_cast<Eigen::Index>(ladder.level(k).size()));
  for (std::size_t j = k; j > l; --j) D = (D * ladder.down(j).P).eval();
  return D;
}

void check_levels(Ladder& ladder, std::size_t k, std::size_t l, const char* what) {
  if (!(l < k && k <= ladder.n()))
    throw InvalidArgument(std::string(what) + ": need l < k <= n");
}

}  // namespace

double chi2_multi_down_coefficient(Ladder& ladder, std::size_t k, std::size_t l) {
  check_levels(ladder, k, l, "chi2_multi_down_coefficient");
  const Matrix D = composite_down(ladder, k, l);
  return second_or_zero(
      squared_singular_values(weighted(D, ladder.level(k).measure, ladder.level(l).measure)));
}

double chi2_product_bound(std::size_t n, std::size_t k, std::size_t l, double C) {
  double r = 1.0;
  const double nd = static_cast<double>(n);
  for (std::size_t j = l + 1; j <= k; ++j) {
    const double jd = static_cast<double>(j);
    r *= 1.0 - 1.0 / (jd * (C + (nd - jd + 1.0) / nd));
  }
  return r;
}

double kl_product_bound(std::size_t k, std::size_t l, double C) {
  double r = 1.0;
  for (std::size_t j = l + 1; j <= k; ++j) r *= 1.0 - 1.0 / (static_cast<double>(j) * (C + 1.0));
  return r;
}

KlProbeResult kl_contraction_probe(Ladder& ladder, std::size_t upper, std::size_t lower,
                                   std::uint64_t trials, const RngStream& rng) {
  check_levels(ladder, upper, lower, "kl_contraction_probe");
  const Matrix D = composite_down(ladder, upper, lower);
  const auto& mu_up = ladder.level(upper).measure;
  const auto& mu_low = ladder.level(lower).measure;
  const std::size_t N = mu_up.size();
  static constexpr double kAlphas[] = {0.1, 1.0, 10.0};

  KlProbeResult res;
  std::vector<double> nu(N);
  std::vector<double> pushed(mu_low.size());
  for (std::uint64_t t = 0; t < trials; ++t) {
    RngStream r = rng.split(t);
    switch (t % 5) {
      case 0:
      case 1:
      case 2: {
        std::gamma_distribution<double> gamma(kAlphas[t % 5], 1.0);
        double total = 0.0;
        for (std::size_t i = 0; i < N; ++i) total += nu[i] = mu_up[i] * gamma(r);
        if (!(total > 0.0)) continue;
        for (double& v : nu) v /= total;
        break;
      }
      case 3: {
        std::fill(nu.begin(), nu.end(), 0.0);
        nu[r.next_below(N)] = 1.0;
        break;
      }
      default: {
        const double w = r.next_open_uniform();
        const std::size_t at = r.next_below(N);
        for (std::size_t i = 0; i < N; ++i) nu[i] = (1.0 - w) * mu_up[i];
        nu[at] += w;
        break;
      }
    }
    const double denom = kl_divergence(nu, mu_up);
    if (denom < 1e-12) continue;
    const Eigen::Map<const Eigen::RowVectorXd> nv(nu.data(), static_cast<Eigen::Index>(N));
    const Eigen::RowVectorXd pv = nv * D;
    pushed.assign(pv.data(), pv.data() + pv.size());
    res.max_ratio = std::max(res.max_ratio, kl_divergence(pushed, mu_low) / denom);
    ++res.probes;
  }
  return res;
}

SpeedupCheck verify_k_speedup(const IsingModel& model, std::size_t k) {
  const std::size_t n = model.size();
  require_size(n, kMaxTransitionMatrix, "verify_k_speedup");
  SpeedupCheck out;
  const double gap = spectral_gap(glauber_transition_matrix(model));
  out.poincare_C = 1.0 / (static_cast<double>(n) * gap);
  out.lambda2_k = second_eigenvalue(k_glauber_transition_matrix(model, k));
  out.bound = std::pow(1.0 - static_cast<double>(k) / static_cast<double>(n + 1),
                       1.0 / (out.poincare_C + 1.0));
  return out;
}

// --- empirical ---------------------------------------------------------------

std::vector<double> empirical_distribution_bits(std::span<const std::uint64_t> samples,
                                                std::size_t n) {
  require_size(n, kMaxEmpirical, "empirical_distribution");
  if (samples.empty()) throw InvalidArgument("empirical_distribution: no samples");
  std::vector<double> h(std::size_t{1} << n, 0.0);
  for (const std::uint64_t b : samples) {
    if (b >= h.size()) throw InvalidArgument("empirical_distribution: state out of range");
    h[b] += 1.0;
  }
  for (double& v : h) v /= static_cast<double>(samples.size());
  return h;
}

std::vector<double> empirical_distribution(std::span<const SpinVector> samples,
                                           std::size_t n) {
  std::vector<std::uint64_t> bits;
  bits.reserve(samples.size());
  for (const auto& s : samples) {
    if (s.size() != n) throw InvalidArgument("empirical_distribution: sample size differs from n");
    bits.push_back(s.to_bits());
  }
  return empirical_distribution_bits(bits, n);
}

EmpiricalTv empirical_tv_bits(std::span<const std::uint64_t> samples,
                              const ExactDistribution& exact) {
  const auto h = empirical_distribution_bits(samples, exact.n);
  return {total_variation(h, exact.probabilities),
          std::sqrt(static_cast<double>(h.size()) / static_cast<double>(samples.size()))};
}

EmpiricalTv empirical_tv(std::span<const SpinVector> samples, const ExactDistribution& exact) {
  const auto h = empirical_distribution(samples, exact.n);
  return {total_variation(h, exact.probabilities),
          std::sqrt(static_cast<double>(h.size()) / static_cast<double>(samples.size()))};
}

// --- rejection oracle --------------------------------------------------------

namespace {

void check_tables(std::span<const double> q, std::span<const double> g, double c) {
  if (q.size() != g.size() || q.empty())
    throw InvalidArgument("rejection law: q and g must be non-empty and of equal length");
  if (!(c >= 1.0)) throw InvalidArgument("rejection law: c must be >= 1");
}

}  // namespace

RejectionLaw rejection_law_by_attempts(std::span<const double> q, std::span<const double> g,
                                       double c) {
  check_tables(q, g, c);
  const std::size_t N = q.size();
  RejectionLaw law;
  law.target.resize(N);
  for (std::size_t i = 0; i < N; ++i)
    law.target[i] = q[i] > 0.0 ? std::log(q[i]) + g[i] : -std::numeric_limits<double>::infinity();
  normalize_logs(law.target);

  law.output.assign(N, 0.0);
  for (std::size_t x = 0; x < N; ++x) {
    if (q[x] <= 0.0) continue;
    for (std::size_t z = 0; z < N; ++z) {
      if (q[z] <= 0.0) continue;
      const double r = std::exp(g[x] - g[z]);
      const double w = q[x] * q[z];
      law.output[x] += w * std::min(1.0, r / c);
      law.mean_r += w * r;
      if (r >= c) law.tail += w * (r - c);
    }
  }
  for (const double a : law.output) law.p_accept += a;
  for (double& a : law.output) a /= law.p_accept;
  law.tv_output_target = total_variation(law.output, law.target);
  return law;
}

std::vector<double> rejection_law_by_formula(std::span<const double> q,
                                             std::span<const double> g, double c) {
  check_tables(q, g, c);
  const std::size_t N = q.size();
  std::vector<double> out(N, 0.0);
  double total = 0.0;
  for (std::size_t x = 0; x < N; ++x) {
    if (q[x] <= 0.0) continue;
    double cond = 0.0;  // E[min(R, c) | X = x]
    for (std::size_t z = 0; z < N; ++z)
      if (q[z] > 0.0) cond += q[z] * std::min(std::exp(g[x] - g[z]), c);
    out[x] = q[x] * cond;
    total += out[x];
  }
  for (double& v : out) v /= total;
  return out;
}

// --- conditionals ------------------------------------------------------------

std::vector<double> exact_conditional(const ExactDistribution& dist, const SubsetIndex& S,
                                      const SpinVector& x_comp) {
  if (S.parent_size() != dist.n) throw InvalidArgument("exact_conditional: subset size mismatch");
  const auto comp = S.complement();
  if (x_comp.size() != comp.size() ||
      !std::equal(comp.begin(), comp.end(), x_comp.indices().begin()))
    throw InvalidArgument("exact_conditional: x_comp must be indexed by the complement of S");
  std::uint64_t base = 0;
  for (std::size_t k = 0; k < comp.size(); ++k)
    if (x_comp[k] > 0) base |= std::uint64_t{1} << comp[k];
  std::vector<double> out(std::size_t{1} << S.size());
  double total = 0.0;
  for (std::uint64_t a = 0; a < out.size(); ++a) {
    std::uint64_t bits = base;
    for (std::size_t k = 0; k < S.size(); ++k)
      if ((a >> k) & 1U) bits |= std::uint64_t{1} << S[k];
    out[a] = dist[bits];
    total += out[a];
  }
  if (!(total > 0.0)) throw InvalidArgument("exact_conditional: conditioning event has mass 0");
  for (double& v : out) v /= total;
  return out;
}

std::vector<double> exact_block_law(const Matrix& A, const Vector& f) {
  const auto k = static_cast<std::size_t>(f.size());
  require_size(k, kMaxEnumeration, "exact_block_law");
  if (A.rows() != f.size() || A.cols() != f.size())
    throw InvalidArgument("exact_block_law: dimension mismatch");
  std::vector<double> lw(std::size_t{1} << k);
  Vector x(f.size());
  for (std::uint64_t b = 0; b < lw.size(); ++b) {
    for (std::size_t i = 0; i < k; ++i)
      x[static_cast<Eigen::Index>(i)] = ((b >> i) & 1U) ? 1.0 : -1.0;
    double q = 0.0;
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j)
        q += A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) *
             x[static_cast<Eigen::Index>(i)] * x[static_cast<Eigen::Index>(j)];
    lw[b] = q + f.dot(x);
  }
  normalize_logs(lw);
  return lw;
}

}  // namespace kglauber

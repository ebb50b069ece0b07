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

// Brute-force oracle for small models: exact distributions, transition
// matrices, divergences, the down/up operator ladder of the homogenized
// measure, and contraction coefficients.
//
// Configurations are indexed by bit masks: bit i set means x_i = +1.

#pragma once

#include "kglauber/model.hpp"
#include "kglauber/sampling.hpp"

#include <cstdint>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace kglauber {

inline constexpr std::size_t kMaxEnumeration = 20;
inline constexpr std::size_t kMaxTransitionMatrix = 12;
inline constexpr std::size_t kMaxLadder = 8;
inline constexpr std::size_t kMaxEmpirical = 16;

struct ExactDistribution {
  std::size_t n = 0;
  std::vector<double> probabilities;  ///< length 2^n
  double log_partition = 0.0;

  double operator[](std::uint64_t bits) const { return probabilities[bits]; }
};

/// Exact mu_{J,h} by log-sum-exp over all 2^n states. n <= 20.
ExactDistribution enumerate_distribution(const IsingModel& model);

/// Inverse-CDF draw from an exact table.
std::uint64_t sample_exact(const ExactDistribution& dist, RngStream& rng);

struct Divergences {
  double tv = 0.0;
  double kl = 0.0;    ///< KL(p || q)
  double chi2 = 0.0;  ///< chi^2(p || q)
};

/// Throws InvalidArgument on length mismatch or when q = 0 < p somewhere.
Divergences divergences(std::span<const double> p, std::span<const double> q);
double total_variation(std::span<const double> p, std::span<const double> q);
double kl_divergence(std::span<const double> p, std::span<const double> q);

/// Row-stochastic matrix together with the measure it is meant to preserve.
struct MarkovMatrix {
  Matrix P;
  std::vector<double> stationary;

  std::size_t size() const { return static_cast<std::size_t>(P.rows()); }
  double row_sum_residual() const;
  /// max |pi P - pi|.
  double stationarity_residual() const;
  /// max |pi(x) P(x,y) - pi(y) P(y,x)|.
  double detailed_balance_residual() const;
};

/// P(x, x with x_i := v) = mu(x_i = v | x_{-i}) / n, assembled coordinatewise.
MarkovMatrix glauber_transition_matrix(const IsingModel& model);
/// P(x, y) = C(n,k)^{-1} sum over k-sets S with y_{S^c} = x_{S^c} of
/// mu(y) / mu(X_{S^c} = x_{S^c}).
MarkovMatrix k_glauber_transition_matrix(const IsingModel& model, std::size_t k);

/// Eigenvalues of a reversible chain, descending, through
/// D^{1/2} P D^{-1/2}. Throws InvalidArgument if the detailed-balance
/// residual exceeds 1e-8.
std::vector<double> reversible_spectrum(const MarkovMatrix& chain);
/// Second largest eigenvalue (0 for a one-state chain).
double second_eigenvalue(const MarkovMatrix& chain);
/// 1 - second_eigenvalue.
double spectral_gap(const MarkovMatrix& chain);

/// One level of a set system: a list of states, each a subset of a ground
/// set (a bit mask), with a probability measure.
///
/// Homogenized levels use ground set {(i,-), (i,+)} (bit 2i+1 is (i,+)),
/// so a level-m state is a pair (A, x_A). Their sort key is
/// (subset mask, assignment mask) lexicographically; `subset` and
/// `assignment` hold the two parts (assignment bits are a sub-mask of the
/// subset, bit i set means x_i = +1).
struct PartialConfigSpace {
  std::size_t n = 0;
  std::size_t level = 0;
  std::vector<std::uint64_t> ground_sets;
  std::vector<std::uint32_t> subset;
  std::vector<std::uint32_t> assignment;
  std::vector<double> measure;

  std::size_t size() const { return ground_sets.size(); }
  /// (ground-set mask, state index) sorted by mask, for find().
  std::vector<std::pair<std::uint64_t, std::uint32_t>> by_ground_set;

  /// Index of the state with the given ground-set mask, or size() if none.
  std::size_t find(std::uint64_t ground_set) const;
  /// Fills by_ground_set from ground_sets.
  void index();
};

/// Level m of the homogenization of `dist`: mu_m(A, x_A) = mu(X_A = x_A) / C(n,m).
PartialConfigSpace build_partial_space(const ExactDistribution& dist,
                                       std::size_t m);
/// Uniform measure on the k-subsets of [n] (Bernoulli-Laplace structure).
PartialConfigSpace uniform_subsets(std::size_t n, std::size_t k);

/// D(A, B) = 1{B subset A} / |A| between adjacent levels.
MarkovMatrix down_operator(const PartialConfigSpace& upper,
                           const PartialConfigSpace& lower);
/// U(B, A) = 1{B subset A} mu(A) / sum_{A' superset B} mu(A').
MarkovMatrix up_operator(const PartialConfigSpace& lower,
                         const PartialConfigSpace& upper);

/// All levels 0..n of a homogenized measure, built on demand.
class Ladder {
 public:
  explicit Ladder(ExactDistribution dist);
  static Ladder uniform_product(std::size_t n);

  std::size_t n() const { return dist_.n; }
  const ExactDistribution& distribution() const { return dist_; }
  const PartialConfigSpace& level(std::size_t m);
  const MarkovMatrix& down(std::size_t m);  ///< D_{m -> m-1}
  const MarkovMatrix& up(std::size_t m);    ///< U_{m-1 -> m}

 private:
  ExactDistribution dist_;
  std::vector<std::unique_ptr<PartialConfigSpace>> levels_;
  std::vector<std::unique_ptr<MarkovMatrix>> downs_;
  std::vector<std::unique_ptr<MarkovMatrix>> ups_;
};

/// Squared singular values of diag(mu_upper)^{1/2} D diag(mu_lower)^{-1/2},
/// descending. The leading one is 1; the next is the chi^2 contraction
/// coefficient of D.
std::vector<double> weighted_squared_singular_values(const MarkovMatrix& down,
                                                     const PartialConfigSpace& upper,
                                                     const PartialConfigSpace& lower);

/// lambda_2 of the down-up walk D_{m->m-1} U_{m-1->m}, by eigensolving the
/// explicit product.
double down_up_second_eigenvalue(Ladder& ladder, std::size_t m);

/// kappa_m = 1 - sigma_2(D_{m->m-1})^2, the chi^2 contraction deficit of the
/// level-m down operator (equal to the spectral gap of the down-up walk).
double chi2_down_contraction(Ladder& ladder, std::size_t m);
/// Same for the Bernoulli-Laplace structure on k-subsets of [n].
double bernoulli_laplace_gap(std::size_t n, std::size_t k);
/// n / (k (n - k + 1)).
double bernoulli_laplace_formula(std::size_t n, std::size_t k);
/// n kn kbl / (n kn + m kbl).
double monotonicity_bound(std::size_t n, std::size_t m, double kappa_n,
                          double kappa_bl);

/// chi^2 contraction coefficient of D_{k -> l} (= lambda_2 of D_{k->l} U_{l->k}).
double chi2_multi_down_coefficient(Ladder& ladder, std::size_t k, std::size_t l);
/// prod_{j=l+1}^{k} (1 - 1/(j (C + (n-j+1)/n))).
double chi2_product_bound(std::size_t n, std::size_t k, std::size_t l, double C);
/// prod_{j=l+1}^{k} (1 - 1/(j (C+1))).
double kl_product_bound(std::size_t k, std::size_t l, double C);

struct KlProbeResult {
  double max_ratio = 0.0;
  std::uint64_t probes = 0;
};

/// max over probe measures nu on level `upper` of
/// KL(nu D_{upper->lower} || mu_lower) / KL(nu || mu_upper). Probes are
/// Dirichlet(alpha) reweightings of mu_upper for alpha in {0.1, 1, 10},
/// point masses, and point masses mixed into mu_upper. A probe can find a
/// violation of a contraction bound; it cannot certify one.
KlProbeResult kl_contraction_probe(Ladder& ladder, std::size_t upper,
                                   std::size_t lower, std::uint64_t trials,
                                   const RngStream& rng);

struct SpeedupCheck {
  double lambda2_k = 0.0;
  double bound = 0.0;
  double poincare_C = 0.0;  ///< 1 / (n gap(P_mu))
  double slack() const { return bound - lambda2_k; }
};

/// lambda_2(P_{mu,k}) against (1 - k/(n+1))^{1/(C+1)} with
/// C = 1/(n gap(P_mu)). n <= 12.
SpeedupCheck verify_k_speedup(const IsingModel& model, std::size_t k);

/// Histogram of full configurations over 2^n cells, normalized.
std::vector<double> empirical_distribution(std::span<const SpinVector> samples,
                                           std::size_t n);
std::vector<double> empirical_distribution_bits(std::span<const std::uint64_t> samples,
                                                std::size_t n);

struct EmpiricalTv {
  double tv_hat = 0.0;
  double conf_radius = 0.0;  ///< sqrt(2^n / N)
};
EmpiricalTv empirical_tv(std::span<const SpinVector> samples,
                         const ExactDistribution& exact);
EmpiricalTv empirical_tv_bits(std::span<const std::uint64_t> samples,
                              const ExactDistribution& exact);

/// Exact behaviour of the two-draw rejection sampler for a proposal and a
/// log-weight given as tables over a finite space.
struct RejectionLaw {
  std::vector<double> target;       ///< P ~ q e^g
  std::vector<double> output;       ///< law of the accepted X
  double p_accept = 0.0;
  double mean_r = 0.0;              ///< E R
  double tail = 0.0;                ///< E[(R-c) 1{R>=c}]
  double tv_output_target = 0.0;    ///< TV(output, target)
  double tv_bound() const { return tail / mean_r; }
};

/// Output law from one attempt's joint law over (X, Z, U): an attempt
/// accepts x with probability a(x) = sum_z q(x) q(z) min(1, R/c), so the
/// output is a(x) / sum a.
RejectionLaw rejection_law_by_attempts(std::span<const double> q,
                                       std::span<const double> g, double c);
/// Output law from dPhat/dQ(x) = E[min(R,c) | X=x] / E[min(R,c)].
std::vector<double> rejection_law_by_formula(std::span<const double> q,
                                             std::span<const double> g, double c);

/// Exact conditional law of X_S given X_{S^c} = x_comp, over the 2^|S|
/// assignments of S in bit order (bit k refers to S[k]).
std::vector<double> exact_conditional(const ExactDistribution& dist,
                                      const SubsetIndex& S,
                                      const SpinVector& x_comp);
/// Exact mu_{A, f} over 2^|f| states for a small coupling block A.
std::vector<double> exact_block_law(const Matrix& A, const Vector& f);

}  // namespace kglauber

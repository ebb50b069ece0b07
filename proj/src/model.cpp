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

#include "kglauber/model.hpp"

#include "kglauber/error.hpp"
#include "kglauber/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace kglauber {

namespace {

bool strictly_increasing(const std::vector<std::size_t>& v) {
  return std::adjacent_find(v.begin(), v.end(), std::greater_equal<>()) == v.end();
}

}  // namespace

// --- SubsetIndex -------------------------------------------------------------

SubsetIndex::SubsetIndex(std::size_t parent_size, std::vector<std::size_t> members)
    : parent_size_(parent_size), members_(std::move(members)) {
  if (members_.empty()) throw InvalidArgument("subset must be non-empty");
  if (!strictly_increasing(members_))
    throw InvalidArgument("subset members must be strictly increasing");
  if (members_.back() >= parent_size_)
    throw InvalidArgument("subset member " + std::to_string(members_.back()) +
                          " outside [0, " + std::to_string(parent_size_) + ")");
}

SubsetIndex SubsetIndex::full(std::size_t parent_size) {
  std::vector<std::size_t> all(parent_size);
  for (std::size_t i = 0; i < parent_size; ++i) all[i] = i;
  return SubsetIndex(parent_size, std::move(all));
}

bool SubsetIndex::contains(std::size_t i) const {
  return std::binary_search(members_.begin(), members_.end(), i);
}

std::vector<std::size_t> SubsetIndex::complement() const {
  std::vector<std::size_t> out;
  out.reserve(parent_size_ - members_.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < parent_size_; ++i) {
    if (k < members_.size() && members_[k] == i) {
      ++k;
    } else {
      out.push_back(i);
    }
  }
  return out;
}

// --- SpinVector --------------------------------------------------------------

SpinVector::SpinVector(std::vector<std::size_t> indices, std::vector<Spin> values)
    : indices_(std::move(indices)), values_(std::move(values)) {
  if (indices_.size() != values_.size())
    throw InvalidArgument("spin vector: index and value counts differ");
  if (!strictly_increasing(indices_))
    throw InvalidArgument("spin vector: indices must be strictly increasing");
  for (Spin v : values_)
    if (v != 1 && v != -1) throw InvalidArgument("spin values must be -1 or +1");
}

SpinVector SpinVector::full(std::vector<Spin> values) {
  std::vector<std::size_t> idx(values.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return SpinVector(std::move(idx), std::move(values));
}

SpinVector SpinVector::from_bits(std::size_t n, std::uint64_t bits) {
  if (n > 64) throw InvalidArgument("from_bits: n > 64");
  std::vector<Spin> v(n);
  for (std::size_t i = 0; i < n; ++i) v[i] = ((bits >> i) & 1U) ? 1 : -1;
  return full(std::move(v));
}

bool SpinVector::is_full() const {
  for (std::size_t i = 0; i < indices_.size(); ++i)
    if (indices_[i] != i) return false;
  return true;
}

std::uint64_t SpinVector::to_bits() const {
  if (!is_full() || size() > 64)
    throw InvalidArgument("to_bits needs a full configuration of at most 64 spins");
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < values_.size(); ++i)
    if (values_[i] > 0) bits |= std::uint64_t{1} << i;
  return bits;
}

// --- ProductDistribution -----------------------------------------------------

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

ProductDistribution::ProductDistribution(std::vector<std::size_t> indices,
                                         std::vector<double> field)
    : indices_(std::move(indices)), field_(std::move(field)) {
  if (indices_.size() != field_.size())
    throw InvalidArgument("product distribution: index and field sizes differ");
  prob_plus_.resize(field_.size());
  for (std::size_t i = 0; i < field_.size(); ++i) {
    if (!std::isfinite(field_[i]))
      throw InvalidArgument("product distribution: non-finite field entry");
    // e^t / (e^t + e^-t) = sigmoid(2t)
    prob_plus_[i] = sigmoid(2.0 * field_[i]);
  }
}

double ProductDistribution::log_prob(std::span<const Spin> x) const {
  if (x.size() != field_.size())
    throw InvalidArgument("log_prob: configuration size mismatch");
  double lp = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    // ln(e^{t x} / (e^t + e^-t)) = -ln(1 + e^{-2 t x})
    const double z = 2.0 * field_[i] * x[i];
    lp -= z > 0 ? std::log1p(std::exp(-z)) : -z + std::log1p(std::exp(z));
  }
  return lp;
}

ProductDistribution product_proposal(std::span<const double> field) {
  std::vector<std::size_t> idx(field.size());
  for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  return ProductDistribution(std::move(idx), {field.begin(), field.end()});
}

ProductDistribution product_proposal(const Vector& field) {
  return product_proposal(std::span<const double>(field.data(), field.size()));
}

// --- IsingModel --------------------------------------------------------------

IsingModel new_ising(const Matrix& J_raw, const Vector& h) {
  if (J_raw.rows() != J_raw.cols())
    throw InvalidArgument("coupling matrix must be square");
  if (J_raw.rows() != h.size())
    throw InvalidArgument("coupling matrix is " + std::to_string(J_raw.rows()) +
                          "x" + std::to_string(J_raw.cols()) + " but field has " +
                          std::to_string(h.size()) + " entries");
  if (!J_raw.allFinite()) throw InvalidArgument("coupling matrix has non-finite entries");
  if (!h.allFinite()) throw InvalidArgument("field has non-finite entries");

  const double scale = J_raw.size() ? J_raw.cwiseAbs().maxCoeff() : 0.0;
  const double asym = J_raw.size() ? (J_raw - J_raw.transpose()).cwiseAbs().maxCoeff() : 0.0;
  if (asym > 1e-9 * scale)
    throw InvalidArgument("coupling matrix is not symmetric (max |J - J'| = " +
                          std::to_string(asym) + ")");

  Matrix J = 0.5 * (J_raw + J_raw.transpose());
  J.diagonal().setZero();
  return IsingModel(std::move(J), h);
}

double energy(const IsingModel& model, const SpinVector& x) {
  if (x.size() != model.size() || !x.is_full())
    throw InvalidArgument("energy: configuration must cover all coordinates");
  const auto& J = model.couplings();
  const auto& h = model.field();
  const std::size_t n = model.size();
  double e = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    double col = 0.0;
    for (std::size_t i = 0; i < n; ++i) col += J(i, j) * x[i];
    e += 0.5 * col * x[j] + h[j] * x[j];
  }
  return e;
}

Vector conditional_field(const IsingModel& model, const SubsetIndex& S,
                         const SpinVector& x_comp) {
  if (S.parent_size() != model.size())
    throw InvalidArgument("conditional_field: subset parent size differs from model");
  const auto comp = S.complement();
  if (x_comp.indices().size() != comp.size() ||
      !std::equal(comp.begin(), comp.end(), x_comp.indices().begin()))
    throw InvalidArgument("conditional_field: x_comp must be indexed by the complement of S");

  const auto& J = model.couplings();
  Vector f(S.size());
  for (std::size_t a = 0; a < S.size(); ++a) {
    const std::size_t i = S[a];
    double acc = model.field()[i];
    for (std::size_t b = 0; b < comp.size(); ++b) acc += J(comp[b], i) * x_comp[b];
    f[a] = acc;
  }
  return f;
}

double log_ratio_quadratic(const IsingModel& model, const SubsetIndex& S,
                           const SpinVector& x_S) {
  if (S.parent_size() != model.size() || x_S.size() != S.size() ||
      !std::equal(S.members().begin(), S.members().end(), x_S.indices().begin()))
    throw InvalidArgument("log_ratio_quadratic: x_S must be indexed by S");
  const auto& J = model.couplings();
  double g = 0.0;
  for (std::size_t b = 1; b < S.size(); ++b)
    for (std::size_t a = 0; a < b; ++a) g += J(S[a], S[b]) * x_S[a] * x_S[b];
  return g;  // the two off-diagonal halves cancel the 1/2
}

double submatrix_frobenius(const IsingModel& model, const SubsetIndex& S) {
  if (S.parent_size() != model.size())
    throw InvalidArgument("submatrix_frobenius: subset parent size differs from model");
  const auto& J = model.couplings();
  double ss = 0.0;
  for (std::size_t b = 0; b < S.size(); ++b)
    for (std::size_t a = 0; a < S.size(); ++a) {
      const double v = J(S[a], S[b]);
      ss += v * v;
    }
  return std::sqrt(ss);
}

double operator_norm(const Matrix& J, double tol, PowerIterationOptions opts) {
  if (!(tol > 0)) throw InvalidArgument("operator_norm: tol must be positive");
  const Eigen::Index n = J.rows();
  if (n == 0 || J.cwiseAbs().maxCoeff() == 0.0) return 0.0;

  RngStream rng(opts.seed);
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.next_uniform() - 0.5;
  v.normalize();

  Vector w(n), bv(n);
  for (std::size_t it = 0; it < opts.max_iterations; ++it) {
    w.noalias() = J * v;
    bv.noalias() = J.transpose() * w;
    const double rho = v.dot(bv);
    const double residual = (bv - rho * v).norm();
    if (residual <= tol * rho) return std::sqrt(rho);
    v = bv / bv.norm();
  }
  throw NonConvergence("operator_norm: power iteration did not converge in " +
                       std::to_string(opts.max_iterations) + " iterations");
}

double operator_norm(const IsingModel& model, double tol, PowerIterationOptions opts) {
  return operator_norm(model.couplings(), tol, opts);
}

IsingModel sk_model(std::size_t n, double beta, std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("sk_model: n must be at least 2");
  if (!(beta >= 0)) throw InvalidArgument("sk_model: beta must be non-negative");
  RngStream rng = RngStream(seed).split(0x5c);
  std::normal_distribution<double> normal(0.0, beta / std::sqrt(static_cast<double>(n)));
  Matrix J = Matrix::Zero(n, n);
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i) {
      const double v = beta > 0 ? normal(rng) : 0.0;
      J(i, j) = v;
      J(j, i) = v;
    }
  return new_ising(J, Vector::Zero(n));
}

IsingModel random_model(std::size_t n, double norm, double field_scale,
                        std::uint64_t seed) {
  if (n < 2) throw InvalidArgument("random_model: n must be at least 2");
  RngStream rng = RngStream(seed).split(0x7a);
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix J = Matrix::Zero(n, n);
  for (std::size_t j = 1; j < n; ++j)
    for (std::size_t i = 0; i < j; ++i) J(i, j) = J(j, i) = normal(rng);
  Eigen::SelfAdjointEigenSolver<Matrix> eig(J, Eigen::EigenvaluesOnly);
  const double current = eig.eigenvalues().cwiseAbs().maxCoeff();
  if (current > 0) J *= norm / current;
  Vector h(n);
  for (std::size_t i = 0; i < n; ++i) h[i] = field_scale * normal(rng);
  return new_ising(J, h);
}

}  // namespace kglauber

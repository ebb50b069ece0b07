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

// Pairwise binary Ising models mu(x) ~ exp(x'Jx/2 + <h,x>) on {-1,+1}^n and
// the small value types shared by every sampler in the library.

#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace kglauber {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Spin = std::int8_t;

/// A sorted set of distinct indices drawn from [0, parent_size).
class SubsetIndex {
 public:
  /// Throws InvalidArgument unless members are strictly increasing, inside
  /// [0, parent_size) and non-empty.
  SubsetIndex(std::size_t parent_size, std::vector<std::size_t> members);

  static SubsetIndex full(std::size_t parent_size);

  std::size_t parent_size() const { return parent_size_; }
  std::size_t size() const { return members_.size(); }
  std::span<const std::size_t> members() const { return members_; }
  std::size_t operator[](std::size_t k) const { return members_[k]; }

  bool contains(std::size_t i) const;
  /// Indices of [0, parent_size) not in the subset (possibly empty).
  std::vector<std::size_t> complement() const;

  friend bool operator==(const SubsetIndex&, const SubsetIndex&) = default;

 private:
  std::size_t parent_size_;
  std::vector<std::size_t> members_;
};

/// An assignment of +-1 to an ordered index set.
class SpinVector {
 public:
  SpinVector() = default;
  /// Throws InvalidArgument on unsorted/duplicate indices, size mismatch or a
  /// value outside {-1,+1}.
  SpinVector(std::vector<std::size_t> indices, std::vector<Spin> values);

  /// Spins over the index set 0..values.size()-1.
  static SpinVector full(std::vector<Spin> values);
  /// Bit i of `bits` set means x_i = +1.
  static SpinVector from_bits(std::size_t n, std::uint64_t bits);

  std::size_t size() const { return values_.size(); }
  std::span<const std::size_t> indices() const { return indices_; }
  std::span<const Spin> values() const { return values_; }
  Spin operator[](std::size_t k) const { return values_[k]; }

  /// True if the index set is exactly 0..size()-1.
  bool is_full() const;
  /// Inverse of from_bits. Requires is_full() and size() <= 64.
  std::uint64_t to_bits() const;

  friend bool operator==(const SpinVector&, const SpinVector&) = default;

 private:
  std::vector<std::size_t> indices_;
  std::vector<Spin> values_;
};

/// Independent +-1 coordinates with P(x_i=+1) = e^t / (e^t + e^-t), t = field_i.
class ProductDistribution {
 public:
  ProductDistribution(std::vector<std::size_t> indices, std::vector<double> field);

  std::size_t size() const { return field_.size(); }
  std::span<const std::size_t> indices() const { return indices_; }
  std::span<const double> field() const { return field_; }
  std::span<const double> prob_plus() const { return prob_plus_; }
  /// ln q(x) for a vector of spins in index-set order.
  double log_prob(std::span<const Spin> x) const;

 private:
  std::vector<std::size_t> indices_;
  std::vector<double> field_;
  std::vector<double> prob_plus_;
};

/// Logistic sigmoid 1/(1+e^-z), branch on sign so neither side overflows.
double sigmoid(double z);

/// J symmetric with zero diagonal, h of matching length. Immutable.
class IsingModel {
 public:
  std::size_t size() const { return static_cast<std::size_t>(h_.size()); }
  const Matrix& couplings() const { return J_; }
  const Vector& field() const { return h_; }

 private:
  friend IsingModel new_ising(const Matrix& J_raw, const Vector& h);
  IsingModel(Matrix J, Vector h) : J_(std::move(J)), h_(std::move(h)) {}

  Matrix J_;
  Vector h_;
};

/// Symmetrizes J_raw as (J+J')/2 and drops its diagonal. Rejects dimension
/// mismatch, non-finite entries, and asymmetry beyond 1e-9 relative to
/// max|J_raw|.
IsingModel new_ising(const Matrix& J_raw, const Vector& h);

/// x'Jx/2 + <h,x>; x must cover every coordinate of the model.
double energy(const IsingModel& model, const SpinVector& x);

/// J_{S x S^c} x_{S^c} + h_S. `x_comp` must be indexed by exactly the
/// complement of S.
Vector conditional_field(const IsingModel& model, const SubsetIndex& S,
                         const SpinVector& x_comp);

ProductDistribution product_proposal(std::span<const double> field);
ProductDistribution product_proposal(const Vector& field);

/// x_S' J_{SxS} x_S / 2. `x_S` must be indexed by S.
double log_ratio_quadratic(const IsingModel& model, const SubsetIndex& S,
                           const SpinVector& x_S);

/// ||J_{SxS}||_F.
double submatrix_frobenius(const IsingModel& model, const SubsetIndex& S);

struct PowerIterationOptions {
  std::size_t max_iterations = 100000;
  std::uint64_t seed = 0x5eed;
};

/// Largest singular value of J by power iteration on J'J, stopped when the
/// residual |J'J v - rho v| <= tol * rho. Throws NonConvergence at the cap.
double operator_norm(const Matrix& J, double tol, PowerIterationOptions opts = {});
double operator_norm(const IsingModel& model, double tol,
                     PowerIterationOptions opts = {});

/// Sherrington-Kirkpatrick couplings J_ij ~ N(0, beta^2/n), zero field.
IsingModel sk_model(std::size_t n, double beta, std::uint64_t seed);

/// Random symmetric zero-diagonal Gaussian couplings rescaled so that
/// ||J|| == norm exactly, with field entries N(0, field_scale^2).
IsingModel random_model(std::size_t n, double norm, double field_scale,
                        std::uint64_t seed);

}  // namespace kglauber

// Copyright 2026 The eigbridge Authors
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

#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "eigbridge/ensembles.hpp"
#include "eigbridge/spectral.hpp"
#include "eigbridge/types.hpp"

namespace eigbridge {

/// Table of |u_ij|^2 for an eigenmatrix whose columns follow non-decreasing
/// eigenvalue order. Rows index coordinates, columns index eigenvectors.
using WeightTable = RealMatrix;

/// Values of the bivariate eigenvector process on a rectangular grid.
struct BridgeGrid {
  std::vector<double> s_grid;
  std::vector<double> t_grid;
  RealMatrix values;  // |s_grid| x |t_grid|
  int beta = 1;
  Index n = 0;

  [[nodiscard]] double at(std::size_t si, std::size_t ti) const {
    return values(static_cast<Index>(si), static_cast<Index>(ti));
  }
};

/// sqrt(beta/2) * sum_{i <= floor(ns)} sum_{j <= floor(nt)} (|u_ij|^2 - 1/n).
/// Exactly 0 whenever either index range is empty or complete.
double bridge_value(const WeightTable& w, int beta, double s, double t);

/// Same quantity on a grid via one 2-D prefix-sum table, O(n^2 + grid).
BridgeGrid bridge_grid(const WeightTable& w, int beta, std::span<const double> s_grid,
                       std::span<const double> t_grid);

/// `points` equally spaced values 0, 1/(points-1), ..., 1.
std::vector<double> uniform_grid(std::size_t points);

/// CSV `s,t,value`, row-major over the grid.
std::string bridge_grid_csv(const BridgeGrid& grid);

/// A finite signed measure sum_j weight_j delta_{location_j}.
struct SignedMeasure {
  std::vector<std::pair<double, double>> atoms;  // (location, weight)

  [[nodiscard]] double mass() const;
  /// Atoms sorted by location with coincident locations merged.
  [[nodiscard]] SignedMeasure normalized() const;
  friend SignedMeasure operator-(const SignedMeasure& lhs, const SignedMeasure& rhs);
};

/// mu_{X, e_i} = sum_j |u_ij|^2 delta_{lambda_j}, i zero-based.
SignedMeasure weighted_spectral_measure(const WeightTable& w, const Vector& eigenvalues, Index i);
/// (1/n) sum_j delta_{lambda_j}.
SignedMeasure empirical_spectral_measure(const Vector& eigenvalues);

inline constexpr int kMaxMomentPower = 8;

struct MomentStatistic {
  double s = 0.0;
  int k = 1;
  double value = 0.0;
};

/// sum_{i <= floor(ns)} (e_i^* X^k e_i - Tr(X^k)/n), evaluated spectrally as
/// sum_i sum_j |u_ij|^2 lambda_j^k - (floor(ns)/n) sum_j lambda_j^k.
MomentStatistic moment_statistic(const WeightTable& w, const Vector& eigenvalues, double s, int k);

/// The same statistic from dense matrix powers of X.
template <class Scalar>
double moment_statistic_dense(const CovarianceMatrix<Scalar>& x, double s, int k);

/// Both sides of the re-centering identity
///   sum_{i<=ns}(d_i - Tr/n) = sum_{i<=ns}(d_i - c) - (floor(ns)/n) sum_{i<=n}(d_i - c)
/// for d_i = e_i^* X^k e_i and an arbitrary constant c.
struct IdentitySides {
  double lhs = 0.0;
  double rhs = 0.0;
  [[nodiscard]] double residual() const { return std::abs(lhs - rhs); }
};

IdentitySides centered_moment_decomposition(const WeightTable& w, const Vector& eigenvalues, double s, int k,
                                            double proxy);

/// For a null-mass measure: lhs = integral of u^k F_mu(u) du in closed form
/// over the steps of F_mu, rhs = -sum_j w_j x_j^(k+1) / (k+1).
/// Throws ValidationError when |mass| > 1e-10.
IdentitySides moment_transfer(const SignedMeasure& measure, int k);

/// lhs = integral of u^k B^n_{s, F_n(u)} du (exact step integration);
/// rhs = -sqrt(beta/2)/(k+1) * moment_statistic(s, k+1).
IdentitySides bridge_moment_link(const WeightTable& w, const Vector& eigenvalues, int beta, double s, int k);

/// max_{i,j} | |u_ij|^2 - 1/n |.
double max_jump(const WeightTable& w);

}  // namespace eigbridge

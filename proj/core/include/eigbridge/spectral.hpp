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

#include "eigbridge/ensembles.hpp"
#include "eigbridge/types.hpp"

namespace eigbridge {

/// X = U diag(eigenvalues) U^*. Eigenvalues are non-decreasing; column j of
/// `eigenvectors` belongs to eigenvalues[j]. Each column has its first
/// significant entry real and positive, and columns of (numerically) equal
/// eigenvalues are ordered lexicographically by their entries.
template <class Scalar>
struct SpectralDecomposition {
  Vector eigenvalues;
  Matrix<Scalar> eigenvectors;

  /// |u_ij|^2.
  [[nodiscard]] RealMatrix weights() const { return eigenvectors.cwiseAbs2(); }
  [[nodiscard]] Index size() const { return eigenvalues.size(); }
};

/// Eigenvalues closer than this are treated as tied for column ordering.
inline constexpr double kEigenTieTol = 1e-12;

/// Hermitian eigendecomposition: Householder tridiagonalization followed by
/// implicit symmetric QR (Eigen's SelfAdjointEigenSolver, at most 30 sweeps
/// per eigenvalue). Throws ConvergenceError when the iteration cap is hit.
template <class Scalar>
SpectralDecomposition<Scalar> eigh(const Matrix<Scalar>& x);

template <class Scalar>
SpectralDecomposition<Scalar> eigh(const CovarianceMatrix<Scalar>& x) {
  return eigh(x.entries);
}

/// Eigenvalues only, non-decreasing.
template <class Scalar>
Vector eigvalsh(const Matrix<Scalar>& x);

/// Applies the phase and tie-order conventions of SpectralDecomposition in place.
template <class Scalar>
void canonicalize(SpectralDecomposition<Scalar>& d);

inline std::span<const double> as_span(const Vector& v) { return {v.data(), static_cast<std::size_t>(v.size())}; }

/// Empirical spectral CDF (1/n) #{i : lambda_i <= u} of sorted eigenvalues.
double esd_cdf(std::span<const double> sorted_eigenvalues, double u);

/// Marchenko-Pastur law with ratio y: support [a, b] and an atom of mass
/// max(0, 1 - 1/y) at the origin.
struct MPLaw {
  double y = 1.0;
  double a = 0.0;
  double b = 4.0;
  double atom_mass = 0.0;
};

MPLaw mp_law(double y);
std::pair<double, double> mp_edges(double y);
/// Density of the continuous part.
double mp_density(const MPLaw& law, double u);
/// F(u) = atom + integral of the density over [a, min(u, b)], by adaptive
/// Gauss-Kronrod quadrature in the arcsine variable (absolute error <= 1e-8).
double mp_cdf(const MPLaw& law, double u);

/// Kolmogorov-Smirnov distance sup_u |F_n(u) - F(u)|, evaluated at both
/// sides of every step of the empirical CDF.
double ks_distance(std::span<const double> sorted_eigenvalues, const MPLaw& law);

/// Single-column CSV with header `lambda`.
std::string eigenvalues_csv(std::span<const double> eigenvalues);

}  // namespace eigbridge

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

#include "eigbridge/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "eigbridge/io.hpp"

namespace eigbridge {
namespace {

constexpr double kPhaseThreshold = 1e-10;

template <class Scalar>
bool column_less(const Matrix<Scalar>& u, Index c1, Index c2) {
  for (Index i = 0; i < u.rows(); ++i) {
    const Complex a(u(i, c1)), b(u(i, c2));
    if (a.real() != b.real()) return a.real() < b.real();
    if (a.imag() != b.imag()) return a.imag() < b.imag();
  }
  return false;
}

template <class Scalar>
void check_square(const Matrix<Scalar>& x) {
  if (x.rows() != x.cols() || x.rows() == 0) throw ValidationError("eigh: matrix must be square and non-empty");
}

}  // namespace

template <class Scalar>
void canonicalize(SpectralDecomposition<Scalar>& d) {
  auto& u = d.eigenvectors;
  const Index n = u.rows();
  for (Index j = 0; j < u.cols(); ++j) {
    for (Index i = 0; i < n; ++i) {
      const double mag = std::abs(u(i, j));
      if (mag > kPhaseThreshold) {
        if constexpr (is_complex_v<Scalar>) {
          const Complex phase = std::conj(u(i, j)) / mag;
          u.col(j) *= phase;
          u(i, j) = Complex(std::abs(u(i, j)), 0.0);
        } else {
          if (u(i, j) < 0.0) u.col(j) = -u.col(j);
        }
        break;
      }
    }
  }

  // Stable reorder inside each run of tied eigenvalues.
  std::vector<Index> order(static_cast<std::size_t>(u.cols()));
  std::iota(order.begin(), order.end(), Index{0});
  bool permuted = false;
  Index start = 0;
  while (start < u.cols()) {
    Index end = start + 1;
    while (end < u.cols() && d.eigenvalues[end] - d.eigenvalues[end - 1] <= kEigenTieTol) ++end;
    if (end - start > 1) {
      std::stable_sort(order.begin() + start, order.begin() + end,
                       [&](Index a, Index b) { return column_less(u, a, b); });
      permuted = true;
    }
    start = end;
  }
  if (permuted) {
    Matrix<Scalar> reordered(u.rows(), u.cols());
    // Eigenvalues stay put: tied values differ by at most kEigenTieTol.
    for (Index j = 0; j < u.cols(); ++j) reordered.col(j) = u.col(order[static_cast<std::size_t>(j)]);
    u = std::move(reordered);
  }
}

template <class Scalar>
SpectralDecomposition<Scalar> eigh(const Matrix<Scalar>& x) {
  check_square(x);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(x, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eigh: symmetric QR did not converge within its iteration cap (n=" +
                           std::to_string(x.rows()) + ")");
  }
  SpectralDecomposition<Scalar> out;
  out.eigenvalues = solver.eigenvalues();
  out.eigenvectors = solver.eigenvectors();
  canonicalize(out);
  return out;
}

template <class Scalar>
Vector eigvalsh(const Matrix<Scalar>& x) {
  check_square(x);
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(x, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw ConvergenceError("eigvalsh: symmetric QR did not converge within its iteration cap (n=" +
                           std::to_string(x.rows()) + ")");
  }
  return solver.eigenvalues();
}

template SpectralDecomposition<Real> eigh<Real>(const RealMatrix&);
template SpectralDecomposition<Complex> eigh<Complex>(const ComplexMatrix&);
template Vector eigvalsh<Real>(const RealMatrix&);
template Vector eigvalsh<Complex>(const ComplexMatrix&);
template void canonicalize<Real>(SpectralDecomposition<Real>&);
template void canonicalize<Complex>(SpectralDecomposition<Complex>&);

double esd_cdf(std::span<const double> sorted_eigenvalues, double u) {
  if (sorted_eigenvalues.empty()) return 0.0;
  const auto it = std::upper_bound(sorted_eigenvalues.begin(), sorted_eigenvalues.end(), u);
  return static_cast<double>(it - sorted_eigenvalues.begin()) / static_cast<double>(sorted_eigenvalues.size());
}

std::pair<double, double> mp_edges(double y) {
  if (!(y > 0.0)) throw ValidationError("mp_edges: y must be positive");
  const double r = std::sqrt(y);
  return {(1.0 - r) * (1.0 - r), (1.0 + r) * (1.0 + r)};
}

MPLaw mp_law(double y) {
  const auto [a, b] = mp_edges(y);
  MPLaw law;
  law.y = y;
  law.a = a;
  law.b = b;
  law.atom_mass = std::max(0.0, 1.0 - 1.0 / y);
  return law;
}

double mp_density(const MPLaw& law, double u) {
  if (u <= law.a || u >= law.b || u <= 0.0) return 0.0;
  return std::sqrt((law.b - u) * (u - law.a)) / (2.0 * M_PI * law.y * u);
}

double mp_cdf(const MPLaw& law, double u) {
  if (u < 0.0) return 0.0;
  if (u >= law.b) return 1.0;
  if (u <= law.a) return law.atom_mass;
  // With u = c + h sin(theta) the density integrates to
  //   (c theta + h cos theta - 2 r atan((c tan(theta/2) + h) / r)) / (2 pi y),
  // r = sqrt(ab); the atan term is absent when a = 0.
  const double c = 0.5 * (law.a + law.b);
  const double h = 0.5 * (law.b - law.a);
  const double r = std::sqrt(law.a * law.b);
  auto primitive = [&](double theta) {
    double p = c * theta + h * std::cos(theta);
    if (r > 0.0) p -= 2.0 * r * std::atan((c * std::tan(0.5 * theta) + h) / r);
    return p;
  };
  const double upper = std::asin(std::clamp((u - c) / h, -1.0, 1.0));
  const double mass = (primitive(upper) - primitive(-M_PI_2)) / (2.0 * M_PI * law.y);
  return std::clamp(law.atom_mass + mass, 0.0, 1.0);
}

double ks_distance(std::span<const double> sorted_eigenvalues, const MPLaw& law) {
  const auto n = static_cast<double>(sorted_eigenvalues.size());
  double sup = 0.0;
  std::size_t i = 0;
  while (i < sorted_eigenvalues.size()) {
    const double v = sorted_eigenvalues[i];
    std::size_t j = i;
    while (j + 1 < sorted_eigenvalues.size() && sorted_eigenvalues[j + 1] == v) ++j;
    const double at = mp_cdf(law, v);
    const double left = (v <= 0.0) ? 0.0 : at;  // the only jump of F sits at 0
    sup = std::max(sup, std::abs(static_cast<double>(j + 1) / n - at));
    sup = std::max(sup, std::abs(static_cast<double>(i) / n - left));
    i = j + 1;
  }
  return sup;
}

std::string eigenvalues_csv(std::span<const double> eigenvalues) {
  std::string out = "lambda\n";
  for (double v : eigenvalues) out += format_double(v) + "\n";
  return out;
}

}  // namespace eigbridge

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

#include "eigbridge/process.hpp"

#include <algorithm>
#include <cmath>

#include "eigbridge/io.hpp"

namespace eigbridge {
namespace {

void check_unit(double v, const char* what) {
  if (!(v >= 0.0 && v <= 1.0)) {
    throw ValidationError(std::string(what) + " must lie in [0,1] (got " + format_double(v) + ")");
  }
}

void check_beta(int beta) {
  if (beta != 1 && beta != 2) throw ValidationError("beta must be 1 or 2 (got " + std::to_string(beta) + ")");
}

void check_power(int k) {
  if (k < 1 || k > kMaxMomentPower) {
    throw ValidationError("moment power k must lie in [1," + std::to_string(kMaxMomentPower) + "] (got " +
                          std::to_string(k) + ")");
  }
}

// d_i = sum_j |u_ij|^2 lambda_j^k = e_i^* X^k e_i.
Vector diagonal_of_power(const WeightTable& w, const Vector& eigenvalues, int k) {
  const Vector powers = eigenvalues.array().pow(static_cast<double>(k)).matrix();
  return w * powers;
}

}  // namespace

double bridge_value(const WeightTable& w, int beta, double s, double t) {
  check_beta(beta);
  check_unit(s, "s");
  check_unit(t, "t");
  const Index n = w.rows();
  const Index rows = floor_index(n, s);
  const Index cols = floor_index(n, t);
  if (rows == 0 || cols == 0 || rows == n || cols == n) return 0.0;
  const double inv_n = 1.0 / static_cast<double>(n);
  double acc = 0.0;
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) acc += w(i, j) - inv_n;
  }
  return std::sqrt(beta / 2.0) * acc;
}

BridgeGrid bridge_grid(const WeightTable& w, int beta, std::span<const double> s_grid,
                       std::span<const double> t_grid) {
  check_beta(beta);
  for (double s : s_grid) check_unit(s, "s-grid value");
  for (double t : t_grid) check_unit(t, "t-grid value");
  if (!std::is_sorted(s_grid.begin(), s_grid.end()) || !std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw ValidationError("bridge_grid: grids must be sorted");
  }
  const Index n = w.rows();
  const double inv_n = 1.0 / static_cast<double>(n);

  // prefix(i, j) = sum over the leading i x j block of (w - 1/n).
  RealMatrix prefix = RealMatrix::Zero(n + 1, n + 1);
  for (Index i = 0; i < n; ++i) {
    double row = 0.0;
    for (Index j = 0; j < n; ++j) {
      row += w(i, j) - inv_n;
      prefix(i + 1, j + 1) = prefix(i, j + 1) + row;
    }
  }

  BridgeGrid grid;
  grid.s_grid.assign(s_grid.begin(), s_grid.end());
  grid.t_grid.assign(t_grid.begin(), t_grid.end());
  grid.beta = beta;
  grid.n = n;
  grid.values = RealMatrix::Zero(static_cast<Index>(s_grid.size()), static_cast<Index>(t_grid.size()));
  const double scale = std::sqrt(beta / 2.0);
  for (std::size_t a = 0; a < s_grid.size(); ++a) {
    const Index rows = floor_index(n, s_grid[a]);
    if (rows == 0 || rows == n) continue;
    for (std::size_t b = 0; b < t_grid.size(); ++b) {
      const Index cols = floor_index(n, t_grid[b]);
      if (cols == 0 || cols == n) continue;
      grid.values(static_cast<Index>(a), static_cast<Index>(b)) = scale * prefix(rows, cols);
    }
  }
  return grid;
}

std::vector<double> uniform_grid(std::size_t points) {
  if (points < 2) throw ValidationError("uniform_grid: need at least 2 points");
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i) out[i] = static_cast<double>(i) / static_cast<double>(points - 1);
  out.back() = 1.0;
  return out;
}

std::string bridge_grid_csv(const BridgeGrid& grid) {
  CsvWriter csv({"s", "t", "value"});
  for (std::size_t a = 0; a < grid.s_grid.size(); ++a) {
    for (std::size_t b = 0; b < grid.t_grid.size(); ++b) csv.row({grid.s_grid[a], grid.t_grid[b], grid.at(a, b)});
  }
  return csv.text();
}

double SignedMeasure::mass() const {
  double total = 0.0;
  for (const auto& [_, wgt] : atoms) total += wgt;
  return total;
}

SignedMeasure SignedMeasure::normalized() const {
  SignedMeasure out;
  out.atoms = atoms;
  std::stable_sort(out.atoms.begin(), out.atoms.end(),
                   [](const auto& l, const auto& r) { return l.first < r.first; });
  std::vector<std::pair<double, double>> merged;
  for (const auto& atom : out.atoms) {
    if (!merged.empty() && merged.back().first == atom.first) {
      merged.back().second += atom.second;
    } else {
      merged.push_back(atom);
    }
  }
  out.atoms = std::move(merged);
  return out;
}

SignedMeasure operator-(const SignedMeasure& lhs, const SignedMeasure& rhs) {
  SignedMeasure out = lhs;
  for (const auto& [x, wgt] : rhs.atoms) out.atoms.emplace_back(x, -wgt);
  return out;
}

SignedMeasure weighted_spectral_measure(const WeightTable& w, const Vector& eigenvalues, Index i) {
  if (i < 0 || i >= w.rows()) throw ValidationError("weighted_spectral_measure: row index out of range");
  SignedMeasure mu;
  mu.atoms.reserve(static_cast<std::size_t>(w.cols()));
  for (Index j = 0; j < w.cols(); ++j) mu.atoms.emplace_back(eigenvalues[j], w(i, j));
  return mu;
}

SignedMeasure empirical_spectral_measure(const Vector& eigenvalues) {
  SignedMeasure mu;
  const double wgt = 1.0 / static_cast<double>(eigenvalues.size());
  for (Index j = 0; j < eigenvalues.size(); ++j) mu.atoms.emplace_back(eigenvalues[j], wgt);
  return mu;
}

MomentStatistic moment_statistic(const WeightTable& w, const Vector& eigenvalues, double s, int k) {
  check_unit(s, "s");
  check_power(k);
  MomentStatistic out{s, k, 0.0};
  const Index n = w.rows();
  const Index rows = floor_index(n, s);
  if (rows == 0 || rows == n) return out;
  const Vector d = diagonal_of_power(w, eigenvalues, k);
  const double trace = eigenvalues.array().pow(static_cast<double>(k)).sum();
  out.value = d.head(rows).sum() - static_cast<double>(rows) / static_cast<double>(n) * trace;
  return out;
}

template <class Scalar>
double moment_statistic_dense(const CovarianceMatrix<Scalar>& x, double s, int k) {
  check_unit(s, "s");
  check_power(k);
  const Index n = x.entries.rows();
  const Index rows = floor_index(n, s);
  if (rows == 0 || rows == n) return 0.0;
  Matrix<Scalar> power = x.entries;
  for (int p = 1; p < k; ++p) power = (power * x.entries).eval();
  double head = 0.0, trace = 0.0;
  for (Index i = 0; i < n; ++i) {
    const double d = std::real(power(i, i));
    trace += d;
    if (i < rows) head += d;
  }
  return head - static_cast<double>(rows) / static_cast<double>(n) * trace;
}

template double moment_statistic_dense<Real>(const CovarianceMatrix<Real>&, double, int);
template double moment_statistic_dense<Complex>(const CovarianceMatrix<Complex>&, double, int);

IdentitySides centered_moment_decomposition(const WeightTable& w, const Vector& eigenvalues, double s, int k,
                                            double proxy) {
  IdentitySides out;
  out.lhs = moment_statistic(w, eigenvalues, s, k).value;
  const Index n = w.rows();
  const Index rows = floor_index(n, s);
  const Vector d = diagonal_of_power(w, eigenvalues, k);
  double head = 0.0, total = 0.0;
  for (Index i = 0; i < n; ++i) {
    total += d[i] - proxy;
    if (i + 1 == rows) head = total;
  }
  out.rhs = head - static_cast<double>(rows) / static_cast<double>(n) * total;
  return out;
}

IdentitySides moment_transfer(const SignedMeasure& measure, int k) {
  if (k < 0) throw ValidationError("moment_transfer: k must be non-negative");
  if (std::abs(measure.mass()) > 1e-10) {
    throw ValidationError("moment_transfer: measure must have null mass (got " + format_double(measure.mass()) + ")");
  }
  const SignedMeasure mu = measure.normalized();
  const double kp1 = k + 1.0;
  IdentitySides out;
  double cdf = 0.0;
  for (std::size_t r = 0; r < mu.atoms.size(); ++r) {
    const auto [x, wgt] = mu.atoms[r];
    out.rhs -= wgt * std::pow(x, kp1) / kp1;
    cdf += wgt;
    if (r + 1 < mu.atoms.size()) {
      const double next = mu.atoms[r + 1].first;
      out.lhs += cdf * (std::pow(next, kp1) - std::pow(x, kp1)) / kp1;
    }
  }
  return out;
}

IdentitySides bridge_moment_link(const WeightTable& w, const Vector& eigenvalues, int beta, double s, int k) {
  check_beta(beta);
  check_unit(s, "s");
  if (k < 0 || k + 1 > kMaxMomentPower) {
    throw ValidationError("bridge_moment_link: k must lie in [0," + std::to_string(kMaxMomentPower - 1) + "]");
  }
  IdentitySides out;
  const Index n = w.rows();
  const Index rows = floor_index(n, s);
  const double scale = std::sqrt(beta / 2.0);
  out.rhs = -scale / (k + 1.0) * moment_statistic(w, eigenvalues, s, k + 1).value;
  if (rows == 0 || rows == n) return out;

  // On [lambda_{r-1}, lambda_r) exactly r eigenvalues are <= u, so the
  // process sits at column count r.
  const double inv_n = 1.0 / static_cast<double>(n);
  const double kp1 = k + 1.0;
  double column_prefix = 0.0;
  for (Index r = 1; r < n; ++r) {
    double col = 0.0;
    for (Index i = 0; i < rows; ++i) col += w(i, r - 1) - inv_n;
    column_prefix += col;
    const double step = std::pow(eigenvalues[r], kp1) - std::pow(eigenvalues[r - 1], kp1);
    out.lhs += column_prefix * step / kp1;
  }
  out.lhs *= scale;
  return out;
}

double max_jump(const WeightTable& w) {
  const double inv_n = 1.0 / static_cast<double>(w.rows());
  return (w.array() - inv_n).abs().maxCoeff();
}

}  // namespace eigbridge

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

#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Dense>

namespace eigbridge {

using Real = double;
using Complex = std::complex<double>;

template <class Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using RealMatrix = Matrix<Real>;
using ComplexMatrix = Matrix<Complex>;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

template <class Scalar>
inline constexpr bool is_complex_v = !std::is_same_v<Scalar, Real>;

/// Dyson index of a scalar type: 1 for real, 2 for complex.
template <class Scalar>
inline constexpr int beta_of = is_complex_v<Scalar> ? 2 : 1;

/// Matrix dimension n and sample size m. The aspect ratio is always derived.
struct Dims {
  Index n = 0;
  Index m = 0;

  Dims() = default;
  Dims(Index n_, Index m_);

  [[nodiscard]] double y() const { return static_cast<double>(n) / static_cast<double>(m); }
  friend bool operator==(const Dims&, const Dims&) = default;
};

/// Bad user input: malformed atom parameters, config keys, out-of-range
/// arguments. The CLI maps it to exit code 2.
class ValidationError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// An identity or acceptance residual exceeded its tolerance (exit code 3).
class ToleranceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The iterative eigensolver hit its iteration cap.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Internal combinatorial invariant violated during enumeration.
class EnumerationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline Dims::Dims(Index n_, Index m_) : n(n_), m(m_) {
  if (n <= 0 || m <= 0) {
    throw ValidationError("dims: n and m must be positive (got n=" + std::to_string(n) +
                          ", m=" + std::to_string(m) + ")");
  }
}

/// floor(n * s) for s in [0, 1], clamped to [0, n]. A relative guard of a few
/// ulps keeps products such as 100 * 0.29 from landing one index short.
inline Index floor_index(Index n, double s) {
  const double x = static_cast<double>(n) * s;
  auto k = static_cast<Index>(std::floor(x + 8.0 * std::numeric_limits<double>::epsilon() * (1.0 + x)));
  if (k < 0) return 0;
  if (k > n) return n;
  return k;
}

}  // namespace eigbridge

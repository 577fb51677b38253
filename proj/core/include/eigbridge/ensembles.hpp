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

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "eigbridge/config.hpp"
#include "eigbridge/types.hpp"

namespace eigbridge {

// Atom families. Each is normalized to mean 0 and E|v|^2 = 1 by make_atom_spec.
struct GaussianReal {};
struct GaussianComplexCircular {};
struct Rademacher {};
/// Binomial(trials, p), shifted by its mean and divided by its standard deviation.
struct CenteredBinomial {
  int trials = 6;
  double p = 0.21132486540518713;  // 1/2 - sqrt(1/12): variance 6p(1-p) is exactly 1
};
/// Finite law on complex points; centered and scaled at construction.
struct Discrete {
  std::vector<Complex> support;
  std::vector<double> probs;
};

using AtomFamily = std::variant<GaussianReal, GaussianComplexCircular, Rademacher, CenteredBinomial, Discrete>;

/// A centered, unit-variance scalar law with closed-form mixed moments.
class AtomSpec {
 public:
  [[nodiscard]] const AtomFamily& family() const { return family_; }
  [[nodiscard]] int beta() const { return beta_; }
  [[nodiscard]] std::string family_name() const;
  /// Canonical, human readable identifier, e.g. `centered-binomial(6,0.21132486540518713)`.
  [[nodiscard]] std::string id() const;

  [[nodiscard]] bool has_finite_support() const { return !support_.empty(); }
  /// Normalized support points and their probabilities (finite families only).
  [[nodiscard]] const std::vector<Complex>& support() const { return support_; }
  [[nodiscard]] const std::vector<double>& probs() const { return probs_; }

  /// Affine normalization v = (raw - shift) / scale applied to the raw law.
  [[nodiscard]] Complex shift() const { return shift_; }
  [[nodiscard]] double scale() const { return scale_; }

 private:
  friend AtomSpec make_atom_spec(AtomFamily family, int beta);

  AtomFamily family_;
  int beta_ = 1;
  std::vector<Complex> support_;
  std::vector<double> probs_;
  Complex shift_{0.0, 0.0};
  double scale_ = 1.0;
};

/// Validates and normalizes an atom law. Throws ValidationError on a family /
/// beta mismatch, zero variance, malformed probabilities, or a non-circular
/// complex law.
AtomSpec make_atom_spec(AtomFamily family, int beta);

/// Convenience overload picking the natural beta of the family (2 for the
/// complex Gaussian, 1 otherwise; discrete laws are real iff their support is).
AtomSpec make_atom_spec(AtomFamily family);

/// E[v^a conj(v)^b]. Requires a + b <= 16.
Complex atom_moment_complex(const AtomSpec& spec, int a, int b);
/// Real part of atom_moment_complex; exact for real laws and for the mixed
/// moments of circular complex laws.
double atom_moment(const AtomSpec& spec, int a, int b);

inline constexpr int kMaxMomentOrder = 16;

struct FourthMomentCheck {
  double m4 = 0.0;
  double target = 0.0;
  bool satisfied = false;
};

/// Compares E|v|^4 with 4 - beta, the fourth moment of the Gaussian atom.
FourthMomentCheck fourth_moment_condition(const AtomSpec& spec);

template <class Scalar>
struct DataMatrix {
  Matrix<Scalar> entries;  // n x m
  std::string atom_id;
  std::uint64_t seed = 0;
};

template <class Scalar>
struct CovarianceMatrix {
  Matrix<Scalar> entries;  // n x n Hermitian
};

/// i.i.d. draws in row-major order from one engine seeded with `seed`.
/// Scalar must be Real for beta = 1 specs and Complex for beta = 2.
template <class Scalar>
DataMatrix<Scalar> sample_data_matrix(const AtomSpec& spec, const Dims& dims, std::uint64_t seed);

/// X = (1/m) V V^*, exactly Hermitian.
template <class Scalar>
CovarianceMatrix<Scalar> sample_covariance(const DataMatrix<Scalar>& v);

/// Writes `atom.*` keys.
void atom_to_config(const AtomSpec& spec, KeyValueConfig& cfg);
/// Reads `atom.*` keys; defaults to the real Gaussian when `atom.family` is absent.
AtomSpec atom_from_config(const KeyValueConfig& cfg);

}  // namespace eigbridge

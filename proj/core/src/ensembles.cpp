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

#include "eigbridge/ensembles.hpp"

#include <cmath>
#include <numeric>
#include <random>

#include "eigbridge/io.hpp"
#include "eigbridge/rng.hpp"

namespace eigbridge {
namespace {

constexpr double kNormalizationTol = 1e-12;

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

double binomial_pmf(int trials, int k, double p) {
  return std::exp(std::lgamma(trials + 1.0) - std::lgamma(k + 1.0) - std::lgamma(trials - k + 1.0) +
                  k * std::log(p) + (trials - k) * std::log1p(-p));
}

std::string complex_text(Complex z) {
  if (z.imag() == 0.0) return format_double(z.real());
  return format_double(z.real()) + ":" + format_double(z.imag());
}

double double_factorial(int k) {
  double out = 1.0;
  for (int i = k; i > 1; i -= 2) out *= i;
  return out;
}

}  // namespace

AtomSpec make_atom_spec(AtomFamily family, int beta) {
  if (beta != 1 && beta != 2) throw ValidationError("atom: beta must be 1 or 2");
  AtomSpec spec;
  spec.beta_ = beta;

  std::visit(
      Overloaded{
          [&](const GaussianReal&) {
            if (beta != 1) throw ValidationError("atom: gaussian-real requires beta=1");
          },
          [&](const GaussianComplexCircular&) {
            if (beta != 2) throw ValidationError("atom: gaussian-complex-circular requires beta=2");
          },
          [&](const Rademacher&) {
            if (beta != 1) throw ValidationError("atom: rademacher requires beta=1");
            spec.support_ = {Complex(-1.0), Complex(1.0)};
            spec.probs_ = {0.5, 0.5};
          },
          [&](const CenteredBinomial& b) {
            if (beta != 1) throw ValidationError("atom: centered-binomial requires beta=1");
            if (b.trials < 1) throw ValidationError("atom: centered-binomial needs trials >= 1");
            if (!(b.p > 0.0 && b.p < 1.0)) {
              throw ValidationError("atom: centered-binomial success probability must lie in (0,1)");
            }
            const double mean = b.trials * b.p;
            const double var = b.trials * b.p * (1.0 - b.p);
            spec.shift_ = Complex(mean);
            spec.scale_ = std::sqrt(var);
            for (int k = 0; k <= b.trials; ++k) {
              spec.support_.emplace_back((k - mean) / spec.scale_);
              spec.probs_.push_back(binomial_pmf(b.trials, k, b.p));
            }
          },
          [&](const Discrete& d) {
            if (d.support.empty() || d.support.size() != d.probs.size()) {
              throw ValidationError("atom: discrete support and probs must be non-empty and of equal length");
            }
            double total = 0.0;
            for (double p : d.probs) {
              if (!(p >= 0.0) || !std::isfinite(p)) throw ValidationError("atom: discrete probs must be >= 0");
              total += p;
            }
            if (std::abs(total - 1.0) > kNormalizationTol) {
              throw ValidationError("atom: discrete probs must sum to 1 (got " + format_double(total) + ")");
            }
            Complex mean(0.0);
            for (std::size_t i = 0; i < d.support.size(); ++i) {
              if (!std::isfinite(d.support[i].real()) || !std::isfinite(d.support[i].imag())) {
                throw ValidationError("atom: discrete support must be finite");
              }
              if (beta == 1 && d.support[i].imag() != 0.0) {
                throw ValidationError("atom: beta=1 discrete law has a non-real support point");
              }
              mean += d.probs[i] * d.support[i];
            }
            double var = 0.0;
            for (std::size_t i = 0; i < d.support.size(); ++i) var += d.probs[i] * std::norm(d.support[i] - mean);
            if (!(var > kNormalizationTol)) {
              throw ValidationError("atom: discrete law has zero variance and cannot be normalized");
            }
            spec.shift_ = mean;
            spec.scale_ = std::sqrt(var);
            for (std::size_t i = 0; i < d.support.size(); ++i) {
              spec.support_.push_back((d.support[i] - mean) / spec.scale_);
              spec.probs_.push_back(d.probs[i]);
            }
          },
      },
      family);
  spec.family_ = std::move(family);

  // Post-normalization invariants.
  if (spec.has_finite_support()) {
    Complex mean(0.0), second(0.0);
    double abs2 = 0.0;
    for (std::size_t i = 0; i < spec.support_.size(); ++i) {
      mean += spec.probs_[i] * spec.support_[i];
      second += spec.probs_[i] * spec.support_[i] * spec.support_[i];
      abs2 += spec.probs_[i] * std::norm(spec.support_[i]);
    }
    if (std::abs(mean) > kNormalizationTol || std::abs(abs2 - 1.0) > kNormalizationTol) {
      throw ValidationError("atom: normalization failed for " + spec.id());
    }
    if (beta == 2 && std::abs(second) > kNormalizationTol) {
      throw ValidationError("atom: complex law is not circular (E v^2 != 0); unsupported");
    }
  }
  return spec;
}

AtomSpec make_atom_spec(AtomFamily family) {
  int beta = 1;
  if (std::holds_alternative<GaussianComplexCircular>(family)) beta = 2;
  if (const auto* d = std::get_if<Discrete>(&family)) {
    for (auto z : d->support) {
      if (z.imag() != 0.0) beta = 2;
    }
  }
  return make_atom_spec(std::move(family), beta);
}

std::string AtomSpec::family_name() const {
  return std::visit(Overloaded{
                        [](const GaussianReal&) { return std::string("gaussian-real"); },
                        [](const GaussianComplexCircular&) { return std::string("gaussian-complex-circular"); },
                        [](const Rademacher&) { return std::string("rademacher"); },
                        [](const CenteredBinomial&) { return std::string("centered-binomial"); },
                        [](const Discrete&) { return std::string("discrete"); },
                    },
                    family_);
}

std::string AtomSpec::id() const {
  std::string out = family_name();
  if (const auto* b = std::get_if<CenteredBinomial>(&family_)) {
    out += "(" + std::to_string(b->trials) + "," + format_double(b->p) + ")";
  } else if (const auto* d = std::get_if<Discrete>(&family_)) {
    out += "(";
    for (std::size_t i = 0; i < d->support.size(); ++i) {
      if (i) out += ";";
      out += complex_text(d->support[i]) + "@" + format_double(d->probs[i]);
    }
    out += ")";
  }
  out += ",beta=" + std::to_string(beta_);
  return out;
}

Complex atom_moment_complex(const AtomSpec& spec, int a, int b) {
  if (a < 0 || b < 0 || a + b > kMaxMomentOrder) {
    throw ValidationError("atom_moment: need a, b >= 0 and a + b <= " + std::to_string(kMaxMomentOrder));
  }
  if (std::holds_alternative<GaussianReal>(spec.family())) {
    const int k = a + b;
    return Complex(k % 2 ? 0.0 : double_factorial(k - 1));
  }
  if (std::holds_alternative<GaussianComplexCircular>(spec.family())) {
    if (a != b) return Complex(0.0);
    return Complex(std::tgamma(a + 1.0));
  }
  Complex acc(0.0);
  for (std::size_t i = 0; i < spec.support().size(); ++i) {
    const Complex z = spec.support()[i];
    acc += spec.probs()[i] * std::pow(z, a) * std::pow(std::conj(z), b);
  }
  return acc;
}

double atom_moment(const AtomSpec& spec, int a, int b) { return atom_moment_complex(spec, a, b).real(); }

FourthMomentCheck fourth_moment_condition(const AtomSpec& spec) {
  FourthMomentCheck out;
  out.m4 = atom_moment(spec, 2, 2);
  out.target = 4.0 - spec.beta();
  out.satisfied = std::abs(out.m4 - out.target) < 1e-9;
  return out;
}

template <class Scalar>
DataMatrix<Scalar> sample_data_matrix(const AtomSpec& spec, const Dims& dims, std::uint64_t seed) {
  if (spec.beta() != beta_of<Scalar>) {
    throw ValidationError("sample_data_matrix: scalar type does not match atom beta=" + std::to_string(spec.beta()));
  }
  DataMatrix<Scalar> out;
  out.entries.resize(dims.n, dims.m);
  out.atom_id = spec.id();
  out.seed = seed;
  Engine engine = make_engine(seed);

  auto fill = [&](auto&& draw) {
    for (Index i = 0; i < dims.n; ++i) {
      for (Index j = 0; j < dims.m; ++j) out.entries(i, j) = draw();
    }
  };

  if (spec.has_finite_support()) {
    std::discrete_distribution<int> pick(spec.probs().begin(), spec.probs().end());
    const auto& pts = spec.support();
    fill([&]() -> Scalar {
      const Complex z = pts[static_cast<std::size_t>(pick(engine))];
      if constexpr (is_complex_v<Scalar>) {
        return z;
      } else {
        return z.real();
      }
    });
  } else {
    std::normal_distribution<double> normal;
    fill([&]() -> Scalar {
      if constexpr (is_complex_v<Scalar>) {
        const double re = normal(engine);
        const double im = normal(engine);
        return Complex(re, im) * M_SQRT1_2;
      } else {
        return normal(engine);
      }
    });
  }
  return out;
}

template <class Scalar>
CovarianceMatrix<Scalar> sample_covariance(const DataMatrix<Scalar>& v) {
  const Index n = v.entries.rows();
  const Index m = v.entries.cols();
  CovarianceMatrix<Scalar> out;
  out.entries = Matrix<Scalar>::Zero(n, n);
  out.entries.template selfadjointView<Eigen::Lower>().rankUpdate(v.entries, 1.0 / static_cast<double>(m));
  out.entries.template triangularView<Eigen::StrictlyUpper>() = out.entries.adjoint();
  if constexpr (is_complex_v<Scalar>) {
    for (Index i = 0; i < n; ++i) out.entries(i, i) = Complex(out.entries(i, i).real(), 0.0);
  }
  return out;
}

template DataMatrix<Real> sample_data_matrix<Real>(const AtomSpec&, const Dims&, std::uint64_t);
template DataMatrix<Complex> sample_data_matrix<Complex>(const AtomSpec&, const Dims&, std::uint64_t);
template CovarianceMatrix<Real> sample_covariance<Real>(const DataMatrix<Real>&);
template CovarianceMatrix<Complex> sample_covariance<Complex>(const DataMatrix<Complex>&);

void atom_to_config(const AtomSpec& spec, KeyValueConfig& cfg) {
  cfg.set("atom.family", spec.family_name());
  cfg.set("atom.beta", std::to_string(spec.beta()));
  if (const auto* b = std::get_if<CenteredBinomial>(&spec.family())) {
    cfg.set("atom.trials", std::to_string(b->trials));
    cfg.set("atom.p", format_double(b->p));
  } else if (const auto* d = std::get_if<Discrete>(&spec.family())) {
    std::string support, probs;
    for (std::size_t i = 0; i < d->support.size(); ++i) {
      if (i) {
        support += ",";
        probs += ",";
      }
      support += complex_text(d->support[i]);
      probs += format_double(d->probs[i]);
    }
    cfg.set("atom.support", support);
    cfg.set("atom.probs", probs);
  }
}

AtomSpec atom_from_config(const KeyValueConfig& cfg) {
  const std::string name = cfg.get_string("atom.family", "gaussian-real");
  AtomFamily family;
  if (name == "gaussian-real") {
    family = GaussianReal{};
  } else if (name == "gaussian-complex-circular") {
    family = GaussianComplexCircular{};
  } else if (name == "rademacher") {
    family = Rademacher{};
  } else if (name == "centered-binomial") {
    CenteredBinomial b;
    b.trials = static_cast<int>(cfg.get_int("atom.trials", b.trials));
    b.p = cfg.get_double("atom.p", b.p);
    family = b;
  } else if (name == "discrete") {
    Discrete d;
    for (const auto& item : split(cfg.get_string("atom.support"), ',')) {
      const auto parts = split(item, ':');
      if (parts.empty() || parts.size() > 2) throw ValidationError("config key 'atom.support': bad point '" + item + "'");
      KeyValueConfig tmp;
      tmp.set("re", parts[0]);
      tmp.set("im", parts.size() == 2 ? parts[1] : "0");
      d.support.emplace_back(tmp.get_double("re"), tmp.get_double("im"));
    }
    d.probs = cfg.get_double_list("atom.probs");
    family = d;
  } else {
    throw ValidationError("config key 'atom.family': unknown family '" + name + "'");
  }
  if (cfg.has("atom.beta")) {
    return make_atom_spec(std::move(family), static_cast<int>(cfg.get_int("atom.beta")));
  }
  return make_atom_spec(std::move(family));
}

}  // namespace eigbridge

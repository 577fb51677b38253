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

#include "eigbridge/limitcov.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "eigbridge/io.hpp"

namespace eigbridge {
namespace {

// Mixed moment E[v^a conj(v)^b] under the moment model used for the limit:
// real laws have E v^2 = 1 and E v^4 = m4; circular complex laws have
// E|v|^2 = 1, E|v|^4 = m4 and vanishing unbalanced moments. Odd real moments
// of order >= 3 and anything beyond order 4 are left symbolic ("unknown").
struct Monomial {
  bool zero = false;
  bool unknown = false;
  int degree = 0;
};

Monomial model_moment(int beta, int a, int b) {
  const int order = a + b;
  Monomial out;
  if (order == 0) return out;
  if (beta == 2) {
    if (a != b) {
      out.zero = true;
    } else if (a == 2) {
      out.degree = 1;
    } else if (a > 2) {
      out.unknown = true;
    }
    return out;
  }
  switch (order) {
    case 1:
      out.zero = true;
      break;
    case 2:
      break;
    case 4:
      out.degree = 1;
      break;
    default:
      out.unknown = true;
  }
  return out;
}

Monomial& operator*=(Monomial& lhs, const Monomial& rhs) {
  lhs.zero = lhs.zero || rhs.zero;
  lhs.unknown = lhs.unknown || rhs.unknown;
  lhs.degree += rhs.degree;
  return lhs;
}

M4Polynomial to_polynomial(const Monomial& mono) {
  if (mono.zero) return {};
  if (mono.unknown) throw ValidationError("expectation factor needs a moment outside the m4 model (unsupported order)");
  M4Polynomial p;
  p.coeffs.assign(static_cast<std::size_t>(mono.degree + 1), 0);
  p.coeffs.back() = 1;
  return p;
}

M4Polynomial model_efactor(const TraversalGraph& g, int beta) {
  Monomial joint, first, second;
  for (const auto& e : g.edges) {
    joint *= model_moment(beta, e.counts[0][0] + e.counts[1][0], e.counts[0][1] + e.counts[1][1]);
    first *= model_moment(beta, e.counts[0][0], e.counts[0][1]);
    second *= model_moment(beta, e.counts[1][0], e.counts[1][1]);
  }
  const M4Polynomial lhs = to_polynomial(joint);
  // A vanishing factor kills the product even if its partner is symbolic.
  if (first.zero || second.zero) return lhs;
  return lhs - to_polynomial(first) * to_polynomial(second);
}

void trim(M4Polynomial& p) {
  while (!p.coeffs.empty() && p.coeffs.back() == 0) p.coeffs.pop_back();
}

int find_root(std::vector<int>& parent, int v) {
  while (parent[static_cast<std::size_t>(v)] != v) {
    parent[static_cast<std::size_t>(v)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(v)])];
    v = parent[static_cast<std::size_t>(v)];
  }
  return v;
}

void check_caps(int k1, int k2) {
  if (k1 < 1 || k2 < 1 || k1 > kMaxEnumerationPower || k2 > kMaxEnumerationPower) {
    throw ValidationError("enumeration cap: need 1 <= k1, k2 <= " + std::to_string(kMaxEnumerationPower) +
                          " (got k1=" + std::to_string(k1) + ", k2=" + std::to_string(k2) + ")");
  }
}

bool closes_paths(const IndexSet& index, const SetPartition& pi) {
  for (int l = 0; l < 2; ++l) {
    if (pi[static_cast<std::size_t>(index.row_pos(l, 0))] != pi[static_cast<std::size_t>(index.row_pos(l, index.k(l)))]) {
      return false;
    }
  }
  return true;
}

std::string labels_json(const SetPartition& p) {
  std::string out = "[";
  for (std::size_t i = 0; i < p.labels.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(p.labels[i]);
  }
  return out + "]";
}

}  // namespace

const char* to_string(GraphClass c) {
  switch (c) {
    case GraphClass::kTree:
      return "tree";
    case GraphClass::kBracelet:
      return "bracelet";
    case GraphClass::kExcluded:
      return "excluded";
  }
  return "?";
}

double SWeight::operator()(double s1, double s2) const {
  return std::pow(s1, s1_pow) * std::pow(s2, s2_pow) * std::pow(std::min(s1, s2), min_pow);
}

std::string SWeight::to_string() const {
  std::string out;
  auto factor = [&](const std::string& name, int pow) {
    if (pow == 0) return;
    if (!out.empty()) out += "*";
    out += name;
    if (pow > 1) out += "^" + std::to_string(pow);
  };
  factor("s1", s1_pow);
  factor("s2", s2_pow);
  factor("min(s1,s2)", min_pow);
  return out.empty() ? "1" : out;
}

double M4Polynomial::operator()(double m4) const {
  double acc = 0.0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * m4 + static_cast<double>(*it);
  return acc;
}

bool M4Polynomial::is_zero() const {
  return std::all_of(coeffs.begin(), coeffs.end(), [](long long c) { return c == 0; });
}

std::string M4Polynomial::to_string() const {
  std::string out;
  for (int d = static_cast<int>(coeffs.size()) - 1; d >= 0; --d) {
    const long long c = coeffs[static_cast<std::size_t>(d)];
    if (c == 0) continue;
    const long long mag = c < 0 ? -c : c;
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    if (d == 0) {
      out += std::to_string(mag);
      continue;
    }
    if (mag != 1) out += std::to_string(mag) + "*";
    out += "m4";
    if (d > 1) out += "^" + std::to_string(d);
  }
  return out.empty() ? "0" : out;
}

M4Polynomial& M4Polynomial::operator+=(const M4Polynomial& other) {
  if (coeffs.size() < other.coeffs.size()) coeffs.resize(other.coeffs.size(), 0);
  for (std::size_t i = 0; i < other.coeffs.size(); ++i) coeffs[i] += other.coeffs[i];
  trim(*this);
  return *this;
}

M4Polynomial operator-(const M4Polynomial& lhs, const M4Polynomial& rhs) {
  M4Polynomial out = lhs;
  if (out.coeffs.size() < rhs.coeffs.size()) out.coeffs.resize(rhs.coeffs.size(), 0);
  for (std::size_t i = 0; i < rhs.coeffs.size(); ++i) out.coeffs[i] -= rhs.coeffs[i];
  trim(out);
  return out;
}

M4Polynomial operator*(const M4Polynomial& lhs, const M4Polynomial& rhs) {
  M4Polynomial out;
  if (lhs.coeffs.empty() || rhs.coeffs.empty()) return out;
  out.coeffs.assign(lhs.coeffs.size() + rhs.coeffs.size() - 1, 0);
  for (std::size_t i = 0; i < lhs.coeffs.size(); ++i) {
    for (std::size_t j = 0; j < rhs.coeffs.size(); ++j) out.coeffs[i + j] += lhs.coeffs[i] * rhs.coeffs[j];
  }
  trim(out);
  return out;
}

bool operator==(const M4Polynomial& lhs, const M4Polynomial& rhs) {
  M4Polynomial a = lhs, b = rhs;
  trim(a);
  trim(b);
  return a.coeffs == b.coeffs;
}

LimitTerm classify_pair(const IndexSet& index, const PartitionPair& pair) {
  if (static_cast<int>(pair.pi.size()) != index.row_size() ||
      static_cast<int>(pair.gamma.size()) != index.column_size()) {
    throw ValidationError("classify_pair: partition sizes do not match the index set");
  }
  LimitTerm term;
  term.pair = pair;
  term.pi_size = pair.pi.blocks;
  term.gamma_size = pair.gamma.blocks;
  term.y_power = pair.pi.blocks;

  auto& g = term.graph;
  g.row_vertices = pair.pi.blocks;
  g.column_vertices = pair.gamma.blocks;
  std::vector<int> edge_id(static_cast<std::size_t>(g.row_vertices * g.column_vertices), -1);
  auto edge = [&](int row, int col) -> EdgeTraversal& {
    int& id = edge_id[static_cast<std::size_t>(row * g.column_vertices + col)];
    if (id < 0) {
      id = static_cast<int>(g.edges.size());
      g.edges.push_back(EdgeTraversal{row, col, {}});
    }
    return g.edges[static_cast<std::size_t>(id)];
  };
  for (int l = 0; l < 2; ++l) {
    for (int h = 1; h <= index.k(l); ++h) {
      const int col = pair.gamma[static_cast<std::size_t>(index.column_pos(l, h))];
      const int from = pair.pi[static_cast<std::size_t>(index.row_pos(l, h - 1))];
      const int to = pair.pi[static_cast<std::size_t>(index.row_pos(l, h))];
      ++edge(from, col).counts[static_cast<std::size_t>(l)][0];
      ++edge(to, col).counts[static_cast<std::size_t>(l)][1];
    }
  }

  std::vector<int> parent(static_cast<std::size_t>(g.row_vertices + g.column_vertices));
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& e : g.edges) {
    const int a = find_root(parent, e.row_block);
    const int b = find_root(parent, g.row_vertices + e.column_block);
    if (a != b) parent[static_cast<std::size_t>(a)] = b;
  }
  g.components = 0;
  for (int v = 0; v < static_cast<int>(parent.size()); ++v) {
    if (find_root(parent, v) == v) ++g.components;
  }

  // s-labels: s_l on both endpoints of path l, 1 elsewhere.
  for (const auto& block : pair.pi.block_lists()) {
    bool has1 = false, has2 = false;
    for (int x : block) {
      for (int l = 0; l < 2; ++l) {
        if (x == index.row_pos(l, 0) || x == index.row_pos(l, index.k(l))) (l == 0 ? has1 : has2) = true;
      }
    }
    if (has1 && has2) {
      ++term.s_weight.min_pow;
    } else if (has1) {
      ++term.s_weight.s1_pow;
    } else if (has2) {
      ++term.s_weight.s2_pow;
    }
  }

  const int big_k = index.total();
  const bool closed = closes_paths(index, pair.pi);
  const bool doubled = std::all_of(g.edges.begin(), g.edges.end(), [](const auto& e) { return e.visits() >= 2; });
  const bool shared =
      std::any_of(g.edges.begin(), g.edges.end(), [](const auto& e) { return e.visits(0) > 0 && e.visits(1) > 0; });
  const int vertices = term.pi_size + term.gamma_size;
  if (!(closed && doubled && shared)) return term;

  // Consequences of the counting lemma for two paths; each is a hard error.
  if (g.components > 1 || vertices > g.components - 1 + big_k) {
    throw EnumerationError("counting lemma violated: components=" + std::to_string(g.components) +
                           ", vertices=" + std::to_string(vertices) + ", K=" + std::to_string(big_k));
  }
  if (vertices < big_k) return term;
  if (term.edge_count() > big_k) {
    throw EnumerationError("admissible pair with " + std::to_string(term.edge_count()) + " edges > K=" +
                           std::to_string(big_k));
  }
  if (term.edge_count() == big_k - 1) {
    term.classification = GraphClass::kTree;
  } else if (term.edge_count() == big_k) {
    term.classification = GraphClass::kBracelet;
  } else {
    throw EnumerationError("admissible pair is neither a tree nor a bracelet (edges=" +
                           std::to_string(term.edge_count()) + ", K=" + std::to_string(big_k) + ")");
  }
  term.efactor_real = model_efactor(g, 1);
  term.efactor_complex = model_efactor(g, 2);
  return term;
}

std::vector<LimitTerm> enumerate_pairs(int k1, int k2) {
  check_caps(k1, k2);
  const IndexSet index{k1, k2};
  const int big_k = index.total();

  std::vector<SetPartition> pis;
  SetPartition pi = first_set_partition(index.row_size());
  do {
    if (closes_paths(index, pi)) pis.push_back(pi);
  } while (next_set_partition(pi));
  const std::vector<SetPartition> gammas = all_set_partitions(index.column_size());

  std::vector<LimitTerm> out;
  for (const auto& p : pis) {
    for (const auto& gm : gammas) {
      if (p.blocks + gm.blocks < big_k) continue;
      LimitTerm term = classify_pair(index, PartitionPair{p, gm});
      if (term.classification != GraphClass::kExcluded) out.push_back(std::move(term));
    }
  }
  return out;
}

double expectation_factor(const LimitTerm& term, const AtomSpec& spec) {
  if (term.classification == GraphClass::kExcluded) {
    throw ValidationError("expectation_factor: term is not admissible");
  }
  Complex joint(1.0), first(1.0), second(1.0);
  for (const auto& e : term.graph.edges) {
    joint *= atom_moment_complex(spec, e.counts[0][0] + e.counts[1][0], e.counts[0][1] + e.counts[1][1]);
    first *= atom_moment_complex(spec, e.counts[0][0], e.counts[0][1]);
    second *= atom_moment_complex(spec, e.counts[1][0], e.counts[1][1]);
  }
  return (joint - first * second).real();
}

CovKernel::CovKernel(int k1, int k2, int beta) : k1_(k1), k2_(k2), beta_(beta) {
  if (beta != 1 && beta != 2) throw ValidationError("CovKernel: beta must be 1 or 2");
  terms_ = enumerate_pairs(k1, k2);
  std::map<std::pair<SWeight, int>, M4Polynomial> grouped;
  for (const auto& t : terms_) grouped[{t.s_weight, t.y_power}] += t.efactor(beta);
  for (auto& [key, poly] : grouped) {
    if (!poly.is_zero()) groups_.push_back(Group{key.first, key.second, poly});
  }
}

double CovKernel::evaluate(double m4, double y, double s1, double s2) const {
  if (!(s1 >= 0.0 && s1 <= 1.0 && s2 >= 0.0 && s2 <= 1.0)) {
    throw ValidationError("limit_cov: s1, s2 must lie in [0,1]");
  }
  if (!(y > 0.0)) throw ValidationError("limit_cov: y must be positive");
  double acc = 0.0;
  for (const auto& g : groups_) acc += g.s_weight(s1, s2) * std::pow(y, g.y_power) * g.efactor(m4);
  return acc;
}

double limit_cov(const CovKernel& kernel, double m4, double y, double s1, double s2) {
  return kernel.evaluate(m4, y, s1, s2);
}

double limit_cov_centered(const CovKernel& kernel, double m4, double y, double s1, double s2) {
  return kernel.evaluate(m4, y, s1, s2) - s2 * kernel.evaluate(m4, y, s1, 1.0) -
         s1 * kernel.evaluate(m4, y, 1.0, s2) + s1 * s2 * kernel.evaluate(m4, y, 1.0, 1.0);
}

namespace {

double matchings(const RealMatrix& cov, std::vector<bool>& used) {
  const auto first = std::find(used.begin(), used.end(), false);
  if (first == used.end()) return 1.0;
  const auto i = static_cast<std::size_t>(first - used.begin());
  used[i] = true;
  double acc = 0.0;
  for (std::size_t j = i + 1; j < used.size(); ++j) {
    if (used[j]) continue;
    used[j] = true;
    acc += cov(static_cast<Index>(i), static_cast<Index>(j)) * matchings(cov, used);
    used[j] = false;
  }
  used[i] = false;
  return acc;
}

}  // namespace

double wick_joint_moment(const RealMatrix& cov, int p) {
  if (p < 0 || p % 2 != 0) throw ValidationError("wick_joint_moment: p must be even (odd joint moments vanish)");
  if (p > 8) throw ValidationError("wick_joint_moment: p must be <= 8");
  if (cov.rows() < p || cov.cols() < p) throw ValidationError("wick_joint_moment: covariance table smaller than p");
  std::vector<bool> used(static_cast<std::size_t>(p), false);
  return matchings(cov, used);
}

double exact_small_oracle(const AtomSpec& spec, const Dims& dims, int k1, int k2, double s1, double s2) {
  if (!spec.has_finite_support()) throw ValidationError("exact_small_oracle: atom law must have finite support");
  if (dims.n > 3 || dims.m > 3) throw ValidationError("exact_small_oracle: need n, m <= 3");
  if (k1 < 1 || k2 < 1 || k1 > 8 || k2 > 8) throw ValidationError("exact_small_oracle: need 1 <= k <= 8");
  const auto cells = static_cast<std::size_t>(dims.n * dims.m);
  const std::size_t base = spec.support().size();
  const double states = std::pow(static_cast<double>(base), static_cast<double>(cells));
  if (states > static_cast<double>(1u << 20)) {
    throw ValidationError("exact_small_oracle: state space " + format_double(states) + " exceeds 2^20");
  }
  const Index n = dims.n;
  const Index rows1 = floor_index(n, s1);
  const Index rows2 = floor_index(n, s2);

  auto statistic = [&](const ComplexMatrix& x, int k, Index rows) {
    if (rows == 0 || rows == n) return 0.0;
    ComplexMatrix power = x;
    for (int p = 1; p < k; ++p) power = (power * x).eval();
    double head = 0.0, trace = 0.0;
    for (Index i = 0; i < n; ++i) {
      trace += power(i, i).real();
      if (i < rows) head += power(i, i).real();
    }
    return head - static_cast<double>(rows) / static_cast<double>(n) * trace;
  };

  std::vector<std::size_t> digits(cells, 0);
  ComplexMatrix v(dims.n, dims.m);
  double expectation = 0.0;
  while (true) {
    double prob = 1.0;
    for (std::size_t c = 0; c < cells; ++c) {
      // Row-major cell order.
      v(static_cast<Index>(c) / dims.m, static_cast<Index>(c) % dims.m) = spec.support()[digits[c]];
      prob *= spec.probs()[digits[c]];
    }
    const ComplexMatrix x = v * v.adjoint() / static_cast<double>(dims.m);
    expectation += prob * statistic(x, k1, rows1) * statistic(x, k2, rows2);

    std::size_t c = 0;
    while (c < cells && ++digits[c] == base) digits[c++] = 0;
    if (c == cells) break;
  }
  return expectation;
}

std::string term_json_line(const LimitTerm& term, int beta) {
  return std::string("{\"pi\":") + labels_json(term.pair.pi) + ",\"gamma\":" + labels_json(term.pair.gamma) +
         ",\"class\":\"" + to_string(term.classification) + "\",\"sweight\":\"" + term.s_weight.to_string() +
         "\",\"ypow\":" + std::to_string(term.y_power) + ",\"efactor\":\"" + term.efactor(beta).to_string() +
         "\",\"edges\":" + std::to_string(term.edge_count()) + "}";
}

}  // namespace eigbridge

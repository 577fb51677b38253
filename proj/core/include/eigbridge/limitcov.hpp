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

#include <array>
#include <string>
#include <vector>

#include "eigbridge/ensembles.hpp"
#include "eigbridge/partitions.hpp"
#include "eigbridge/types.hpp"

namespace eigbridge {

/// Row-index set E = {0^1..k1^1, 0^2..k2^2} and column-index set
/// E_gamma = {1^1..k1^1, 1^2..k2^2} for a pair of closed paths, each in the
/// listed order.
struct IndexSet {
  int k1 = 1;
  int k2 = 1;

  [[nodiscard]] int total() const { return k1 + k2; }  // K
  [[nodiscard]] int k(int path) const { return path == 0 ? k1 : k2; }
  [[nodiscard]] int row_size() const { return k1 + k2 + 2; }
  [[nodiscard]] int column_size() const { return k1 + k2; }
  /// Position of h^path (0 <= h <= k) inside E.
  [[nodiscard]] int row_pos(int path, int h) const { return path == 0 ? h : k1 + 1 + h; }
  /// Position of h^path (1 <= h <= k) inside E_gamma.
  [[nodiscard]] int column_pos(int path, int h) const { return path == 0 ? h - 1 : k1 + h - 1; }
};

/// (pi, gamma): level-set partitions of the row and column index families.
struct PartitionPair {
  SetPartition pi;
  SetPartition gamma;
};

/// One undirected edge {row block, column block} with its traversal record.
/// counts[path][0] counts steps row -> column (a factor v), counts[path][1]
/// steps column -> row (a factor conj(v)).
struct EdgeTraversal {
  int row_block = 0;
  int column_block = 0;
  std::array<std::array<int, 2>, 2> counts{};

  [[nodiscard]] int visits(int path) const { return counts[path][0] + counts[path][1]; }
  [[nodiscard]] int visits() const { return visits(0) + visits(1); }
};

/// Bipartite multigraph traced by the two closed paths.
struct TraversalGraph {
  int row_vertices = 0;
  int column_vertices = 0;
  std::vector<EdgeTraversal> edges;
  int components = 0;
};

enum class GraphClass { kTree, kBracelet, kExcluded };

const char* to_string(GraphClass c);

/// prod over pi-blocks of the smallest s-label in the block, written as
/// s1^s1_pow * s2^s2_pow * min(s1,s2)^min_pow.
struct SWeight {
  int s1_pow = 0;
  int s2_pow = 0;
  int min_pow = 0;

  [[nodiscard]] double operator()(double s1, double s2) const;
  [[nodiscard]] std::string to_string() const;
  friend auto operator<=>(const SWeight&, const SWeight&) = default;
};

/// Polynomial in m4 = E|v|^4 with integer coefficients (index = degree).
struct M4Polynomial {
  std::vector<long long> coeffs;

  [[nodiscard]] double operator()(double m4) const;
  [[nodiscard]] std::string to_string() const;
  [[nodiscard]] bool is_zero() const;
  M4Polynomial& operator+=(const M4Polynomial& other);
  friend M4Polynomial operator-(const M4Polynomial& lhs, const M4Polynomial& rhs);
  friend M4Polynomial operator*(const M4Polynomial& lhs, const M4Polynomial& rhs);
  friend bool operator==(const M4Polynomial& lhs, const M4Polynomial& rhs);
};

/// One partition pair with its graph and its asymptotic contribution
/// s_weight(s1, s2) * y^y_power * efactor(m4).
struct LimitTerm {
  PartitionPair pair;
  TraversalGraph graph;
  GraphClass classification = GraphClass::kExcluded;
  int pi_size = 0;
  int gamma_size = 0;
  SWeight s_weight;
  int y_power = 0;
  /// E[(V1 - E V1)(V2 - E V2)] under the real (beta = 1) and circular
  /// complex (beta = 2) moment models.
  M4Polynomial efactor_real;
  M4Polynomial efactor_complex;

  [[nodiscard]] const M4Polynomial& efactor(int beta) const { return beta == 2 ? efactor_complex : efactor_real; }
  [[nodiscard]] int edge_count() const { return static_cast<int>(graph.edges.size()); }
};

/// Largest k1, k2 accepted by enumerate_pairs.
inline constexpr int kMaxEnumerationPower = 4;

/// Builds the traversal graph of (pi, gamma) and classifies it. Pairs that
/// fail path closure, double visiting, edge sharing, or the vertex count
/// bound K <= |pi| + |gamma| come back as kExcluded. For admissible pairs the
/// connectivity, vertex-count, and edge-count consequences are asserted and an
/// EnumerationError is thrown if any fails.
LimitTerm classify_pair(const IndexSet& index, const PartitionPair& pair);

/// Every admissible (pi, gamma) for (k1, k2), pi in lexicographic RGS order
/// and gamma in lexicographic order within each pi.
std::vector<LimitTerm> enumerate_pairs(int k1, int k2);

/// E[(V1 - E V1)(V2 - E V2)] from the exact mixed moments of `spec`.
double expectation_factor(const LimitTerm& term, const AtomSpec& spec);

/// Terms of one (k1, k2) pair, pre-aggregated by (s-weight, y-power).
class CovKernel {
 public:
  CovKernel(int k1, int k2, int beta = 1);

  [[nodiscard]] int k1() const { return k1_; }
  [[nodiscard]] int k2() const { return k2_; }
  [[nodiscard]] int beta() const { return beta_; }
  [[nodiscard]] const std::vector<LimitTerm>& terms() const { return terms_; }

  /// Limit of E[Z_{k1}(s1) Z_{k2}(s2)] for the expectation-centered sums
  /// Z_k(s) = sum_{i <= ns} (e_i^* X^k e_i - E e_i^* X^k e_i).
  [[nodiscard]] double evaluate(double m4, double y, double s1, double s2) const;

 private:
  struct Group {
    SWeight s_weight;
    int y_power = 0;
    M4Polynomial efactor;
  };

  int k1_;
  int k2_;
  int beta_;
  std::vector<LimitTerm> terms_;
  std::vector<Group> groups_;
};

double limit_cov(const CovKernel& kernel, double m4, double y, double s1, double s2);

/// Limit covariance of the trace-centered statistics M_{k1}(s1), M_{k2}(s2):
/// C(s1,s2) - s2 C(s1,1) - s1 C(1,s2) + s1 s2 C(1,1).
double limit_cov_centered(const CovKernel& kernel, double m4, double y, double s1, double s2);

/// Sum over perfect matchings of {0..p-1} of prod cov(l, l'). p even, p <= 8.
double wick_joint_moment(const RealMatrix& cov, int p);

/// Exact E[M_{k1}(s1) M_{k2}(s2)] at finite (n, m) by enumerating every data
/// matrix over a finite atom support. Requires n, m <= 3 and
/// |support|^(n m) <= 2^20.
double exact_small_oracle(const AtomSpec& spec, const Dims& dims, int k1, int k2, double s1, double s2);

/// One JSON object per term: {pi, gamma, class, sweight, ypow, efactor}.
std::string term_json_line(const LimitTerm& term, int beta);

}  // namespace eigbridge

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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "eigbridge/ensembles.hpp"
#include "eigbridge/limitcov.hpp"
#include "eigbridge/process.hpp"
#include "eigbridge/rng.hpp"
#include "eigbridge/stats.hpp"
#include "oracles.hpp"

namespace eigbridge {
namespace {

const std::vector<std::pair<int, int>> kSmallCases{{1, 1}, {1, 2}, {2, 2}, {2, 3}};

TEST(EnumeratePairs, CapIsEnforced) {
  EXPECT_THROW(enumerate_pairs(0, 1), ValidationError);
  EXPECT_THROW(enumerate_pairs(1, kMaxEnumerationPower + 1), ValidationError);
  EXPECT_THROW(CovKernel(5, 1), ValidationError);
}

TEST(EnumeratePairs, FirstMomentsGiveASingleTree) {
  const auto terms = enumerate_pairs(1, 1);
  ASSERT_EQ(terms.size(), 1u);
  const auto& t = terms.front();
  EXPECT_EQ(t.pair.pi.labels, (std::vector<int>{0, 0, 0, 0}));
  EXPECT_EQ(t.pair.gamma.labels, (std::vector<int>{0, 0}));
  EXPECT_EQ(t.classification, GraphClass::kTree);
  EXPECT_EQ(t.s_weight, (SWeight{0, 0, 1}));
  EXPECT_EQ(t.s_weight.to_string(), "min(s1,s2)");
  EXPECT_EQ(t.y_power, 1);
  EXPECT_EQ(t.graph.components, 1);
  EXPECT_EQ(t.pi_size + t.gamma_size, 2);
}

TEST(EnumeratePairs, GraphInvariantsHold) {
  for (const auto& [k1, k2] : kSmallCases) {
    const int big_k = k1 + k2;
    for (const auto& t : enumerate_pairs(k1, k2)) {
      EXPECT_EQ(t.graph.components, 1);
      EXPECT_EQ(t.pi_size + t.gamma_size, big_k);
      EXPECT_LE(t.edge_count(), big_k);
      EXPECT_TRUE((t.classification == GraphClass::kTree && t.edge_count() == big_k - 1) ||
                  (t.classification == GraphClass::kBracelet && t.edge_count() == big_k));
      EXPECT_EQ(t.y_power, t.pi_size);
    }
  }
}

TEST(EnumeratePairs, MatchesBruteForceTupleEnumeration) {
  for (const auto& [k1, k2] : std::vector<std::pair<int, int>>{{1, 1}, {1, 2}, {2, 2}, {2, 3}}) {
    const auto terms = enumerate_pairs(k1, k2);
    const auto brute = testing::brute_admissible(k1, k2);
    ASSERT_EQ(terms.size(), brute.size()) << k1 << "," << k2;
    std::set<std::pair<std::vector<int>, std::vector<int>>> ours, theirs;
    for (const auto& t : terms) ours.insert({t.pair.pi.labels, t.pair.gamma.labels});
    for (const auto& b : brute) theirs.insert({b.pi, b.gamma});
    EXPECT_EQ(ours, theirs);
    // Same order as the brute force (lexicographic in pi, then gamma).
    for (std::size_t i = 0; i < terms.size(); ++i) {
      EXPECT_EQ(terms[i].pair.pi.labels, brute[i].pi);
      EXPECT_EQ(terms[i].pair.gamma.labels, brute[i].gamma);
      EXPECT_EQ(terms[i].edge_count(), brute[i].edges);
    }
  }
}

TEST(EnumeratePairs, KnownTermCounts) {
  EXPECT_EQ(enumerate_pairs(1, 2).size(), 4u);
  EXPECT_EQ(enumerate_pairs(2, 2).size(), 20u);
  EXPECT_EQ(enumerate_pairs(2, 3).size(), 84u);
  EXPECT_EQ(enumerate_pairs(3, 3).size(), 375u);
}

TEST(ClassifyPair, DisjointClosedLoopsShareNoEdge) {
  // pi = {{0^1, 1^1}, {0^2, 1^2}}, gamma = one block: each path is a loop on
  // its own edge, so no edge is visited by both paths.
  const IndexSet index{1, 1};
  const PartitionPair pair{level_set_partition({0, 0, 1, 1}), level_set_partition({0, 0})};
  const auto term = classify_pair(index, pair);
  EXPECT_EQ(term.classification, GraphClass::kExcluded);
  EXPECT_EQ(term.edge_count(), 2);
  EXPECT_EQ(term.s_weight, (SWeight{1, 1, 0}));
}

TEST(ClassifyPair, OpenPathIsExcluded) {
  const IndexSet index{1, 1};
  const PartitionPair pair{level_set_partition({0, 1, 0, 0}), level_set_partition({0, 0})};
  EXPECT_EQ(classify_pair(index, pair).classification, GraphClass::kExcluded);
  EXPECT_THROW(classify_pair(index, PartitionPair{level_set_partition({0, 0}), level_set_partition({0, 0})}),
               ValidationError);
}

TEST(ClassifyPair, EdgeOrientationCounts) {
  const auto term = enumerate_pairs(1, 1).front();
  ASSERT_EQ(term.graph.edges.size(), 1u);
  const auto& e = term.graph.edges.front();
  EXPECT_EQ(e.counts[0][0], 1);
  EXPECT_EQ(e.counts[0][1], 1);
  EXPECT_EQ(e.counts[1][0], 1);
  EXPECT_EQ(e.counts[1][1], 1);
  EXPECT_EQ(e.visits(), 4);
}

TEST(ExpectationFactor, TreesAndBraceletsInTheRealCase) {
  const auto gauss = make_atom_spec(GaussianReal{});
  const auto rad = make_atom_spec(Rademacher{});
  const auto bin = make_atom_spec(CenteredBinomial{});
  const auto skewed = make_atom_spec(Discrete{{Complex(0.0), Complex(3.0)}, {2.0 / 3.0, 1.0 / 3.0}});
  const double skewed_m4 = atom_moment(skewed, 4, 0);
  for (const auto& [k1, k2] : kSmallCases) {
    for (const auto& t : enumerate_pairs(k1, k2)) {
      const double want_gauss = t.classification == GraphClass::kTree ? 2.0 : 1.0;
      EXPECT_NEAR(expectation_factor(t, gauss), want_gauss, 1e-12);
      EXPECT_NEAR(expectation_factor(t, rad), t.classification == GraphClass::kTree ? 0.0 : 1.0, 1e-12);
      EXPECT_NEAR(expectation_factor(t, bin), want_gauss, 1e-12);
      EXPECT_NEAR(expectation_factor(t, skewed), t.efactor_real(skewed_m4), 1e-12);
      EXPECT_EQ(t.efactor_real.to_string(), t.classification == GraphClass::kTree ? "m4 - 1" : "1");
    }
  }
}

TEST(ExpectationFactor, ComplexBraceletsDependOnWindingDirection) {
  const auto cg = make_atom_spec(GaussianComplexCircular{});
  int zero = 0, one = 0;
  for (const auto& t : enumerate_pairs(2, 2)) {
    const double f = expectation_factor(t, cg);
    EXPECT_NEAR(f, t.efactor_complex(2.0), 1e-12);
    if (t.classification == GraphClass::kTree) {
      EXPECT_EQ(t.efactor_complex.to_string(), "m4 - 1");
    } else {
      (std::abs(f) < 1e-12 ? zero : one)++;
    }
  }
  EXPECT_EQ(zero, 2);
  EXPECT_EQ(one, 2);
}

TEST(ExpectationFactor, RejectsExcludedTerms) {
  LimitTerm t;
  EXPECT_THROW(expectation_factor(t, make_atom_spec(GaussianReal{})), ValidationError);
}

TEST(M4Polynomial, Arithmetic) {
  const M4Polynomial one{{1}}, m4{{0, 1}};
  const M4Polynomial p = m4 * m4 - one;
  EXPECT_EQ(p.to_string(), "m4^2 - 1");
  EXPECT_DOUBLE_EQ(p(3.0), 8.0);
  EXPECT_TRUE((one - one).is_zero());
  EXPECT_EQ((one - one).to_string(), "0");
  EXPECT_EQ((M4Polynomial{{-3, 2}}).to_string(), "2*m4 - 3");
  M4Polynomial acc;
  acc += m4;
  acc += m4;
  EXPECT_EQ(acc, (M4Polynomial{{0, 2}}));
}

TEST(LimitCov, FirstMomentsMatchClosedForm) {
  const CovKernel kernel(1, 1);
  const auto grid = uniform_grid(11);
  for (double m4 : {1.0, 2.0, 3.0, 5.0}) {
    for (double s1 : grid) {
      for (double s2 : grid) {
        const double want = (m4 - 1.0) * (std::min(s1, s2) - s1 * s2);
        ASSERT_NEAR(limit_cov_centered(kernel, m4, 1.0, s1, s2), want, 1e-12);
      }
    }
  }
  EXPECT_NEAR(limit_cov_centered(kernel, 3.0, 1.0, 0.5, 0.5), 0.5, 1e-15);
}

TEST(LimitCov, FirstMomentsCarryTheAspectRatio) {
  const CovKernel kernel(1, 1);
  for (double y : {0.25, 0.5, 2.0}) {
    EXPECT_NEAR(limit_cov_centered(kernel, 3.0, y, 0.3, 0.6), y * 2.0 * (0.3 - 0.18), 1e-14);
    EXPECT_NEAR(limit_cov(kernel, 3.0, y, 1.0, 1.0), y * 2.0, 1e-14);
  }
}

TEST(LimitCov, GaussianAtomsMatchMarchenkoPasturMoments) {
  for (int beta : {1, 2}) {
    for (int k1 = 1; k1 <= 3; ++k1) {
      for (int k2 = k1; k2 <= 3; ++k2) {
        const CovKernel kernel(k1, k2, beta);
        for (double y : {0.5, 1.0, 2.0}) {
          for (auto [s1, s2] : std::vector<std::pair<double, double>>{{0.3, 0.8}, {0.5, 0.5}, {0.9, 0.2}}) {
            const double want = testing::gaussian_limit_cov(k1, k2, y, s1, s2, beta);
            EXPECT_NEAR(limit_cov_centered(kernel, 4.0 - beta, y, s1, s2), want, 1e-10 * std::max(1.0, std::abs(want)))
                << "beta=" << beta << " k=(" << k1 << "," << k2 << ") y=" << y;
          }
        }
      }
    }
  }
}

TEST(LimitCov, SecondMomentsAtUnitRatio) {
  // Catalan moments 1, 2, 5, 14 give Cov(lambda^2, lambda^2) = 10.
  const CovKernel kernel(2, 2);
  EXPECT_NEAR(limit_cov_centered(kernel, 3.0, 1.0, 0.4, 0.7), 20.0 * (0.4 - 0.28), 1e-12);
}

TEST(LimitCov, SymmetricUnderSwap) {
  const CovKernel a(1, 3), b(3, 1);
  for (double m4 : {1.5, 3.0}) {
    for (auto [s1, s2] : std::vector<std::pair<double, double>>{{0.2, 0.7}, {0.6, 0.6}, {1.0, 0.3}}) {
      EXPECT_NEAR(limit_cov(a, m4, 0.7, s1, s2), limit_cov(b, m4, 0.7, s2, s1), 1e-12);
      EXPECT_NEAR(limit_cov_centered(a, m4, 0.7, s1, s2), limit_cov_centered(b, m4, 0.7, s2, s1), 1e-12);
    }
  }
}

TEST(LimitCov, BorderAndRademacherVanish) {
  const CovKernel k11(1, 1), k22(2, 2);
  for (double s : {0.0, 0.3, 1.0}) {
    EXPECT_NEAR(limit_cov_centered(k22, 3.0, 0.5, 0.0, s), 0.0, 1e-14);
    EXPECT_NEAR(limit_cov_centered(k22, 3.0, 0.5, 1.0, s), 0.0, 1e-12);
    EXPECT_NEAR(limit_cov_centered(k11, 1.0, 1.0, 0.4, s), 0.0, 1e-15);
  }
}

TEST(LimitCov, InputChecks) {
  const CovKernel kernel(1, 1);
  EXPECT_THROW((void)limit_cov(kernel, 3.0, 1.0, -0.1, 0.5), ValidationError);
  EXPECT_THROW((void)limit_cov(kernel, 3.0, 0.0, 0.5, 0.5), ValidationError);
  EXPECT_THROW(CovKernel(1, 1, 3), ValidationError);
}

TEST(LimitCov, FiniteSizeConvergence) {
  // Second moments need (X^2)_ii = |row i of X|^2; dense evaluation avoids
  // an eigendecomposition per replica.
  const double s1 = 0.4, s2 = 0.7;
  const double limit = limit_cov_centered(CovKernel(1, 2), 3.0, 1.0, s1, s2);
  const auto spec = make_atom_spec(GaussianReal{});
  std::vector<double> errors, ses;
  for (Index n : {100, 200, 400}) {
    const int replicas = 2000;
    std::vector<double> products(replicas);
    for (int r = 0; r < replicas; ++r) {
      const auto x = sample_covariance(sample_data_matrix<Real>(spec, Dims(n, n), derive_seed(31 + n, r))).entries;
      const Vector d1 = x.diagonal();
      const Vector d2 = x.rowwise().squaredNorm();
      const Index h1 = floor_index(n, s1), h2 = floor_index(n, s2);
      const double m1 = d1.head(h1).sum() - double(h1) / n * d1.sum();
      const double m2 = d2.head(h2).sum() - double(h2) / n * d2.sum();
      products[static_cast<std::size_t>(r)] = m1 * m2;
    }
    const MeanEstimate est = empirical_mean(products);
    errors.push_back(std::abs(est.mean - limit));
    ses.push_back(est.std_error);
  }
  const bool monotone = errors[0] >= errors[1] && errors[1] >= errors[2];
  EXPECT_TRUE(monotone || errors[2] <= 3.0 * ses[2])
      << "errors " << errors[0] << " " << errors[1] << " " << errors[2] << " se " << ses[2];
}

TEST(LimitCov, UncenteredKernelAtFullTrace) {
  // The uncentered kernel at s1 = s2 = 1 describes Tr X - n, not M_1(1),
  // which vanishes identically.
  const double want = limit_cov(CovKernel(1, 1), 3.0, 0.5, 1.0, 1.0);
  EXPECT_NEAR(want, 1.0, 1e-14);
  const auto spec = make_atom_spec(GaussianReal{});
  std::vector<double> squares(2000);
  for (std::size_t r = 0; r < squares.size(); ++r) {
    const auto v = sample_data_matrix<Real>(spec, Dims(500, 1000), derive_seed(41, r));
    const double z = v.entries.squaredNorm() / 1000.0 - 500.0;
    squares[r] = z * z;
  }
  const MeanEstimate est = empirical_mean(squares);
  EXPECT_LT(std::abs(est.mean - want), 3.0 * est.std_error) << est.mean << " +- " << est.std_error;
}

TEST(Wick, MatchingSums) {
  RealMatrix c = RealMatrix::Constant(8, 8, 0.5);
  EXPECT_DOUBLE_EQ(wick_joint_moment(c, 2), 0.5);
  EXPECT_DOUBLE_EQ(wick_joint_moment(c, 4), 3 * 0.25);
  EXPECT_DOUBLE_EQ(wick_joint_moment(RealMatrix::Ones(8, 8), 6), 15.0);
  EXPECT_DOUBLE_EQ(wick_joint_moment(RealMatrix::Ones(8, 8), 8), 105.0);
  EXPECT_DOUBLE_EQ(wick_joint_moment(c, 0), 1.0);
  RealMatrix d = RealMatrix::Zero(4, 4);
  d(0, 1) = d(1, 0) = 2.0;
  d(2, 3) = d(3, 2) = 3.0;
  d(0, 2) = d(2, 0) = 5.0;
  d(1, 3) = d(3, 1) = 7.0;
  EXPECT_DOUBLE_EQ(wick_joint_moment(d, 4), 2.0 * 3.0 + 5.0 * 7.0);
  EXPECT_THROW(wick_joint_moment(c, 3), ValidationError);
  EXPECT_THROW(wick_joint_moment(RealMatrix::Ones(10, 10), 10), ValidationError);
  EXPECT_THROW(wick_joint_moment(RealMatrix::Ones(2, 2), 4), ValidationError);
}

TEST(ExactSmallOracle, TrivialCases) {
  const auto rad = make_atom_spec(Rademacher{});
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(exact_small_oracle(rad, Dims(1, 1), k, k, 1.0, 1.0), 0.0);
  EXPECT_EQ(exact_small_oracle(rad, Dims(2, 2), 1, 1, 1.0, 1.0), 0.0);
  // Rademacher rows have X_ii = 1, so M_1 vanishes identically.
  EXPECT_EQ(exact_small_oracle(rad, Dims(2, 2), 1, 1, 0.5, 0.5), 0.0);
}

TEST(ExactSmallOracle, Limits) {
  EXPECT_THROW(exact_small_oracle(make_atom_spec(GaussianReal{}), Dims(2, 2), 1, 1, 0.5, 0.5), ValidationError);
  EXPECT_THROW(exact_small_oracle(make_atom_spec(Rademacher{}), Dims(4, 2), 1, 1, 0.5, 0.5), ValidationError);
  // 7^9 outcomes exceed 2^20.
  EXPECT_THROW(exact_small_oracle(make_atom_spec(CenteredBinomial{}), Dims(3, 3), 1, 1, 0.5, 0.5), ValidationError);
}

TEST(ExactSmallOracle, HandComputedValue) {
  // n = 2, m = 1 two-point law: X = v v^T, M_1(1/2) = (v1^2 - v2^2)/2 so
  // E[M_1^2] = (E v^4 - 1)/2.
  const auto spec = make_atom_spec(Discrete{{Complex(0.0), Complex(3.0)}, {2.0 / 3.0, 1.0 / 3.0}});
  EXPECT_NEAR(exact_small_oracle(spec, Dims(2, 1), 1, 1, 0.5, 0.5), (atom_moment(spec, 4, 0) - 1.0) / 2.0, 1e-13);
}

TEST(ExactSmallOracle, AgreesWithMonteCarlo) {
  const auto rad = make_atom_spec(Rademacher{});
  const double exact = exact_small_oracle(rad, Dims(3, 2), 2, 2, 0.34, 0.67);
  std::vector<double> products(200000);
  for (std::size_t r = 0; r < products.size(); ++r) {
    const auto x = sample_covariance(sample_data_matrix<Real>(rad, Dims(3, 2), derive_seed(5, r)));
    products[r] = moment_statistic_dense(x, 0.34, 2) * moment_statistic_dense(x, 0.67, 2);
  }
  const MeanEstimate est = empirical_mean(products);
  EXPECT_GT(exact, 0.0);
  EXPECT_LT(std::abs(est.mean - exact), 4.0 * est.std_error);
}

TEST(TermJson, Fields) {
  const auto t = enumerate_pairs(1, 1).front();
  const std::string want =
      R"js({"pi":[0,0,0,0],"gamma":[0,0],"class":"tree","sweight":"min(s1,s2)","ypow":1,"efactor":"m4 - 1","edges":1})js";
  EXPECT_EQ(term_json_line(t, 1), want);
}

}  // namespace
}  // namespace eigbridge

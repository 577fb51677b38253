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
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "eigbridge/config.hpp"
#include "eigbridge/ensembles.hpp"
#include "eigbridge/process.hpp"
#include "eigbridge/rng.hpp"
#include "eigbridge/types.hpp"

namespace eigbridge {

/// One moment probe M_k(s).
struct MomentProbe {
  double s = 0.5;
  int k = 1;
};

struct OutputFlags {
  bool per_replica_grids = false;
  bool eigenvalues = false;
  bool max_jump = true;
  bool ks = true;
};

struct ExperimentConfig {
  AtomSpec atom = make_atom_spec(GaussianReal{});
  Dims dims{4, 4};
  int replicas = 1;
  std::uint64_t master_seed = 0;
  std::vector<double> s_grid;
  std::vector<double> t_grid;
  std::vector<MomentProbe> probes;
  OutputFlags outputs;
  int threads = 1;

  /// Throws ValidationError unless replicas >= 1, grids are sorted inside
  /// [0, 1] and probes have 1 <= k <= kMaxMomentPower.
  void validate() const;
  /// True when some requested statistic needs eigenvectors.
  [[nodiscard]] bool needs_eigenvectors() const;
};

/// Reads the experiment keys (`dims.n`, `dims.m`, `replicas`, `seed`,
/// `grid.s`, `grid.t`, `grid.points`, `probes`, `output.*`, `threads`, and
/// `atom.*`). Unknown keys are rejected by name.
ExperimentConfig experiment_from_config(const KeyValueConfig& cfg);
/// Canonical key-value form. `threads` is omitted: it never changes results.
KeyValueConfig experiment_to_config(const ExperimentConfig& config);
/// FNV-1a of the canonical text.
std::uint64_t config_hash(const ExperimentConfig& config);
/// `s:k` pairs separated by commas, e.g. `0.4:1,0.7:1`.
std::vector<MomentProbe> parse_probes(const std::string& text);

struct ReplicaResult {
  std::uint64_t seed = 0;
  BridgeGrid grid;
  std::vector<MomentStatistic> moments;  // one per probe, in probe order
  double max_jump = 0.0;                  // 0 when not requested
  double lambda_max = 0.0;
  double ks = 0.0;                        // 0 when not requested
  Vector eigenvalues;                     // empty unless outputs.eigenvalues
};

struct ReplicaEnsemble {
  std::vector<ReplicaResult> replicas;  // by replica index
  std::uint64_t config_hash = 0;
};

/// Runs `count` tasks on up to `threads` workers. Tasks are claimed by index;
/// the first exception (lowest index) is rethrown after all workers stop.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task);

/// Replica r samples from derive_seed(master_seed, r). Results do not depend
/// on `threads`. An eigensolver failure is rethrown as ConvergenceError
/// naming the replica.
ReplicaEnsemble run_replicas(const ExperimentConfig& config);

/// Per-replica values of probe `index`.
std::vector<double> probe_samples(const ReplicaEnsemble& ensemble, std::size_t index);
/// Per-replica values of the grid point (si, ti).
std::vector<double> grid_samples(const ReplicaEnsemble& ensemble, std::size_t si, std::size_t ti);

struct CovEstimate {
  double cov = 0.0;
  /// Standard error from the sample variance of the centered products
  /// (x_r - mean x)(y_r - mean y); a delta-method approximation.
  double std_error = 0.0;
  bool degenerate = false;
};

/// Unbiased sample covariance. Needs at least two paired samples. A constant
/// input gives (0, 0) with `degenerate` set.
CovEstimate empirical_cov(std::span<const double> x, std::span<const double> y);

/// Sample mean with its standard error.
struct MeanEstimate {
  double mean = 0.0;
  double std_error = 0.0;
};
MeanEstimate empirical_mean(std::span<const double> x);

/// (min(s,s') - s s') (min(t,t') - t t').
double bridge_cov(double s, double t, double s2, double t2);

/// Haar-distributed orthogonal (Real) or unitary (Complex) matrix: Q of the
/// Householder QR of a standard Ginibre matrix, with column j multiplied by
/// the phase of R_jj so that R has a positive diagonal.
template <class Scalar>
Matrix<Scalar> haar_sample(Index n, std::uint64_t seed);

/// Bridge grids of |u_ij|^2 for independent Haar matrices; replica r uses
/// derive_seed(seed, r).
std::vector<BridgeGrid> haar_bridge_replicas(Index n, int beta, int replicas, std::uint64_t seed,
                                             std::span<const double> s_grid, std::span<const double> t_grid,
                                             int threads);

struct GaussianityProbe {
  double skewness = 0.0;
  double excess_kurtosis = 0.0;
  double skew_z = 0.0;    // skewness / sqrt(6/R)
  double exkurt_z = 0.0;  // excess kurtosis / sqrt(24/R)
  bool degenerate = false;
};

/// Needs at least 100 samples.
GaussianityProbe gaussianity_probe(std::span<const double> samples);

/// Pointwise mean and unbiased variance of the replica grids.
struct GridSurfaces {
  RealMatrix mean;
  RealMatrix variance;
};
GridSurfaces grid_surfaces(const ReplicaEnsemble& ensemble);

/// JSON summary: config echo, per-probe covariance table, Gaussianity
/// z-scores, lambda_max, KS and max-jump summaries.
std::string ensemble_summary_json(const ExperimentConfig& config, const ReplicaEnsemble& ensemble);

}  // namespace eigbridge

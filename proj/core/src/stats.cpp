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

#include "eigbridge/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <random>
#include <thread>

#include <json.hpp>

#include "eigbridge/io.hpp"
#include "eigbridge/spectral.hpp"

namespace eigbridge {
namespace {

std::string join_doubles(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ",";
    out += format_double(values[i]);
  }
  return out;
}

void check_grid(const std::vector<double>& grid, const char* name) {
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] >= 0.0 && grid[i] <= 1.0)) {
      throw ValidationError(std::string(name) + ": values must lie in [0,1]");
    }
    if (i > 0 && grid[i] < grid[i - 1]) throw ValidationError(std::string(name) + ": values must be sorted");
  }
}

template <class Scalar>
ReplicaResult run_one(const ExperimentConfig& config, std::uint64_t seed) {
  const auto x = sample_covariance(sample_data_matrix<Scalar>(config.atom, config.dims, seed));
  ReplicaResult r;
  r.seed = seed;
  Vector lambda;
  if (config.needs_eigenvectors()) {
    auto d = eigh(x);
    const RealMatrix w = d.weights();
    if (!config.s_grid.empty() && !config.t_grid.empty()) {
      r.grid = bridge_grid(w, beta_of<Scalar>, config.s_grid, config.t_grid);
    }
    r.moments.reserve(config.probes.size());
    for (const auto& p : config.probes) r.moments.push_back(moment_statistic(w, d.eigenvalues, p.s, p.k));
    if (config.outputs.max_jump) r.max_jump = max_jump(w);
    lambda = std::move(d.eigenvalues);
  } else {
    lambda = eigvalsh(x.entries);
  }
  r.lambda_max = lambda(lambda.size() - 1);
  if (config.outputs.ks) r.ks = ks_distance(as_span(lambda), mp_law(config.dims.y()));
  if (config.outputs.eigenvalues) r.eigenvalues = std::move(lambda);
  return r;
}

struct Moments {
  double mean = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
};

Moments central_moments(std::span<const double> x) {
  Moments out;
  const double r = static_cast<double>(x.size());
  for (double v : x) out.mean += v;
  out.mean /= r;
  for (double v : x) {
    const double d = v - out.mean;
    const double d2 = d * d;
    out.m2 += d2;
    out.m3 += d2 * d;
    out.m4 += d2 * d2;
  }
  out.m2 /= r;
  out.m3 /= r;
  out.m4 /= r;
  return out;
}

bool is_constant(std::span<const double> x) {
  return std::all_of(x.begin(), x.end(), [&](double v) { return v == x.front(); });
}

}  // namespace

void ExperimentConfig::validate() const {
  if (replicas < 1) throw ValidationError("replicas must be >= 1 (got " + std::to_string(replicas) + ")");
  if (threads < 1) throw ValidationError("threads must be >= 1");
  check_grid(s_grid, "grid.s");
  check_grid(t_grid, "grid.t");
  for (const auto& p : probes) {
    if (!(p.s >= 0.0 && p.s <= 1.0)) throw ValidationError("probes: s must lie in [0,1]");
    if (p.k < 1 || p.k > kMaxMomentPower) {
      throw ValidationError("probes: k must lie in [1," + std::to_string(kMaxMomentPower) + "]");
    }
  }
}

bool ExperimentConfig::needs_eigenvectors() const {
  return (!s_grid.empty() && !t_grid.empty()) || !probes.empty() || outputs.max_jump;
}

std::vector<MomentProbe> parse_probes(const std::string& text) {
  std::vector<MomentProbe> out;
  for (const auto& item : split(text, ',')) {
    const auto parts = split(item, ':');
    if (parts.size() != 2) throw ValidationError("config key 'probes': expected s:k, got '" + item + "'");
    KeyValueConfig tmp;
    tmp.set("probes.s", parts[0]);
    tmp.set("probes.k", parts[1]);
    out.push_back(MomentProbe{tmp.get_double("probes.s"), static_cast<int>(tmp.get_int("probes.k"))});
  }
  return out;
}

ExperimentConfig experiment_from_config(const KeyValueConfig& cfg) {
  ExperimentConfig c;
  c.atom = atom_from_config(cfg);
  c.dims = Dims(cfg.get_int("dims.n", 4), cfg.get_int("dims.m", cfg.get_int("dims.n", 4)));
  c.replicas = static_cast<int>(cfg.get_int("replicas", 1));
  c.master_seed = cfg.get_uint64("seed", 0);
  if (cfg.has("grid.points")) {
    const auto points = cfg.get_int("grid.points");
    if (points < 2 || points > 100000) throw ValidationError("config key 'grid.points': must lie in [2, 100000]");
    c.s_grid = c.t_grid = uniform_grid(static_cast<std::size_t>(points));
  }
  if (cfg.has("grid.s")) c.s_grid = cfg.get_double_list("grid.s");
  if (cfg.has("grid.t")) c.t_grid = cfg.get_double_list("grid.t");
  if (cfg.has("probes")) c.probes = parse_probes(cfg.get_string("probes"));
  c.outputs.per_replica_grids = cfg.get_bool("output.grids", false);
  c.outputs.eigenvalues = cfg.get_bool("output.eigenvalues", false);
  c.outputs.max_jump = cfg.get_bool("output.max_jump", true);
  c.outputs.ks = cfg.get_bool("output.ks", true);
  c.threads = static_cast<int>(cfg.get_int("threads", 1));
  cfg.require_all_used();
  c.validate();
  return c;
}

KeyValueConfig experiment_to_config(const ExperimentConfig& c) {
  KeyValueConfig cfg;
  atom_to_config(c.atom, cfg);
  cfg.set("dims.n", std::to_string(c.dims.n));
  cfg.set("dims.m", std::to_string(c.dims.m));
  cfg.set("replicas", std::to_string(c.replicas));
  cfg.set("seed", std::to_string(c.master_seed));
  if (!c.s_grid.empty()) cfg.set("grid.s", join_doubles(c.s_grid));
  if (!c.t_grid.empty()) cfg.set("grid.t", join_doubles(c.t_grid));
  if (!c.probes.empty()) {
    std::string text;
    for (std::size_t i = 0; i < c.probes.size(); ++i) {
      if (i) text += ",";
      text += format_double(c.probes[i].s) + ":" + std::to_string(c.probes[i].k);
    }
    cfg.set("probes", text);
  }
  cfg.set("output.grids", c.outputs.per_replica_grids ? "true" : "false");
  cfg.set("output.eigenvalues", c.outputs.eigenvalues ? "true" : "false");
  cfg.set("output.max_jump", c.outputs.max_jump ? "true" : "false");
  cfg.set("output.ks", c.outputs.ks ? "true" : "false");
  return cfg;
}

std::uint64_t config_hash(const ExperimentConfig& config) {
  return fnv1a64(experiment_to_config(config).to_text());
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& task) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::mutex mutex;
  std::size_t failed_index = count;
  std::exception_ptr failure;
  auto worker = [&] {
    while (!failed.load(std::memory_order_relaxed)) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        task(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (i < failed_index) {
          failed_index = i;
          failure = std::current_exception();
        }
        failed = true;
      }
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(workers, count); ++w) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

ReplicaEnsemble run_replicas(const ExperimentConfig& config) {
  config.validate();
  ReplicaEnsemble ensemble;
  ensemble.config_hash = config_hash(config);
  ensemble.replicas.resize(static_cast<std::size_t>(config.replicas));
  parallel_for(ensemble.replicas.size(), config.threads, [&](std::size_t r) {
    const std::uint64_t seed = derive_seed(config.master_seed, r);
    try {
      ensemble.replicas[r] =
          config.atom.beta() == 2 ? run_one<Complex>(config, seed) : run_one<Real>(config, seed);
    } catch (const ConvergenceError& e) {
      throw ConvergenceError("replica " + std::to_string(r) + ": " + e.what());
    }
  });
  return ensemble;
}

std::vector<double> probe_samples(const ReplicaEnsemble& ensemble, std::size_t index) {
  std::vector<double> out;
  out.reserve(ensemble.replicas.size());
  for (const auto& r : ensemble.replicas) {
    if (index >= r.moments.size()) throw ValidationError("probe index out of range");
    out.push_back(r.moments[index].value);
  }
  return out;
}

std::vector<double> grid_samples(const ReplicaEnsemble& ensemble, std::size_t si, std::size_t ti) {
  std::vector<double> out;
  out.reserve(ensemble.replicas.size());
  for (const auto& r : ensemble.replicas) {
    if (si >= r.grid.s_grid.size() || ti >= r.grid.t_grid.size()) {
      throw ValidationError("grid index out of range");
    }
    out.push_back(r.grid.at(si, ti));
  }
  return out;
}

CovEstimate empirical_cov(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("empirical_cov: sample sizes differ");
  if (x.size() < 2) throw ValidationError("empirical_cov: need at least 2 replicas");
  if (is_constant(x) || is_constant(y)) return CovEstimate{0.0, 0.0, true};
  const double r = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= r;
  my /= r;
  std::vector<double> products(x.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    products[i] = (x[i] - mx) * (y[i] - my);
    sum += products[i];
  }
  const double mean_product = sum / r;
  double ss = 0.0;
  for (double p : products) ss += (p - mean_product) * (p - mean_product);
  CovEstimate out;
  out.cov = sum / (r - 1.0);
  out.std_error = std::sqrt(ss / (r - 1.0) / r);
  return out;
}

MeanEstimate empirical_mean(std::span<const double> x) {
  if (x.size() < 2) throw ValidationError("empirical_mean: need at least 2 samples");
  const Moments m = central_moments(x);
  const double r = static_cast<double>(x.size());
  return MeanEstimate{m.mean, std::sqrt(m.m2 * r / (r - 1.0) / r)};
}

double bridge_cov(double s, double t, double s2, double t2) {
  for (double v : {s, t, s2, t2}) {
    if (!(v >= 0.0 && v <= 1.0)) throw ValidationError("bridge_cov: arguments must lie in [0,1]");
  }
  return (std::min(s, s2) - s * s2) * (std::min(t, t2) - t * t2);
}

template <class Scalar>
Matrix<Scalar> haar_sample(Index n, std::uint64_t seed) {
  if (n < 1) throw ValidationError("haar_sample: n must be >= 1");
  Engine engine = make_engine(seed);
  std::normal_distribution<double> normal;
  Matrix<Scalar> g(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      if constexpr (is_complex_v<Scalar>) {
        const double re = normal(engine);
        const double im = normal(engine);
        g(i, j) = Complex(re, im) / std::sqrt(2.0);
      } else {
        g(i, j) = normal(engine);
      }
    }
  }
  const Eigen::HouseholderQR<Matrix<Scalar>> qr(g);
  Matrix<Scalar> q = qr.householderQ() * Matrix<Scalar>::Identity(n, n);
  for (Index j = 0; j < n; ++j) {
    const Scalar r = qr.matrixQR()(j, j);
    const double mag = std::abs(r);
    if (mag > 0.0) q.col(j) *= r / mag;
  }
  return q;
}

template Matrix<Real> haar_sample<Real>(Index, std::uint64_t);
template Matrix<Complex> haar_sample<Complex>(Index, std::uint64_t);

std::vector<BridgeGrid> haar_bridge_replicas(Index n, int beta, int replicas, std::uint64_t seed,
                                             std::span<const double> s_grid, std::span<const double> t_grid,
                                             int threads) {
  if (beta != 1 && beta != 2) throw ValidationError("haar_bridge_replicas: beta must be 1 or 2");
  if (replicas < 1) throw ValidationError("haar_bridge_replicas: replicas must be >= 1");
  std::vector<BridgeGrid> out(static_cast<std::size_t>(replicas));
  parallel_for(out.size(), threads, [&](std::size_t r) {
    const std::uint64_t s = derive_seed(seed, r);
    const RealMatrix w =
        beta == 2 ? RealMatrix(haar_sample<Complex>(n, s).cwiseAbs2()) : RealMatrix(haar_sample<Real>(n, s).cwiseAbs2());
    out[r] = bridge_grid(w, beta, s_grid, t_grid);
  });
  return out;
}

GaussianityProbe gaussianity_probe(std::span<const double> samples) {
  if (samples.size() < 100) throw ValidationError("gaussianity_probe: need at least 100 samples");
  GaussianityProbe out;
  if (is_constant(samples)) {
    out.degenerate = true;
    return out;
  }
  const Moments m = central_moments(samples);
  const double r = static_cast<double>(samples.size());
  out.skewness = m.m3 / std::pow(m.m2, 1.5);
  out.excess_kurtosis = m.m4 / (m.m2 * m.m2) - 3.0;
  out.skew_z = out.skewness / std::sqrt(6.0 / r);
  out.exkurt_z = out.excess_kurtosis / std::sqrt(24.0 / r);
  return out;
}

GridSurfaces grid_surfaces(const ReplicaEnsemble& ensemble) {
  GridSurfaces out;
  if (ensemble.replicas.empty() || ensemble.replicas.front().grid.values.size() == 0) return out;
  const RealMatrix& first = ensemble.replicas.front().grid.values;
  out.mean = RealMatrix::Zero(first.rows(), first.cols());
  out.variance = RealMatrix::Zero(first.rows(), first.cols());
  for (const auto& r : ensemble.replicas) out.mean += r.grid.values;
  const double count = static_cast<double>(ensemble.replicas.size());
  out.mean /= count;
  if (ensemble.replicas.size() < 2) return out;
  for (const auto& r : ensemble.replicas) out.variance += (r.grid.values - out.mean).cwiseAbs2();
  out.variance /= count - 1.0;
  return out;
}

std::string ensemble_summary_json(const ExperimentConfig& config, const ReplicaEnsemble& ensemble) {
  using nlohmann::json;
  json doc;
  json echo = json::object();
  const KeyValueConfig canonical = experiment_to_config(config);
  for (const auto& [k, v] : canonical.entries()) echo[k] = v;
  doc["config"] = echo;
  doc["config_hash"] = format_hex64(ensemble.config_hash);
  doc["replicas"] = ensemble.replicas.size();

  json table = json::array();
  json gauss = json::array();
  const bool enough = ensemble.replicas.size() >= 2;
  for (std::size_t i = 0; i < config.probes.size(); ++i) {
    const auto xi = probe_samples(ensemble, i);
    for (std::size_t j = i; j < config.probes.size() && enough; ++j) {
      const auto xj = probe_samples(ensemble, j);
      const CovEstimate c = empirical_cov(xi, xj);
      table.push_back({{"s1", config.probes[i].s},
                       {"k1", config.probes[i].k},
                       {"s2", config.probes[j].s},
                       {"k2", config.probes[j].k},
                       {"cov", c.cov},
                       {"stderr", c.std_error},
                       {"degenerate", c.degenerate}});
    }
    if (xi.size() >= 100) {
      const GaussianityProbe g = gaussianity_probe(xi);
      gauss.push_back({{"s", config.probes[i].s},
                       {"k", config.probes[i].k},
                       {"skewness", g.skewness},
                       {"excess_kurtosis", g.excess_kurtosis},
                       {"skew_z", g.skew_z},
                       {"exkurt_z", g.exkurt_z},
                       {"degenerate", g.degenerate}});
    }
  }
  doc["covariance"] = table;
  doc["gaussianity"] = gauss;

  auto summarize = [&](auto field) {
    std::vector<double> v;
    for (const auto& r : ensemble.replicas) v.push_back(field(r));
    std::sort(v.begin(), v.end());
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    return json{{"mean", mean}, {"min", v.front()}, {"median", v[v.size() / 2]}, {"max", v.back()}};
  };
  if (!ensemble.replicas.empty()) {
    doc["lambda_max"] = summarize([](const ReplicaResult& r) { return r.lambda_max; });
    doc["mp_edge"] = mp_law(config.dims.y()).b;
    if (config.outputs.ks) doc["ks"] = summarize([](const ReplicaResult& r) { return r.ks; });
    if (config.outputs.max_jump) doc["max_jump"] = summarize([](const ReplicaResult& r) { return r.max_jump; });
  }
  return doc.dump(2) + "\n";
}

}  // namespace eigbridge

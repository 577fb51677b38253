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

#include "eigbridge/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "eigbridge/ensembles.hpp"
#include "eigbridge/io.hpp"
#include "eigbridge/limitcov.hpp"
#include "eigbridge/process.hpp"
#include "eigbridge/rng.hpp"
#include "eigbridge/spectral.hpp"
#include "eigbridge/stats.hpp"

#ifndef EIGBRIDGE_VERSION
#define EIGBRIDGE_VERSION "0.0.0"
#endif

namespace eigbridge::cli {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Globals {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  int threads = 1;
};

KeyValueConfig load_config(const Globals& g, bool required) {
  if (g.config_path.empty()) {
    if (required) throw ValidationError("this command needs --config");
    return {};
  }
  return KeyValueConfig::load(g.config_path);
}

ExperimentConfig experiment(const Globals& g, KeyValueConfig cfg) {
  if (g.seed) cfg.set("seed", std::to_string(*g.seed));
  cfg.set("threads", std::to_string(g.threads));
  return experiment_from_config(cfg);
}

void finish(const Globals& g, const std::string& command, const KeyValueConfig& effective, std::uint64_t seed) {
  write_text_file(fs::path(g.out_dir) / "manifest.json", manifest_json(command, effective, seed));
}

json grid_json(const BridgeGrid& grid, const ExperimentConfig& c, std::uint64_t seed) {
  json rows = json::array();
  for (Index i = 0; i < grid.values.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < grid.values.cols(); ++j) row.push_back(grid.values(i, j));
    rows.push_back(row);
  }
  return json{{"n", c.dims.n}, {"m", c.dims.m},      {"beta", grid.beta},     {"seed", seed},
              {"atom", c.atom.id()}, {"s", grid.s_grid}, {"t", grid.t_grid}, {"values", rows}};
}

int cmd_simulate(const Globals& g) {
  ExperimentConfig c = experiment(g, load_config(g, true));
  if (c.s_grid.empty()) c.s_grid = uniform_grid(21);
  if (c.t_grid.empty()) c.t_grid = uniform_grid(21);
  ensure_output_dir(g.out_dir);
  const ReplicaEnsemble ens = run_replicas(c);
  const fs::path out(g.out_dir);
  for (std::size_t r = 0; r < ens.replicas.size(); ++r) {
    const auto& rep = ens.replicas[r];
    const std::string tag = "r" + std::to_string(r);
    if (c.replicas == 1 || c.outputs.per_replica_grids) {
      write_text_file(out / ("grid_" + tag + ".csv"), bridge_grid_csv(rep.grid));
      write_text_file(out / ("grid_" + tag + ".json"), grid_json(rep.grid, c, rep.seed).dump() + "\n");
    }
    if (c.outputs.eigenvalues) write_text_file(out / ("eigenvalues_" + tag + ".csv"), eigenvalues_csv(as_span(rep.eigenvalues)));
  }
  const GridSurfaces surf = grid_surfaces(ens);
  CsvWriter csv({"s", "t", "mean", "variance"});
  for (std::size_t i = 0; i < c.s_grid.size(); ++i) {
    for (std::size_t j = 0; j < c.t_grid.size(); ++j) {
      csv.row({c.s_grid[i], c.t_grid[j], surf.mean(static_cast<Index>(i), static_cast<Index>(j)),
               surf.variance(static_cast<Index>(i), static_cast<Index>(j))});
    }
  }
  csv.save(out / "surface.csv");
  write_text_file(out / "summary.json", ensemble_summary_json(c, ens));
  finish(g, "simulate", experiment_to_config(c), c.master_seed);
  return kExitOk;
}

int cmd_cov_empirical(const Globals& g) {
  const ExperimentConfig c = experiment(g, load_config(g, true));
  if (c.probes.empty()) throw ValidationError("cov-empirical: config key 'probes' is required");
  if (c.replicas < 2) throw ValidationError("cov-empirical: need replicas >= 2");
  ensure_output_dir(g.out_dir);
  const ReplicaEnsemble ens = run_replicas(c);
  CsvWriter csv({"s1", "s2", "k1", "k2", "value", "stderr"});
  for (std::size_t i = 0; i < c.probes.size(); ++i) {
    const auto xi = probe_samples(ens, i);
    for (std::size_t j = i; j < c.probes.size(); ++j) {
      const CovEstimate e = empirical_cov(xi, probe_samples(ens, j));
      csv.row({c.probes[i].s, c.probes[j].s, static_cast<double>(c.probes[i].k), static_cast<double>(c.probes[j].k),
               e.cov, e.std_error});
    }
  }
  csv.save(fs::path(g.out_dir) / "cov_empirical.csv");
  write_text_file(fs::path(g.out_dir) / "summary.json", ensemble_summary_json(c, ens));
  finish(g, "cov-empirical", experiment_to_config(c), c.master_seed);
  return kExitOk;
}

struct LimitArgs {
  int k1 = 1;
  int k2 = 1;
  double m4 = 3.0;
  double y = 1.0;
  int beta = 1;
  int points = 11;
};

int cmd_cov_limit(const Globals& g, const LimitArgs& a) {
  if (a.points < 2) throw ValidationError("cov-limit: --points must be >= 2");
  const CovKernel kernel(a.k1, a.k2, a.beta);
  ensure_output_dir(g.out_dir);
  const auto grid = uniform_grid(static_cast<std::size_t>(a.points));
  CsvWriter csv({"s1", "s2", "k1", "k2", "value"});
  for (double s1 : grid) {
    for (double s2 : grid) {
      csv.row({s1, s2, static_cast<double>(a.k1), static_cast<double>(a.k2),
               limit_cov_centered(kernel, a.m4, a.y, s1, s2)});
    }
  }
  csv.save(fs::path(g.out_dir) / "cov_limit.csv");
  std::string lines;
  for (const auto& t : kernel.terms()) lines += term_json_line(t, a.beta) + "\n";
  write_text_file(fs::path(g.out_dir) / "terms.jsonl", lines);

  KeyValueConfig eff;
  eff.set("k1", std::to_string(a.k1));
  eff.set("k2", std::to_string(a.k2));
  eff.set("m4", format_double(a.m4));
  eff.set("y", format_double(a.y));
  eff.set("beta", std::to_string(a.beta));
  eff.set("points", std::to_string(a.points));
  finish(g, "cov-limit", eff, g.seed.value_or(0));
  return kExitOk;
}

int cmd_mp_check(const Globals& g) {
  ExperimentConfig c = experiment(g, load_config(g, true));
  c.s_grid.clear();
  c.t_grid.clear();
  c.probes.clear();
  c.outputs.max_jump = false;
  c.outputs.ks = true;
  c.outputs.eigenvalues = true;
  ensure_output_dir(g.out_dir);
  const ReplicaEnsemble ens = run_replicas(c);
  const fs::path out(g.out_dir);
  write_text_file(out / "eigenvalues.csv", eigenvalues_csv(as_span(ens.replicas.front().eigenvalues)));
  CsvWriter csv({"replica", "ks", "lambda_max"});
  for (std::size_t r = 0; r < ens.replicas.size(); ++r) {
    csv.row({static_cast<double>(r), ens.replicas[r].ks, ens.replicas[r].lambda_max});
  }
  csv.save(out / "mp_check.csv");
  const MPLaw law = mp_law(c.dims.y());
  json doc{{"y", law.y}, {"a", law.a}, {"b", law.b}, {"atom_mass", law.atom_mass}};
  json reps = json::array();
  for (const auto& r : ens.replicas) reps.push_back({{"seed", r.seed}, {"ks", r.ks}, {"lambda_max", r.lambda_max}});
  doc["replicas"] = reps;
  write_text_file(out / "mp_check.json", doc.dump(2) + "\n");
  finish(g, "mp-check", experiment_to_config(c), c.master_seed);
  return kExitOk;
}

struct HaarArgs {
  Index n = 100;
  int beta = 1;
  int replicas = 200;
  int points = 5;
};

int cmd_haar_baseline(const Globals& g, const HaarArgs& a) {
  if (a.points < 3) throw ValidationError("haar-baseline: --points must be >= 3");
  if (a.replicas < 2) throw ValidationError("haar-baseline: --replicas must be >= 2");
  const std::uint64_t seed = g.seed.value_or(0);
  const auto grid = uniform_grid(static_cast<std::size_t>(a.points));
  ensure_output_dir(g.out_dir);
  const auto grids = haar_bridge_replicas(a.n, a.beta, a.replicas, seed, grid, grid, g.threads);
  // Interior points only; the border is identically zero.
  std::vector<std::pair<std::size_t, std::size_t>> cells;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    for (std::size_t j = 1; j + 1 < grid.size(); ++j) cells.emplace_back(i, j);
  }
  auto samples = [&](std::size_t i, std::size_t j) {
    std::vector<double> v;
    for (const auto& b : grids) v.push_back(b.at(i, j));
    return v;
  };
  CsvWriter csv({"s1", "t1", "s2", "t2", "empirical", "stderr", "bridge"});
  for (std::size_t p = 0; p < cells.size(); ++p) {
    const auto x = samples(cells[p].first, cells[p].second);
    for (std::size_t q = p; q < cells.size(); ++q) {
      const CovEstimate e = empirical_cov(x, samples(cells[q].first, cells[q].second));
      const double s1 = grid[cells[p].first], t1 = grid[cells[p].second];
      const double s2 = grid[cells[q].first], t2 = grid[cells[q].second];
      csv.row({s1, t1, s2, t2, e.cov, e.std_error, bridge_cov(s1, t1, s2, t2)});
    }
  }
  csv.save(fs::path(g.out_dir) / "haar_cov.csv");
  KeyValueConfig eff;
  eff.set("n", std::to_string(a.n));
  eff.set("beta", std::to_string(a.beta));
  eff.set("replicas", std::to_string(a.replicas));
  eff.set("points", std::to_string(a.points));
  eff.set("seed", std::to_string(seed));
  finish(g, "haar-baseline", eff, seed);
  return kExitOk;
}

int cmd_identity_checks(const Globals& g, IdentitySuiteOptions opts) {
  opts.seed = g.seed.value_or(opts.seed);
  if (opts.n_max > 100) throw ValidationError("identity-checks: --n-max must be <= 100");
  ensure_output_dir(g.out_dir);
  const IdentitySuiteReport report = run_identity_suite(opts);
  write_text_file(fs::path(g.out_dir) / "identity_report.json", identity_report_json(report));
  KeyValueConfig eff;
  eff.set("instances", std::to_string(opts.instances));
  eff.set("n_max", std::to_string(opts.n_max));
  eff.set("k_max", std::to_string(opts.k_max));
  eff.set("tolerance", format_double(opts.tolerance));
  eff.set("corrupt", opts.corrupt ? "true" : "false");
  eff.set("seed", std::to_string(opts.seed));
  finish(g, "identity-checks", eff, opts.seed);
  std::cout << "max residuals: transfer=" << format_double(report.max_transfer)
            << " link=" << format_double(report.max_link)
            << " decomposition=" << format_double(report.max_decomposition) << "\n";
  if (!report.passed()) {
    throw ToleranceError("identity residual " + format_double(report.max_residual()) + " exceeds " +
                         format_double(opts.tolerance));
  }
  return kExitOk;
}

struct OracleArgs {
  int k1 = 1;
  int k2 = 1;
  double s1 = 0.5;
  double s2 = 0.5;
};

int cmd_oracle_compare(const Globals& g, const OracleArgs& a) {
  KeyValueConfig cfg = load_config(g, false);
  if (!cfg.has("dims.n")) cfg.set("dims.n", "2");
  if (!cfg.has("dims.m")) cfg.set("dims.m", "2");
  if (!cfg.has("atom.family")) cfg.set("atom.family", "rademacher");
  if (!cfg.has("replicas")) cfg.set("replicas", "100000");
  cfg.set("probes", format_double(a.s1) + ":" + std::to_string(a.k1) + "," + format_double(a.s2) + ":" +
                        std::to_string(a.k2));
  cfg.set("output.max_jump", "false");
  cfg.set("output.ks", "false");
  const ExperimentConfig c = experiment(g, cfg);
  if (c.replicas < 2) throw ValidationError("oracle-compare: need replicas >= 2");
  const double exact = exact_small_oracle(c.atom, c.dims, a.k1, a.k2, a.s1, a.s2);
  ensure_output_dir(g.out_dir);
  // Dense powers of X keep the statistic exact when the entries are.
  std::vector<double> products(static_cast<std::size_t>(c.replicas));
  parallel_for(products.size(), c.threads, [&](std::size_t r) {
    const std::uint64_t seed = derive_seed(c.master_seed, r);
    auto product = [&](auto tag) {
      using S = decltype(tag);
      const auto x = sample_covariance(sample_data_matrix<S>(c.atom, c.dims, seed));
      return moment_statistic_dense(x, a.s1, a.k1) * moment_statistic_dense(x, a.s2, a.k2);
    };
    products[r] = c.atom.beta() == 2 ? product(Complex{}) : product(Real{});
  });
  const MeanEstimate mc = empirical_mean(products);
  const double z = mc.std_error > 0.0 ? (mc.mean - exact) / mc.std_error : (mc.mean == exact ? 0.0 : INFINITY);
  json doc{{"exact", exact}, {"monte_carlo", mc.mean}, {"stderr", mc.std_error}, {"z", z},
           {"k1", a.k1},     {"k2", a.k2},             {"s1", a.s1},           {"s2", a.s2}};
  write_text_file(fs::path(g.out_dir) / "oracle_compare.json", doc.dump(2) + "\n");
  finish(g, "oracle-compare", experiment_to_config(c), c.master_seed);
  return kExitOk;
}

}  // namespace

double IdentitySuiteReport::max_residual() const {
  return std::max({max_transfer, max_link, max_decomposition});
}

IdentitySuiteReport run_identity_suite(const IdentitySuiteOptions& options) {
  if (options.instances < 1) throw ValidationError("identity suite: instances must be >= 1");
  if (options.n_max < 1) throw ValidationError("identity suite: n_max must be >= 1");
  if (options.k_max < 1 || options.k_max + 1 > kMaxMomentPower) {
    throw ValidationError("identity suite: k_max must lie in [1," + std::to_string(kMaxMomentPower - 1) + "]");
  }
  const std::vector<AtomSpec> atoms{make_atom_spec(GaussianReal{}), make_atom_spec(GaussianComplexCircular{}),
                                    make_atom_spec(Rademacher{}), make_atom_spec(CenteredBinomial{})};
  IdentitySuiteReport report;
  report.instances = options.instances;
  report.tolerance = options.tolerance;
  for (int r = 0; r < options.instances; ++r) {
    const std::uint64_t seed = derive_seed(options.seed, static_cast<std::uint64_t>(r));
    Engine engine = make_engine(seed);
    const auto n = std::uniform_int_distribution<Index>(1, options.n_max)(engine);
    const auto m = std::uniform_int_distribution<Index>(n, 2 * n)(engine);
    const int k = std::uniform_int_distribution<int>(1, options.k_max)(engine);
    double s = std::uniform_real_distribution<double>(0.0, 1.0)(engine);
    const double proxy = std::normal_distribution<double>(0.0, 2.0)(engine);
    const auto row = std::uniform_int_distribution<Index>(0, n - 1)(engine);
    const AtomSpec& atom = atoms[static_cast<std::size_t>(r) % atoms.size()];
    const Dims dims(n, m);
    const std::uint64_t data_seed = mix64(seed);

    RealMatrix w;
    Vector lambda;
    if (atom.beta() == 2) {
      auto d = eigh(sample_covariance(sample_data_matrix<Complex>(atom, dims, data_seed)));
      w = d.weights();
      lambda = std::move(d.eigenvalues);
    } else {
      auto d = eigh(sample_covariance(sample_data_matrix<Real>(atom, dims, data_seed)));
      w = d.weights();
      lambda = std::move(d.eigenvalues);
    }

    const SignedMeasure mu = weighted_spectral_measure(w, lambda, row) - empirical_spectral_measure(lambda);
    report.max_transfer = std::max(report.max_transfer, moment_transfer(mu, k).residual());
    report.max_decomposition =
        std::max(report.max_decomposition, centered_moment_decomposition(w, lambda, s, k, proxy).residual());
    if (options.corrupt && n >= 2) {
      w(0, n - 1) += 0.25;
      s = 0.5;
    }
    report.max_link = std::max(report.max_link, bridge_moment_link(w, lambda, atom.beta(), s, k).residual());
  }
  return report;
}

std::string identity_report_json(const IdentitySuiteReport& report) {
  const json doc{{"instances", report.instances},
                 {"max_residual",
                  {{"moment_transfer", report.max_transfer},
                   {"bridge_moment_link", report.max_link},
                   {"centered_moment_decomposition", report.max_decomposition}}},
                 {"tolerance", report.tolerance},
                 {"passed", report.passed()}};
  return doc.dump(2) + "\n";
}

std::string manifest_json(const std::string& command, const KeyValueConfig& effective, std::uint64_t seed) {
  const std::string text = effective.to_text();
  json cfg = json::object();
  for (const auto& [k, v] : effective.entries()) cfg[k] = v;
  const json doc{{"command", command},
                 {"config", cfg},
                 {"config_hash", format_hex64(fnv1a64(text))},
                 {"seed", seed},
                 {"versions",
                  {{"eigbridge", EIGBRIDGE_VERSION},
                   {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                 std::to_string(EIGEN_MINOR_VERSION)}}}};
  return doc.dump(2) + "\n";
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Eigenvector bridge experiments for sample covariance matrices", "eigbridge"};
  app.fallthrough();
  app.require_subcommand(1);
  app.set_version_flag("--version", EIGBRIDGE_VERSION);

  Globals g;
  app.add_option("--config", g.config_path, "key=value configuration file");
  app.add_option("--out", g.out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", g.seed, "master seed override");
  app.add_option("--threads", g.threads, "worker threads")->check(CLI::PositiveNumber)->capture_default_str();

  auto* simulate = app.add_subcommand("simulate", "bridge grids for a configured ensemble");
  auto* cov_emp = app.add_subcommand("cov-empirical", "Monte Carlo covariance of moment probes");

  LimitArgs limit;
  auto* cov_limit = app.add_subcommand("cov-limit", "limit covariance of the centered moment statistics");
  cov_limit->add_option("--k1", limit.k1)->capture_default_str();
  cov_limit->add_option("--k2", limit.k2)->capture_default_str();
  cov_limit->add_option("--m4", limit.m4, "fourth moment E|v|^4")->capture_default_str();
  cov_limit->add_option("--y", limit.y, "aspect ratio n/m")->capture_default_str();
  cov_limit->add_option("--beta", limit.beta)->check(CLI::IsMember({1, 2}))->capture_default_str();
  cov_limit->add_option("--points", limit.points, "grid points per axis")->capture_default_str();

  auto* mp = app.add_subcommand("mp-check", "eigenvalues against the Marchenko-Pastur law");

  HaarArgs haar;
  auto* haar_cmd = app.add_subcommand("haar-baseline", "bridge covariance under Haar eigenvectors");
  haar_cmd->add_option("--n", haar.n)->check(CLI::PositiveNumber)->capture_default_str();
  haar_cmd->add_option("--beta", haar.beta)->check(CLI::IsMember({1, 2}))->capture_default_str();
  haar_cmd->add_option("--replicas", haar.replicas)->capture_default_str();
  haar_cmd->add_option("--points", haar.points, "grid points per axis")->capture_default_str();

  IdentitySuiteOptions ident;
  auto* ident_cmd = app.add_subcommand("identity-checks", "exact moment identities on random instances");
  ident_cmd->add_option("--instances", ident.instances)->capture_default_str();
  ident_cmd->add_option("--n-max", ident.n_max)->capture_default_str();
  ident_cmd->add_option("--k-max", ident.k_max)->capture_default_str();
  ident_cmd->add_option("--tolerance", ident.tolerance)->capture_default_str();
  ident_cmd->add_flag("--corrupt", ident.corrupt, "perturb one weight per instance (harness self-test)");

  OracleArgs oracle;
  auto* oracle_cmd = app.add_subcommand("oracle-compare", "exhaustive small-n expectation against Monte Carlo");
  oracle_cmd->add_option("--k1", oracle.k1)->capture_default_str();
  oracle_cmd->add_option("--k2", oracle.k2)->capture_default_str();
  oracle_cmd->add_option("--s1", oracle.s1)->capture_default_str();
  oracle_cmd->add_option("--s2", oracle.s2)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(g);
    if (cov_emp->parsed()) return cmd_cov_empirical(g);
    if (cov_limit->parsed()) return cmd_cov_limit(g, limit);
    if (mp->parsed()) return cmd_mp_check(g);
    if (haar_cmd->parsed()) return cmd_haar_baseline(g, haar);
    if (ident_cmd->parsed()) return cmd_identity_checks(g, ident);
    if (oracle_cmd->parsed()) return cmd_oracle_compare(g, oracle);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ToleranceError& e) {
    std::cerr << "tolerance breach: " << e.what() << "\n";
    return kExitTolerance;
  } catch (const std::exception& e) {
    std::cerr << "fatal: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace eigbridge::cli

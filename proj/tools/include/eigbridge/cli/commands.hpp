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
#include <vector>

#include "eigbridge/config.hpp"
#include "eigbridge/types.hpp"

namespace eigbridge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitTolerance = 3;

struct IdentitySuiteOptions {
  int instances = 1000;
  Index n_max = 60;
  int k_max = 4;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  /// Perturbs one weight per instance before the bridge-moment check.
  bool corrupt = false;
};

struct IdentitySuiteReport {
  int instances = 0;
  double max_transfer = 0.0;
  double max_link = 0.0;
  double max_decomposition = 0.0;
  double tolerance = 0.0;

  [[nodiscard]] double max_residual() const;
  [[nodiscard]] bool passed() const { return max_residual() < tolerance; }
};

/// Random instances of the three exact identities. Instance r draws from
/// derive_seed(seed, r): n uniform in [1, n_max], m uniform in [n, 2n], k
/// uniform in [1, k_max], and the atom law cycling through the Gaussian
/// (real and complex), Rademacher and centered-binomial families.
IdentitySuiteReport run_identity_suite(const IdentitySuiteOptions& options);

std::string identity_report_json(const IdentitySuiteReport& report);

/// Manifest written next to every output: command, effective configuration
/// and its hash, seed, and library versions. Contains no timestamps.
std::string manifest_json(const std::string& command, const KeyValueConfig& effective, std::uint64_t seed);

/// Full command-line entry point. Returns the process exit code: 0 on
/// success, 2 on validation errors, 3 on tolerance breaches.
int run_cli(int argc, const char* const* argv);

}  // namespace eigbridge::cli

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
#include <random>
#include <string_view>

namespace eigbridge {

using Engine = std::mt19937_64;

/// SplitMix64 finalizer. Bijective on 64-bit words.
std::uint64_t mix64(std::uint64_t x);

/// Seed of the independent stream for `index` under `master`. Depends only on
/// the pair, never on scheduling.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

inline Engine make_engine(std::uint64_t seed) { return Engine(seed); }

/// FNV-1a over a byte string; used for config hashes in manifests.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace eigbridge

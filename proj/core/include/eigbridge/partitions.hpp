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
#include <vector>

namespace eigbridge {

/// A set partition of {0, ..., size-1} stored as a restricted growth string:
/// labels[0] = 0 and labels[i] <= 1 + max(labels[0..i-1]). Block labels are
/// therefore numbered by the order of their first element.
struct SetPartition {
  std::vector<int> labels;
  int blocks = 0;

  [[nodiscard]] std::size_t size() const { return labels.size(); }
  [[nodiscard]] int operator[](std::size_t i) const { return labels[i]; }
  /// Elements of each block, blocks in label order.
  [[nodiscard]] std::vector<std::vector<int>> block_lists() const;
  friend bool operator==(const SetPartition&, const SetPartition&) = default;
};

/// Steps `p` to its lexicographic successor. Returns false (leaving `p`
/// unchanged) when `p` is the last partition, the all-singletons one.
bool next_set_partition(SetPartition& p);

/// The first partition in lexicographic order: a single block.
SetPartition first_set_partition(int size);

/// Every partition of a `size`-element set in lexicographic RGS order.
std::vector<SetPartition> all_set_partitions(int size);

/// Canonical RGS of the level-set partition of an arbitrary labelling.
SetPartition level_set_partition(const std::vector<int>& values);

std::uint64_t bell_number(int n);

}  // namespace eigbridge

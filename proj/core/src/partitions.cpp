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

#include "eigbridge/partitions.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace eigbridge {

std::vector<std::vector<int>> SetPartition::block_lists() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(blocks));
  for (std::size_t i = 0; i < labels.size(); ++i) out[static_cast<std::size_t>(labels[i])].push_back(static_cast<int>(i));
  return out;
}

SetPartition first_set_partition(int size) {
  if (size < 0) throw std::invalid_argument("set partition size must be non-negative");
  SetPartition p;
  p.labels.assign(static_cast<std::size_t>(size), 0);
  p.blocks = size > 0 ? 1 : 0;
  return p;
}

bool next_set_partition(SetPartition& p) {
  const std::size_t n = p.labels.size();
  if (n < 2) return false;
  // prefix_max[i] = max(labels[0..i-1]).
  std::vector<int> prefix_max(n, 0);
  for (std::size_t i = 1; i < n; ++i) prefix_max[i] = std::max(prefix_max[i - 1], p.labels[i - 1]);
  for (std::size_t i = n - 1; i >= 1; --i) {
    if (p.labels[i] <= prefix_max[i]) {
      ++p.labels[i];
      for (std::size_t j = i + 1; j < n; ++j) p.labels[j] = 0;
      int top = 0;
      for (int v : p.labels) top = std::max(top, v);
      p.blocks = top + 1;
      return true;
    }
  }
  return false;
}

std::vector<SetPartition> all_set_partitions(int size) {
  std::vector<SetPartition> out;
  SetPartition p = first_set_partition(size);
  do {
    out.push_back(p);
  } while (next_set_partition(p));
  return out;
}

SetPartition level_set_partition(const std::vector<int>& values) {
  SetPartition p;
  std::map<int, int> label_of;
  for (int v : values) {
    auto [it, inserted] = label_of.emplace(v, static_cast<int>(label_of.size()));
    p.labels.push_back(it->second);
  }
  p.blocks = static_cast<int>(label_of.size());
  return p;
}

std::uint64_t bell_number(int n) {
  if (n < 0) throw std::invalid_argument("bell_number: n must be non-negative");
  // Bell triangle.
  std::vector<std::uint64_t> row{1};
  for (int i = 0; i < n; ++i) {
    std::vector<std::uint64_t> next{row.back()};
    for (auto v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

}  // namespace eigbridge

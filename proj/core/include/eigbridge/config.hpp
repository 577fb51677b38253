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

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace eigbridge {

/// Flat `key=value` configuration with dotted keys.
///
/// Lines are trimmed; blank lines and lines starting with `#` are ignored.
/// Typed getters throw ValidationError naming the offending key. Every key
/// read through a getter is marked as used so callers can reject unknown keys
/// after parsing with `require_all_used()`.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;

  static KeyValueConfig parse(std::string_view text);
  static KeyValueConfig load(const std::string& path);

  void set(const std::string& key, std::string value);
  [[nodiscard]] bool has(const std::string& key) const;
  void erase(const std::string& key);

  [[nodiscard]] std::string get_string(const std::string& key) const;
  [[nodiscard]] std::string get_string(const std::string& key, const std::string& fallback) const;
  [[nodiscard]] double get_double(const std::string& key) const;
  [[nodiscard]] double get_double(const std::string& key, double fallback) const;
  [[nodiscard]] long long get_int(const std::string& key) const;
  [[nodiscard]] long long get_int(const std::string& key, long long fallback) const;
  [[nodiscard]] unsigned long long get_uint64(const std::string& key, unsigned long long fallback) const;
  [[nodiscard]] bool get_bool(const std::string& key, bool fallback) const;
  [[nodiscard]] std::vector<double> get_double_list(const std::string& key) const;

  /// Keys never read through a getter, in sorted order.
  [[nodiscard]] std::vector<std::string> unused_keys() const;
  /// Throws ValidationError listing every unused key.
  void require_all_used() const;

  /// Canonical serialization: sorted `key=value` lines.
  [[nodiscard]] std::string to_text() const;
  [[nodiscard]] const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  [[nodiscard]] const std::string* lookup(const std::string& key) const;

  std::map<std::string, std::string> entries_;
  mutable std::set<std::string> used_;
};

std::vector<std::string> split(std::string_view text, char sep);
std::string trim(std::string_view text);

}  // namespace eigbridge

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
#include <filesystem>
#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace eigbridge {

/// Shortest-safe round-trip text for a double: 17 significant digits.
std::string format_double(double v);

/// 16 lowercase hex digits.
std::string format_hex64(std::uint64_t v);

/// Accumulates CSV text with a fixed header; values use format_double.
class CsvWriter {
 public:
  explicit CsvWriter(std::initializer_list<std::string_view> header);

  CsvWriter& row(std::initializer_list<double> values);
  CsvWriter& row(const std::vector<double>& values);
  [[nodiscard]] const std::string& text() const { return text_; }
  void save(const std::filesystem::path& path) const;

 private:
  std::size_t columns_;
  std::string text_;
};

/// Creates `dir` if needed; throws ValidationError when it is not writable.
void ensure_output_dir(const std::filesystem::path& dir);
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace eigbridge

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

#include "eigbridge/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "eigbridge/types.hpp"

namespace eigbridge {

std::string trim(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = text.find_last_not_of(" \t\r\n");
  return std::string(text.substr(first, last - first + 1));
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = text.find(sep, start);
    out.push_back(trim(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

KeyValueConfig KeyValueConfig::parse(std::string_view text) {
  KeyValueConfig cfg;
  std::size_t line_no = 0;
  for (const auto& raw : split(text, '\n')) {
    ++line_no;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ValidationError("config line " + std::to_string(line_no) + ": expected key=value, got '" + line + "'");
    }
    std::string key = trim(std::string_view(line).substr(0, eq));
    if (key.empty()) {
      throw ValidationError("config line " + std::to_string(line_no) + ": empty key");
    }
    if (cfg.has(key)) {
      throw ValidationError("config key '" + key + "' given twice");
    }
    cfg.set(key, trim(std::string_view(line).substr(eq + 1)));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void KeyValueConfig::set(const std::string& key, std::string value) { entries_[key] = std::move(value); }

bool KeyValueConfig::has(const std::string& key) const { return entries_.count(key) != 0; }

void KeyValueConfig::erase(const std::string& key) {
  entries_.erase(key);
  used_.erase(key);
}

const std::string* KeyValueConfig::lookup(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return nullptr;
  used_.insert(key);
  return &it->second;
}

std::string KeyValueConfig::get_string(const std::string& key) const {
  if (const auto* v = lookup(key)) return *v;
  throw ValidationError("missing config key '" + key + "'");
}

std::string KeyValueConfig::get_string(const std::string& key, const std::string& fallback) const {
  if (const auto* v = lookup(key)) return *v;
  return fallback;
}

namespace {

double parse_double(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ValidationError("config key '" + key + "': not a number: '" + text + "'");
  }
  return v;
}

long long parse_int(const std::string& key, const std::string& text) {
  errno = 0;
  char* end = nullptr;
  const long long v = std::strtoll(text.c_str(), &end, 10);
  if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
    throw ValidationError("config key '" + key + "': not an integer: '" + text + "'");
  }
  return v;
}

}  // namespace

double KeyValueConfig::get_double(const std::string& key) const { return parse_double(key, get_string(key)); }

double KeyValueConfig::get_double(const std::string& key, double fallback) const {
  if (const auto* v = lookup(key)) return parse_double(key, *v);
  return fallback;
}

long long KeyValueConfig::get_int(const std::string& key) const { return parse_int(key, get_string(key)); }

long long KeyValueConfig::get_int(const std::string& key, long long fallback) const {
  if (const auto* v = lookup(key)) return parse_int(key, *v);
  return fallback;
}

unsigned long long KeyValueConfig::get_uint64(const std::string& key, unsigned long long fallback) const {
  const auto* v = lookup(key);
  if (!v) return fallback;
  errno = 0;
  char* end = nullptr;
  const unsigned long long out = std::strtoull(v->c_str(), &end, 10);
  if (v->empty() || v->front() == '-' || end != v->c_str() + v->size() || errno == ERANGE) {
    throw ValidationError("config key '" + key + "': not an unsigned 64-bit integer: '" + *v + "'");
  }
  return out;
}

bool KeyValueConfig::get_bool(const std::string& key, bool fallback) const {
  const auto* v = lookup(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ValidationError("config key '" + key + "': not a boolean: '" + *v + "'");
}

std::vector<double> KeyValueConfig::get_double_list(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split(get_string(key), ',')) out.push_back(parse_double(key, item));
  return out;
}

std::vector<std::string> KeyValueConfig::unused_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, _] : entries_) {
    if (!used_.count(k)) out.push_back(k);
  }
  return out;
}

void KeyValueConfig::require_all_used() const {
  const auto unused = unused_keys();
  if (unused.empty()) return;
  std::string msg = "unknown config key";
  msg += unused.size() > 1 ? "s: " : ": ";
  for (std::size_t i = 0; i < unused.size(); ++i) {
    if (i) msg += ", ";
    msg += "'" + unused[i] + "'";
  }
  throw ValidationError(msg);
}

std::string KeyValueConfig::to_text() const {
  std::string out;
  for (const auto& [k, v] : entries_) out += k + "=" + v + "\n";
  return out;
}

}  // namespace eigbridge

// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>

namespace bitalloc::tools {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

template <class T>
bool parse_number(const std::string& s, T& out) {
  const char* first = s.data();
  const char* last = first + s.size();
  if (first != last && *first == '+') ++first;
  const auto [p, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && p == last;
}

}  // namespace

ConfigError::ConfigError(std::string source, std::size_t line,
                         const std::string& what)
    : std::runtime_error(source + ":" + (line ? std::to_string(line) + ":" : "") +
                         " " + what),
      source_(std::move(source)),
      line_(line) {}

ConfigFile ConfigFile::parse(std::istream& in, std::string source) {
  ConfigFile cfg;
  cfg.source_ = std::move(source);
  std::string line;
  std::size_t lineno = 0;
  Section* current = nullptr;
  std::string current_name;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view view(line);
    if (const auto hash = view.find('#'); hash != std::string_view::npos) {
      view = view.substr(0, hash);
    }
    const std::string text = trim(view);
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') {
        throw ConfigError(cfg.source_, lineno, "unterminated section header");
      }
      current_name = lower(trim(std::string_view(text).substr(1, text.size() - 2)));
      if (current_name.empty()) {
        throw ConfigError(cfg.source_, lineno, "empty section name");
      }
      auto [it, inserted] = cfg.sections_.try_emplace(current_name);
      if (!inserted) {
        throw ConfigError(cfg.source_, lineno,
                          "section [" + current_name + "] repeated (first at line " +
                              std::to_string(it->second.line) + ")");
      }
      it->second.line = lineno;
      current = &it->second;
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(cfg.source_, lineno, "expected 'key = value'");
    }
    if (current == nullptr) {
      throw ConfigError(cfg.source_, lineno, "key outside of any [section]");
    }
    const std::string key = lower(trim(std::string_view(text).substr(0, eq)));
    const std::string value = trim(std::string_view(text).substr(eq + 1));
    if (key.empty()) throw ConfigError(cfg.source_, lineno, "empty key");
    auto [it, inserted] = current->entries.try_emplace(key);
    if (!inserted) {
      throw ConfigError(cfg.source_, lineno,
                        "[" + current_name + "] " + key +
                            " repeated (first at line " +
                            std::to_string(it->second.line) + ")");
    }
    it->second.value = value;
    it->second.line = lineno;
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string(), 0, "cannot open config file");
  return parse(in, path.string());
}

bool ConfigFile::has_section(std::string_view section) const {
  const auto it = sections_.find(section);
  if (it == sections_.end()) return false;
  it->second.used = true;
  return true;
}

bool ConfigFile::has(std::string_view section, std::string_view key) const {
  const auto s = sections_.find(section);
  return s != sections_.end() && s->second.entries.count(key) != 0;
}

const ConfigFile::Entry* ConfigFile::find(std::string_view section,
                                          std::string_view key) const {
  const auto s = sections_.find(section);
  if (s == sections_.end()) return nullptr;
  s->second.used = true;
  const auto e = s->second.entries.find(key);
  if (e == s->second.entries.end()) return nullptr;
  e->second.used = true;
  return &e->second;
}

void ConfigFile::fail(std::string_view section, std::string_view key,
                      const std::string& message) const {
  std::size_t line = 0;
  if (const auto s = sections_.find(section); s != sections_.end()) {
    line = s->second.line;
    if (const auto e = s->second.entries.find(key); e != s->second.entries.end()) {
      line = e->second.line;
    }
  }
  std::string where = "[" + std::string(section) + "] ";
  if (!key.empty()) where += std::string(key) + ": ";
  throw ConfigError(source_, line, where + message);
}

std::optional<std::string> ConfigFile::get(std::string_view section,
                                           std::string_view key) const {
  const Entry* e = find(section, key);
  if (e == nullptr) return std::nullopt;
  return e->value;
}

std::string ConfigFile::require(std::string_view section,
                                std::string_view key) const {
  auto v = get(section, key);
  if (!v || v->empty()) fail(section, key, "required value is missing");
  return *v;
}

std::string ConfigFile::get_string(std::string_view section,
                                   std::string_view key,
                                   std::string fallback) const {
  auto v = get(section, key);
  return v ? *v : std::move(fallback);
}

long long ConfigFile::get_int(std::string_view section, std::string_view key,
                              long long fallback, long long lo,
                              long long hi) const {
  auto v = get(section, key);
  if (!v) return fallback;
  long long out = 0;
  if (!parse_number(*v, out)) fail(section, key, "'" + *v + "' is not an integer");
  if (out < lo || out > hi) {
    fail(section, key,
         std::to_string(out) + " is outside [" + std::to_string(lo) + ", " +
             std::to_string(hi) + "]");
  }
  return out;
}

std::uint64_t ConfigFile::get_u64(std::string_view section,
                                  std::string_view key,
                                  std::uint64_t fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  std::uint64_t out = 0;
  if (!parse_number(*v, out)) {
    fail(section, key, "'" + *v + "' is not a nonnegative integer");
  }
  return out;
}

double ConfigFile::get_double(std::string_view section, std::string_view key,
                              double fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  double out = 0.0;
  if (!parse_number(*v, out) || !std::isfinite(out)) {
    fail(section, key, "'" + *v + "' is not a finite number");
  }
  return out;
}

bool ConfigFile::get_bool(std::string_view section, std::string_view key,
                          bool fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  const std::string s = lower(*v);
  if (s == "true" || s == "yes" || s == "on" || s == "1") return true;
  if (s == "false" || s == "no" || s == "off" || s == "0") return false;
  fail(section, key, "'" + *v + "' is not a boolean (true/false)");
}

std::vector<std::string> ConfigFile::get_list(
    std::string_view section, std::string_view key,
    std::vector<std::string> fallback) const {
  auto v = get(section, key);
  if (!v) return fallback;
  std::vector<std::string> out;
  std::string_view rest(*v);
  for (;;) {
    const auto comma = rest.find(',');
    const std::string item = trim(rest.substr(0, comma));
    if (item.empty()) fail(section, key, "empty list item");
    out.push_back(item);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

std::vector<double> ConfigFile::get_doubles(std::string_view section,
                                            std::string_view key,
                                            std::vector<double> fallback) const {
  if (!has(section, key)) {
    find(section, key);
    return fallback;
  }
  std::vector<double> out;
  for (const auto& item : get_list(section, key, {})) {
    double d = 0.0;
    if (!parse_number(item, d) || !std::isfinite(d)) {
      fail(section, key, "'" + item + "' is not a finite number");
    }
    out.push_back(d);
  }
  return out;
}

void ConfigFile::reject_unused() const {
  for (const auto& [name, section] : sections_) {
    if (!section.used) {
      throw ConfigError(source_, section.line, "unknown section [" + name + "]");
    }
    for (const auto& [key, entry] : section.entries) {
      if (!entry.used) {
        throw ConfigError(source_, entry.line,
                          "[" + name + "] " + key + ": unknown key");
      }
    }
  }
}

}  // namespace bitalloc::tools

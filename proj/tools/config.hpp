// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bitalloc::tools {

/// Config problem located at `line` of `source` (0 when not tied to a line).
class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::string source, std::size_t line, const std::string& what);
  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

/// Sectioned key = value text:
///
///   # comment
///   [section]
///   key = value   ; inline comments start with '#'
///
/// Keys are unique within a section. Every lookup marks the key as used so
/// that leftover keys can be rejected as unknown.
class ConfigFile {
 public:
  static ConfigFile parse(std::istream& in, std::string source);
  static ConfigFile load(const std::filesystem::path& path);

  const std::string& source() const noexcept { return source_; }
  bool has_section(std::string_view section) const;
  bool has(std::string_view section, std::string_view key) const;

  std::optional<std::string> get(std::string_view section,
                                 std::string_view key) const;
  std::string require(std::string_view section, std::string_view key) const;

  std::string get_string(std::string_view section, std::string_view key,
                         std::string fallback) const;
  long long get_int(std::string_view section, std::string_view key,
                    long long fallback, long long lo, long long hi) const;
  std::uint64_t get_u64(std::string_view section, std::string_view key,
                        std::uint64_t fallback) const;
  double get_double(std::string_view section, std::string_view key,
                    double fallback) const;
  bool get_bool(std::string_view section, std::string_view key,
                bool fallback) const;
  std::vector<double> get_doubles(std::string_view section,
                                  std::string_view key,
                                  std::vector<double> fallback) const;
  std::vector<std::string> get_list(std::string_view section,
                                    std::string_view key,
                                    std::vector<std::string> fallback) const;

  /// Throws for the first section or key never looked up.
  void reject_unused() const;

  /// Error pointing at the given key (or its section if absent).
  [[noreturn]] void fail(std::string_view section, std::string_view key,
                         const std::string& message) const;

 private:
  struct Entry {
    std::string value;
    std::size_t line = 0;
    mutable bool used = false;
  };
  struct Section {
    std::size_t line = 0;
    std::map<std::string, Entry, std::less<>> entries;
    mutable bool used = false;
  };

  const Entry* find(std::string_view section, std::string_view key) const;

  std::string source_;
  std::map<std::string, Section, std::less<>> sections_;
};

}  // namespace bitalloc::tools

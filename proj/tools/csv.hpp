// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bitalloc::tools {

/// RFC 4180 field: quoted when it holds a comma, quote or line break.
std::string csv_field(std::string_view text);

/// Shortest round-trip decimal form; "inf"/"-inf"/"nan" otherwise.
std::string format_double(double v);

/// Space-separated integers.
std::string format_bits(std::span<const int> bits);

/// CSV file starting with a "# seed=<seed>" comment line and a header row.
/// Lines end in a bare "\n" on every platform.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::uint64_t seed,
            std::vector<std::string> header);

  void row(const std::vector<std::string>& fields);
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
  std::size_t columns_;
};

}  // namespace bitalloc::tools

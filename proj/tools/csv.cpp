// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The bitalloc Authors

#include "csv.hpp"

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace bitalloc::tools {

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) {
    return std::string(text);
  }
  std::string out = "\"";
  for (char c : text) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string format_bits(std::span<const int> bits) {
  std::string out;
  for (std::size_t i = 0; i < bits.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(bits[i]);
  }
  return out;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::uint64_t seed,
                     std::vector<std::string> header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc),
      columns_(header.size()) {
  if (!out_) throw std::runtime_error("cannot write " + path.string());
  out_ << "# seed=" << seed << '\n';
  row(header);
}

void CsvWriter::row(const std::vector<std::string>& fields) {
  if (fields.size() != columns_) {
    throw std::logic_error("CSV row width differs from header in " +
                           path_.string());
  }
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out_ << ',';
    out_ << csv_field(fields[i]);
  }
  out_ << '\n';
}

void CsvWriter::close() {
  out_.close();
  if (!out_) throw std::runtime_error("failed writing " + path_.string());
}

}  // namespace bitalloc::tools

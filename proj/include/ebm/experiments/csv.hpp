// Copyright 2026 The ebmlab Authors
// SPDX-License-Identifier: Apache-2.0

#ifndef EBM_EXPERIMENTS_CSV_HPP_
#define EBM_EXPERIMENTS_CSV_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace ebm {

/// 17 significant digits, enough to round-trip a double.
std::string format_number(double v);
std::string format_number(std::int64_t v);
inline std::string format_number(std::size_t v) { return format_number(static_cast<std::int64_t>(v)); }
inline std::string format_number(int v) { return format_number(static_cast<std::int64_t>(v)); }
inline std::string format_bool(bool v) { return v ? "true" : "false"; }

/// RFC-4180 field quoting: fields containing a comma, quote or line break are
/// wrapped in quotes with inner quotes doubled.
std::string csv_escape(const std::string& field);

/// In-memory table with a fixed header. Rows must match the header width.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> header);

  const std::vector<std::string>& header() const { return header_; }
  const std::vector<std::vector<std::string>>& rows() const { return rows_; }

  /// Throws InvalidArgument when the width differs from the header.
  void add_row(std::vector<std::string> row);

  /// Header plus rows, LF line endings.
  std::string to_string() const;
  /// Writes to_string() to path, creating parent directories.
  void write(const std::filesystem::path& path) const;

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace ebm

#endif  // EBM_EXPERIMENTS_CSV_HPP_

// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "anomset/schedule.hpp"
#include "anomset/spec.hpp"

namespace anomset {

class CsvError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shortest decimal that parses back to the same binary64.
void append_value(std::string& out, double v);
std::string format_value(double v);

/// Appends `t,v1,...,vK[,label]\n`.
void append_row(std::string& out, std::uint64_t t, std::span<const double> values, Label label,
                bool with_label);

/// Appends the `t,<names...>[,label]` header line.
void append_header(std::string& out, std::span<const std::string> names, bool with_label);

/// A numeric CSV file held column-wise.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;

  std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
  /// Index of a named column, or -1.
  std::ptrdiff_t find(std::string_view name) const;
};

/// Parses a header line plus numeric rows. Errors carry 1-based line numbers.
CsvTable read_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// Extracts the `label` column (values 0 or 1) from a label-only or full
/// dataset CSV.
std::vector<Label> labels_from(const CsvTable& table);
std::vector<Label> read_labels(const std::filesystem::path& path);

/// Events CSV: header `start,length`.
std::vector<AnomalyEvent> read_events(const std::filesystem::path& path);
void write_events(std::span<const AnomalyEvent> events, std::ostream& out);

}  // namespace anomset

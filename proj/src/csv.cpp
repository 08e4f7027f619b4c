// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#include "anomset/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

namespace anomset {

void append_value(std::string& out, double v) {
  if (v == 0.0) v = 0.0;
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, end);
}

std::string format_value(double v) {
  std::string s;
  append_value(s, v);
  return s;
}

void append_row(std::string& out, std::uint64_t t, std::span<const double> values, Label label,
                bool with_label) {
  char buf[24];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, t);
  out.append(buf, end);
  for (double v : values) {
    out.push_back(',');
    append_value(out, v);
  }
  if (with_label) {
    out.push_back(',');
    out.push_back(label == Label::Anomalous ? '1' : '0');
  }
  out.push_back('\n');
}

void append_header(std::string& out, std::span<const std::string> names, bool with_label) {
  out += "t";
  for (const auto& n : names) {
    out.push_back(',');
    out += n;
  }
  if (with_label) out += ",label";
  out.push_back('\n');
}

std::ptrdiff_t CsvTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return static_cast<std::ptrdiff_t>(i);
  }
  return -1;
}

namespace {

std::vector<std::string_view> split(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    fields.push_back(line.substr(pos, comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return fields;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

}  // namespace

CsvTable read_csv(std::istream& in) {
  CsvTable table;
  std::string line;
  std::size_t lineno = 0;
  auto chomp = [&] {
    if (!line.empty() && line.back() == '\r') line.pop_back();
  };
  if (!std::getline(in, line)) throw CsvError("line 1: missing header");
  ++lineno;
  chomp();
  for (auto f : split(line)) table.header.emplace_back(f);
  table.columns.resize(table.header.size());

  while (std::getline(in, line)) {
    ++lineno;
    chomp();
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != table.header.size()) {
      throw CsvError("line " + std::to_string(lineno) + ": expected " +
                     std::to_string(table.header.size()) + " fields, found " +
                     std::to_string(fields.size()));
    }
    for (std::size_t i = 0; i < fields.size(); ++i) {
      double v = 0.0;
      const auto f = fields[i];
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc{} || ptr != f.data() + f.size() || f.empty()) {
        throw CsvError("line " + std::to_string(lineno) + ": column '" + table.header[i] +
                       "': not a number: '" + std::string(f) + "'");
      }
      table.columns[i].push_back(v);
    }
  }
  if (in.bad()) throw IoError("read failure");
  return table;
}

CsvTable read_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_csv(in);
  } catch (const CsvError& e) {
    throw CsvError(path.string() + ": " + e.what());
  }
}

std::vector<Label> labels_from(const CsvTable& table) {
  const auto col = table.find("label");
  if (col < 0) throw CsvError("no 'label' column");
  std::vector<Label> labels;
  labels.reserve(table.rows());
  const auto& values = table.columns[static_cast<std::size_t>(col)];
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] == 0.0) {
      labels.push_back(Label::Normal);
    } else if (values[i] == 1.0) {
      labels.push_back(Label::Anomalous);
    } else {
      throw CsvError("line " + std::to_string(i + 2) + ": label must be 0 or 1");
    }
  }
  return labels;
}

std::vector<Label> read_labels(const std::filesystem::path& path) {
  const auto table = read_csv(path);
  try {
    return labels_from(table);
  } catch (const CsvError& e) {
    throw CsvError(path.string() + ": " + e.what());
  }
}

std::vector<AnomalyEvent> read_events(const std::filesystem::path& path) {
  const auto table = read_csv(path);
  const auto s = table.find("start");
  const auto l = table.find("length");
  if (s < 0 || l < 0) throw CsvError(path.string() + ": expected columns start,length");
  std::vector<AnomalyEvent> events;
  for (std::size_t i = 0; i < table.rows(); ++i) {
    const double start = table.columns[static_cast<std::size_t>(s)][i];
    const double length = table.columns[static_cast<std::size_t>(l)][i];
    if (start < 0 || length < 1 || start != static_cast<double>(static_cast<std::uint64_t>(start)) ||
        length != static_cast<double>(static_cast<std::uint64_t>(length))) {
      throw CsvError(path.string() + ": line " + std::to_string(i + 2) +
                     ": start/length must be non-negative integers with length ≥ 1");
    }
    events.push_back({static_cast<std::uint64_t>(start), static_cast<std::uint64_t>(length)});
  }
  return events;
}

void write_events(std::span<const AnomalyEvent> events, std::ostream& out) {
  out << "start,length\n";
  for (const auto& ev : events) out << ev.start << ',' << ev.length << '\n';
}

}  // namespace anomset

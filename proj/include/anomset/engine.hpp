// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "anomset/schedule.hpp"
#include "anomset/signal.hpp"
#include "anomset/spec.hpp"
#include "anomset/unique.hpp"

namespace anomset {

struct Record {
  std::uint64_t t = 0;
  std::vector<double> values;
  Label label = Label::Normal;
  friend bool operator==(const Record&, const Record&) = default;
};

/// Rows [chunk_start, chunk_start + size()) produced by one worker. Values
/// are attempt-0 candidates, stored row-major. `text` holds the finished CSV
/// rows when no uniqueness resolution is needed.
struct RecordBlock {
  std::uint64_t chunk_start = 0;
  std::size_t width = 0;
  std::vector<double> values;
  std::vector<Label> labels;
  std::string text;

  std::size_t size() const { return labels.size(); }
  std::span<const double> row(std::size_t i) const {
    return std::span<const double>(values).subspan(i * width, width);
  }
  Record record(std::size_t i) const {
    const auto r = row(i);
    return {chunk_start + i, {r.begin(), r.end()}, labels[i]};
  }
};

struct Manifest {
  std::uint32_t format_version = 1;
  std::string spec_fingerprint;
  std::uint64_t seed = 0;
  std::uint64_t n_timestamps = 0;
  std::vector<std::string> variables;
  std::uint64_t anomalous_points = 0;
  std::uint64_t event_count = 0;
  std::uint64_t soft_duplicates_emitted = 0;
  std::string tool_version;
  friend bool operator==(const Manifest&, const Manifest&) = default;
};

nlohmann::json to_json(const Manifest& manifest);
void write_manifest(const Manifest& manifest, std::ostream& out);

struct GenerateOptions {
  unsigned workers = 1;
  std::uint64_t chunk_size = 65536;
  /// When false, labels go to the separate labels sink instead of a column.
  bool labels_column = true;
  /// Nonzero: workers visit their chunks in a seeded shuffled order. Output is
  /// unchanged; used to exercise completion-order independence.
  std::uint64_t shuffle_seed = 0;
};

/// Hard uniqueness could not be met. what() is the one-line diagnostic.
class HardFailureError : public std::runtime_error {
 public:
  HardFailureError(const HardFailure& failure, const std::string& variable_name);
  const HardFailure& failure() const { return failure_; }

 private:
  HardFailure failure_;
};

/// A callback or value evaluation failed; message names variable and t.
class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct GenerationResult {
  Manifest manifest;
  AnomalySchedule schedule;
  std::uint64_t rows_written = 0;
};

/// Attempt-0 candidates for timestamps [start, end). Pure in its inputs.
RecordBlock generate_chunk(const DatasetSpec& spec, const AnomalySchedule& schedule,
                           std::uint64_t start, std::uint64_t end,
                           const CallbackRegistry& registry);

/// Three phases: build the schedule serially, generate chunks on `workers`
/// threads with no shared mutable state, then resolve uniqueness and write
/// rows serially in timestamp order. Output bytes do not depend on the worker
/// count or chunk completion order.
///
/// `labels` receives a single-column `label` CSV when options.labels_column
/// is false; it may be null otherwise. The registry must not change while
/// this runs, and its callbacks must tolerate concurrent calls.
GenerationResult generate(const DatasetSpec& spec, const CallbackRegistry& registry,
                          const GenerateOptions& options, std::ostream& data,
                          std::ostream* labels = nullptr);

/// Writes header plus rows; returns the number of rows written.
std::size_t write_csv(std::span<const Record> rows, std::span<const std::string> names,
                      std::ostream& out, bool labels_column = true);

std::string tool_version();

}  // namespace anomset

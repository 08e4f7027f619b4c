// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "anomset/spec.hpp"

namespace anomset {

enum class Severity { Error, Warning };

struct ValidationIssue {
  Severity severity = Severity::Error;
  std::string path;  // JSON-pointer-like field path, e.g. "/variables/0/normal_range"
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;

  bool ok() const;  // no error-severity issues
  bool empty() const { return issues.empty(); }
  std::string to_string() const;
};

/// Raised by parse_spec / load_spec. Carries every issue found.
class SpecError : public std::runtime_error {
 public:
  explicit SpecError(std::vector<ValidationIssue> issues);
  const std::vector<ValidationIssue>& issues() const { return issues_; }

 private:
  std::vector<ValidationIssue> issues_;
};

/// Parses a JSON dataset description, fills defaults, and rejects unknown
/// fields and any error reported by validate_spec.
DatasetSpec parse_spec(std::string_view document);
DatasetSpec load_spec(const std::filesystem::path& path);

/// Checks type invariants and cross-field constraints. Also flags hard
/// uniqueness over a discrete domain too small for the expected points.
ValidationReport validate_spec(const DatasetSpec& spec);

/// Full document (including output settings) with every default explicit.
nlohmann::json spec_to_json(const DatasetSpec& spec);
std::string serialize_spec(const DatasetSpec& spec);

/// Sorted-key serialization of every field that determines dataset content.
std::string canonical_spec(const DatasetSpec& spec);

/// SHA-256 of canonical_spec, lowercase hex.
std::string spec_fingerprint(const DatasetSpec& spec);

std::string_view to_string(Label cls);
std::string_view to_string(Shape shape);

}  // namespace anomset

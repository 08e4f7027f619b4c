// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "anomset/prng.hpp"

namespace anomset {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  friend bool operator==(const Range&, const Range&) = default;
};

enum class Shape { Constant, Linear, Sine, Square, Sawtooth, Noise };

/// One additive term of a composite signal. `period` is in timestamps per
/// cycle and `phase` is a fraction of the period.
struct SignalPrimitive {
  Shape shape = Shape::Constant;
  double amplitude = 1.0;
  double period = 1.0;
  double phase = 0.0;
  double offset = 0.0;
  double noise_sigma = 1.0;
  friend bool operator==(const SignalPrimitive&, const SignalPrimitive&) = default;
};

struct StochasticKind {
  ValueType value_type = ValueType::Continuous;
  Range normal_range;
  Range anomalous_range;
  friend bool operator==(const StochasticKind&, const StochasticKind&) = default;
};

struct CompositeKind {
  std::vector<SignalPrimitive> normal;
  std::vector<SignalPrimitive> anomalous;
  friend bool operator==(const CompositeKind&, const CompositeKind&) = default;
};

struct CallbackKind {
  std::string registry_key;
  friend bool operator==(const CallbackKind&, const CallbackKind&) = default;
};

struct VariableSpec {
  std::string name;
  std::variant<StochasticKind, CompositeKind, CallbackKind> kind;
  friend bool operator==(const VariableSpec&, const VariableSpec&) = default;

  /// Key type used for uniqueness tracking.
  ValueType value_type() const {
    if (const auto* s = std::get_if<StochasticKind>(&kind)) return s->value_type;
    return ValueType::Continuous;
  }
};

struct FrequencyMode {
  double f = 0.0;
  friend bool operator==(const FrequencyMode&, const FrequencyMode&) = default;
};
struct PointCountMode {
  std::uint64_t k = 0;
  friend bool operator==(const PointCountMode&, const PointCountMode&) = default;
};
struct EventCountMode {
  std::uint64_t e = 0;
  friend bool operator==(const EventCountMode&, const EventCountMode&) = default;
};

struct DurationRange {
  std::uint64_t min = 1;
  std::uint64_t max = 1;
  friend bool operator==(const DurationRange&, const DurationRange&) = default;
};

struct AnomalySpec {
  std::variant<FrequencyMode, PointCountMode, EventCountMode> mode = FrequencyMode{};
  DurationRange duration_range;
  bool allow_overlap = false;
  friend bool operator==(const AnomalySpec&, const AnomalySpec&) = default;
};

enum class UniquenessMode { Off, Soft, Hard };

struct UniquenessPolicy {
  UniquenessMode mode = UniquenessMode::Off;
  std::uint32_t max_tries = 100;
  friend bool operator==(const UniquenessPolicy&, const UniquenessPolicy&) = default;
};

struct UniquenessSpec {
  UniquenessPolicy normal;
  UniquenessPolicy anomalous;
  friend bool operator==(const UniquenessSpec&, const UniquenessSpec&) = default;

  const UniquenessPolicy& policy(Label cls) const {
    return cls == Label::Anomalous ? anomalous : normal;
  }
};

struct OutputSpec {
  std::string path;
  std::string manifest_path;
  std::string events_path;
  bool labels_column = true;
  friend bool operator==(const OutputSpec&, const OutputSpec&) = default;
};

struct DatasetSpec {
  std::uint32_t format_version = 1;
  std::uint64_t n_timestamps = 1;
  std::uint64_t seed = 0;
  std::vector<VariableSpec> variables;
  AnomalySpec anomaly;
  UniquenessSpec uniqueness;
  OutputSpec output;
  friend bool operator==(const DatasetSpec&, const DatasetSpec&) = default;
};

inline constexpr std::size_t kMaxVariables = std::size_t{1} << 16;

/// Anomalous-point budget for frequency mode: round(f * n).
inline std::uint64_t frequency_budget(double f, std::uint64_t n) {
  return static_cast<std::uint64_t>(std::llround(f * static_cast<double>(n)));
}

}  // namespace anomset

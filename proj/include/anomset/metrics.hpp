// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include <json.hpp>

#include "anomset/schedule.hpp"
#include "anomset/spec.hpp"

namespace anomset {

/// Undefined metrics (zero denominators) are std::nullopt, never 0.
using Metric = std::optional<double>;

struct ConfusionCounts {
  std::uint64_t tp = 0;
  std::uint64_t fp = 0;
  std::uint64_t tn = 0;
  std::uint64_t fn = 0;

  std::uint64_t total() const { return tp + fp + tn + fn; }
  friend bool operator==(const ConfusionCounts&, const ConfusionCounts&) = default;
};

class LengthMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Pointwise counts; the positive class is Label::Anomalous.
ConfusionCounts confusion(std::span<const Label> pred, std::span<const Label> truth);

Metric accuracy(const ConfusionCounts& c);
Metric precision(const ConfusionCounts& c);
Metric recall(const ConfusionCounts& c);

/// (1 + b^2) P R / (b^2 P + R); undefined when either input is undefined or
/// both are zero.
Metric f_beta(Metric precision, Metric recall, double beta);

struct EventRecall {
  std::uint64_t detected = 0;
  std::uint64_t total = 0;
  Metric ratio;
};

/// An event counts as detected when at least one predicted-anomalous
/// timestamp falls inside it.
EventRecall event_recall(std::span<const AnomalyEvent> events, std::span<const Label> pred);

struct MetricsReport {
  ConfusionCounts counts;
  Metric accuracy;
  Metric precision;
  Metric recall;
  Metric f1;
  Metric f0_1;
  std::vector<std::pair<double, Metric>> f_betas;  // extra requested betas
  std::optional<EventRecall> events;
};

MetricsReport score(std::span<const Label> pred, std::span<const Label> truth,
                    const std::vector<AnomalyEvent>* events = nullptr,
                    std::span<const double> betas = {});

MetricsReport score_files(const std::filesystem::path& pred_path,
                          const std::filesystem::path& truth_path,
                          const std::optional<std::filesystem::path>& events_path = std::nullopt,
                          std::span<const double> betas = {});

nlohmann::json to_json(const MetricsReport& report);

}  // namespace anomset

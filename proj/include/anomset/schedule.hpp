// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <json.hpp>

#include "anomset/spec.hpp"

namespace anomset {

struct AnomalyEvent {
  std::uint64_t start = 0;
  std::uint64_t length = 0;

  std::uint64_t end() const { return start + length; }
  friend bool operator==(const AnomalyEvent&, const AnomalyEvent&) = default;
};

/// Anomaly events plus the per-timestamp label track they induce.
class AnomalySchedule {
 public:
  AnomalySchedule() = default;

  /// Builds the label track from events; events are sorted by start.
  /// Throws std::invalid_argument if an event leaves [0, n).
  AnomalySchedule(std::uint64_t n_timestamps, std::vector<AnomalyEvent> events);

  Label label_at(std::uint64_t t) const {
    if (t >= labels_.size()) throw std::out_of_range("label_at: timestamp out of range");
    return labels_[t];
  }

  std::uint64_t size() const { return labels_.size(); }
  const std::vector<AnomalyEvent>& events() const { return events_; }
  const std::vector<Label>& labels() const { return labels_; }

 private:
  std::vector<AnomalyEvent> events_;
  std::vector<Label> labels_;
};

class ScheduleInfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Places anomaly events by rejection sampling over a deterministic proposal
/// counter. Pure function of (anomaly, n_timestamps, seed).
///
/// Frequency mode targets B = round(f * n) anomalous points and stops once
/// the total is within d_max of B (truncating the last event so it never
/// exceeds B). Point-count mode lands exactly on k. Event-count mode places
/// exactly e events. Without allow_overlap, accepted events neither overlap
/// nor touch. Gives up after 1000 * max(1, target) proposals.
AnomalySchedule build_schedule(const AnomalySpec& anomaly, std::uint64_t n_timestamps,
                               std::uint64_t seed);

struct ScheduleStats {
  std::uint64_t event_count = 0;
  std::uint64_t anomalous_points = 0;
  double anomalous_fraction = 0.0;
  std::uint64_t min_len = 0;
  std::uint64_t max_len = 0;
  double mean_len = 0.0;
  friend bool operator==(const ScheduleStats&, const ScheduleStats&) = default;
};

ScheduleStats schedule_stats(const AnomalySchedule& schedule);
nlohmann::json to_json(const ScheduleStats& stats);

}  // namespace anomset

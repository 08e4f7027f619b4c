// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#include "anomset/schedule.hpp"

#include <algorithm>
#include <string>

#include "anomset/prng.hpp"

namespace anomset {

AnomalySchedule::AnomalySchedule(std::uint64_t n_timestamps, std::vector<AnomalyEvent> events)
    : events_(std::move(events)), labels_(n_timestamps, Label::Normal) {
  std::sort(events_.begin(), events_.end(),
            [](const auto& a, const auto& b) { return a.start < b.start; });
  for (const auto& ev : events_) {
    if (ev.length == 0 || ev.end() > n_timestamps || ev.end() < ev.start) {
      throw std::invalid_argument("anomaly event [" + std::to_string(ev.start) + ", +" +
                                  std::to_string(ev.length) + ") outside [0, " +
                                  std::to_string(n_timestamps) + ")");
    }
    std::fill(labels_.begin() + static_cast<std::ptrdiff_t>(ev.start),
              labels_.begin() + static_cast<std::ptrdiff_t>(ev.end()), Label::Anomalous);
  }
}

namespace {

enum class Target { Budget, Exact, Events };

class Placer {
 public:
  Placer(const AnomalySpec& spec, std::uint64_t n, std::uint64_t seed)
      : spec_(spec), n_(n), seed_(seed), covered_(n, Label::Normal) {}

  AnomalySchedule run() {
    std::uint64_t goal = 0;
    Target target = Target::Events;
    if (const auto* m = std::get_if<FrequencyMode>(&spec_.mode)) {
      goal = frequency_budget(m->f, n_);
      target = Target::Budget;
    } else if (const auto* m = std::get_if<PointCountMode>(&spec_.mode)) {
      goal = m->k;
      target = Target::Exact;
    } else {
      goal = std::get<EventCountMode>(spec_.mode).e;
    }

    const std::uint64_t d_max = spec_.duration_range.max;
    const std::uint64_t stop_at =
        target == Target::Budget ? std::max<std::uint64_t>(1, goal > d_max ? goal - d_max + 1 : 1)
                                 : goal;
    auto done = [&] {
      if (goal == 0) return true;
      return target == Target::Events ? events_.size() >= goal : total_ >= stop_at;
    };

    const std::uint64_t cap = 1000 * std::max<std::uint64_t>(1, goal);
    for (std::uint64_t proposal = 0; !done(); ++proposal) {
      if (proposal >= cap) {
        throw ScheduleInfeasibleError(
            "anomaly schedule infeasible: target not reached after " + std::to_string(cap) +
            " proposals (placed " + std::to_string(events_.size()) + " events, " +
            std::to_string(total_) + " points)");
      }
      auto ev = propose(proposal);
      if (!spec_.allow_overlap && conflicts(ev)) continue;
      if (target != Target::Events) {
        truncate(ev, goal - total_);
      }
      accept(ev);
    }
    return AnomalySchedule(n_, std::move(events_));
  }

 private:
  AnomalyEvent propose(std::uint64_t proposal) const {
    const DrawAddress addr{proposal, 0};
    const auto& d = spec_.duration_range;
    const auto length = static_cast<std::uint64_t>(
        draw_range(seed_, StreamId(Purpose::Duration, Label::Normal, 0), addr,
                   static_cast<double>(d.min), static_cast<double>(d.max),
                   ValueType::DiscreteInteger));
    const auto start = static_cast<std::uint64_t>(
        draw_range(seed_, StreamId(Purpose::AnomalySchedule, Label::Normal, 0), addr, 0.0,
                   static_cast<double>(n_ - length), ValueType::DiscreteInteger));
    return {start, length};
  }

  // Overlapping or adjacent to an accepted event.
  bool conflicts(const AnomalyEvent& ev) const {
    const std::uint64_t lo = ev.start == 0 ? 0 : ev.start - 1;
    const std::uint64_t hi = std::min(n_, ev.end() + 1);
    return std::any_of(covered_.begin() + static_cast<std::ptrdiff_t>(lo),
                       covered_.begin() + static_cast<std::ptrdiff_t>(hi),
                       [](Label l) { return l == Label::Anomalous; });
  }

  // Shortens ev so it adds at most `remaining` newly covered points.
  void truncate(AnomalyEvent& ev, std::uint64_t remaining) const {
    std::uint64_t added = 0;
    for (std::uint64_t t = ev.start; t < ev.end(); ++t) {
      if (covered_[t] == Label::Normal && ++added == remaining) {
        ev.length = t - ev.start + 1;
        return;
      }
    }
  }

  void accept(const AnomalyEvent& ev) {
    for (std::uint64_t t = ev.start; t < ev.end(); ++t) {
      if (covered_[t] == Label::Normal) {
        covered_[t] = Label::Anomalous;
        ++total_;
      }
    }
    events_.push_back(ev);
  }

  const AnomalySpec& spec_;
  std::uint64_t n_;
  std::uint64_t seed_;
  std::vector<Label> covered_;
  std::vector<AnomalyEvent> events_;
  std::uint64_t total_ = 0;
};

}  // namespace

AnomalySchedule build_schedule(const AnomalySpec& anomaly, std::uint64_t n_timestamps,
                               std::uint64_t seed) {
  return Placer(anomaly, n_timestamps, seed).run();
}

ScheduleStats schedule_stats(const AnomalySchedule& schedule) {
  ScheduleStats s;
  const auto& events = schedule.events();
  s.event_count = events.size();
  s.anomalous_points = static_cast<std::uint64_t>(
      std::count(schedule.labels().begin(), schedule.labels().end(), Label::Anomalous));
  if (schedule.size() > 0) {
    s.anomalous_fraction =
        static_cast<double>(s.anomalous_points) / static_cast<double>(schedule.size());
  }
  if (!events.empty()) {
    s.min_len = events.front().length;
    std::uint64_t sum = 0;
    for (const auto& ev : events) {
      s.min_len = std::min(s.min_len, ev.length);
      s.max_len = std::max(s.max_len, ev.length);
      sum += ev.length;
    }
    s.mean_len = static_cast<double>(sum) / static_cast<double>(events.size());
  }
  return s;
}

nlohmann::json to_json(const ScheduleStats& s) {
  return {{"event_count", s.event_count}, {"anomalous_points", s.anomalous_points},
          {"anomalous_fraction", s.anomalous_fraction}, {"min_len", s.min_len},
          {"max_len", s.max_len}, {"mean_len", s.mean_len}};
}

}  // namespace anomset

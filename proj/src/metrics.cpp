// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#include "anomset/metrics.hpp"

#include <algorithm>
#include <string>

#include "anomset/csv.hpp"

namespace anomset {

namespace {

Metric ratio(std::uint64_t num, std::uint64_t den) {
  if (den == 0) return std::nullopt;
  return static_cast<double>(num) / static_cast<double>(den);
}

nlohmann::json metric_json(const Metric& m) { return m ? nlohmann::json(*m) : nlohmann::json(); }

}  // namespace

ConfusionCounts confusion(std::span<const Label> pred, std::span<const Label> truth) {
  if (pred.size() != truth.size()) {
    throw LengthMismatchError("prediction length " + std::to_string(pred.size()) +
                              " != truth length " + std::to_string(truth.size()));
  }
  ConfusionCounts c;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const bool p = pred[i] == Label::Anomalous;
    const bool t = truth[i] == Label::Anomalous;
    if (p && t) {
      ++c.tp;
    } else if (p) {
      ++c.fp;
    } else if (t) {
      ++c.fn;
    } else {
      ++c.tn;
    }
  }
  return c;
}

Metric accuracy(const ConfusionCounts& c) { return ratio(c.tp + c.tn, c.total()); }
Metric precision(const ConfusionCounts& c) { return ratio(c.tp, c.tp + c.fp); }
Metric recall(const ConfusionCounts& c) { return ratio(c.tp, c.tp + c.fn); }

Metric f_beta(Metric p, Metric r, double beta) {
  if (!p || !r) return std::nullopt;
  const double b2 = beta * beta;
  const double den = b2 * *p + *r;
  if (den == 0.0) return std::nullopt;
  return (1.0 + b2) * *p * *r / den;
}

EventRecall event_recall(std::span<const AnomalyEvent> events, std::span<const Label> pred) {
  EventRecall out;
  out.total = events.size();
  for (const auto& ev : events) {
    if (ev.end() > pred.size() || ev.end() < ev.start) {
      throw std::out_of_range("event [" + std::to_string(ev.start) + ", +" +
                              std::to_string(ev.length) + ") exceeds " +
                              std::to_string(pred.size()) + " predictions");
    }
    const auto first = pred.begin() + static_cast<std::ptrdiff_t>(ev.start);
    const auto last = pred.begin() + static_cast<std::ptrdiff_t>(ev.end());
    if (std::find(first, last, Label::Anomalous) != last) ++out.detected;
  }
  out.ratio = ratio(out.detected, out.total);
  return out;
}

MetricsReport score(std::span<const Label> pred, std::span<const Label> truth,
                    const std::vector<AnomalyEvent>* events, std::span<const double> betas) {
  MetricsReport r;
  r.counts = confusion(pred, truth);
  r.accuracy = accuracy(r.counts);
  r.precision = precision(r.counts);
  r.recall = recall(r.counts);
  r.f1 = f_beta(r.precision, r.recall, 1.0);
  r.f0_1 = f_beta(r.precision, r.recall, 0.1);
  for (double b : betas) r.f_betas.emplace_back(b, f_beta(r.precision, r.recall, b));
  if (events) r.events = event_recall(*events, pred);
  return r;
}

MetricsReport score_files(const std::filesystem::path& pred_path,
                          const std::filesystem::path& truth_path,
                          const std::optional<std::filesystem::path>& events_path,
                          std::span<const double> betas) {
  const auto pred = read_labels(pred_path);
  const auto truth = read_labels(truth_path);
  if (events_path) {
    const auto events = read_events(*events_path);
    return score(pred, truth, &events, betas);
  }
  return score(pred, truth, nullptr, betas);
}

nlohmann::json to_json(const MetricsReport& r) {
  nlohmann::json j = {{"tp", r.counts.tp},
                      {"fp", r.counts.fp},
                      {"tn", r.counts.tn},
                      {"fn", r.counts.fn},
                      {"accuracy", metric_json(r.accuracy)},
                      {"precision", metric_json(r.precision)},
                      {"recall", metric_json(r.recall)},
                      {"f1", metric_json(r.f1)},
                      {"f0_1", metric_json(r.f0_1)}};
  if (!r.f_betas.empty()) {
    nlohmann::json fb = nlohmann::json::object();
    for (const auto& [beta, value] : r.f_betas) fb[format_value(beta)] = metric_json(value);
    j["f_beta"] = std::move(fb);
  }
  if (r.events) {
    j["events_total"] = r.events->total;
    j["events_detected"] = r.events->detected;
    j["event_recall"] = metric_json(r.events->ratio);
  }
  return j;
}

}  // namespace anomset

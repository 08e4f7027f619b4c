// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#include "anomset/engine.hpp"

#include <algorithm>
#include <exception>
#include <numeric>
#include <ostream>
#include <random>
#include <thread>

#include "anomset/config.hpp"
#include "anomset/csv.hpp"

namespace anomset {

namespace {

// Chunks generated per wave and worker; bounds memory for large datasets.
constexpr std::size_t kChunksPerWorkerWave = 8;

class ChunkGenerator {
 public:
  ChunkGenerator(const DatasetSpec& spec, const AnomalySchedule& schedule,
                 const CallbackRegistry& registry)
      : spec_(spec), schedule_(schedule) {
    evaluators_.reserve(spec.variables.size());
    for (std::size_t i = 0; i < spec.variables.size(); ++i) {
      evaluators_.emplace_back(spec.variables[i], static_cast<std::uint16_t>(i), spec.seed,
                               registry);
    }
  }

  /// format_rows: render the final CSV text and drop the values.
  RecordBlock run(std::uint64_t start, std::uint64_t end, bool format_rows,
                  bool labels_column) const {
    RecordBlock block;
    block.chunk_start = start;
    block.width = evaluators_.size();
    const auto count = static_cast<std::size_t>(end - start);
    block.labels.reserve(count);
    block.values.reserve(count * block.width);
    for (std::uint64_t t = start; t < end; ++t) {
      const Label cls = schedule_.label_at(t);
      block.labels.push_back(cls);
      for (std::size_t v = 0; v < evaluators_.size(); ++v) {
        block.values.push_back(evaluate(v, t, cls, 0));
      }
    }
    if (format_rows) {
      block.text.reserve(count * (8 + 20 * block.width));
      for (std::size_t i = 0; i < count; ++i) {
        append_row(block.text, start + i, block.row(i), block.labels[i], labels_column);
      }
      block.values = {};
    }
    return block;
  }

  double evaluate(std::size_t v, std::uint64_t t, Label cls, std::uint32_t attempt) const {
    try {
      return evaluators_[v](t, cls, attempt);
    } catch (const std::exception& e) {
      throw GenerationError("variable '" + spec_.variables[v].name + "' at t=" +
                            std::to_string(t) + ": " + e.what());
    }
  }

 private:
  const DatasetSpec& spec_;
  const AnomalySchedule& schedule_;
  std::vector<VariableEvaluator> evaluators_;
};

void check_stream(std::ostream& out, const char* what) {
  if (!out) throw IoError(std::string("write failed: ") + what);
}

}  // namespace

std::string tool_version() { return ANOMSET_VERSION; }

HardFailureError::HardFailureError(const HardFailure& failure, const std::string& variable_name)
    : std::runtime_error("uniqueness exhausted: variable=" + variable_name +
                         " class=" + std::string(to_string(failure.cls)) +
                         " t=" + std::to_string(failure.t) +
                         " tries=" + std::to_string(failure.tries)),
      failure_(failure) {}

nlohmann::json to_json(const Manifest& m) {
  return {{"format_version", m.format_version},
          {"spec_fingerprint", m.spec_fingerprint},
          {"seed", m.seed},
          {"n_timestamps", m.n_timestamps},
          {"variables", m.variables},
          {"anomalous_points", m.anomalous_points},
          {"event_count", m.event_count},
          {"soft_duplicates_emitted", m.soft_duplicates_emitted},
          {"tool_version", m.tool_version}};
}

void write_manifest(const Manifest& manifest, std::ostream& out) {
  out << to_json(manifest).dump(2) << '\n';
  out.flush();
  check_stream(out, "manifest");
}

RecordBlock generate_chunk(const DatasetSpec& spec, const AnomalySchedule& schedule,
                           std::uint64_t start, std::uint64_t end,
                           const CallbackRegistry& registry) {
  if (start > end || end > schedule.size()) {
    throw std::out_of_range("generate_chunk: chunk outside [0, n_timestamps)");
  }
  return ChunkGenerator(spec, schedule, registry).run(start, end, false, true);
}

GenerationResult generate(const DatasetSpec& spec, const CallbackRegistry& registry,
                          const GenerateOptions& options, std::ostream& data,
                          std::ostream* labels) {
  if (!options.labels_column && labels == nullptr) {
    throw std::invalid_argument("generate: labels sink required when labels_column is false");
  }
  const std::uint64_t n = spec.n_timestamps;
  const std::uint64_t chunk = std::max<std::uint64_t>(1, options.chunk_size);
  const unsigned workers = std::max(1u, options.workers);

  // Phase 1: schedule.
  GenerationResult result;
  result.schedule = build_schedule(spec.anomaly, n, spec.seed);
  const AnomalySchedule& schedule = result.schedule;

  const ChunkGenerator generator(spec, schedule, registry);
  const bool tracking = spec.uniqueness.normal.mode != UniquenessMode::Off ||
                        spec.uniqueness.anomalous.mode != UniquenessMode::Off;

  std::vector<ValueType> key_types;
  std::vector<std::string> names;
  for (const auto& v : spec.variables) {
    key_types.push_back(v.value_type());
    names.push_back(v.name);
  }
  UniquenessTracker tracker(spec.uniqueness, key_types);

  std::string header;
  append_header(header, names, options.labels_column);
  data << header;
  if (!options.labels_column) *labels << "label\n";

  const std::uint64_t chunk_count = (n + chunk - 1) / chunk;
  const std::uint64_t wave = std::uint64_t{workers} * kChunksPerWorkerWave;

  std::vector<RecordBlock> blocks;
  std::vector<std::exception_ptr> errors;
  std::vector<double> row(spec.variables.size());
  std::string text;

  for (std::uint64_t first = 0; first < chunk_count; first += wave) {
    const std::uint64_t count = std::min(wave, chunk_count - first);
    blocks.assign(count, RecordBlock{});
    errors.assign(count, nullptr);

    // Phase 2: each worker owns slots i with i % workers == w.
    auto work = [&](unsigned w) {
      std::vector<std::uint64_t> mine;
      for (std::uint64_t i = w; i < count; i += workers) mine.push_back(i);
      if (options.shuffle_seed != 0) {
        std::shuffle(mine.begin(), mine.end(), std::mt19937_64(options.shuffle_seed + first + w));
      }
      for (auto i : mine) {
        const std::uint64_t start = (first + i) * chunk;
        try {
          blocks[i] = generator.run(start, std::min(n, start + chunk), !tracking,
                                    options.labels_column);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    if (workers == 1 || count == 1) {
      work(0);
      for (unsigned w = 1; w < workers; ++w) work(w);
    } else {
      std::vector<std::jthread> pool;
      for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    }

    // Phase 3: serial finalize in chunk order.
    for (std::uint64_t i = 0; i < count; ++i) {
      if (errors[i]) std::rethrow_exception(errors[i]);
      RecordBlock& block = blocks[i];
      if (tracking) {
        text.clear();
        for (std::size_t r = 0; r < block.size(); ++r) {
          const std::uint64_t t = block.chunk_start + r;
          const Label cls = block.labels[r];
          const auto candidates = block.row(r);
          for (std::size_t v = 0; v < row.size(); ++v) {
            auto eval = [&](std::uint32_t attempt) {
              return attempt == 0 ? candidates[v] : generator.evaluate(v, t, cls, attempt);
            };
            Resolution res;
            try {
              res = tracker.resolve(static_cast<std::uint16_t>(v), t, cls, eval);
            } catch (const NonFiniteValueError& e) {
              throw GenerationError("variable '" + names[v] + "' at t=" + std::to_string(t) +
                                    ": " + e.what());
            }
            if (const auto* fail = std::get_if<HardFailure>(&res)) {
              throw HardFailureError(*fail, names[v]);
            }
            row[v] = std::visit(
                [](const auto& r) -> double {
                  if constexpr (requires { r.value; }) {
                    return r.value;
                  } else {
                    return 0.0;
                  }
                },
                res);
          }
          append_row(text, t, row, cls, options.labels_column);
        }
        data << text;
      } else {
        data << block.text;
      }
      if (!options.labels_column) {
        text.clear();
        for (Label l : block.labels) text += l == Label::Anomalous ? "1\n" : "0\n";
        *labels << text;
      }
      result.rows_written += block.size();
      block = RecordBlock{};
    }
    check_stream(data, "dataset");
  }
  data.flush();
  check_stream(data, "dataset");
  if (labels) {
    labels->flush();
    check_stream(*labels, "labels");
  }

  const auto stats = schedule_stats(schedule);
  auto& m = result.manifest;
  m.spec_fingerprint = spec_fingerprint(spec);
  m.seed = spec.seed;
  m.n_timestamps = n;
  m.variables = names;
  m.anomalous_points = stats.anomalous_points;
  m.event_count = stats.event_count;
  m.soft_duplicates_emitted = tracker.soft_duplicates_emitted();
  m.tool_version = tool_version();
  return result;
}

std::size_t write_csv(std::span<const Record> rows, std::span<const std::string> names,
                      std::ostream& out, bool labels_column) {
  std::string text;
  append_header(text, names, labels_column);
  for (const auto& r : rows) append_row(text, r.t, r.values, r.label, labels_column);
  out << text;
  out.flush();
  check_stream(out, "csv");
  return rows.size();
}

}  // namespace anomset

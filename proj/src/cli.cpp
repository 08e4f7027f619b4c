// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#include "anomset/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <thread>

#include "anomset/config.hpp"
#include "anomset/csv.hpp"
#include "anomset/engine.hpp"
#include "anomset/metrics.hpp"
#include "anomset/plot.hpp"
#include "anomset/schedule.hpp"

namespace anomset::cli {

namespace fs = std::filesystem;

namespace {

struct Failure {
  int code;
  std::string message;
  std::string detail;
};

std::string sibling(const fs::path& data, const std::string& suffix) {
  fs::path p = data;
  p.replace_filename(data.stem().string() + suffix);
  return p.string();
}

DatasetSpec load_cli_spec(const std::string& path) {
  DatasetSpec spec;
  try {
    spec = load_spec(path);
  } catch (const SpecError& e) {
    throw Failure{kValidation, "invalid dataset spec: " + path,
                  ValidationReport{e.issues()}.to_string()};
  } catch (const std::runtime_error& e) {
    throw Failure{kIo, e.what(), {}};
  }
  for (std::size_t i = 0; i < spec.variables.size(); ++i) {
    if (std::holds_alternative<CallbackKind>(spec.variables[i].kind)) {
      throw Failure{kValidation,
                    "variable '" + spec.variables[i].name +
                        "' is kind=callback; callback variables need the library API "
                        "(the command line has no callback registry)",
                    {}};
    }
  }
  return spec;
}

/// Output file written under a temporary name and renamed on commit.
class StagedFile {
 public:
  explicit StagedFile(std::string path) : path_(std::move(path)), tmp_(path_ + ".partial") {
    stream_.open(tmp_, std::ios::binary | std::ios::trunc);
    if (!stream_) throw Failure{kIo, "cannot open " + path_ + " for writing", {}};
  }
  ~StagedFile() {
    if (!committed_ && !keep_) {
      stream_.close();
      std::error_code ec;
      fs::remove(tmp_, ec);
    }
  }

  std::ofstream& stream() { return stream_; }
  const std::string& partial_path() const { return tmp_; }
  void keep_partial() { keep_ = true; }

  void commit() {
    stream_.close();
    if (stream_.fail()) throw Failure{kIo, "write failed: " + path_, {}};
    std::error_code ec;
    fs::rename(tmp_, path_, ec);
    if (ec) throw Failure{kIo, "cannot move output into place: " + path_, ec.message()};
    committed_ = true;
  }

 private:
  std::string path_;
  std::string tmp_;
  std::ofstream stream_;
  bool committed_ = false;
  bool keep_ = false;
};

struct GenerateArgs {
  std::string spec;
  std::string out;
  std::string manifest;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::uint64_t chunk_size = 65536;
  bool split_labels = false;
};

int cmd_generate(const GenerateArgs& a, std::ostream& err) {
  const DatasetSpec spec = load_cli_spec(a.spec);
  const std::string out_path = !a.out.empty() ? a.out : spec.output.path;
  if (out_path.empty()) {
    throw Failure{kValidation, "no output path: pass --out or set output.path", {}};
  }
  const std::string manifest_path =
      !a.manifest.empty()                  ? a.manifest
      : !spec.output.manifest_path.empty() ? spec.output.manifest_path
                                           : sibling(out_path, ".manifest.json");
  const std::string events_path = !spec.output.events_path.empty()
                                      ? spec.output.events_path
                                      : sibling(out_path, ".events.csv");
  const bool split = a.split_labels || !spec.output.labels_column;

  GenerateOptions opts;
  opts.workers = a.workers;
  opts.chunk_size = a.chunk_size;
  opts.labels_column = !split;

  StagedFile data(out_path);
  std::optional<StagedFile> labels;
  if (split) labels.emplace(sibling(out_path, ".labels.csv"));

  GenerationResult result;
  try {
    result = generate(spec, CallbackRegistry{}, opts, data.stream(),
                      labels ? &labels->stream() : nullptr);
  } catch (const IoError& e) {
    data.keep_partial();
    throw Failure{kIo, e.what(), "warning: partial output left at " + data.partial_path()};
  } catch (const HardFailureError& e) {
    throw Failure{kHardFailure, e.what(), {}};
  } catch (const ScheduleInfeasibleError& e) {
    throw Failure{kValidation, e.what(), {}};
  }

  StagedFile manifest(manifest_path);
  write_manifest(result.manifest, manifest.stream());
  StagedFile events(events_path);
  write_events(result.schedule.events(), events.stream());

  data.commit();
  if (labels) labels->commit();
  manifest.commit();
  events.commit();
  err << "wrote " << result.rows_written << " rows to " << out_path << " ("
      << result.manifest.event_count << " anomaly events, " << result.manifest.anomalous_points
      << " anomalous points)\n";
  return kOk;
}

int cmd_validate(const std::string& spec_path, std::ostream& out, std::ostream& err) {
  const DatasetSpec spec = load_cli_spec(spec_path);
  const auto report = validate_spec(spec);
  err << report.to_string();
  out << "valid: " << spec_path << " (fingerprint " << spec_fingerprint(spec) << ")\n";
  return kOk;
}

int cmd_stats(const std::string& spec_path, std::ostream& out) {
  const DatasetSpec spec = load_cli_spec(spec_path);
  try {
    const auto schedule = build_schedule(spec.anomaly, spec.n_timestamps, spec.seed);
    out << to_json(schedule_stats(schedule)).dump(2) << '\n';
  } catch (const ScheduleInfeasibleError& e) {
    throw Failure{kValidation, e.what(), {}};
  }
  return kOk;
}

std::vector<double> parse_betas(const std::vector<std::string>& items) {
  std::vector<double> betas;
  for (const auto& item : items) {
    std::size_t used = 0;
    double b = 0;
    try {
      b = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != item.size() || !(b > 0) || !std::isfinite(b)) {
      throw Failure{kValidation, "--beta: expected positive numbers, got '" + item + "'", {}};
    }
    betas.push_back(b);
  }
  return betas;
}

int cmd_score(const std::string& pred, const std::string& truth, const std::string& events,
              const std::vector<std::string>& beta_items, std::ostream& out) {
  const auto betas = parse_betas(beta_items);
  try {
    const auto report = score_files(pred, truth,
                                    events.empty() ? std::nullopt
                                                   : std::optional<fs::path>(events),
                                    betas);
    out << to_json(report).dump(2) << '\n';
  } catch (const IoError& e) {
    throw Failure{kIo, e.what(), {}};
  } catch (const std::exception& e) {
    throw Failure{kValidation, e.what(), {}};
  }
  return kOk;
}

int cmd_plot(const std::string& data, const std::string& out_path, const std::string& vars) {
  PlotOptions opts;
  if (!vars.empty()) {
    std::stringstream ss(vars);
    std::string name;
    while (std::getline(ss, name, ',')) {
      if (!name.empty()) opts.vars.push_back(name);
    }
  }
  try {
    plot(data, out_path, opts);
  } catch (const IoError& e) {
    throw Failure{kIo, e.what(), {}};
  } catch (const std::exception& e) {
    throw Failure{kValidation, e.what(), {}};
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Deterministic parallel generator for labeled anomaly time-series datasets",
               args.empty() ? "anomset" : args.front()};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate_cmd = app.add_subcommand("generate", "Generate a dataset CSV and manifest");
  generate_cmd->add_option("--spec", gen.spec, "Dataset spec (JSON)")->required();
  generate_cmd->add_option("--out", gen.out, "Output CSV path");
  generate_cmd->add_option("--manifest", gen.manifest, "Manifest JSON path");
  generate_cmd->add_option("--workers", gen.workers, "Worker threads")
      ->check(CLI::PositiveNumber);
  generate_cmd->add_option("--chunk-size", gen.chunk_size, "Rows per work chunk")
      ->check(CLI::PositiveNumber);
  generate_cmd->add_flag("--split-labels", gen.split_labels,
                         "Write labels to <out>.labels.csv instead of a column");

  std::string spec_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a dataset spec");
  validate_cmd->add_option("--spec", spec_path, "Dataset spec (JSON)")->required();

  auto* stats_cmd = app.add_subcommand("stats", "Print anomaly schedule statistics as JSON");
  stats_cmd->add_option("--spec", spec_path, "Dataset spec (JSON)")->required();

  std::string pred, truth, events;
  std::vector<std::string> betas;
  auto* score_cmd = app.add_subcommand("score", "Score predicted labels against ground truth");
  score_cmd->add_option("--pred", pred, "Predicted labels CSV")->required();
  score_cmd->add_option("--truth", truth, "Ground-truth labels CSV")->required();
  score_cmd->add_option("--events", events, "Ground-truth events CSV (start,length)");
  score_cmd->add_option("--beta", betas, "Extra F-beta values, comma separated")
      ->delimiter(',');

  std::string data, plot_out, vars;
  auto* plot_cmd = app.add_subcommand("plot", "Render a dataset as an SVG chart");
  plot_cmd->add_option("--data", data, "Dataset CSV")->required();
  plot_cmd->add_option("--out", plot_out, "SVG output path")->required();
  plot_cmd->add_option("--vars", vars, "Comma-separated variables to plot");

  std::vector<std::string> rest(args.size() > 1 ? args.begin() + 1 : args.end(), args.end());
  std::reverse(rest.begin(), rest.end());
  try {
    app.parse(rest);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    const auto subs = app.get_subcommands();
    err << (subs.empty() ? app.help() : subs.front()->help());
    return kValidation;
  }

  try {
    if (generate_cmd->parsed()) return cmd_generate(gen, err);
    if (validate_cmd->parsed()) return cmd_validate(spec_path, out, err);
    if (stats_cmd->parsed()) return cmd_stats(spec_path, out);
    if (score_cmd->parsed()) return cmd_score(pred, truth, events, betas, out);
    if (plot_cmd->parsed()) return cmd_plot(data, plot_out, vars);
  } catch (const Failure& f) {
    err << (f.code == kHardFailure ? "" : "error: ") << f.message << "\n";
    if (!f.detail.empty()) err << f.detail << (f.detail.back() == '\n' ? "" : "\n");
    return f.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}

}  // namespace anomset::cli

// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "anomset/csv.hpp"

namespace anomset {

class PlotError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct PlotOptions {
  std::vector<std::string> vars;  // empty: every value column
  int width = 960;
  int panel_height = 140;
};

inline constexpr std::size_t kMaxPlotVariables = 8;

/// One stacked line panel per variable with anomalous spans shaded.
/// Same table and options give byte-identical output.
std::string render_svg(const CsvTable& data, const PlotOptions& options = {});

void plot(const std::filesystem::path& data_path, const std::filesystem::path& out_path,
          const PlotOptions& options = {});

}  // namespace anomset

// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

// Test-only helpers: independent oracles and fixture access.

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "anomset/prng.hpp"

namespace anomset::testing {

// chi2.ppf(0.999, df=99), computed with scipy.stats.
inline constexpr double kChiSquare99At001 = 148.23035916510173;

inline double chi_square_mix64(std::uint64_t n, int buckets = 100) {
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(buckets), 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(mix64(i) >> 11) / 9007199254740992.0;
    ++counts[static_cast<std::size_t>(u * buckets)];
  }
  const double expected = static_cast<double>(n) / buckets;
  double chi = 0.0;
  for (auto c : counts) {
    const double d = static_cast<double>(c) - expected;
    chi += d * d / expected;
  }
  return chi;
}

struct GoldenRow {
  std::uint64_t seed;
  std::uint64_t stream;
  std::uint64_t timestamp;
  std::uint32_t attempt;
  std::uint64_t expected;
};

inline std::vector<GoldenRow> load_prng_golden() {
  std::ifstream in(std::string(ANOMSET_FIXTURES) + "/prng_golden.csv");
  std::vector<GoldenRow> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string f[5];
    for (auto& field : f) std::getline(ss, field, ',');
    rows.push_back({std::stoull(f[0]), std::stoull(f[1]), std::stoull(f[2]),
                    static_cast<std::uint32_t>(std::stoul(f[3])),
                    std::stoull(f[4], nullptr, 16)});
  }
  return rows;
}

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("anomset_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace anomset::testing

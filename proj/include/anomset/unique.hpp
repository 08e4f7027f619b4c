// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_set>
#include <variant>
#include <vector>

#include "anomset/spec.hpp"

namespace anomset {

using ValueKey = std::uint64_t;

class NonFiniteValueError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Exact identity of a value: the integer for discrete values, the binary64
/// bit pattern for continuous ones (-0.0 folds onto 0.0).
ValueKey value_key(double v, ValueType type);

struct Fresh {
  double value;
};
struct SoftDuplicate {
  double value;
};
struct HardFailure {
  std::uint16_t variable;
  std::uint64_t t;
  Label cls;
  std::uint32_t tries;
};
using Resolution = std::variant<Fresh, SoftDuplicate, HardFailure>;

/// Per-(variable, class) registry of emitted value keys. Not thread-safe;
/// used only from the serial finalize phase.
class UniquenessTracker {
 public:
  UniquenessTracker(UniquenessSpec policy, std::vector<ValueType> key_types);

  bool tracks(Label cls) const { return policy_.policy(cls).mode != UniquenessMode::Off; }

  /// Tries attempts 0..max_tries-1 of `eval` until a key not yet seen for
  /// (variable, cls) turns up. With the class untracked, returns eval(0).
  template <class Eval>
  Resolution resolve(std::uint16_t variable, std::uint64_t t, Label cls, Eval&& eval) {
    const auto& pol = policy_.policy(cls);
    if (pol.mode == UniquenessMode::Off) return Fresh{eval(std::uint32_t{0})};

    auto& seen = seen_[slot(variable, cls)];
    const ValueType type = key_types_[variable];
    double candidate = 0.0;
    for (std::uint32_t attempt = 0; attempt < pol.max_tries; ++attempt) {
      candidate = eval(attempt);
      if (seen.insert(value_key(candidate, type)).second) {
        retries_used_ += attempt;
        return Fresh{candidate};
      }
    }
    retries_used_ += pol.max_tries - 1;
    if (pol.mode == UniquenessMode::Soft) {
      ++soft_duplicates_emitted_;
      return SoftDuplicate{candidate};
    }
    return HardFailure{variable, t, cls, pol.max_tries};
  }

  std::uint64_t retries_used() const { return retries_used_; }
  std::uint64_t soft_duplicates_emitted() const { return soft_duplicates_emitted_; }

 private:
  std::size_t slot(std::uint16_t variable, Label cls) const {
    return 2 * std::size_t{variable} + (cls == Label::Anomalous ? 1 : 0);
  }

  UniquenessSpec policy_;
  std::vector<ValueType> key_types_;
  std::vector<std::unordered_set<ValueKey>> seen_;
  std::uint64_t retries_used_ = 0;
  std::uint64_t soft_duplicates_emitted_ = 0;
};

}  // namespace anomset

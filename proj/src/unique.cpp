// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#include "anomset/unique.hpp"

#include <bit>
#include <cmath>
#include <sstream>

namespace anomset {

ValueKey value_key(double v, ValueType type) {
  if (!std::isfinite(v)) {
    std::ostringstream ss;
    ss << "non-finite value " << v << " cannot be tracked for uniqueness";
    throw NonFiniteValueError(ss.str());
  }
  if (type == ValueType::DiscreteInteger) {
    return std::bit_cast<std::uint64_t>(static_cast<std::int64_t>(v));
  }
  if (v == 0.0) v = 0.0;
  return std::bit_cast<std::uint64_t>(v);
}

UniquenessTracker::UniquenessTracker(UniquenessSpec policy, std::vector<ValueType> key_types)
    : policy_(policy), key_types_(std::move(key_types)), seen_(2 * key_types_.size()) {}

}  // namespace anomset

// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#include "anomset/prng.hpp"

#include <algorithm>
#include <cmath>

namespace anomset {

double scale_unit(double unit, double lo, double hi, ValueType type) noexcept {
  if (type == ValueType::Continuous) {
    return lo + unit * (hi - lo);
  }
  const double v = lo + std::floor(unit * (hi - lo + 1.0));
  return std::min(v, hi);
}

}  // namespace anomset

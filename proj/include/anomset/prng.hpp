// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>

namespace anomset {

enum class Purpose : std::uint8_t {
  VariableValue = 0,
  AnomalySchedule = 1,
  Duration = 2,
  Reserved = 3,
};

enum class Label : std::uint8_t { Normal = 0, Anomalous = 1 };

enum class ValueType { Continuous, DiscreteInteger };

/// Identifies an independent random stream.
///
/// Packed layout, most significant first: purpose (8 bits), class (8 bits),
/// variable index (16 bits), lane (32 bits). The lane selects a sub-draw
/// within one (timestamp, attempt) address, e.g. one per noise primitive.
class StreamId {
 public:
  constexpr StreamId(Purpose purpose, Label cls, std::uint16_t variable_index,
                     std::uint32_t lane = 0) noexcept
      : packed_((std::uint64_t{static_cast<std::uint8_t>(purpose)} << 56) |
                (std::uint64_t{static_cast<std::uint8_t>(cls)} << 48) |
                (std::uint64_t{variable_index} << 32) | lane) {}

  constexpr static StreamId from_packed(std::uint64_t packed) noexcept {
    StreamId id{Purpose::VariableValue, Label::Normal, 0};
    id.packed_ = packed;
    return id;
  }

  constexpr std::uint64_t packed() const noexcept { return packed_; }
  constexpr StreamId with_lane(std::uint32_t lane) const noexcept {
    return from_packed((packed_ & ~std::uint64_t{0xFFFFFFFF}) | lane);
  }

  friend constexpr bool operator==(StreamId, StreamId) = default;

 private:
  std::uint64_t packed_;
};

struct DrawAddress {
  std::uint64_t timestamp = 0;
  std::uint32_t attempt = 0;
};

/// SplitMix64 output function applied to a single input.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + 0x9E3779B97F4A7C15ull;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

/// Counter-based draw: a pure function of (seed, stream, address).
constexpr std::uint64_t draw_u64(std::uint64_t seed, StreamId stream,
                                 DrawAddress addr) noexcept {
  const std::uint64_t counter = (addr.timestamp << 32) + addr.attempt;
  return mix64(mix64(seed ^ stream.packed()) + counter);
}

/// Maps the top 53 bits of a u64 onto [0, 1).
constexpr double unit_from_u64(std::uint64_t bits) noexcept {
  return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

constexpr double draw_unit(std::uint64_t seed, StreamId stream,
                           DrawAddress addr) noexcept {
  return unit_from_u64(draw_u64(seed, stream, addr));
}

/// Scales a unit draw onto [lo, hi]. Continuous values are in [lo, hi)
/// (or exactly lo when lo == hi); discrete values are lo + k for integer k,
/// never exceeding hi.
double scale_unit(double unit, double lo, double hi, ValueType type) noexcept;

inline double draw_range(std::uint64_t seed, StreamId stream, DrawAddress addr,
                         double lo, double hi, ValueType type) noexcept {
  return scale_unit(draw_unit(seed, stream, addr), lo, hi, type);
}

}  // namespace anomset

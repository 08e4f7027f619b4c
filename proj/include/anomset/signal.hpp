// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <unordered_map>

#include "anomset/prng.hpp"
#include "anomset/spec.hpp"

namespace anomset {

/// Deterministic draws handed to callbacks. Each index selects an independent
/// value for the current (variable, class, timestamp, attempt).
class DrawAccessor {
 public:
  DrawAccessor(std::uint64_t seed, StreamId stream, DrawAddress addr) noexcept
      : seed_(seed), stream_(stream), addr_(addr) {}

  double unit(std::uint32_t index = 0) const noexcept {
    return draw_unit(seed_, stream_.with_lane(index), addr_);
  }
  std::uint64_t bits(std::uint32_t index = 0) const noexcept {
    return draw_u64(seed_, stream_.with_lane(index), addr_);
  }
  double uniform(double lo, double hi, std::uint32_t index = 0) const noexcept {
    return scale_unit(unit(index), lo, hi, ValueType::Continuous);
  }

  std::uint64_t timestamp() const noexcept { return addr_.timestamp; }
  std::uint32_t attempt() const noexcept { return addr_.attempt; }

 private:
  std::uint64_t seed_;
  StreamId stream_;
  DrawAddress addr_;
};

/// Callback signature: (timestamp, draws) -> value. Callbacks may be invoked
/// concurrently from several workers; any synchronization is theirs.
using CallbackFn = std::function<double(std::uint64_t, const DrawAccessor&)>;

struct CallbackPair {
  CallbackFn normal;
  CallbackFn anomalous;
};

class CallbackRegistry {
 public:
  /// Returns true when an existing entry was replaced.
  bool register_callback(const std::string& key, CallbackFn normal_fn, CallbackFn anomalous_fn);

  const CallbackPair* find(const std::string& key) const;
  bool contains(const std::string& key) const { return find(key) != nullptr; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::unordered_map<std::string, CallbackPair> entries_;
};

class UnresolvedCallbackError : public std::runtime_error {
 public:
  explicit UnresolvedCallbackError(const std::string& key)
      : std::runtime_error("no callback registered for key '" + key + "'"), key_(key) {}
  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

double eval_primitive(const SignalPrimitive& prim, std::uint64_t t, double noise_draw) noexcept;

/// A variable bound to its index, seed and (for callbacks) registry entry.
/// Evaluation is a pure function of (t, class, attempt).
class VariableEvaluator {
 public:
  VariableEvaluator(const VariableSpec& var, std::uint16_t index, std::uint64_t seed,
                    const CallbackRegistry& registry);

  double operator()(std::uint64_t t, Label cls, std::uint32_t attempt) const;

  const VariableSpec& spec() const { return *var_; }

 private:
  const VariableSpec* var_;
  std::uint16_t index_;
  std::uint64_t seed_;
  const CallbackPair* callbacks_ = nullptr;
};

double eval_variable(const VariableSpec& var, std::uint16_t index, std::uint64_t t, Label cls,
                     std::uint64_t seed, std::uint32_t attempt, const CallbackRegistry& registry);

}  // namespace anomset

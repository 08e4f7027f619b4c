// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#include "anomset/signal.hpp"

#include <cmath>
#include <numbers>

namespace anomset {

namespace {

double cycle_position(const SignalPrimitive& p, std::uint64_t t) {
  const double x = static_cast<double>(t) / p.period + p.phase;
  return x - std::floor(x);
}

}  // namespace

bool CallbackRegistry::register_callback(const std::string& key, CallbackFn normal_fn,
                                         CallbackFn anomalous_fn) {
  auto [it, inserted] =
      entries_.insert_or_assign(key, CallbackPair{std::move(normal_fn), std::move(anomalous_fn)});
  return !inserted;
}

const CallbackPair* CallbackRegistry::find(const std::string& key) const {
  auto it = entries_.find(key);
  return it == entries_.end() ? nullptr : &it->second;
}

double eval_primitive(const SignalPrimitive& p, std::uint64_t t, double noise_draw) noexcept {
  switch (p.shape) {
    case Shape::Constant:
      return p.offset;
    case Shape::Linear:
      return p.offset + p.amplitude * static_cast<double>(t);
    case Shape::Sine:
      return p.offset +
             p.amplitude * std::sin(2.0 * std::numbers::pi *
                                    (static_cast<double>(t) / p.period + p.phase));
    case Shape::Square:
      // High for the first half of each cycle, low for the second.
      return p.offset + (cycle_position(p, t) < 0.5 ? p.amplitude : -p.amplitude);
    case Shape::Sawtooth:
      return p.offset + p.amplitude * (2.0 * cycle_position(p, t) - 1.0);
    case Shape::Noise:
      return p.offset + p.amplitude * (2.0 * noise_draw - 1.0) * p.noise_sigma;
  }
  return p.offset;
}

VariableEvaluator::VariableEvaluator(const VariableSpec& var, std::uint16_t index,
                                     std::uint64_t seed, const CallbackRegistry& registry)
    : var_(&var), index_(index), seed_(seed) {
  if (const auto* cb = std::get_if<CallbackKind>(&var.kind)) {
    callbacks_ = registry.find(cb->registry_key);
    if (!callbacks_) throw UnresolvedCallbackError(cb->registry_key);
  }
}

double VariableEvaluator::operator()(std::uint64_t t, Label cls, std::uint32_t attempt) const {
  const StreamId stream(Purpose::VariableValue, cls, index_);
  const DrawAddress addr{t, attempt};
  const bool anomalous = cls == Label::Anomalous;

  if (const auto* s = std::get_if<StochasticKind>(&var_->kind)) {
    const Range& r = anomalous ? s->anomalous_range : s->normal_range;
    return draw_range(seed_, stream, addr, r.lo, r.hi, s->value_type);
  }
  if (const auto* c = std::get_if<CompositeKind>(&var_->kind)) {
    const auto& prims = anomalous ? c->anomalous : c->normal;
    double sum = 0.0;
    for (std::size_t i = 0; i < prims.size(); ++i) {
      const double noise = prims[i].shape == Shape::Noise
                               ? draw_unit(seed_, stream.with_lane(static_cast<std::uint32_t>(i)), addr)
                               : 0.0;
      sum += eval_primitive(prims[i], t, noise);
    }
    return sum;
  }
  const auto& fn = anomalous ? callbacks_->anomalous : callbacks_->normal;
  return fn(t, DrawAccessor(seed_, stream, addr));
}

double eval_variable(const VariableSpec& var, std::uint16_t index, std::uint64_t t, Label cls,
                     std::uint64_t seed, std::uint32_t attempt, const CallbackRegistry& registry) {
  return VariableEvaluator(var, index, seed, registry)(t, cls, attempt);
}

}  // namespace anomset

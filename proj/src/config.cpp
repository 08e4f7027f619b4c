// Copyright 2026 The anomset Authors
// SPDX-License-Identifier: Apache-2.0

#include "anomset/config.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <unordered_set>

namespace anomset {

using json = nlohmann::json;

namespace {

class Issues {
 public:
  void error(std::string path, std::string msg) {
    list.push_back({Severity::Error, std::move(path), std::move(msg)});
  }
  void warning(std::string path, std::string msg) {
    list.push_back({Severity::Warning, std::move(path), std::move(msg)});
  }
  std::vector<ValidationIssue> list;
};

std::string fmt_num(double v) {
  std::ostringstream ss;
  ss << v;
  return ss.str();
}

/// Field access on one JSON object that remembers which keys were consumed.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path, Issues& issues)
      : obj_(obj), path_(std::move(path)), issues_(issues) {}

  ~ObjectReader() {
    if (!obj_.is_object()) return;
    for (const auto& [key, _] : obj_.items()) {
      if (!seen_.contains(key)) issues_.error(path_ + "/" + key, "unknown field");
    }
  }

  std::string child(std::string_view key) const { return path_ + "/" + std::string(key); }

  const json* find(std::string_view key) {
    seen_.insert(std::string(key));
    auto it = obj_.find(key);
    return it == obj_.end() ? nullptr : &*it;
  }

  const json* require(std::string_view key) {
    const json* v = find(key);
    if (!v) issues_.error(child(key), "missing required field");
    return v;
  }

  template <class T, class Conv>
  void read(std::string_view key, T& out, bool required, Conv conv) {
    const json* v = required ? require(key) : find(key);
    if (v) conv(*v, child(key), out);
  }

 private:
  const json& obj_;
  std::string path_;
  Issues& issues_;
  std::set<std::string> seen_;
};

struct Converters {
  Issues& issues;

  bool expect_object(const json& v, const std::string& path) {
    if (v.is_object()) return true;
    issues.error(path, "expected an object");
    return false;
  }

  template <class UInt>
  void unsigned_int(const json& v, const std::string& path, UInt& out) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      issues.error(path, "expected a non-negative integer");
      return;
    }
    const auto raw = v.get<std::uint64_t>();
    if (raw > std::numeric_limits<UInt>::max()) {
      issues.error(path, "integer out of range");
      return;
    }
    out = static_cast<UInt>(raw);
  }

  void number(const json& v, const std::string& path, double& out) {
    if (!v.is_number()) {
      issues.error(path, "expected a number");
      return;
    }
    out = v.get<double>();
  }

  void boolean(const json& v, const std::string& path, bool& out) {
    if (!v.is_boolean()) {
      issues.error(path, "expected true or false");
      return;
    }
    out = v.get<bool>();
  }

  void string(const json& v, const std::string& path, std::string& out) {
    if (!v.is_string()) {
      issues.error(path, "expected a string");
      return;
    }
    out = v.get<std::string>();
  }

  void range(const json& v, const std::string& path, Range& out) {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
      issues.error(path, "expected [lo, hi]");
      return;
    }
    out = {v[0].get<double>(), v[1].get<double>()};
  }

  void duration(const json& v, const std::string& path, DurationRange& out) {
    if (!v.is_array() || v.size() != 2) {
      issues.error(path, "expected [d_min, d_max]");
      return;
    }
    unsigned_int(v[0], path + "/0", out.min);
    unsigned_int(v[1], path + "/1", out.max);
  }

  void primitive(const json& v, const std::string& path, SignalPrimitive& out) {
    if (!expect_object(v, path)) return;
    ObjectReader r(v, path, issues);
    std::string shape;
    r.read("shape", shape, true, [&](auto& j, auto p, auto& o) { string(j, p, o); });
    static const std::pair<const char*, Shape> kShapes[] = {
        {"constant", Shape::Constant}, {"linear", Shape::Linear},
        {"sine", Shape::Sine},         {"square", Shape::Square},
        {"sawtooth", Shape::Sawtooth}, {"noise", Shape::Noise}};
    bool known = shape.empty();
    for (const auto& [name, s] : kShapes) {
      if (shape == name) {
        out.shape = s;
        known = true;
      }
    }
    if (!known) issues.error(r.child("shape"), "unknown shape '" + shape + "'");
    auto num = [&](auto& j, auto p, auto& o) { number(j, p, o); };
    r.read("amplitude", out.amplitude, false, num);
    r.read("period", out.period, false, num);
    r.read("phase", out.phase, false, num);
    r.read("offset", out.offset, false, num);
    r.read("noise_sigma", out.noise_sigma, false, num);
  }

  void primitives(const json& v, const std::string& path, std::vector<SignalPrimitive>& out) {
    if (!v.is_array()) {
      issues.error(path, "expected an array of signal primitives");
      return;
    }
    out.resize(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) primitive(v[i], path + "/" + std::to_string(i), out[i]);
  }

  void variable(const json& v, const std::string& path, VariableSpec& out) {
    if (!expect_object(v, path)) return;
    ObjectReader r(v, path, issues);
    auto str = [&](auto& j, auto p, auto& o) { string(j, p, o); };
    r.read("name", out.name, true, str);
    std::string kind;
    r.read("kind", kind, true, str);
    if (kind == "stochastic") {
      StochasticKind s;
      std::string vt = "continuous";
      r.read("value_type", vt, false, str);
      if (vt == "discrete" || vt == "discrete-integer") {
        s.value_type = ValueType::DiscreteInteger;
      } else if (vt != "continuous") {
        issues.error(r.child("value_type"), "expected \"continuous\" or \"discrete\"");
      }
      auto rng = [&](auto& j, auto p, auto& o) { range(j, p, o); };
      r.read("normal_range", s.normal_range, true, rng);
      r.read("anomalous_range", s.anomalous_range, true, rng);
      out.kind = s;
    } else if (kind == "composite") {
      CompositeKind c;
      auto prims = [&](auto& j, auto p, auto& o) { primitives(j, p, o); };
      r.read("normal", c.normal, true, prims);
      r.read("anomalous", c.anomalous, true, prims);
      out.kind = std::move(c);
    } else if (kind == "callback") {
      CallbackKind c;
      r.read("registry_key", c.registry_key, true, str);
      out.kind = std::move(c);
    } else if (!kind.empty()) {
      issues.error(r.child("kind"), "expected \"stochastic\", \"composite\" or \"callback\"");
    }
  }

  void anomaly(const json& v, const std::string& path, AnomalySpec& out) {
    if (!expect_object(v, path)) return;
    ObjectReader r(v, path, issues);
    std::string mode = "frequency";
    r.read("mode", mode, false, [&](auto& j, auto p, auto& o) { string(j, p, o); });
    auto uint = [&](auto& j, auto p, auto& o) { unsigned_int(j, p, o); };
    if (mode == "frequency") {
      FrequencyMode m;
      r.read("f", m.f, true, [&](auto& j, auto p, auto& o) { number(j, p, o); });
      out.mode = m;
    } else if (mode == "point_count") {
      PointCountMode m;
      r.read("k", m.k, true, uint);
      out.mode = m;
    } else if (mode == "event_count") {
      EventCountMode m;
      r.read("e", m.e, true, uint);
      out.mode = m;
    } else {
      issues.error(r.child("mode"),
                   "expected \"frequency\", \"point_count\" or \"event_count\"");
    }
    r.read("duration_range", out.duration_range, true,
           [&](auto& j, auto p, auto& o) { duration(j, p, o); });
    r.read("allow_overlap", out.allow_overlap, false,
           [&](auto& j, auto p, auto& o) { boolean(j, p, o); });
  }

  void policy(const json& v, const std::string& path, UniquenessPolicy& out) {
    if (!expect_object(v, path)) return;
    ObjectReader r(v, path, issues);
    std::string mode = "off";
    r.read("mode", mode, false, [&](auto& j, auto p, auto& o) { string(j, p, o); });
    if (mode == "off") {
      out.mode = UniquenessMode::Off;
    } else if (mode == "soft") {
      out.mode = UniquenessMode::Soft;
    } else if (mode == "hard") {
      out.mode = UniquenessMode::Hard;
    } else {
      issues.error(r.child("mode"), "expected \"off\", \"soft\" or \"hard\"");
    }
    r.read("max_tries", out.max_tries, false,
           [&](auto& j, auto p, auto& o) { unsigned_int(j, p, o); });
  }

  void uniqueness(const json& v, const std::string& path, UniquenessSpec& out) {
    if (!expect_object(v, path)) return;
    ObjectReader r(v, path, issues);
    auto pol = [&](auto& j, auto p, auto& o) { policy(j, p, o); };
    r.read("normal", out.normal, false, pol);
    r.read("anomalous", out.anomalous, false, pol);
  }

  void output(const json& v, const std::string& path, OutputSpec& out) {
    if (!expect_object(v, path)) return;
    ObjectReader r(v, path, issues);
    auto str = [&](auto& j, auto p, auto& o) { string(j, p, o); };
    r.read("path", out.path, false, str);
    r.read("manifest_path", out.manifest_path, false, str);
    r.read("events_path", out.events_path, false, str);
    r.read("labels_column", out.labels_column, false,
           [&](auto& j, auto p, auto& o) { boolean(j, p, o); });
  }
};

void check_range(Issues& issues, const std::string& path, const Range& r, ValueType type) {
  if (!std::isfinite(r.lo) || !std::isfinite(r.hi)) {
    issues.error(path, "range bounds must be finite");
    return;
  }
  if (r.lo > r.hi) {
    issues.error(path, "lo ≤ hi violated (lo=" + fmt_num(r.lo) + ", hi=" + fmt_num(r.hi) + ")");
  }
  if (type == ValueType::DiscreteInteger &&
      (std::floor(r.lo) != r.lo || std::floor(r.hi) != r.hi)) {
    issues.error(path, "discrete range bounds must be integers");
  }
}

void check_primitives(Issues& issues, const std::string& path,
                      const std::vector<SignalPrimitive>& prims) {
  if (prims.empty()) issues.error(path, "composite primitive list must be non-empty");
  for (std::size_t i = 0; i < prims.size(); ++i) {
    const auto& p = prims[i];
    const std::string at = path + "/" + std::to_string(i);
    for (double v : {p.amplitude, p.period, p.phase, p.offset, p.noise_sigma}) {
      if (!std::isfinite(v)) {
        issues.error(at, "primitive parameters must be finite");
        break;
      }
    }
    const bool periodic =
        p.shape == Shape::Sine || p.shape == Shape::Square || p.shape == Shape::Sawtooth;
    if (periodic && !(p.period > 0)) issues.error(at + "/period", "period must be > 0");
    if (periodic && !(p.phase >= 0 && p.phase < 1)) {
      issues.error(at + "/phase", "phase must be in [0, 1)");
    }
    if (p.shape == Shape::Noise && !(p.noise_sigma >= 0)) {
      issues.error(at + "/noise_sigma", "noise_sigma must be ≥ 0");
    }
  }
}

// Approximate number of rows of each class a schedule will produce.
std::pair<std::uint64_t, std::uint64_t> expected_points(const DatasetSpec& spec) {
  const std::uint64_t n = spec.n_timestamps;
  std::uint64_t anomalous = 0;
  if (const auto* m = std::get_if<FrequencyMode>(&spec.anomaly.mode)) {
    anomalous = frequency_budget(m->f, n);
  } else if (const auto* m = std::get_if<PointCountMode>(&spec.anomaly.mode)) {
    anomalous = m->k;
  } else if (const auto* m = std::get_if<EventCountMode>(&spec.anomaly.mode)) {
    anomalous = m->e * spec.anomaly.duration_range.min;
  }
  anomalous = std::min(anomalous, n);
  return {n - anomalous, anomalous};
}

json num(double v) { return json(v == 0.0 ? 0.0 : v); }

json range_json(const Range& r) { return json::array({num(r.lo), num(r.hi)}); }

json primitive_json(const SignalPrimitive& p) {
  return {{"shape", std::string(to_string(p.shape))},
          {"amplitude", num(p.amplitude)},
          {"period", num(p.period)},
          {"phase", num(p.phase)},
          {"offset", num(p.offset)},
          {"noise_sigma", num(p.noise_sigma)}};
}

json policy_json(const UniquenessPolicy& p) {
  static const char* kModes[] = {"off", "soft", "hard"};
  return {{"mode", kModes[static_cast<int>(p.mode)]}, {"max_tries", p.max_tries}};
}

json content_json(const DatasetSpec& spec) {
  json vars = json::array();
  for (const auto& v : spec.variables) {
    json j = {{"name", v.name}};
    if (const auto* s = std::get_if<StochasticKind>(&v.kind)) {
      j["kind"] = "stochastic";
      j["value_type"] = s->value_type == ValueType::Continuous ? "continuous" : "discrete";
      j["normal_range"] = range_json(s->normal_range);
      j["anomalous_range"] = range_json(s->anomalous_range);
    } else if (const auto* c = std::get_if<CompositeKind>(&v.kind)) {
      j["kind"] = "composite";
      j["normal"] = json::array();
      for (const auto& p : c->normal) j["normal"].push_back(primitive_json(p));
      j["anomalous"] = json::array();
      for (const auto& p : c->anomalous) j["anomalous"].push_back(primitive_json(p));
    } else {
      j["kind"] = "callback";
      j["registry_key"] = std::get<CallbackKind>(v.kind).registry_key;
    }
    vars.push_back(std::move(j));
  }

  json anomaly = {{"duration_range", {spec.anomaly.duration_range.min,
                                      spec.anomaly.duration_range.max}},
                  {"allow_overlap", spec.anomaly.allow_overlap}};
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, FrequencyMode>) {
          anomaly["mode"] = "frequency";
          anomaly["f"] = num(m.f);
        } else if constexpr (std::is_same_v<M, PointCountMode>) {
          anomaly["mode"] = "point_count";
          anomaly["k"] = m.k;
        } else {
          anomaly["mode"] = "event_count";
          anomaly["e"] = m.e;
        }
      },
      spec.anomaly.mode);

  return {{"format_version", spec.format_version},
          {"n_timestamps", spec.n_timestamps},
          {"seed", spec.seed},
          {"variables", std::move(vars)},
          {"anomaly", std::move(anomaly)},
          {"uniqueness",
           {{"normal", policy_json(spec.uniqueness.normal)},
            {"anomalous", policy_json(spec.uniqueness.anomalous)}}}};
}

}  // namespace

bool ValidationReport::ok() const {
  for (const auto& i : issues) {
    if (i.severity == Severity::Error) return false;
  }
  return true;
}

std::string ValidationReport::to_string() const {
  std::string out;
  for (const auto& i : issues) {
    out += i.severity == Severity::Error ? "error: " : "warning: ";
    out += i.path.empty() ? "/" : i.path;
    out += ": " + i.message + "\n";
  }
  return out;
}

SpecError::SpecError(std::vector<ValidationIssue> issues)
    : std::runtime_error([&] {
        ValidationReport r{issues};
        return "invalid dataset spec:\n" + r.to_string();
      }()),
      issues_(std::move(issues)) {}

std::string_view to_string(Label cls) {
  return cls == Label::Anomalous ? "anomalous" : "normal";
}

std::string_view to_string(Shape shape) {
  switch (shape) {
    case Shape::Constant: return "constant";
    case Shape::Linear: return "linear";
    case Shape::Sine: return "sine";
    case Shape::Square: return "square";
    case Shape::Sawtooth: return "sawtooth";
    case Shape::Noise: return "noise";
  }
  return "constant";
}

DatasetSpec parse_spec(std::string_view document) {
  json doc;
  try {
    doc = json::parse(document);
  } catch (const json::parse_error& e) {
    throw SpecError({{Severity::Error, "",
                      "syntax error at byte " + std::to_string(e.byte) + ": " + e.what()}});
  }

  Issues issues;
  Converters conv{issues};
  DatasetSpec spec;
  if (conv.expect_object(doc, "")) {
    ObjectReader r(doc, "", issues);
    auto uint = [&](auto& j, auto p, auto& o) { conv.unsigned_int(j, p, o); };
    r.read("format_version", spec.format_version, false, uint);
    r.read("n_timestamps", spec.n_timestamps, true, uint);
    r.read("seed", spec.seed, true, uint);
    if (const json* vars = r.require("variables")) {
      if (!vars->is_array()) {
        issues.error("/variables", "expected an array");
      } else {
        spec.variables.resize(vars->size());
        for (std::size_t i = 0; i < vars->size(); ++i) {
          conv.variable((*vars)[i], "/variables/" + std::to_string(i), spec.variables[i]);
        }
      }
    }
    r.read("anomaly", spec.anomaly, false, [&](auto& j, auto p, auto& o) { conv.anomaly(j, p, o); });
    r.read("uniqueness", spec.uniqueness, false,
           [&](auto& j, auto p, auto& o) { conv.uniqueness(j, p, o); });
    r.read("output", spec.output, false, [&](auto& j, auto p, auto& o) { conv.output(j, p, o); });
  }
  if (!issues.list.empty()) throw SpecError(std::move(issues.list));

  auto report = validate_spec(spec);
  if (!report.ok()) {
    std::erase_if(report.issues, [](const auto& i) { return i.severity != Severity::Error; });
    throw SpecError(std::move(report.issues));
  }
  return spec;
}

DatasetSpec load_spec(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open spec file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_spec(ss.str());
}

ValidationReport validate_spec(const DatasetSpec& spec) {
  Issues issues;
  if (spec.format_version != 1) issues.error("/format_version", "only format_version 1 is supported");
  if (spec.n_timestamps < 1) issues.error("/n_timestamps", "n_timestamps must be ≥ 1");

  if (spec.variables.empty()) issues.error("/variables", "at least one variable is required");
  if (spec.variables.size() > kMaxVariables) {
    issues.error("/variables", "at most 65536 variables are supported");
  }
  std::unordered_set<std::string> names;
  for (std::size_t i = 0; i < spec.variables.size(); ++i) {
    const auto& v = spec.variables[i];
    const std::string at = "/variables/" + std::to_string(i);
    if (v.name.empty()) {
      issues.error(at + "/name", "variable name must be non-empty");
    } else if (v.name.find_first_of(",\"\r\n\t ") != std::string::npos) {
      issues.error(at + "/name", "variable name must not contain commas, quotes or whitespace");
    } else if (v.name == "t" || v.name == "label") {
      issues.error(at + "/name", "'" + v.name + "' is a reserved column name");
    } else if (!names.insert(v.name).second) {
      issues.error(at + "/name", "duplicate variable name '" + v.name + "'");
    }

    if (const auto* s = std::get_if<StochasticKind>(&v.kind)) {
      check_range(issues, at + "/normal_range", s->normal_range, s->value_type);
      check_range(issues, at + "/anomalous_range", s->anomalous_range, s->value_type);
    } else if (const auto* c = std::get_if<CompositeKind>(&v.kind)) {
      check_primitives(issues, at + "/normal", c->normal);
      check_primitives(issues, at + "/anomalous", c->anomalous);
    } else if (std::get<CallbackKind>(v.kind).registry_key.empty()) {
      issues.error(at + "/registry_key", "registry_key must be non-empty");
    }
  }

  const auto& a = spec.anomaly;
  const auto n = spec.n_timestamps;
  const auto& d = a.duration_range;
  if (d.min < 1 || d.min > d.max || d.max > n) {
    issues.error("/anomaly/duration_range", "requires 1 ≤ d_min ≤ d_max ≤ n_timestamps");
  }
  if (const auto* m = std::get_if<FrequencyMode>(&a.mode)) {
    if (!(m->f >= 0.0 && m->f <= 1.0)) issues.error("/anomaly/f", "f must be in [0, 1]");
  } else if (const auto* m = std::get_if<PointCountMode>(&a.mode)) {
    if (m->k > n) issues.error("/anomaly/k", "k exceeds n_timestamps");
  } else if (const auto* m = std::get_if<EventCountMode>(&a.mode)) {
    // Disjoint events need a normal gap between neighbours.
    if (!a.allow_overlap && m->e > 0 && d.min >= 1 &&
        (m->e > n || m->e * d.min + (m->e - 1) > n)) {
      issues.error("/anomaly/e", "e events of length ≥ d_min cannot fit disjointly in n_timestamps");
    }
  }

  for (Label cls : {Label::Normal, Label::Anomalous}) {
    const auto& pol = spec.uniqueness.policy(cls);
    const std::string at = std::string("/uniqueness/") + std::string(to_string(cls));
    if (pol.max_tries < 1) issues.error(at + "/max_tries", "max_tries must be ≥ 1");
  }

  if (issues.list.empty()) {
    const auto [normal_pts, anomalous_pts] = expected_points(spec);
    for (std::size_t i = 0; i < spec.variables.size(); ++i) {
      const auto* s = std::get_if<StochasticKind>(&spec.variables[i].kind);
      if (!s || s->value_type != ValueType::DiscreteInteger) continue;
      for (Label cls : {Label::Normal, Label::Anomalous}) {
        if (spec.uniqueness.policy(cls).mode != UniquenessMode::Hard) continue;
        const Range& r = cls == Label::Anomalous ? s->anomalous_range : s->normal_range;
        const double domain = r.hi - r.lo + 1.0;
        const auto needed = cls == Label::Anomalous ? anomalous_pts : normal_pts;
        if (static_cast<double>(needed) > domain) {
          issues.warning("/variables/" + std::to_string(i),
                         "uniqueness may be unsatisfiable: " + std::to_string(needed) + " " +
                             std::string(to_string(cls)) + " points requested from " +
                             fmt_num(domain) + " distinct values");
        }
      }
    }
  }
  return {std::move(issues.list)};
}

nlohmann::json spec_to_json(const DatasetSpec& spec) {
  json j = content_json(spec);
  j["output"] = {{"path", spec.output.path},
                 {"manifest_path", spec.output.manifest_path},
                 {"events_path", spec.output.events_path},
                 {"labels_column", spec.output.labels_column}};
  return j;
}

std::string serialize_spec(const DatasetSpec& spec) { return spec_to_json(spec).dump(2) + "\n"; }

std::string canonical_spec(const DatasetSpec& spec) { return content_json(spec).dump(); }

std::string spec_fingerprint(const DatasetSpec& spec) {
  const std::string text = canonical_spec(spec);
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_Digest(text.data(), text.size(), digest, &len, EVP_sha256(), nullptr);
  static const char* kHex = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

}  // namespace anomset

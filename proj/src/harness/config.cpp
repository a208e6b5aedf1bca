// Copyright 2026 The QTL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qtl/harness/config.hpp"

#include <cmath>
#include <set>

#include "qtl/errors.hpp"

namespace qtl::harness {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw Error(ErrorCode::Config, path + ": " + what);
}

double as_double(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

std::int64_t as_int(const json& j, const std::string& path) {
  if (j.is_number_integer()) return j.get<std::int64_t>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::isfinite(v) && v == std::floor(v) && std::abs(v) < 9.0e15) return static_cast<std::int64_t>(v);
  }
  fail(path, "expected an integer");
}

std::uint64_t as_uint(const json& j, const std::string& path) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  const std::int64_t v = as_int(j, path);
  if (v < 0) fail(path, "expected a non-negative integer");
  return static_cast<std::uint64_t>(v);
}

bool as_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) fail(path, "expected true or false");
  return j.get<bool>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

template <class T, class Fn>
std::vector<T> as_array(const json& j, const std::string& path, Fn&& element) {
  if (!j.is_array()) fail(path, "expected an array");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(element(j[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

/// Tracks which keys of an object were consumed so leftovers can be
/// rejected by name.
class ObjectReader {
 public:
  ObjectReader(const json& obj, std::string path) : obj_(obj), path_(std::move(path)) {
    if (!obj_.is_object()) fail(path_, "expected an object");
  }

  bool has(const std::string& key) const { return obj_.contains(key); }
  std::string path(const std::string& key) const { return path_ + "." + key; }

  const json& required(const std::string& key) {
    if (!obj_.contains(key)) fail(path(key), "missing required field");
    used_.insert(key);
    return obj_.at(key);
  }

  const json* optional(const std::string& key) {
    if (!obj_.contains(key)) return nullptr;
    used_.insert(key);
    return &obj_.at(key);
  }

  void finish() const {
    for (const auto& [key, value] : obj_.items())
      if (!used_.count(key)) fail(path(key), "unknown key '" + key + "'");
  }

 private:
  const json& obj_;
  std::string path_;
  std::set<std::string> used_;
};

template <class T, class Fn>
T read_or(ObjectReader& r, const std::string& key, T fallback, Fn&& convert) {
  if (const json* j = r.optional(key)) return convert(*j, r.path(key));
  return fallback;
}

std::vector<double> doubles(const json& j, const std::string& path) {
  return as_array<double>(j, path, as_double);
}

std::vector<LevelSpec> levels(const json& j, const std::string& path, bool allow_charge) {
  auto out = as_array<LevelSpec>(j, path, [&](const json& e, const std::string& p) {
    ObjectReader r(e, p);
    LevelSpec level;
    level.energy = as_double(r.required("E"), r.path("E"));
    if (const json* q = r.optional("Q")) {
      if (!allow_charge) fail(r.path("Q"), "charges are not accepted here");
      level.charge = static_cast<int>(as_int(*q, r.path("Q")));
    }
    level.degeneracy = as_uint(r.required("d"), r.path("d"));
    if (level.degeneracy < 1) fail(r.path("d"), "degeneracy must be >= 1");
    r.finish();
    return level;
  });
  if (out.empty()) fail(path, "at least one level is required");
  return out;
}

json levels_json(const std::vector<LevelSpec>& levels) {
  json out = json::array();
  for (const auto& l : levels) {
    json e = {{"E", l.energy}, {"d", l.degeneracy}};
    if (l.charge) e["Q"] = *l.charge;
    out.push_back(std::move(e));
  }
  return out;
}

std::size_t positive_count(const json& j, const std::string& path, std::size_t minimum) {
  const std::uint64_t v = as_uint(j, path);
  if (v < minimum) fail(path, "must be >= " + std::to_string(minimum));
  return static_cast<std::size_t>(v);
}

TypicalityParams parse_typicality(ObjectReader& r) {
  TypicalityParams p;
  const json& spectrum = r.required("spectrum");
  std::optional<std::int64_t> n;
  if (const json* j = r.optional("n")) {
    n = as_int(*j, r.path("n"));
    if (*n < 1) fail(r.path("n"), "must be >= 1");
  }
  if (spectrum.is_string()) {
    if (!n) fail(r.path("n"), "required when spectrum names a family");
    try {
      p.spectrum = typicality::family_spectrum(typicality::parse_family(spectrum.get<std::string>()), *n);
    } catch (const Error& e) {
      fail(r.path("spectrum"), e.what());
    }
  } else {
    p.spectrum = doubles(spectrum, r.path("spectrum"));
    if (p.spectrum.empty()) fail(r.path("spectrum"), "must not be empty");
    if (n && static_cast<std::size_t>(*n) != p.spectrum.size())
      fail(r.path("n"), "does not match the spectrum length");
  }
  p.samples = read_or(r, "samples", p.samples, [](const json& j, const std::string& path) {
    return positive_count(j, path, 2);
  });
  p.moments = read_or(r, "moments", p.moments, [](const json& j, const std::string& path) {
    auto m = as_array<unsigned>(j, path, [](const json& e, const std::string& q) {
      const auto v = as_uint(e, q);
      if (v < 1) fail(q, "moment order must be >= 1");
      return static_cast<unsigned>(v);
    });
    if (m.empty()) fail(path, "must list at least one moment");
    return m;
  });
  p.random_basis = read_or(r, "random_basis", p.random_basis, as_bool);
  p.variance = read_or(r, "variance", p.variance, as_bool);
  p.tolerance_sigmas = read_or(r, "tolerance_sigmas", p.tolerance_sigmas, as_double);
  return p;
}

ScalingParams parse_scaling(ObjectReader& r) {
  ScalingParams p;
  try {
    p.family = typicality::parse_family(as_string(r.required("family"), r.path("family")));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::Config) throw;
    fail(r.path("family"), e.what());
  }
  p.dims = as_array<Index>(r.required("dims"), r.path("dims"), [](const json& e, const std::string& q) {
    const auto v = as_int(e, q);
    if (v < 2) fail(q, "dimension must be >= 2");
    return static_cast<Index>(v);
  });
  if (p.dims.empty()) fail(r.path("dims"), "must not be empty");
  for (std::size_t i = 1; i < p.dims.size(); ++i)
    if (p.dims[i] <= p.dims[i - 1]) fail(r.path("dims"), "must be strictly ascending");
  p.samples = read_or(r, "samples", p.samples, [](const json& j, const std::string& path) {
    return static_cast<std::size_t>(as_uint(j, path));
  });
  if (p.samples == 1) fail(r.path("samples"), "must be 0 (default rule) or >= 2");
  p.monte_carlo = read_or(r, "monte_carlo", p.monte_carlo, as_bool);
  if (p.family == typicality::SpectrumFamily::Alternating) p.expected_slope = -0.5;
  if (const json* j = r.optional("expected_slope")) {
    if (j->is_null()) {
      p.expected_slope.reset();
    } else {
      p.expected_slope = as_double(*j, r.path("expected_slope"));
    }
  }
  p.slope_tolerance = read_or(r, "slope_tolerance", p.slope_tolerance, as_double);
  p.tolerance_sigmas = read_or(r, "tolerance_sigmas", p.tolerance_sigmas, as_double);
  return p;
}

CanonicalParams parse_canonical(ObjectReader& r) {
  CanonicalParams p;
  p.spec_a = levels(r.required("spec_a"), r.path("spec_a"), false);
  p.spec_b = levels(r.required("spec_b"), r.path("spec_b"), false);
  p.total_energy = as_double(r.required("total_energy"), r.path("total_energy"));
  p.samples = read_or(r, "samples", p.samples, [](const json& j, const std::string& path) {
    return positive_count(j, path, 2);
  });
  p.match_tol = read_or(r, "match_tol", p.match_tol, as_double);
  p.tolerance_sigmas = read_or(r, "tolerance_sigmas", p.tolerance_sigmas, as_double);
  p.off_block_tolerance = read_or(r, "off_block_tolerance", p.off_block_tolerance, as_double);
  p.fluctuation_factor = read_or(r, "fluctuation_factor", p.fluctuation_factor, as_double);
  p.fluctuation_min_block = read_or(r, "fluctuation_min_block", p.fluctuation_min_block, as_uint);
  return p;
}

GrandParams parse_grand(ObjectReader& r) {
  GrandParams p;
  p.spec_a = levels(r.required("spec_a"), r.path("spec_a"), true);
  p.spec_b = levels(r.required("spec_b"), r.path("spec_b"), true);
  for (const auto* spec : {&p.spec_a, &p.spec_b})
    for (const auto& l : *spec)
      if (!l.charge) fail(r.path(spec == &p.spec_a ? "spec_a" : "spec_b"), "every level needs a charge Q");
  p.total_energy = as_double(r.required("total_energy"), r.path("total_energy"));
  p.total_charge = static_cast<int>(as_int(r.required("total_charge"), r.path("total_charge")));
  p.samples = read_or(r, "samples", p.samples, [](const json& j, const std::string& path) {
    return static_cast<std::size_t>(as_uint(j, path));
  });
  if (p.samples == 1) fail(r.path("samples"), "must be 0 (skip sampling) or >= 2");
  p.match_tol = read_or(r, "match_tol", p.match_tol, as_double);
  p.tolerance_sigmas = read_or(r, "tolerance_sigmas", p.tolerance_sigmas, as_double);
  p.exact_tolerance = read_or(r, "exact_tolerance", p.exact_tolerance, as_double);
  return p;
}

ThermalizeParams parse_thermalize(ObjectReader& r) {
  ThermalizeParams p;
  p.frequencies = doubles(r.required("frequencies"), r.path("frequencies"));
  if (p.frequencies.empty()) fail(r.path("frequencies"), "must not be empty");
  p.total_energy = as_double(r.required("total_energy"), r.path("total_energy"));
  p.initial = as_array<int>(r.required("initial"), r.path("initial"), [](const json& e, const std::string& q) {
    return static_cast<int>(as_int(e, q));
  });
  p.epsilon = read_or(r, "epsilon", p.epsilon, as_double);
  if (!(p.epsilon > 0.0)) fail(r.path("epsilon"), "must be positive");
  p.times = read_or(r, "times", p.times, doubles);
  if (p.times.empty())
    for (int k = 0; k <= 40; ++k) p.times.push_back(0.5 * k);
  if (const json* j = r.optional("time_unit")) {
    const std::string unit = as_string(*j, r.path("time_unit"));
    if (unit == "relaxation") {
      p.times_in_relaxation_units = true;
    } else if (unit == "absolute") {
      p.times_in_relaxation_units = false;
    } else {
      fail(r.path("time_unit"), "expected 'relaxation' or 'absolute'");
    }
  }
  p.seeds = read_or(r, "seeds", p.seeds, [](const json& j, const std::string& path) {
    return positive_count(j, path, 1);
  });
  if (const json* j = r.optional("spacing")) {
    try {
      p.spacing = dynamics::parse_spacing_rule(as_string(*j, r.path("spacing")));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Config) throw;
      fail(r.path("spacing"), e.what());
    }
  }
  p.baseline_samples = read_or(r, "baseline_samples", p.baseline_samples, [](const json& j, const std::string& path) {
    return positive_count(j, path, 2);
  });
  if (const json* j = r.optional("distance_threshold"))
    if (!j->is_null()) p.distance_threshold = as_double(*j, r.path("distance_threshold"));
  p.mutual_information_tolerance =
      read_or(r, "mutual_information_tolerance", p.mutual_information_tolerance, as_double);
  return p;
}

HorizonParams parse_horizon(ObjectReader& r) {
  HorizonParams p;
  p.mass = as_double(r.required("mass"), r.path("mass"));
  if (!(p.mass > 0.0)) fail(r.path("mass"), "must be positive");
  p.levels = levels(r.required("levels"), r.path("levels"), false);
  p.observable_samples = read_or(r, "observable_samples", p.observable_samples,
                                 [](const json& j, const std::string& path) { return positive_count(j, path, 1); });
  p.distance_tolerance = read_or(r, "distance_tolerance", p.distance_tolerance, as_double);
  p.observable_tolerance = read_or(r, "observable_tolerance", p.observable_tolerance, as_double);
  p.emit_density = read_or(r, "emit_density", p.emit_density, as_bool);
  return p;
}

CountParams parse_count(ObjectReader& r) {
  CountParams p;
  p.frequencies = doubles(r.required("frequencies"), r.path("frequencies"));
  if (p.frequencies.empty()) fail(r.path("frequencies"), "must not be empty");
  p.total_energy = as_double(r.required("total_energy"), r.path("total_energy"));
  p.match_tol = read_or(r, "match_tol", p.match_tol, as_double);
  p.cap = read_or(r, "cap", p.cap, as_uint);
  if (const json* j = r.optional("expected"))
    if (!j->is_null()) p.expected = as_uint(*j, r.path("expected"));
  return p;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Typicality: return "typicality";
    case ExperimentKind::Scaling: return "scaling";
    case ExperimentKind::Canonical: return "canonical";
    case ExperimentKind::Grand: return "grand";
    case ExperimentKind::Thermalize: return "thermalize";
    case ExperimentKind::Horizon: return "horizon";
    case ExperimentKind::OscillatorsCount: return "oscillators-count";
  }
  return "unknown";
}

const std::vector<ExperimentKind>& all_kinds() {
  static const std::vector<ExperimentKind> kinds = {
      ExperimentKind::Typicality, ExperimentKind::Scaling,   ExperimentKind::Canonical,
      ExperimentKind::Grand,      ExperimentKind::Thermalize, ExperimentKind::Horizon,
      ExperimentKind::OscillatorsCount};
  return kinds;
}

ExperimentKind parse_kind(std::string_view name) {
  for (ExperimentKind k : all_kinds())
    if (to_string(k) == name) return k;
  throw Error(ErrorCode::Config, "$.kind: unknown experiment kind '" + std::string(name) + "'");
}

ExperimentConfig parse_config(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::Config, std::string("$: malformed JSON: ") + e.what());
  }
  return parse_config_json(doc);
}

ExperimentConfig parse_config_json(const json& doc) {
  ObjectReader r(doc, "$");
  ExperimentConfig config;
  config.kind = parse_kind(as_string(r.required("kind"), "$.kind"));
  config.seed = read_or(r, "seed", config.seed, as_uint);
  if (const json* j = r.optional("out"))
    if (!j->is_null()) config.out = as_string(*j, "$.out");

  switch (config.kind) {
    case ExperimentKind::Typicality: config.params = parse_typicality(r); break;
    case ExperimentKind::Scaling: config.params = parse_scaling(r); break;
    case ExperimentKind::Canonical: config.params = parse_canonical(r); break;
    case ExperimentKind::Grand: config.params = parse_grand(r); break;
    case ExperimentKind::Thermalize: config.params = parse_thermalize(r); break;
    case ExperimentKind::Horizon: config.params = parse_horizon(r); break;
    case ExperimentKind::OscillatorsCount: config.params = parse_count(r); break;
  }
  r.finish();
  return config;
}

json to_json(const ExperimentConfig& config) {
  json out = {{"kind", std::string(to_string(config.kind))}, {"seed", config.seed}};
  if (config.out) out["out"] = *config.out;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, TypicalityParams>) {
          out["n"] = p.spectrum.size();
          out["spectrum"] = p.spectrum;
          out["samples"] = p.samples;
          out["moments"] = p.moments;
          out["random_basis"] = p.random_basis;
          out["variance"] = p.variance;
          out["tolerance_sigmas"] = p.tolerance_sigmas;
        } else if constexpr (std::is_same_v<T, ScalingParams>) {
          out["family"] = std::string(typicality::to_string(p.family));
          out["dims"] = p.dims;
          out["samples"] = p.samples;
          out["monte_carlo"] = p.monte_carlo;
          out["expected_slope"] = p.expected_slope ? json(*p.expected_slope) : json(nullptr);
          out["slope_tolerance"] = p.slope_tolerance;
          out["tolerance_sigmas"] = p.tolerance_sigmas;
        } else if constexpr (std::is_same_v<T, CanonicalParams>) {
          out["spec_a"] = levels_json(p.spec_a);
          out["spec_b"] = levels_json(p.spec_b);
          out["total_energy"] = p.total_energy;
          out["samples"] = p.samples;
          out["match_tol"] = p.match_tol;
          out["tolerance_sigmas"] = p.tolerance_sigmas;
          out["off_block_tolerance"] = p.off_block_tolerance;
          out["fluctuation_factor"] = p.fluctuation_factor;
          out["fluctuation_min_block"] = p.fluctuation_min_block;
        } else if constexpr (std::is_same_v<T, GrandParams>) {
          out["spec_a"] = levels_json(p.spec_a);
          out["spec_b"] = levels_json(p.spec_b);
          out["total_energy"] = p.total_energy;
          out["total_charge"] = p.total_charge;
          out["samples"] = p.samples;
          out["match_tol"] = p.match_tol;
          out["tolerance_sigmas"] = p.tolerance_sigmas;
          out["exact_tolerance"] = p.exact_tolerance;
        } else if constexpr (std::is_same_v<T, ThermalizeParams>) {
          out["frequencies"] = p.frequencies;
          out["total_energy"] = p.total_energy;
          out["initial"] = p.initial;
          out["epsilon"] = p.epsilon;
          out["times"] = p.times;
          out["time_unit"] = p.times_in_relaxation_units ? "relaxation" : "absolute";
          out["seeds"] = p.seeds;
          out["spacing"] = std::string(dynamics::to_string(p.spacing));
          out["baseline_samples"] = p.baseline_samples;
          out["distance_threshold"] = p.distance_threshold ? json(*p.distance_threshold) : json(nullptr);
          out["mutual_information_tolerance"] = p.mutual_information_tolerance;
        } else if constexpr (std::is_same_v<T, HorizonParams>) {
          out["mass"] = p.mass;
          out["levels"] = levels_json(p.levels);
          out["observable_samples"] = p.observable_samples;
          out["distance_tolerance"] = p.distance_tolerance;
          out["observable_tolerance"] = p.observable_tolerance;
          out["emit_density"] = p.emit_density;
        } else if constexpr (std::is_same_v<T, CountParams>) {
          out["frequencies"] = p.frequencies;
          out["total_energy"] = p.total_energy;
          out["match_tol"] = p.match_tol;
          out["cap"] = p.cap;
          out["expected"] = p.expected ? json(*p.expected) : json(nullptr);
        }
      },
      config.params);
  return out;
}

}  // namespace qtl::harness

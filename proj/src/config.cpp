#include "ddsim/config.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <cstdio>
#include <numbers>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "ddsim/errors.hpp"

namespace ddsim {

namespace {

// Carries the document name so every diagnostic reads "source:line: key: message".
struct Reader {
  std::string source;

  [[noreturn]] void fail(const YAML::Node& at, const std::string& key, const std::string& message) const {
    std::string where = source;
    if (at.IsDefined() && at.Mark().line >= 0) where += ":" + std::to_string(at.Mark().line + 1);
    throw ConfigError(where + ": " + key + ": " + message);
  }

  void check_keys(const YAML::Node& node, const std::string& path, const std::set<std::string>& allowed) const {
    if (!node.IsMap()) fail(node, path, "must be a mapping");
    for (const auto& kv : node) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key)) {
        std::string list;
        for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
        fail(kv.first, path.empty() ? key : path + "." + key, "unknown key (allowed: " + list + ")");
      }
    }
  }

  double number(const YAML::Node& node, const std::string& key) const {
    double v = 0.0;
    try {
      v = node.as<double>();
    } catch (const YAML::Exception&) {
      fail(node, key, "must be a number");
    }
    if (!std::isfinite(v)) fail(node, key, "must be finite");
    return v;
  }

  double positive(const YAML::Node& node, const std::string& key) const {
    const double v = number(node, key);
    if (!(v > 0.0)) fail(node, key, "must be positive");
    return v;
  }

  double non_negative(const YAML::Node& node, const std::string& key) const {
    const double v = number(node, key);
    if (v < 0.0) fail(node, key, "must be >= 0");
    return v;
  }

  std::uint64_t count(const YAML::Node& node, const std::string& key, std::uint64_t min = 0) const {
    const double v = number(node, key);
    if (v != std::floor(v) || v < static_cast<double>(min) || v > 9.0e15) {
      fail(node, key, "must be an integer >= " + std::to_string(min));
    }
    return static_cast<std::uint64_t>(v);
  }

  bool boolean(const YAML::Node& node, const std::string& key) const {
    try {
      return node.as<bool>();
    } catch (const YAML::Exception&) {
      fail(node, key, "must be true or false");
    }
  }

  std::string string(const YAML::Node& node, const std::string& key) const {
    if (!node.IsScalar()) fail(node, key, "must be a string");
    return node.as<std::string>();
  }

  std::vector<double> numbers(const YAML::Node& node, const std::string& key) const {
    if (!node.IsSequence()) fail(node, key, "must be a list of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < node.size(); ++i) out.push_back(number(node[i], key + "[" + std::to_string(i) + "]"));
    return out;
  }

  Vec3 vec3(const YAML::Node& node, const std::string& key) const {
    const auto v = numbers(node, key);
    if (v.size() != 3) fail(node, key, "must have exactly 3 entries");
    return {v[0], v[1], v[2]};
  }
};

SpinSystem parse_system(const Reader& r, const YAML::Node& node, std::optional<std::size_t>& symbolic) {
  r.check_keys(node, "system", {"detunings", "couplings", "symbolic", "n_spins"});
  if (node["symbolic"] && r.boolean(node["symbolic"], "system.symbolic")) {
    if (node["detunings"] || node["couplings"]) {
      r.fail(node, "system.symbolic", "symbolic systems take only n_spins");
    }
    const auto n = node["n_spins"] ? r.count(node["n_spins"], "system.n_spins", 1) : 2;
    if (n > 16) r.fail(node["n_spins"], "system.n_spins", "must be <= 16");
    symbolic = static_cast<std::size_t>(n);
    return {};
  }
  if (!node["detunings"]) r.fail(node, "system.detunings", "missing required key");
  const auto detunings = r.numbers(node["detunings"], "system.detunings");
  const std::size_t n = detunings.size();
  if (node["n_spins"] && r.count(node["n_spins"], "system.n_spins") != n) {
    r.fail(node["n_spins"], "system.n_spins", "does not match the number of detunings");
  }
  std::vector<double> couplings(n * n, 0.0);
  if (const auto c = node["couplings"]) {
    if (!c.IsSequence() || c.size() != n) r.fail(c, "system.couplings", "must be an n x n matrix (list of rows)");
    for (std::size_t i = 0; i < n; ++i) {
      const auto row = r.numbers(c[i], "system.couplings[" + std::to_string(i) + "]");
      if (row.size() != n) r.fail(c[i], "system.couplings", "must be an n x n matrix (list of rows)");
      std::copy(row.begin(), row.end(), couplings.begin() + static_cast<std::ptrdiff_t>(i * n));
    }
  }
  try {
    return SpinSystem(detunings, couplings);
  } catch (const Error& e) {
    r.fail(node, "system", e.what());
  }
}

GeometrySpec parse_geometry(const Reader& r, const YAML::Node& node) {
  r.check_keys(node, "geometry",
               {"n_spins", "mode", "positions", "box_size", "min_separation", "lattice_constant", "lattice_extent",
                "occupancy", "field_axis", "prefactor", "detuning_mean", "detuning_sigma", "detunings",
                "dipolar_angle_power", "max_placement_attempts"});
  GeometrySpec g;
  if (node["n_spins"]) {
    g.n_spins = r.count(node["n_spins"], "geometry.n_spins", 1);
    if (g.n_spins > 16) r.fail(node["n_spins"], "geometry.n_spins", "must be <= 16");
  }
  if (const auto m = node["mode"]) {
    const auto mode = r.string(m, "geometry.mode");
    if (mode == "box") {
      g.mode = GeometryMode::box;
    } else if (mode == "lattice") {
      g.mode = GeometryMode::lattice;
    } else {
      r.fail(m, "geometry.mode", "must be box or lattice");
    }
  }
  if (const auto p = node["positions"]) {
    if (!p.IsSequence()) r.fail(p, "geometry.positions", "must be a list of 3-vectors");
    for (std::size_t i = 0; i < p.size(); ++i) {
      g.positions.push_back(r.vec3(p[i], "geometry.positions[" + std::to_string(i) + "]"));
    }
    if (!node["n_spins"]) g.n_spins = g.positions.size();
  }
  if (node["box_size"]) g.box_size = r.positive(node["box_size"], "geometry.box_size");
  if (node["min_separation"]) g.min_separation = r.positive(node["min_separation"], "geometry.min_separation");
  if (node["lattice_constant"]) g.lattice_constant = r.positive(node["lattice_constant"], "geometry.lattice_constant");
  if (node["lattice_extent"]) g.lattice_extent = r.count(node["lattice_extent"], "geometry.lattice_extent", 1);
  if (const auto o = node["occupancy"]) {
    g.occupancy = r.number(o, "geometry.occupancy");
    if (!(g.occupancy > 0.0 && g.occupancy <= 1.0)) r.fail(o, "geometry.occupancy", "must be in (0, 1]");
  }
  if (const auto f = node["field_axis"]) {
    g.field_axis = r.vec3(f, "geometry.field_axis");
    const double len = std::hypot(g.field_axis[0], g.field_axis[1], g.field_axis[2]);
    if (std::abs(len - 1.0) > 1e-12) r.fail(f, "geometry.field_axis", "must be a unit vector");
  }
  if (node["prefactor"]) g.prefactor = r.number(node["prefactor"], "geometry.prefactor");
  if (node["detuning_mean"]) g.detuning_mean = r.number(node["detuning_mean"], "geometry.detuning_mean");
  if (node["detuning_sigma"]) g.detuning_sigma = r.non_negative(node["detuning_sigma"], "geometry.detuning_sigma");
  if (node["detunings"]) g.detunings = r.numbers(node["detunings"], "geometry.detunings");
  if (const auto p = node["dipolar_angle_power"]) {
    const auto power = r.count(p, "geometry.dipolar_angle_power");
    if (power != 1 && power != 2) r.fail(p, "geometry.dipolar_angle_power", "must be 1 or 2");
    g.dipolar_angle_power = static_cast<int>(power);
  }
  if (node["max_placement_attempts"]) {
    g.max_placement_attempts = r.count(node["max_placement_attempts"], "geometry.max_placement_attempts", 1);
  }
  try {
    g.validate();
  } catch (const Error& e) {
    r.fail(node, "geometry", e.what());
  }
  return g;
}

SequenceConfig parse_sequence(const Reader& r, const YAML::Node& node) {
  r.check_keys(node, "sequence",
               {"name", "names", "tau", "cycle_time", "td_fraction", "include_closing_pulse", "pulse_gap", "custom"});
  SequenceConfig s;
  if (node["name"] && node["names"]) r.fail(node["names"], "sequence.names", "give either name or names");
  if (const auto n = node["name"]) s.names.push_back(r.string(n, "sequence.name"));
  if (const auto n = node["names"]) {
    if (!n.IsSequence() || n.size() == 0) r.fail(n, "sequence.names", "must be a non-empty list");
    for (std::size_t i = 0; i < n.size(); ++i) s.names.push_back(r.string(n[i], "sequence.names"));
  }
  if (const auto c = node["custom"]) {
    r.check_keys(c, "sequence.custom", {"cycle", "pulses"});
    if (!c["cycle"]) r.fail(c, "sequence.custom.cycle", "missing required key");
    if (!c["pulses"] || !c["pulses"].IsSequence()) {
      r.fail(c, "sequence.custom.pulses", "must be a list of [time, azimuth_deg, angle_deg] triples");
    }
    CustomSequence custom;
    custom.cycle_units = r.positive(c["cycle"], "sequence.custom.cycle");
    for (std::size_t i = 0; i < c["pulses"].size(); ++i) {
      const auto key = "sequence.custom.pulses[" + std::to_string(i) + "]";
      const auto v = r.numbers(c["pulses"][i], key);
      if (v.size() != 3) r.fail(c["pulses"][i], key, "must be [time, azimuth_deg, angle_deg]");
      if (v[0] < 0.0 || v[0] > custom.cycle_units) r.fail(c["pulses"][i], key, "time lies outside the cycle");
      custom.pulses.push_back({v[0], v[1], v[2]});
    }
    s.custom = custom;
    if (s.names.empty()) s.names.push_back("custom");
  }
  if (s.names.empty()) r.fail(node, "sequence.name", "missing required key");
  for (const auto& name : s.names) {
    const auto& builtin = builtin_sequence_names();
    if (name == "custom") {
      if (!s.custom) r.fail(node, "sequence.custom", "required when the sequence name is custom");
    } else if (std::find(builtin.begin(), builtin.end(), name) == builtin.end()) {
      r.fail(node["name"] ? node["name"] : node["names"], "sequence.name",
             "unknown sequence '" + name + "' (expected proposed, cpmg, wahuha, mrev8, free or custom)");
    }
  }
  int timing = 0;
  if (node["tau"]) s.tau = r.positive(node["tau"], "sequence.tau"), ++timing;
  if (node["cycle_time"]) s.cycle_time = r.positive(node["cycle_time"], "sequence.cycle_time"), ++timing;
  if (node["td_fraction"]) s.td_fraction = r.positive(node["td_fraction"], "sequence.td_fraction"), ++timing;
  if (timing > 1) r.fail(node, "sequence.tau", "give only one of tau, cycle_time, td_fraction");
  if (node["include_closing_pulse"]) {
    s.include_closing_pulse = r.boolean(node["include_closing_pulse"], "sequence.include_closing_pulse");
  }
  if (node["pulse_gap"]) s.pulse_gap = r.non_negative(node["pulse_gap"], "sequence.pulse_gap");
  return s;
}

void parse_errors(const Reader& r, const YAML::Node& node, RunConfig& c) {
  r.check_keys(node, "errors",
               {"flip_angle_error", "phase_offset", "pulse_width", "include_internal_during_pulse", "drift_rate"});
  if (node["flip_angle_error"]) c.errors.flip_error = r.number(node["flip_angle_error"], "errors.flip_angle_error");
  if (node["phase_offset"]) c.errors.phase_offset = r.number(node["phase_offset"], "errors.phase_offset");
  if (node["pulse_width"]) c.errors.width = r.non_negative(node["pulse_width"], "errors.pulse_width");
  if (node["include_internal_during_pulse"]) {
    c.errors.include_internal_during_pulse =
        r.boolean(node["include_internal_during_pulse"], "errors.include_internal_during_pulse");
  }
  if (node["drift_rate"]) c.drift_rate = r.number(node["drift_rate"], "errors.drift_rate");
}

InitialStateSpec parse_initial(const Reader& r, const YAML::Node& node) {
  InitialStateSpec spec;
  if (node.IsScalar()) {
    const auto kind = r.string(node, "run.initial_state");
    if (kind != "all_transverse_x") r.fail(node, "run.initial_state", "must be all_transverse_x or a mapping");
    return spec;
  }
  r.check_keys(node, "run.initial_state", {"kind", "site", "bloch"});
  const auto kind = node["kind"] ? r.string(node["kind"], "run.initial_state.kind") : std::string("all_transverse_x");
  if (kind == "all_transverse_x") {
    if (node["site"] || node["bloch"]) r.fail(node, "run.initial_state", "site and bloch apply to single_qubit only");
    return spec;
  }
  if (kind != "single_qubit") r.fail(node["kind"], "run.initial_state.kind", "must be all_transverse_x or single_qubit");
  spec.kind = InitialStateKind::single_qubit;
  if (node["site"]) spec.site = r.count(node["site"], "run.initial_state.site");
  if (node["bloch"]) {
    spec.bloch = r.vec3(node["bloch"], "run.initial_state.bloch");
    if (std::hypot(spec.bloch[0], spec.bloch[1], spec.bloch[2]) > 1.0 + 1e-12) {
      r.fail(node["bloch"], "run.initial_state.bloch", "length must be <= 1");
    }
  }
  return spec;
}

RunSection parse_run(const Reader& r, const YAML::Node& node) {
  r.check_keys(node, "run",
               {"n_cycles", "total_time", "total_time_td", "n_realizations", "seed", "workers", "sample_every",
                "initial_state", "fid"});
  RunSection s;
  int durations = 0;
  if (node["n_cycles"]) s.n_cycles = r.count(node["n_cycles"], "run.n_cycles", 1), ++durations;
  if (node["total_time"]) s.total_time = r.positive(node["total_time"], "run.total_time"), ++durations;
  if (node["total_time_td"]) s.total_time_td = r.positive(node["total_time_td"], "run.total_time_td"), ++durations;
  if (durations > 1) r.fail(node, "run.n_cycles", "give only one of n_cycles, total_time, total_time_td");
  if (node["n_realizations"]) s.n_realizations = r.count(node["n_realizations"], "run.n_realizations", 1);
  if (node["seed"]) s.seed = r.count(node["seed"], "run.seed");
  if (node["workers"]) s.workers = r.count(node["workers"], "run.workers", 1);
  if (node["sample_every"]) s.sample_every = r.count(node["sample_every"], "run.sample_every", 1);
  if (node["initial_state"]) s.initial = parse_initial(r, node["initial_state"]);
  if (const auto f = node["fid"]) {
    r.check_keys(f, "run.fid", {"resolution", "horizon"});
    if (f["resolution"]) s.fid.resolution = r.positive(f["resolution"], "run.fid.resolution");
    if (f["horizon"]) s.fid.horizon = r.positive(f["horizon"], "run.fid.horizon");
  }
  return s;
}

ScanConfig parse_scan(const Reader& r, const YAML::Node& node) {
  r.check_keys(node, "scan", {"parameter", "values"});
  ScanConfig s;
  if (!node["parameter"]) r.fail(node, "scan.parameter", "missing required key");
  try {
    s.parameter = scan_parameter_from_string(r.string(node["parameter"], "scan.parameter"));
  } catch (const ArgumentError& e) {
    r.fail(node["parameter"], "scan.parameter", e.what());
  }
  if (!node["values"]) r.fail(node, "scan.values", "missing required key");
  s.values = r.numbers(node["values"], "scan.values");
  if (s.values.empty()) r.fail(node["values"], "scan.values", "must not be empty");
  for (double v : s.values) {
    const bool needs_positive = s.parameter == ScanParameter::tau;
    const bool needs_non_negative = s.parameter == ScanParameter::pulse_width || s.parameter == ScanParameter::pulse_gap;
    if ((needs_positive && !(v > 0.0)) || (needs_non_negative && v < 0.0)) {
      r.fail(node["values"], "scan.values", "value out of range for " + to_string(s.parameter));
    }
  }
  return s;
}

OutputConfig parse_output(const Reader& r, const YAML::Node& node) {
  r.check_keys(node, "output", {"path", "format"});
  OutputConfig o;
  if (node["path"]) o.path = r.string(node["path"], "output.path");
  if (const auto f = node["format"]) {
    try {
      o.format = output_format_from_string(r.string(f, "output.format"));
    } catch (const ArgumentError& e) {
      r.fail(f, "output.format", e.what());
    }
  }
  return o;
}

}  // namespace

ExperimentKind experiment_from_string(const std::string& name) {
  if (name == "toggling") return ExperimentKind::toggling;
  if (name == "evolve") return ExperimentKind::evolve;
  if (name == "compare") return ExperimentKind::compare;
  if (name == "scan") return ExperimentKind::scan;
  if (name == "fid") return ExperimentKind::fid;
  throw ArgumentError("unknown experiment '" + name + "'");
}

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::toggling: return "toggling";
    case ExperimentKind::evolve: return "evolve";
    case ExperimentKind::compare: return "compare";
    case ExperimentKind::scan: return "scan";
    case ExperimentKind::fid: return "fid";
  }
  return "?";
}

OutputFormat output_format_from_string(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "structured") return OutputFormat::structured;
  if (name == "json") return OutputFormat::json;
  throw ArgumentError("unknown format '" + name + "' (expected csv, structured or json)");
}

std::string to_string(OutputFormat format) {
  switch (format) {
    case OutputFormat::csv: return "csv";
    case OutputFormat::structured: return "structured";
    case OutputFormat::json: return "json";
  }
  return "?";
}

ScanParameter scan_parameter_from_string(const std::string& name) {
  if (name == "flip_angle_error") return ScanParameter::flip_angle_error;
  if (name == "phase_offset") return ScanParameter::phase_offset;
  if (name == "pulse_width") return ScanParameter::pulse_width;
  if (name == "tau") return ScanParameter::tau;
  if (name == "pulse_gap") return ScanParameter::pulse_gap;
  throw ArgumentError("unknown scan parameter '" + name +
                      "' (expected flip_angle_error, phase_offset, pulse_width, tau or pulse_gap)");
}

std::string to_string(ScanParameter p) {
  switch (p) {
    case ScanParameter::flip_angle_error: return "flip_angle_error";
    case ScanParameter::phase_offset: return "phase_offset";
    case ScanParameter::pulse_width: return "pulse_width";
    case ScanParameter::tau: return "tau";
    case ScanParameter::pulse_gap: return "pulse_gap";
  }
  return "?";
}

std::size_t RunConfig::n_spins() const {
  if (system) return system->n_spins();
  if (geometry) return geometry->n_spins;
  return symbolic_spins.value_or(0);
}

std::string fnv1a_digest(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

RunConfig parse_config(const std::string& text, const std::string& source) {
  const Reader r{source};
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(source + ":" + std::to_string(e.mark.line + 1) + ": malformed document: " + e.msg);
  }
  if (!root.IsMap()) throw ConfigError(source + ": the document must be a mapping of sections");
  r.check_keys(root, "", {"system", "geometry", "sequence", "errors", "run", "scan", "output"});

  RunConfig c;
  c.digest = fnv1a_digest(text);
  if (root["system"] && root["geometry"]) r.fail(root["geometry"], "geometry", "give either system or geometry");
  if (root["system"]) {
    auto sys = parse_system(r, root["system"], c.symbolic_spins);
    if (!c.symbolic_spins) c.system = std::move(sys);
  } else if (root["geometry"]) {
    c.geometry = parse_geometry(r, root["geometry"]);
  } else {
    r.fail(root, "system", "missing required section (system or geometry)");
  }
  if (root["sequence"]) c.sequence = parse_sequence(r, root["sequence"]);
  if (root["errors"]) parse_errors(r, root["errors"], c);
  if (root["run"]) c.run = parse_run(r, root["run"]);
  if (root["scan"]) c.scan = parse_scan(r, root["scan"]);
  if (root["output"]) c.output = parse_output(r, root["output"]);

  if (c.geometry) {
    if (c.run.seed) c.geometry->seed = *c.run.seed;
  }
  if (c.run.initial.kind == InitialStateKind::single_qubit && c.n_spins() > 0 && c.run.initial.site >= c.n_spins()) {
    r.fail(root["run"]["initial_state"], "run.initial_state.site", "exceeds the number of spins");
  }
  if (c.sequence.pulse_gap > 0.0 && c.sequence.tau && c.sequence.pulse_gap > *c.sequence.tau) {
    r.fail(root["sequence"]["pulse_gap"], "sequence.pulse_gap", "must not exceed tau");
  }
  return c;
}

void validate_for(const RunConfig& c, ExperimentKind kind) {
  auto fail = [](const std::string& key, const std::string& message) { throw ConfigError(key + ": " + message); };
  if (c.symbolic_spins && kind != ExperimentKind::toggling) {
    fail("system.symbolic", "symbolic systems are only supported by the toggling experiment");
  }
  if (c.is_ensemble() && !c.run.seed) fail("run.seed", "required for geometry-based (ensemble) runs");
  if (!c.is_ensemble() && c.run.n_realizations != 1) {
    fail("run.n_realizations", "an explicit system has exactly one realization");
  }
  if (kind != ExperimentKind::fid && c.sequence.names.empty()) fail("sequence", "missing required section");
  const bool timed = c.sequence.tau || c.sequence.cycle_time || c.sequence.td_fraction;
  const bool scans_tau = c.scan && c.scan->parameter == ScanParameter::tau;
  switch (kind) {
    case ExperimentKind::toggling:
      if (c.sequence.names.size() != 1) fail("sequence.names", "toggling takes exactly one sequence");
      if (!c.symbolic_spins && !timed) fail("sequence.tau", "missing (tau, cycle_time or td_fraction)");
      break;
    case ExperimentKind::fid:
      break;
    case ExperimentKind::evolve:
    case ExperimentKind::compare:
    case ExperimentKind::scan: {
      if (kind == ExperimentKind::evolve && c.sequence.names.size() != 1) {
        fail("sequence.names", "evolve takes exactly one sequence (use compare for several)");
      }
      if (kind == ExperimentKind::scan) {
        if (!c.scan) fail("scan", "missing required section for the scan experiment");
        if (c.sequence.names.size() != 1) fail("sequence.names", "scan takes exactly one sequence");
      } else if (c.scan) {
        fail("scan", "only valid for the scan experiment");
      }
      if (!timed && !scans_tau) fail("sequence.tau", "missing (tau, cycle_time or td_fraction)");
      if (!c.run.n_cycles && !c.run.total_time && !c.run.total_time_td) {
        fail("run.n_cycles", "missing (n_cycles, total_time or total_time_td)");
      }
      break;
    }
  }
}

Sequence build_sequence(const SequenceConfig& config, const std::string& name, double tau) {
  if (name != "custom") return sequence_by_name(name, tau);
  if (!config.custom) throw ConfigError("sequence.custom: required when the sequence name is custom");
  std::vector<PulseEvent> events;
  std::map<double, int> ordinals;
  const double deg = std::numbers::pi / 180.0;
  for (const auto& p : config.custom->pulses) {
    PulseEvent e;
    e.time_units = p.time_units;
    e.azimuth = p.azimuth_deg * deg;
    e.angle = p.angle_deg * deg;
    e.ordinal = ordinals[p.time_units]++;
    events.push_back(e);
  }
  return Sequence("custom", tau, config.custom->cycle_units, events);
}

std::string config_reference() {
  return R"(# ddsim run configuration reference
#
# One YAML mapping with the sections below. Unknown keys are rejected.
# Frequencies are angular (rad per time unit); times share one arbitrary unit.

system:                  # explicit spins; give either system or geometry
  detunings: [1.0, -1.0] # required; one entry per spin
  couplings: [[0, 0.5], [0.5, 0]]  # symmetric, zero diagonal; default all zero
  # symbolic: true       # toggling only: symbols d<i>, a<i>_<j> (d1, d2, a for two spins)
  # n_spins: 2           # with symbolic

geometry:                # random spins, one system per realization
  n_spins: 4             # default 4 (at most 16)
  mode: box              # box | lattice
  positions: []          # explicit 3-vectors replace random placement
  box_size: 2.0
  min_separation: 0.5
  lattice_constant: 1.0
  lattice_extent: 4      # sites per cube edge
  occupancy: 0.3         # lattice site occupation probability
  field_axis: [0, 0, 1]  # unit vector
  prefactor: 1.0         # a_ij = prefactor (1 - 3 cos^p theta) / r^3
  dipolar_angle_power: 2 # p; 1 or 2
  detuning_mean: 0.0
  detuning_sigma: 1.0    # normal distribution
  detunings: []          # explicit list overrides the distribution
  max_placement_attempts: 10000

sequence:
  name: proposed         # proposed | cpmg | wahuha | mrev8 | free | custom
  # names: [proposed, wahuha, cpmg, free]   # compare only
  tau: 0.01              # one of tau, cycle_time, td_fraction
  # cycle_time: 0.06     # tau = cycle_time / (cycle length in tau units), per sequence
  # td_fraction: 0.05    # cycle_time = td_fraction * t_d (free-induction estimate)
  include_closing_pulse: true
  pulse_gap: 0.0         # extra delay between pulses sharing one time
  # custom:
  #   cycle: 4           # cycle length in tau units
  #   pulses: [[1, 90, 180], [3, 90, 180]]   # [time in tau, azimuth deg, angle deg]

errors:
  flip_angle_error: 0.0  # theta -> theta (1 + e)
  phase_offset: 0.0      # rad, added to every pulse azimuth
  pulse_width: 0.0       # 0 is a delta pulse
  include_internal_during_pulse: false
  drift_rate: 0.0        # d(detuning)/dt for every spin

run:
  n_cycles: 100          # one of n_cycles, total_time, total_time_td
                         # n_cycles counts cycles of each sequence; compare runs
                         # of different cycle lengths want total_time instead
  # total_time: 6.0
  # total_time_td: 20    # multiples of the free-induction decay time
  n_realizations: 1
  seed: 1                # required with geometry
  workers: 1             # realizations run in parallel; output does not depend on it
  sample_every: 1        # cycles between samples (the final cycle is always sampled)
  initial_state: all_transverse_x   # or {kind: single_qubit, site: 0, bloch: [1, 0, 0]}
  fid:
    resolution: 0        # 0 picks 0.05 / ||H||
    horizon: 0           # 0 picks 1000 / ||H||

scan:                    # scan experiment only
  parameter: flip_angle_error   # flip_angle_error | phase_offset | pulse_width | tau | pulse_gap
  values: [0, 0.01, 0.02, 0.05]

output:
  path: "-"              # "-" is standard output
  format: csv            # csv | structured | json
)";
}

}  // namespace ddsim

#include "ddsim/runner.hpp"

#include <charconv>
#include <cmath>
#include <sstream>

#include <json.hpp>
#include <yaml-cpp/yaml.h>

#include "ddsim/average_hamiltonian.hpp"
#include "ddsim/dynamics.hpp"
#include "ddsim/errors.hpp"

#ifndef DDSIM_VERSION
#define DDSIM_VERSION "0.0.0"
#endif

namespace ddsim {

namespace {

using Json = nlohmann::ordered_json;

// Shortest text that reads back to the same double.
std::string num(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string seed_text(const RunConfig& c) { return c.run.seed ? std::to_string(*c.run.seed) : "none"; }

Json provenance(const RunConfig& c, ExperimentKind kind) {
  Json p;
  p["tool"] = "ddsim";
  p["version"] = tool_version();
  p["experiment"] = to_string(kind);
  p["config_digest"] = "fnv1a64:" + c.digest;
  if (c.run.seed) {
    p["seed"] = *c.run.seed;
  } else {
    p["seed"] = nullptr;
  }
  return p;
}

std::string csv_header(const RunConfig& c, ExperimentKind kind) {
  std::ostringstream out;
  out << "# ddsim " << tool_version() << "\n";
  out << "# experiment: " << to_string(kind) << "\n";
  out << "# config_digest: fnv1a64:" << c.digest << "\n";
  out << "# seed: " << seed_text(c) << "\n";
  return out.str();
}

void emit_yaml(YAML::Emitter& out, const Json& j) {
  switch (j.type()) {
    case Json::value_t::object:
      out << YAML::BeginMap;
      for (auto it = j.begin(); it != j.end(); ++it) {
        out << YAML::Key << it.key() << YAML::Value;
        emit_yaml(out, it.value());
      }
      out << YAML::EndMap;
      break;
    case Json::value_t::array: {
      bool flat = true;
      for (const auto& e : j) flat = flat && !e.is_structured();
      if (flat) out << YAML::Flow;
      out << YAML::BeginSeq;
      for (const auto& e : j) emit_yaml(out, e);
      out << YAML::EndSeq;
      break;
    }
    case Json::value_t::string: out << YAML::DoubleQuoted << j.get<std::string>(); break;
    case Json::value_t::boolean: out << j.get<bool>(); break;
    case Json::value_t::number_float: out << num(j.get<double>()); break;
    case Json::value_t::number_integer: out << j.get<std::int64_t>(); break;
    case Json::value_t::number_unsigned: out << j.get<std::uint64_t>(); break;
    default: out << YAML::Null; break;
  }
}

std::string render_document(const Json& doc, OutputFormat format) {
  if (format == OutputFormat::json) return doc.dump(2) + "\n";
  YAML::Emitter out;
  emit_yaml(out, doc);
  return std::string(out.c_str()) + "\n";
}

// --- timing -------------------------------------------------------------------

struct Timing {
  std::optional<double> decay_time;  // t_d when the config needed it
};

std::optional<double> free_decay_time(const RunConfig& c) {
  if (c.system) return fid_decay_time(*c.system, c.run.fid);
  return ensemble_decay_time(*c.geometry, c.run.n_realizations, c.run.fid, c.run.workers);
}

Timing resolve_timing(const RunConfig& c) {
  Timing t;
  if (c.sequence.td_fraction || c.run.total_time_td) {
    t.decay_time = free_decay_time(c);
    if (!t.decay_time) {
      throw Error("free-induction decay does not cross 1/e within the horizon; t_d-based timing is undefined");
    }
  }
  return t;
}

double tau_for(const RunConfig& c, const std::string& name, const Timing& timing) {
  const double units = build_sequence(c.sequence, name, 1.0).cycle_units();
  if (c.sequence.tau) return *c.sequence.tau;
  if (c.sequence.cycle_time) return *c.sequence.cycle_time / units;
  if (c.sequence.td_fraction) return *c.sequence.td_fraction * *timing.decay_time / units;
  throw ConfigError("sequence.tau: missing (tau, cycle_time or td_fraction)");
}

std::size_t cycles_for(const RunConfig& c, double cycle_time, const Timing& timing) {
  double total = 0.0;
  if (c.run.n_cycles) return *c.run.n_cycles;
  if (c.run.total_time) total = *c.run.total_time;
  if (c.run.total_time_td) total = *c.run.total_time_td * *timing.decay_time;
  const double cycles = std::round(total / cycle_time);
  if (!(cycles >= 1.0)) return 1;
  if (cycles > 1e9) throw ConfigError("run: total time needs more than 1e9 cycles");
  return static_cast<std::size_t>(cycles);
}

CycleOptions cycle_options(const RunConfig& c) {
  CycleOptions o;
  o.errors = c.errors;
  o.include_closing_pulse = c.sequence.include_closing_pulse;
  o.pulse_gap = c.sequence.pulse_gap;
  o.drift_rate = c.drift_rate;
  return o;
}

EnsembleResult run_series(const RunConfig& c, const Sequence& seq, std::size_t n_cycles, const CycleOptions& cycle) {
  EnsembleOptions o;
  o.n_realizations = c.run.n_realizations;
  o.n_cycles = n_cycles;
  o.sample_every = c.run.sample_every;
  o.workers = c.run.workers;
  o.cycle = cycle;
  o.initial = c.run.initial;
  o.fid = c.run.fid;
  EnsembleResult r = c.geometry ? run_ensemble(*c.geometry, seq, o) : run_ensemble(std::vector{*c.system}, seq, o);
  r.seed = c.run.seed.value_or(0);
  r.config_digest = c.digest;
  return r;
}

// --- time-series output -----------------------------------------------------------

struct Series {
  std::vector<std::pair<std::string, std::string>> attrs;  // printed in order
  EnsembleResult result;
  bool final_only = false;
};

void csv_series(std::ostringstream& out, const Series& s) {
  out << "# series:";
  for (const auto& [k, v] : s.attrs) out << " " << k << "=" << v;
  out << "\n";
  const auto& r = s.result;
  for (const auto& real : r.realizations) {
    if (real.failed) {
      out << "# realization " << real.index << " failed: " << real.error << "\n";
      continue;
    }
    const auto& ser = real.series;
    for (std::size_t k = s.final_only ? ser.size() - 1 : 0; k < ser.size(); ++k) {
      out << num(ser.times[k]) << "," << real.index << "," << num(ser.fidelity[k]) << "," << num(ser.mx[k]) << ","
          << num(ser.my[k]) << "," << num(ser.mz[k]) << "\n";
    }
  }
  for (std::size_t k = s.final_only ? r.times.size() - 1 : 0; k < r.times.size(); ++k) {
    out << num(r.times[k]) << ",mean," << num(r.mean_fidelity[k]) << "," << num(r.mean_mx[k]) << ","
        << num(r.mean_my[k]) << "," << num(r.mean_mz[k]) << "\n";
  }
  for (std::size_t k = s.final_only ? r.times.size() - 1 : 0; k < r.times.size(); ++k) {
    out << num(r.times[k]) << ",stderr," << num(r.stderr_fidelity[k]) << ",,,\n";
  }
}

Json system_json(const SpinSystem& sys) {
  Json j;
  j["detunings"] = sys.detunings();
  Json rows = Json::array();
  for (std::size_t i = 0; i < sys.n_spins(); ++i) {
    std::vector<double> row(sys.couplings().begin() + static_cast<std::ptrdiff_t>(i * sys.n_spins()),
                            sys.couplings().begin() + static_cast<std::ptrdiff_t>((i + 1) * sys.n_spins()));
    rows.push_back(row);
  }
  j["couplings"] = rows;
  return j;
}

template <class V>
Json tail(const V& v, bool final_only) {
  if (!final_only || v.empty()) return Json(v);
  return Json(V{v.back()});
}

Json json_series(const Series& s) {
  Json j;
  for (const auto& [k, v] : s.attrs) j[k] = v;
  const auto& r = s.result;
  j["times"] = tail(r.times, s.final_only);
  j["mean_fidelity"] = tail(r.mean_fidelity, s.final_only);
  j["stderr_fidelity"] = tail(r.stderr_fidelity, s.final_only);
  j["mean_mx"] = tail(r.mean_mx, s.final_only);
  j["mean_my"] = tail(r.mean_my, s.final_only);
  j["mean_mz"] = tail(r.mean_mz, s.final_only);
  Json reals = Json::array();
  for (const auto& real : r.realizations) {
    Json e;
    e["index"] = real.index;
    e["failed"] = real.failed;
    if (real.failed) {
      e["error"] = real.error;
    } else {
      e["system"] = system_json(real.system);
      e["fidelity"] = tail(real.series.fidelity, s.final_only);
      e["mx"] = tail(real.series.mx, s.final_only);
      e["my"] = tail(real.series.my, s.final_only);
      e["mz"] = tail(real.series.mz, s.final_only);
    }
    reals.push_back(e);
  }
  j["realizations"] = reals;
  return j;
}

std::string render_series(const RunConfig& c, ExperimentKind kind, const std::vector<Series>& all,
                          const std::vector<std::pair<std::string, std::string>>& notes) {
  if (c.output.format == OutputFormat::csv) {
    std::ostringstream out;
    out << csv_header(c, kind);
    for (const auto& [k, v] : notes) out << "# " << k << ": " << v << "\n";
    out << "time,realization,fidelity,mx,my,mz\n";
    for (const auto& s : all) csv_series(out, s);
    return out.str();
  }
  Json doc;
  doc["provenance"] = provenance(c, kind);
  for (const auto& [k, v] : notes) doc[k] = v;
  Json arr = Json::array();
  for (const auto& s : all) arr.push_back(json_series(s));
  doc["series"] = arr;
  return render_document(doc, c.output.format);
}

std::vector<std::pair<std::string, std::string>> timing_notes(const Timing& t) {
  if (!t.decay_time) return {};
  return {{"t_d", num(*t.decay_time)}};
}

std::string run_dynamics(ExperimentKind kind, const RunConfig& c) {
  const Timing timing = resolve_timing(c);
  std::vector<Series> all;
  for (const auto& name : c.sequence.names) {
    const double tau = tau_for(c, name, timing);
    const Sequence seq = build_sequence(c.sequence, name, tau);
    const std::size_t cycles = cycles_for(c, seq.cycle_time(), timing);
    Series s;
    s.attrs = {{"sequence", name}, {"tau", num(tau)}, {"cycle_time", num(seq.cycle_time())},
               {"n_cycles", std::to_string(cycles)}};
    s.result = run_series(c, seq, cycles, cycle_options(c));
    all.push_back(std::move(s));
  }
  return render_series(c, kind, all, timing_notes(timing));
}

std::string run_scan(const RunConfig& c) {
  const Timing timing = resolve_timing(c);
  const auto& scan = *c.scan;
  const std::string& name = c.sequence.names.front();
  std::vector<Series> all;
  for (double v : scan.values) {
    RunConfig local = c;
    CycleOptions cycle = cycle_options(c);
    double tau = 0.0;
    switch (scan.parameter) {
      case ScanParameter::flip_angle_error: cycle.errors.flip_error = v; break;
      case ScanParameter::phase_offset: cycle.errors.phase_offset = v; break;
      case ScanParameter::pulse_width: cycle.errors.width = v; break;
      case ScanParameter::pulse_gap: cycle.pulse_gap = v; break;
      case ScanParameter::tau:
        local.sequence.tau = v;
        local.sequence.cycle_time.reset();
        local.sequence.td_fraction.reset();
        break;
    }
    tau = tau_for(local, name, timing);
    const Sequence seq = build_sequence(c.sequence, name, tau);
    const std::size_t cycles = cycles_for(c, seq.cycle_time(), timing);
    Series s;
    s.attrs = {{"sequence", name}, {to_string(scan.parameter), num(v)}, {"tau", num(tau)},
               {"cycle_time", num(seq.cycle_time())}, {"n_cycles", std::to_string(cycles)}};
    s.final_only = true;
    s.result = run_series(c, seq, cycles, cycle);
    all.push_back(std::move(s));
  }
  return render_series(c, ExperimentKind::scan, all, timing_notes(timing));
}

// --- free-induction decay ---------------------------------------------------------

std::string run_fid(const RunConfig& c) {
  const std::size_t n = c.geometry ? c.run.n_realizations : 1;
  std::vector<std::optional<double>> times(n);
  std::vector<std::string> errors(n);
  parallel_for(n, c.run.workers, [&](std::size_t i) {
    try {
      const SpinSystem sys = c.system ? *c.system : realize_geometry(*c.geometry, i);
      times[i] = fid_decay_time(sys, c.run.fid);
    } catch (const GenerationError& e) {
      errors[i] = e.what();
    }
  });
  std::size_t failed = 0, decayed = 0;
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!errors[i].empty()) ++failed;
    if (times[i]) sum += *times[i], ++decayed;
  }
  if (static_cast<double>(failed) > 0.1 * static_cast<double>(n)) {
    throw GenerationError(std::to_string(failed) + " of " + std::to_string(n) + " realizations failed");
  }
  const std::string mean = decayed ? num(sum / static_cast<double>(decayed)) : "exceeds_horizon";
  if (c.output.format == OutputFormat::csv) {
    std::ostringstream out;
    out << csv_header(c, ExperimentKind::fid);
    out << "realization,t_d\n";
    for (std::size_t i = 0; i < n; ++i) {
      if (!errors[i].empty()) {
        out << "# realization " << i << " failed: " << errors[i] << "\n";
        continue;
      }
      out << i << "," << (times[i] ? num(*times[i]) : "exceeds_horizon") << "\n";
    }
    out << "mean," << mean << "\n";
    return out.str();
  }
  Json doc;
  doc["provenance"] = provenance(c, ExperimentKind::fid);
  Json arr = Json::array();
  for (std::size_t i = 0; i < n; ++i) {
    Json e;
    e["index"] = i;
    e["failed"] = !errors[i].empty();
    if (!errors[i].empty()) {
      e["error"] = errors[i];
    } else if (times[i]) {
      e["t_d"] = *times[i];
    } else {
      e["t_d"] = "exceeds_horizon";
    }
    arr.push_back(e);
  }
  doc["realizations"] = arr;
  if (decayed) {
    doc["mean_t_d"] = sum / static_cast<double>(decayed);
  } else {
    doc["mean_t_d"] = "exceeds_horizon";
  }
  return render_document(doc, c.output.format);
}

// --- toggling frame ------------------------------------------------------------------

template <class C>
Json operator_json(const OperatorSum<C>& op) {
  Json arr = Json::array();
  for (const auto& [word, coeff] : op.terms()) {
    Json t;
    t["word"] = word.str();
    t["coefficient"] = coeff_format(coeff);
    arr.push_back(t);
  }
  return arr;
}

template <class C>
std::string render_toggling(const RunConfig& c, const std::string& seq_name, const std::string& tau_text,
                            const TogglingFrame<C>& frame, const MagnusTerms<C>& terms) {
  if (c.output.format == OutputFormat::csv) {
    std::ostringstream out;
    out << csv_header(c, ExperimentKind::toggling);
    out << "sequence: " << seq_name << "\n";
    out << "tau: " << tau_text << "\n";
    out << "cycle: " << num(frame.cycle_units) << " tau\n";
    for (std::size_t k = 0; k < frame.segments.size(); ++k) {
      out << "segment " << k + 1 << ": " << num(frame.segments[k].duration_units) << " tau\n";
      out << frame.segments[k].hamiltonian.str() << "\n";
    }
    out << "average:\n" << terms.zeroth.str() << "\n";
    out << "first_order:\n" << terms.first.str() << "\n";
    return out.str();
  }
  Json doc;
  doc["provenance"] = provenance(c, ExperimentKind::toggling);
  doc["sequence"] = seq_name;
  doc["tau"] = tau_text;
  doc["cycle_units"] = frame.cycle_units;
  Json segs = Json::array();
  for (const auto& s : frame.segments) {
    Json e;
    e["duration_units"] = s.duration_units;
    e["hamiltonian"] = operator_json(s.hamiltonian);
    segs.push_back(e);
  }
  doc["segments"] = segs;
  doc["average"] = operator_json(terms.zeroth);
  doc["first_order"] = operator_json(terms.first);
  return render_document(doc, c.output.format);
}

std::string run_toggling(const RunConfig& c) {
  const std::string& name = c.sequence.names.front();
  if (c.symbolic_spins) {
    const std::size_t n = *c.symbolic_spins;
    const SymbolicOperator h = n == 2 ? symbolic_pair_hamiltonian() : symbolic_internal_hamiltonian(n);
    const Polynomial tau = c.sequence.tau ? Polynomial::from_double(*c.sequence.tau) : Polynomial::symbol("tau");
    const Sequence seq = build_sequence(c.sequence, name, c.sequence.tau.value_or(1.0));
    const auto frame = toggled_hamiltonians(seq, h);
    const MagnusTerms<Polynomial> terms{zeroth_average(frame), first_magnus(frame, tau)};
    return render_toggling(c, name, c.sequence.tau ? num(*c.sequence.tau) : "tau", frame, terms);
  }
  const Timing timing = resolve_timing(c);
  const SpinSystem sys = c.system ? *c.system : realize_geometry(*c.geometry, 0);
  const double tau = tau_for(c, name, timing);
  const Sequence seq = build_sequence(c.sequence, name, tau);
  const SymbolicOperator h = build_internal_hamiltonian(sys);
  TogglingFrame<Complex> numeric;
  MagnusTerms<Complex> terms;
  try {
    // Exact averaging, printed numerically: cancellations stay exact zeros.
    const auto frame = toggled_hamiltonians(seq, h);
    for (const auto& s : frame.segments) numeric.segments.push_back({s.duration_units, to_numeric(s.hamiltonian)});
    numeric.cycle_units = frame.cycle_units;
    numeric.tau = frame.tau;
    terms = {to_numeric(zeroth_average(frame)), to_numeric(first_magnus(frame))};
  } catch (const UnsupportedAngleError&) {
    numeric = toggled_hamiltonians(seq, to_numeric(h));
    terms = magnus_terms(numeric);
  }
  return render_toggling(c, name, num(tau), numeric, terms);
}

}  // namespace

const char* tool_version() { return DDSIM_VERSION; }

void apply_overrides(RunConfig& config, const RunOverrides& o) {
  if (o.seed) {
    config.run.seed = *o.seed;
    if (config.geometry) config.geometry->seed = *o.seed;
    config.digest = fnv1a_digest(config.digest + "\nseed=" + std::to_string(*o.seed));
  }
  if (o.workers) {
    if (*o.workers < 1) throw ConfigError("--workers: must be >= 1");
    config.run.workers = *o.workers;
  }
  if (o.format) config.output.format = *o.format;
  if (o.out) config.output.path = *o.out;
}

std::string run_experiment(ExperimentKind kind, const RunConfig& config) {
  validate_for(config, kind);
  switch (kind) {
    case ExperimentKind::toggling: return run_toggling(config);
    case ExperimentKind::evolve:
    case ExperimentKind::compare: return run_dynamics(kind, config);
    case ExperimentKind::scan: return run_scan(config);
    case ExperimentKind::fid: return run_fid(config);
  }
  throw ArgumentError("unknown experiment");
}

}  // namespace ddsim

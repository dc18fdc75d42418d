#pragma once

// Run configuration: a strict YAML document with the sections system|geometry,
// sequence, errors, run, scan and output. Unknown keys are rejected with the
// offending key and line.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ddsim/dynamics.hpp"
#include "ddsim/sequence.hpp"
#include "ddsim/spin_system.hpp"

namespace ddsim {

enum class ExperimentKind { toggling, evolve, compare, scan, fid };

ExperimentKind experiment_from_string(const std::string& name);
std::string to_string(ExperimentKind kind);

enum class OutputFormat { csv, structured, json };

OutputFormat output_format_from_string(const std::string& name);
std::string to_string(OutputFormat format);

/// A pulse of a user-defined cycle: time in tau units, azimuth and angle in degrees.
struct CustomPulse {
  double time_units = 0.0;
  double azimuth_deg = 0.0;
  double angle_deg = 0.0;
};

struct CustomSequence {
  double cycle_units = 0.0;
  std::vector<CustomPulse> pulses;
};

struct SequenceConfig {
  std::vector<std::string> names;  // built-in names or "custom"
  // Exactly one timing key is set.
  std::optional<double> tau;
  std::optional<double> cycle_time;
  std::optional<double> td_fraction;  // t_c = fraction * t_d (free-induction estimate)
  bool include_closing_pulse = true;
  double pulse_gap = 0.0;
  std::optional<CustomSequence> custom;
};

enum class ScanParameter { flip_angle_error, phase_offset, pulse_width, tau, pulse_gap };

ScanParameter scan_parameter_from_string(const std::string& name);
std::string to_string(ScanParameter p);

struct ScanConfig {
  ScanParameter parameter = ScanParameter::flip_angle_error;
  std::vector<double> values;
};

struct RunSection {
  // At most one duration key is set; toggling and fid need none.
  std::optional<std::size_t> n_cycles;
  std::optional<double> total_time;
  std::optional<double> total_time_td;
  std::size_t n_realizations = 1;
  std::optional<std::uint64_t> seed;
  std::size_t workers = 1;
  std::size_t sample_every = 1;
  InitialStateSpec initial;
  FidOptions fid;
};

struct OutputConfig {
  std::string path = "-";
  OutputFormat format = OutputFormat::csv;
};

struct RunConfig {
  // Exactly one of the three system descriptions.
  std::optional<SpinSystem> system;
  std::optional<GeometrySpec> geometry;
  /// Fully symbolic system of this many spins (toggling only).
  std::optional<std::size_t> symbolic_spins;

  SequenceConfig sequence;
  PulseErrorModel errors;
  double drift_rate = 0.0;
  RunSection run;
  std::optional<ScanConfig> scan;
  OutputConfig output;

  /// FNV-1a digest of the document text (plus any command-line overrides).
  std::string digest;

  std::size_t n_spins() const;
  bool is_ensemble() const { return geometry.has_value(); }
};

/// Parses and validates a document. `source` names it in diagnostics.
RunConfig parse_config(const std::string& text, const std::string& source = "<config>");

/// Checks the pieces an experiment needs (e.g. a seed for ensembles, a scan
/// section for scans); throws ConfigError naming the key.
void validate_for(const RunConfig& config, ExperimentKind kind);

/// Human-readable schema with every key and its default.
std::string config_reference();

/// 64-bit FNV-1a of `text`, as 16 hex digits.
std::string fnv1a_digest(const std::string& text);

/// Sequence named `name` built with the configured timing; `tau` wins over the
/// config when given (used after t_d-based timing is resolved).
Sequence build_sequence(const SequenceConfig& config, const std::string& name, double tau);

}  // namespace ddsim

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ddsim/dense.hpp"
#include "ddsim/operator_sum.hpp"

namespace ddsim {

/// Instantaneous rotation exp(-i angle (cos(azimuth) I_x + sin(azimuth) I_y))
/// applied to every spin at `time_units` (a multiple of tau).
struct PulseEvent {
  double time_units = 0.0;
  double azimuth = 0.0;  // 0 = +x, pi/2 = +y, pi = -x, 3pi/2 = -y
  double angle = 0.0;
  int ordinal = 0;       // application order among pulses at the same time
  bool closing = false;  // restores U_1(t_c) = 1; contributes no toggling segment

  /// Rotation axis and quarter turns when both azimuth and angle are
  /// multiples of pi/2; nullopt otherwise.
  std::optional<std::pair<SignedAxis, int>> clifford() const;
};

class Sequence {
 public:
  Sequence(std::string name, double tau, double cycle_units, std::vector<PulseEvent> events);

  const std::string& name() const { return name_; }
  double tau() const { return tau_; }
  double cycle_units() const { return cycle_units_; }
  double cycle_time() const { return tau_ * cycle_units_; }
  /// Sorted by (time, ordinal).
  const std::vector<PulseEvent>& events() const { return events_; }
  std::size_t pulse_count() const { return events_.size(); }
  bool includes_closing_pulse() const;

  Sequence with_tau(double tau) const;
  Sequence without_closing_pulse() const;
  /// Swap the application order of the pulses at one nominal time (used to
  /// pin that the order of the composite pair matters).
  Sequence with_swapped_ordinals(double time_units) const;

 private:
  std::string name_;
  double tau_;
  double cycle_units_;
  std::vector<PulseEvent> events_;
};

/// Seven-pulse cycle of six tau-intervals whose toggling frames run through
/// +z, +y, +x, -x, -y, -z; pulses 4 and 5 share the nominal time 4 tau.
Sequence proposed_sequence(double tau);
/// tau - pi_y - 2tau - pi_y - tau.
Sequence cpmg_sequence(double tau);
/// Four pi/2 pulses in 6 tau; frames z, y, x, y, z.
Sequence wahuha_sequence(double tau);
/// Two WAHUHA-like halves, x phases inverted in the second, t_c = 12 tau.
Sequence mrev8_sequence(double tau);
/// No pulses; one interval of length total_time.
Sequence free_evolution(double total_time);

/// Named built-in: proposed | cpmg | wahuha | mrev8 | free (free uses t_c = tau).
Sequence sequence_by_name(const std::string& name, double tau);
const std::vector<std::string>& builtin_sequence_names();

struct PulseErrorModel {
  double flip_error = 0.0;    // theta_actual = theta (1 + flip_error)
  double phase_offset = 0.0;  // added to every azimuth, rad
  double width = 0.0;         // pulse duration; 0 is a delta pulse
  bool include_internal_during_pulse = false;

  bool is_ideal() const { return flip_error == 0.0 && phase_offset == 0.0 && width == 0.0; }
  void validate() const;
};

/// Ideal delta pulse on n spins.
DenseOperator ideal_pulse(const PulseEvent& event, std::size_t n_spins);

/// Pulse propagator with imperfections. `h_in` is the dense internal
/// Hamiltonian, used only for finite-width pulses with
/// include_internal_during_pulse.
DenseOperator pulse_propagator(const PulseEvent& event, std::size_t n_spins, const PulseErrorModel& errors,
                               const DenseOperator& h_in = {});

/// Symbolic overload of the above.
DenseOperator pulse_propagator(const PulseEvent& event, std::size_t n_spins, const PulseErrorModel& errors,
                               const SymbolicOperator& h_in);

/// Free-evolution interval between consecutive pulse times.
struct Interval {
  double start_units = 0.0;
  double duration_units = 0.0;
  /// Number of events (in sorted order) applied before this interval starts.
  std::size_t pulses_before = 0;
};

/// Non-empty intervals of the cycle; pulses at t_c start no interval.
std::vector<Interval> cycle_intervals(const Sequence& seq);

struct SegmentPropagator {
  double duration = 0.0;  // absolute time
  DenseOperator control;  // cumulative U_1 on the interval
};

/// Ideal-pulse cumulative control propagators, one per interval.
std::vector<SegmentPropagator> segment_propagators(const Sequence& seq, std::size_t n_spins);

/// Product of every ideal pulse in the cycle, U_1(t_c).
DenseOperator cycle_control_propagator(const Sequence& seq, std::size_t n_spins);

}  // namespace ddsim

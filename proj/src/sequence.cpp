#include "ddsim/sequence.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace ddsim {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kPlusX = 0.0;
constexpr double kPlusY = kPi / 2.0;
constexpr double kMinusX = kPi;
constexpr double kMinusY = 3.0 * kPi / 2.0;

PulseEvent pulse(double time_units, double azimuth, double angle, int ordinal = 0, bool closing = false) {
  return PulseEvent{time_units, azimuth, angle, ordinal, closing};
}

void require_positive(double value, const char* what) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ArgumentError(std::string(what) + " must be positive and finite");
  }
}

DenseOperator transverse_generator(double azimuth, std::size_t n_spins) {
  const DenseOperator ix = to_dense(total_spin_operator<Complex>(Axis::x, n_spins));
  const DenseOperator iy = to_dense(total_spin_operator<Complex>(Axis::y, n_spins));
  return std::cos(azimuth) * ix + std::sin(azimuth) * iy;
}

}  // namespace

std::optional<std::pair<SignedAxis, int>> PulseEvent::clifford() const {
  int az = 0;
  int turns = 0;
  try {
    az = clifford_quarter_turns(azimuth);
    turns = clifford_quarter_turns(angle);
  } catch (const UnsupportedAngleError&) {
    return std::nullopt;
  }
  static constexpr SignedAxis kAxes[] = {{Axis::x, 1}, {Axis::y, 1}, {Axis::x, -1}, {Axis::y, -1}};
  return std::make_pair(kAxes[((az % 4) + 4) % 4], turns);
}

Sequence::Sequence(std::string name, double tau, double cycle_units, std::vector<PulseEvent> events)
    : name_(std::move(name)), tau_(tau), cycle_units_(cycle_units), events_(std::move(events)) {
  require_positive(tau_, "tau");
  require_positive(cycle_units_, "cycle length");
  std::stable_sort(events_.begin(), events_.end(), [](const PulseEvent& a, const PulseEvent& b) {
    return a.time_units != b.time_units ? a.time_units < b.time_units : a.ordinal < b.ordinal;
  });
  for (std::size_t k = 0; k < events_.size(); ++k) {
    const auto& e = events_[k];
    if (!(e.time_units >= 0.0 && e.time_units <= cycle_units_)) {
      throw ArgumentError("pulse time " + std::to_string(e.time_units) + " lies outside the cycle [0, " +
                          std::to_string(cycle_units_) + "]");
    }
    if (!std::isfinite(e.azimuth) || !std::isfinite(e.angle)) {
      throw ArgumentError("pulse azimuth and angle must be finite");
    }
    if (k > 0 && events_[k - 1].time_units == e.time_units && events_[k - 1].ordinal == e.ordinal) {
      throw ArgumentError("pulses sharing time " + std::to_string(e.time_units) + " need distinct ordinals");
    }
    if (e.closing && e.time_units != cycle_units_) {
      throw ArgumentError("a closing pulse must sit at the end of the cycle");
    }
  }
}

bool Sequence::includes_closing_pulse() const {
  return std::any_of(events_.begin(), events_.end(), [](const PulseEvent& e) { return e.closing; });
}

Sequence Sequence::with_tau(double tau) const { return Sequence(name_, tau, cycle_units_, events_); }

Sequence Sequence::without_closing_pulse() const {
  std::vector<PulseEvent> kept;
  std::copy_if(events_.begin(), events_.end(), std::back_inserter(kept),
               [](const PulseEvent& e) { return !e.closing; });
  return Sequence(name_, tau_, cycle_units_, std::move(kept));
}

Sequence Sequence::with_swapped_ordinals(double time_units) const {
  std::vector<PulseEvent> events = events_;
  std::vector<PulseEvent*> group;
  for (auto& e : events) {
    if (e.time_units == time_units) group.push_back(&e);
  }
  if (group.size() != 2) throw ArgumentError("ordinal swap needs exactly two pulses at the given time");
  std::swap(group[0]->ordinal, group[1]->ordinal);
  return Sequence(name_, tau_, cycle_units_, std::move(events));
}

Sequence proposed_sequence(double tau) {
  return Sequence("proposed", tau, 6.0,
                  {
                      pulse(1, kPlusX, kPi / 2),
                      pulse(2, kMinusY, kPi / 2),
                      pulse(3, kPlusY, kPi),
                      pulse(4, kMinusY, kPi / 2, 0),
                      pulse(4, kMinusX, kPi, 1),
                      pulse(5, kMinusX, kPi / 2),
                      pulse(6, kMinusX, kPi, 0, true),
                  });
}

Sequence cpmg_sequence(double tau) {
  return Sequence("cpmg", tau, 4.0, {pulse(1, kPlusY, kPi), pulse(3, kPlusY, kPi)});
}

Sequence wahuha_sequence(double tau) {
  return Sequence("wahuha", tau, 6.0,
                  {pulse(1, kPlusX, kPi / 2), pulse(2, kMinusY, kPi / 2), pulse(4, kPlusY, kPi / 2),
                   pulse(5, kMinusX, kPi / 2)});
}

Sequence mrev8_sequence(double tau) {
  return Sequence("mrev8", tau, 12.0,
                  {pulse(1, kPlusX, kPi / 2), pulse(2, kMinusY, kPi / 2), pulse(4, kPlusY, kPi / 2),
                   pulse(5, kMinusX, kPi / 2), pulse(7, kMinusX, kPi / 2), pulse(8, kMinusY, kPi / 2),
                   pulse(10, kPlusY, kPi / 2), pulse(11, kPlusX, kPi / 2)});
}

Sequence free_evolution(double total_time) {
  require_positive(total_time, "free evolution time");
  return Sequence("free", total_time, 1.0, {});
}

const std::vector<std::string>& builtin_sequence_names() {
  static const std::vector<std::string> names{"proposed", "cpmg", "wahuha", "mrev8", "free"};
  return names;
}

Sequence sequence_by_name(const std::string& name, double tau) {
  if (name == "proposed") return proposed_sequence(tau);
  if (name == "cpmg") return cpmg_sequence(tau);
  if (name == "wahuha") return wahuha_sequence(tau);
  if (name == "mrev8") return mrev8_sequence(tau);
  if (name == "free") return free_evolution(tau);
  throw ArgumentError("unknown sequence '" + name + "' (expected proposed, cpmg, wahuha, mrev8 or free)");
}

void PulseErrorModel::validate() const {
  if (!std::isfinite(flip_error) || !std::isfinite(phase_offset)) {
    throw ArgumentError("pulse error parameters must be finite");
  }
  if (!(width >= 0.0) || !std::isfinite(width)) throw ArgumentError("pulse width must be >= 0");
}

DenseOperator ideal_pulse(const PulseEvent& event, std::size_t n_spins) {
  return expm_hermitian(transverse_generator(event.azimuth, n_spins), event.angle);
}

DenseOperator pulse_propagator(const PulseEvent& event, std::size_t n_spins, const PulseErrorModel& errors,
                               const DenseOperator& h_in) {
  errors.validate();
  const double angle = event.angle * (1.0 + errors.flip_error);
  const DenseOperator axis = transverse_generator(event.azimuth + errors.phase_offset, n_spins);
  if (errors.width == 0.0) {
    return expm_hermitian(axis, angle);
  }
  DenseOperator generator = (angle / errors.width) * axis;
  if (errors.include_internal_during_pulse) {
    if (h_in.rows() != generator.rows() || h_in.cols() != generator.cols()) {
      throw ArgumentError("pulse_propagator: internal Hamiltonian has the wrong dimension");
    }
    generator += h_in;
  }
  if (!is_hermitian(generator)) {
    throw ValidationError("pulse_propagator: assembled generator is not Hermitian");
  }
  return expm_hermitian(generator, errors.width);
}

DenseOperator pulse_propagator(const PulseEvent& event, std::size_t n_spins, const PulseErrorModel& errors,
                               const SymbolicOperator& h_in) {
  return pulse_propagator(event, n_spins, errors, to_dense(h_in));
}

std::vector<Interval> cycle_intervals(const Sequence& seq) {
  std::vector<Interval> out;
  double cursor = 0.0;
  std::size_t applied = 0;
  const auto& events = seq.events();
  std::size_t k = 0;
  while (k < events.size()) {
    const double t = events[k].time_units;
    if (t > cursor) out.push_back({cursor, t - cursor, applied});
    while (k < events.size() && events[k].time_units == t) {
      ++applied;
      ++k;
    }
    cursor = t;
  }
  if (seq.cycle_units() > cursor) out.push_back({cursor, seq.cycle_units() - cursor, applied});
  return out;
}

std::vector<SegmentPropagator> segment_propagators(const Sequence& seq, std::size_t n_spins) {
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  std::vector<SegmentPropagator> out;
  DenseOperator control = DenseOperator::Identity(dim, dim);
  std::size_t applied = 0;
  for (const auto& iv : cycle_intervals(seq)) {
    while (applied < iv.pulses_before) control = ideal_pulse(seq.events()[applied++], n_spins) * control;
    out.push_back({iv.duration_units * seq.tau(), control});
  }
  return out;
}

DenseOperator cycle_control_propagator(const Sequence& seq, std::size_t n_spins) {
  const Eigen::Index dim = Eigen::Index{1} << n_spins;
  DenseOperator control = DenseOperator::Identity(dim, dim);
  for (const auto& e : seq.events()) control = ideal_pulse(e, n_spins) * control;
  return control;
}

}  // namespace ddsim

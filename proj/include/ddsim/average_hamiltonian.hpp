#pragma once

// Toggling-frame Hamiltonians and the leading Magnus terms for
// piecewise-constant control. Exact for Clifford-angle sequences.

#include <algorithm>
#include <type_traits>
#include <vector>

#include "ddsim/operator_sum.hpp"
#include "ddsim/sequence.hpp"

namespace ddsim {

template <class C>
struct TogglingFrame {
  struct Segment {
    double duration_units;  // multiple of tau
    OperatorSum<C> hamiltonian;
  };
  std::vector<Segment> segments;
  double cycle_units = 0.0;
  double tau = 0.0;

  double cycle_time() const { return cycle_units * tau; }
};

template <class C>
struct MagnusTerms {
  OperatorSum<C> zeroth;
  OperatorSum<C> first;
};

namespace detail {

/// num/den as a coefficient; exact for Polynomial.
template <class C>
C ratio(double num, double den) {
  if constexpr (std::is_same_v<C, Polynomial>) {
    return Polynomial(Rational(rational_from_double(num) / rational_from_double(den)));
  } else {
    return C(num / den);
  }
}

template <class C>
C from_double(double v) {
  if constexpr (std::is_same_v<C, Polynomial>) {
    return Polynomial::from_double(v);
  } else {
    return C(v);
  }
}

}  // namespace detail

/// U_1^dag H U_1 on every interval, with U_1 the ideal cumulative control
/// propagator. Clifford pulses are applied exactly; other pulses fall back to
/// dense conjugation (numeric coefficients only).
template <class C>
TogglingFrame<C> toggled_hamiltonians(const Sequence& seq, const OperatorSum<C>& h_in) {
  TogglingFrame<C> frame;
  frame.cycle_units = seq.cycle_units();
  frame.tau = seq.tau();
  const std::size_t n = h_in.n_spins();
  const auto& events = seq.events();
  for (const auto& iv : cycle_intervals(seq)) {
    bool all_clifford = true;
    for (std::size_t k = 0; k < iv.pulses_before; ++k) all_clifford = all_clifford && events[k].clifford();
    OperatorSum<C> h = h_in;
    if (all_clifford) {
      for (std::size_t k = iv.pulses_before; k-- > 0;) {
        const auto [axis, turns] = *events[k].clifford();
        h = clifford_conjugate(h, axis, turns);
      }
    } else if constexpr (std::is_same_v<C, Complex>) {
      DenseOperator u = DenseOperator::Identity(Eigen::Index{1} << n, Eigen::Index{1} << n);
      for (std::size_t k = 0; k < iv.pulses_before; ++k) u = ideal_pulse(events[k], n) * u;
      h = from_dense(u.adjoint() * to_dense(h_in) * u, 1e-14);
    } else {
      throw UnsupportedAngleError("sequence '" + seq.name() +
                                  "' has non-Clifford pulses; use numeric coefficients for its toggling frame");
    }
    frame.segments.push_back({iv.duration_units, std::move(h)});
  }
  return frame;
}

/// (1/t_c) sum_k duration_k H_k.
template <class C>
OperatorSum<C> zeroth_average(const TogglingFrame<C>& frame) {
  if (frame.segments.empty()) throw ArgumentError("zeroth_average: empty frame");
  OperatorSum<C> out(frame.segments.front().hamiltonian.n_spins());
  for (const auto& seg : frame.segments) {
    out += seg.hamiltonian * detail::ratio<C>(seg.duration_units, frame.cycle_units);
  }
  return out;
}

/// (-i / 2 t_c) sum_{k > j} d_k d_j [H_k, H_j], with durations d = units * tau.
/// `tau` may be symbolic; the frame's numeric tau is the default.
template <class C>
OperatorSum<C> first_magnus(const TogglingFrame<C>& frame, const C& tau) {
  if (frame.segments.empty()) throw ArgumentError("first_magnus: empty frame");
  const std::size_t n = frame.segments.front().hamiltonian.n_spins();
  OperatorSum<C> sum(n);
  // Fixed (k, j) lexicographic reduction order.
  for (std::size_t k = 0; k < frame.segments.size(); ++k) {
    for (std::size_t j = 0; j < k; ++j) {
      const auto& sk = frame.segments[k];
      const auto& sj = frame.segments[j];
      const C weight = detail::from_double<C>(sk.duration_units) * detail::from_double<C>(sj.duration_units);
      sum += commutator(sk.hamiltonian, sj.hamiltonian) * weight;
    }
  }
  // -i tau / (2 T)
  const C prefactor = coeff_times_i_power(detail::ratio<C>(1.0, 2.0 * frame.cycle_units), 3) * tau;
  return sum * prefactor;
}

template <class C>
OperatorSum<C> first_magnus(const TogglingFrame<C>& frame) {
  return first_magnus(frame, detail::from_double<C>(frame.tau));
}

template <class C>
MagnusTerms<C> magnus_terms(const TogglingFrame<C>& frame) {
  return {zeroth_average(frame), first_magnus(frame)};
}

/// Toggling frame with the segment order reversed (time reversal).
template <class C>
TogglingFrame<C> reversed(TogglingFrame<C> frame) {
  std::reverse(frame.segments.begin(), frame.segments.end());
  return frame;
}

/// exp(-i (H0 + H1) t_c); symbolic coefficients evaluated with `bindings`.
template <class C>
DenseOperator effective_propagator(const MagnusTerms<C>& terms, double cycle_time, const Bindings& bindings = {}) {
  if (!terms.zeroth.is_hermitian() || !terms.first.is_hermitian()) {
    throw ValidationError("effective_propagator: Magnus terms are not Hermitian");
  }
  const DenseOperator h = to_dense(terms.zeroth, bindings) + to_dense(terms.first, bindings);
  return expm_hermitian(h, cycle_time);
}

// Dense route: the same quantities computed from matrices only, used to
// cross-check the symbolic path.

/// U_1^dag H U_1 per interval as matrices, with absolute durations.
std::vector<std::pair<double, DenseOperator>> dense_toggling_frame(const Sequence& seq, const DenseOperator& h_in);
DenseOperator dense_zeroth_average(const Sequence& seq, const DenseOperator& h_in);
DenseOperator dense_first_magnus(const Sequence& seq, const DenseOperator& h_in);

/// Exact U_in(t_c): ordered product of exp(-i H_k d_k), later segments on the left.
DenseOperator interaction_frame_propagator(const Sequence& seq, const DenseOperator& h_in);

}  // namespace ddsim

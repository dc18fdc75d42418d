#pragma once

// Operators on N spin-1/2 sites written as sums of coefficient-weighted Pauli
// words. The same template serves exact symbolic work (Polynomial
// coefficients) and floating-point work (std::complex<double>).

#include <cmath>
#include <cstddef>
#include <map>
#include <numbers>
#include <string>
#include <type_traits>

#include "ddsim/dense.hpp"
#include "ddsim/errors.hpp"
#include "ddsim/pauli.hpp"
#include "ddsim/symbolic.hpp"

namespace ddsim {

template <class C>
class OperatorSum {
 public:
  using Coeff = C;
  using TermMap = std::map<PauliWord, C>;

  OperatorSum() = default;
  explicit OperatorSum(std::size_t n_spins) : n_(n_spins) {}

  static OperatorSum identity(std::size_t n_spins, const C& scale = C(1)) {
    return term(PauliWord(n_spins), scale);
  }
  static OperatorSum term(const PauliWord& word, const C& coeff) {
    OperatorSum out(word.size());
    out.add_term(word, coeff);
    return out;
  }

  std::size_t n_spins() const { return n_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  C coefficient(const PauliWord& word) const {
    auto it = terms_.find(word);
    return it == terms_.end() ? C{} : it->second;
  }

  void add_term(const PauliWord& word, const C& coeff) {
    if (word.size() != n_) {
      throw ArgumentError("Pauli word length " + std::to_string(word.size()) +
                          " does not match spin count " + std::to_string(n_));
    }
    if (coeff_is_zero(coeff)) return;
    auto [it, inserted] = terms_.emplace(word, coeff);
    if (!inserted) {
      it->second += coeff;
      if (coeff_is_zero(it->second)) terms_.erase(it);
    }
  }

  /// Pauli words are Hermitian, so the sum is Hermitian iff every
  /// coefficient is real.
  bool is_hermitian(double tolerance = tol::kHermitian) const {
    for (const auto& [w, c] : terms_) {
      if (!coeff_is_real(c, tolerance)) return false;
    }
    return true;
  }

  OperatorSum adjoint() const {
    OperatorSum out(n_);
    for (const auto& [w, c] : terms_) out.terms_.emplace(w, coeff_conj(c));
    return out;
  }

  OperatorSum& operator+=(const OperatorSum& o) {
    check_same_size(o);
    for (const auto& [w, c] : o.terms_) add_term(w, c);
    return *this;
  }
  OperatorSum& operator-=(const OperatorSum& o) {
    check_same_size(o);
    for (const auto& [w, c] : o.terms_) add_term(w, -c);
    return *this;
  }
  OperatorSum& operator*=(const C& scale) {
    if (coeff_is_zero(scale)) {
      terms_.clear();
      return *this;
    }
    TermMap scaled;
    for (const auto& [w, c] : terms_) {
      C v = c * scale;
      if (!coeff_is_zero(v)) scaled.emplace(w, std::move(v));
    }
    terms_ = std::move(scaled);
    return *this;
  }

  friend OperatorSum operator+(OperatorSum a, const OperatorSum& b) { return a += b; }
  friend OperatorSum operator-(OperatorSum a, const OperatorSum& b) { return a -= b; }
  friend OperatorSum operator-(OperatorSum a) { return a *= C(-1); }
  friend OperatorSum operator*(OperatorSum a, const C& s) { return a *= s; }
  friend OperatorSum operator*(const C& s, OperatorSum a) { return a *= s; }
  friend bool operator==(const OperatorSum& a, const OperatorSum& b) {
    return a.n_ == b.n_ && a.terms_ == b.terms_;
  }

  /// One `coeff * WORD` per line in word order; the zero operator prints `0`.
  std::string str() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [w, c] : terms_) {
      if (!out.empty()) out += '\n';
      out += coeff_format(c) + " * " + w.str();
    }
    return out;
  }

 private:
  void check_same_size(const OperatorSum& o) const {
    if (o.n_ != n_) throw ArgumentError("operator spin counts differ");
  }

  std::size_t n_ = 0;
  TermMap terms_;
};

using SymbolicOperator = OperatorSum<Polynomial>;
using NumericOperator = OperatorSum<Complex>;

template <class C>
OperatorSum<C> multiply(const OperatorSum<C>& a, const OperatorSum<C>& b) {
  if (a.n_spins() != b.n_spins()) throw ArgumentError("multiply: spin counts differ");
  OperatorSum<C> out(a.n_spins());
  for (const auto& [wa, ca] : a.terms()) {
    for (const auto& [wb, cb] : b.terms()) {
      const auto p = multiply_words(wa, wb);
      out.add_term(p.word, coeff_times_i_power(ca * cb, p.phase));
    }
  }
  return out;
}

template <class C>
OperatorSum<C> commutator(const OperatorSum<C>& a, const OperatorSum<C>& b) {
  if (a.n_spins() != b.n_spins()) throw ArgumentError("commutator: spin counts differ");
  // Two Pauli words either commute (product phases agree) or anticommute;
  // only anticommuting pairs survive, with twice the AB product.
  OperatorSum<C> out(a.n_spins());
  for (const auto& [wa, ca] : a.terms()) {
    for (const auto& [wb, cb] : b.terms()) {
      const auto ab = multiply_words(wa, wb);
      const auto ba = multiply_words(wb, wa);
      if (ab.phase == ba.phase) continue;
      out.add_term(ab.word, coeff_times_i_power(C(2) * ca * cb, ab.phase));
    }
  }
  return out;
}

/// (1/2) * Pauli letter at `site`: the spin-1/2 operator I_axis of one spin.
template <class C = Polynomial>
OperatorSum<C> single_spin_operator(Axis axis, std::size_t site, std::size_t n_spins) {
  if (site >= n_spins) {
    throw ArgumentError("single_spin_operator: site " + std::to_string(site) + " out of range for " +
                        std::to_string(n_spins) + " spins");
  }
  C half;
  if constexpr (std::is_same_v<C, Polynomial>) {
    half = Polynomial(Rational(1, 2));
  } else {
    half = C(0.5);
  }
  return OperatorSum<C>::term(PauliWord::single(n_spins, site, letter_for(axis)), half);
}

/// Sum of I_axis over all spins.
template <class C = Polynomial>
OperatorSum<C> total_spin_operator(Axis axis, std::size_t n_spins) {
  OperatorSum<C> out(n_spins);
  for (std::size_t i = 0; i < n_spins; ++i) out += single_spin_operator<C>(axis, i, n_spins);
  return out;
}

/// Letter map of U^dag P U for U = exp(-i (pi/2) sigma_axis / 2) on one site:
/// the letter along the axis is fixed, b goes to b x axis.
LetterProduct quarter_turn_conjugate(Letter letter, Axis axis);

/// Number of quarter turns represented by `angle` if it is a multiple of
/// pi/2 within `tolerance`; otherwise throws UnsupportedAngleError.
int clifford_quarter_turns(double angle, double tolerance = 1e-12);

/// U^dag A U with U = exp(-i * quarter_turns * (pi/2) * sign * I_axis,total),
/// computed exactly as a signed letter permutation.
template <class C>
OperatorSum<C> clifford_conjugate(const OperatorSum<C>& a, SignedAxis axis, int quarter_turns) {
  int turns = quarter_turns * (axis.sign < 0 ? -1 : 1);
  turns = ((turns % 4) + 4) % 4;
  if (turns == 0) return a;
  OperatorSum<C> out(a.n_spins());
  for (const auto& [word, coeff] : a.terms()) {
    PauliWord w = word;
    bool negate = false;
    for (std::size_t s = 0; s < w.size(); ++s) {
      Letter l = w.at(s);
      for (int k = 0; k < turns; ++k) {
        const auto r = quarter_turn_conjugate(l, axis.axis);
        if (r.phase == 2) negate = !negate;
        l = r.letter;
      }
      w.set(s, l);
    }
    out.add_term(w, negate ? C(-1) * coeff : coeff);
  }
  return out;
}

/// Angle form; non-Clifford angles throw UnsupportedAngleError.
template <class C>
OperatorSum<C> clifford_conjugate(const OperatorSum<C>& a, SignedAxis axis, double angle) {
  return clifford_conjugate(a, axis, clifford_quarter_turns(angle));
}

/// Dense matrix of a single Pauli word.
DenseOperator pauli_word_matrix(const PauliWord& word);

/// Kronecker expansion; symbolic coefficients are evaluated with `bindings`.
template <class C>
DenseOperator to_dense(const OperatorSum<C>& a, const Bindings& bindings = {}) {
  const std::size_t n = a.n_spins();
  const Eigen::Index dim = Eigen::Index{1} << n;
  DenseOperator out = DenseOperator::Zero(dim, dim);
  for (const auto& [word, coeff] : a.terms()) {
    const Complex c = coeff_value(coeff, bindings);
    const std::uint64_t flip = word.flip_mask();
    for (Eigen::Index col = 0; col < dim; ++col) {
      const auto row = static_cast<Eigen::Index>(static_cast<std::uint64_t>(col) ^ flip);
      // Phase of the word acting on basis state |col>.
      int phase = 0;
      bool negative = false;
      for (std::size_t s = 0; s < n; ++s) {
        const bool down = (static_cast<std::uint64_t>(col) >> (n - 1 - s)) & 1u;
        switch (word.at(s)) {
          case Letter::Y:
            phase += 1;  // Y|0> = i|1>, Y|1> = -i|0>
            if (down) negative = !negative;
            break;
          case Letter::Z:
            if (down) negative = !negative;
            break;
          default: break;
        }
      }
      Complex v = coeff_times_i_power(c, phase);
      out(row, col) += negative ? -v : v;
    }
  }
  return out;
}

/// Evaluate every coefficient numerically.
NumericOperator to_numeric(const SymbolicOperator& a, const Bindings& bindings = {});

/// Exact operator from floating-point coefficients (each double is converted exactly).
SymbolicOperator to_symbolic(const NumericOperator& a);

/// Pauli decomposition of a dense matrix: c_P = tr(P M) / 2^N. Coefficients
/// with magnitude below `drop_below` are discarded.
NumericOperator from_dense(const DenseOperator& m, double drop_below = 0.0);

/// Largest coefficient magnitude (a cheap size measure for numeric sums).
double max_abs_coefficient(const NumericOperator& a);

}  // namespace ddsim

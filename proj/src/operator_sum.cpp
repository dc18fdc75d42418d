#include "ddsim/operator_sum.hpp"

#include <numbers>

namespace ddsim {

LetterProduct quarter_turn_conjugate(Letter letter, Axis axis) {
  const Letter a = letter_for(axis);
  if (letter == Letter::E || letter == a) return {0, letter};
  // b x a: multiply_letters(b, a) = i^phase c with phase 1 iff (b, a, c) is
  // cyclic, which is exactly when b x a = +c.
  const auto p = multiply_letters(letter, a);
  return {p.phase == 1 ? 0 : 2, p.letter};
}

int clifford_quarter_turns(double angle, double tolerance) {
  const double quarters = angle / (std::numbers::pi / 2.0);
  const double rounded = std::round(quarters);
  if (std::abs(quarters - rounded) * (std::numbers::pi / 2.0) > tolerance) {
    throw UnsupportedAngleError("rotation angle " + std::to_string(angle) +
                                " rad is not a multiple of pi/2; use the dense backend");
  }
  return static_cast<int>(rounded);
}

DenseOperator pauli_word_matrix(const PauliWord& word) {
  return to_dense(NumericOperator::term(word, Complex(1.0)));
}

NumericOperator to_numeric(const SymbolicOperator& a, const Bindings& bindings) {
  NumericOperator out(a.n_spins());
  for (const auto& [w, c] : a.terms()) out.add_term(w, c.evaluate(bindings));
  return out;
}

SymbolicOperator to_symbolic(const NumericOperator& a) {
  SymbolicOperator out(a.n_spins());
  for (const auto& [w, c] : a.terms()) {
    out.add_term(w, Polynomial(ComplexRational(rational_from_double(c.real()), rational_from_double(c.imag()))));
  }
  return out;
}

NumericOperator from_dense(const DenseOperator& m, double drop_below) {
  const std::size_t n = spins_for_dimension(m.rows());
  if (m.rows() != m.cols()) throw ArgumentError("from_dense: matrix is not square");
  NumericOperator out(n);
  const double norm = 1.0 / static_cast<double>(m.rows());
  std::size_t total = std::size_t{1} << (2 * n);
  for (std::size_t code = 0; code < total; ++code) {
    PauliWord w(n);
    for (std::size_t s = 0; s < n; ++s) {
      w.set(s, static_cast<Letter>((code >> (2 * (n - 1 - s))) & 3u));
    }
    // tr(P M) = sum_col <col|P M|col>; P has one nonzero per column, so
    // tr(P M) = sum_col P(col, row) M(row, col) with row = col ^ flip.
    const DenseOperator p = pauli_word_matrix(w);
    const std::uint64_t flip = w.flip_mask();
    Complex tr{};
    for (Eigen::Index col = 0; col < m.cols(); ++col) {
      const auto row = static_cast<Eigen::Index>(static_cast<std::uint64_t>(col) ^ flip);
      tr += p(col, row) * m(row, col);
    }
    const Complex c = tr * norm;
    if (std::abs(c) > drop_below) out.add_term(w, c);
  }
  return out;
}

double max_abs_coefficient(const NumericOperator& a) {
  double best = 0.0;
  for (const auto& [w, c] : a.terms()) best = std::max(best, std::abs(c));
  return best;
}

}  // namespace ddsim

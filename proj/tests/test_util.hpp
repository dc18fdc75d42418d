#pragma once

#include <ostream>
#include <random>

#include "ddsim/operator_sum.hpp"
#include "ddsim/spin_system.hpp"

namespace ddsim {
inline void PrintTo(const Polynomial& p, std::ostream* os) { *os << p.str(); }
template <typename C>
void PrintTo(const OperatorSum<C>& a, std::ostream* os) { *os << "\n" << a.str(); }
}  // namespace ddsim

namespace ddsim::testing {

inline std::mt19937_64 test_rng(std::uint64_t salt = 0) { return std::mt19937_64(20240611ULL + salt); }

/// Random Pauli word on n sites.
inline PauliWord random_word(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> letter(0, 3);
  PauliWord w(n);
  for (std::size_t s = 0; s < n; ++s) w.set(s, static_cast<Letter>(letter(rng)));
  return w;
}

/// Random exact operator with small-integer-over-8 coefficients (complex when `hermitian` is false).
inline SymbolicOperator random_symbolic(std::size_t n, std::size_t terms, std::mt19937_64& rng,
                                        bool hermitian = false) {
  std::uniform_int_distribution<int> num(-8, 8);
  SymbolicOperator out(n);
  for (std::size_t k = 0; k < terms; ++k) {
    const Rational re(num(rng), 8);
    const Rational im = hermitian ? Rational(0) : Rational(num(rng), 8);
    out.add_term(random_word(n, rng), Polynomial(ComplexRational(re, im)));
  }
  return out;
}

inline NumericOperator random_numeric(std::size_t n, std::size_t terms, std::mt19937_64& rng, bool hermitian) {
  std::normal_distribution<double> g(0.0, 1.0);
  NumericOperator out(n);
  for (std::size_t k = 0; k < terms; ++k) {
    out.add_term(random_word(n, rng), Complex(g(rng), hermitian ? 0.0 : g(rng)));
  }
  return out;
}

inline SpinSystem random_system(std::size_t n, std::mt19937_64& rng, double detuning_scale = 1.0,
                                double coupling_scale = 1.0) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<double> detunings(n);
  std::vector<double> couplings(n * n, 0.0);
  for (auto& d : detunings) d = detuning_scale * g(rng);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      couplings[i * n + j] = couplings[j * n + i] = coupling_scale * g(rng);
    }
  }
  return SpinSystem(std::move(detunings), std::move(couplings));
}

/// exp(-i angle (cos(azimuth) I_x + sin(azimuth) I_y)) on every spin, from the
/// 2x2 closed form cos(angle/2) - i sin(angle/2) n.sigma tensored n times.
inline DenseOperator oracle_rotation(double azimuth, double angle, std::size_t n) {
  const Complex i(0, 1);
  DenseOperator ns(2, 2);
  ns << 0, std::polar(1.0, -azimuth), std::polar(1.0, azimuth), 0;
  const DenseOperator one = std::cos(angle / 2) * DenseOperator::Identity(2, 2) - i * std::sin(angle / 2) * ns;
  DenseOperator out = DenseOperator::Identity(1, 1);
  for (std::size_t k = 0; k < n; ++k) {
    DenseOperator next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * one;
    }
    out = next;
  }
  return out;
}

/// exp(-i h t) by Taylor series with scaling and squaring; independent of the
/// library's eigendecomposition route.
inline DenseOperator oracle_expm(const DenseOperator& h, double t) {
  const double norm = h.cwiseAbs().rowwise().sum().maxCoeff() * std::abs(t);
  int squarings = 0;
  while (std::ldexp(norm, -squarings) > 0.25) ++squarings;
  const DenseOperator a = Complex(0, -t) * std::ldexp(1.0, -squarings) * h;
  DenseOperator term = DenseOperator::Identity(h.rows(), h.cols());
  DenseOperator sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

inline double max_abs_diff(const DenseOperator& a, const DenseOperator& b) { return (a - b).cwiseAbs().maxCoeff(); }

}  // namespace ddsim::testing

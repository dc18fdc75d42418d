#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "ddsim/operator_sum.hpp"
#include "test_util.hpp"

using namespace ddsim;
using ddsim::testing::max_abs_diff;

namespace {

const Polynomial kHalf{Rational(1, 2)};
const Polynomial kQuarter{Rational(1, 4)};

DenseOperator dense2(Complex a, Complex b, Complex c, Complex d) {
  DenseOperator m(2, 2);
  m << a, b, c, d;
  return m;
}

}  // namespace

TEST(PauliWord, ParsesAndPrints) {
  const auto w = PauliWord::from_string("XZE");
  EXPECT_EQ(w.size(), 3u);
  EXPECT_EQ(w.at(0), Letter::X);
  EXPECT_EQ(w.at(1), Letter::Z);
  EXPECT_EQ(w.at(2), Letter::E);
  EXPECT_EQ(w.str(), "XZE");
  EXPECT_EQ(w.weight(), 2u);
  EXPECT_TRUE(PauliWord::from_string("EEE").is_identity());
  EXPECT_THROW(PauliWord::from_string("XQ"), ArgumentError);
}

TEST(PauliWord, ProductTableIsClosed) {
  // All 16 single-site products give +-1 or +-i times one letter.
  const std::array<const char*, 4> names{"E", "X", "Y", "Z"};
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const auto wa = PauliWord::from_string(names[a]);
      const auto wb = PauliWord::from_string(names[b]);
      const auto p = multiply_words(wa, wb);
      const DenseOperator expected = pauli_word_matrix(wa) * pauli_word_matrix(wb);
      const DenseOperator got = coeff_times_i_power(Complex(1.0), p.phase) * pauli_word_matrix(p.word);
      EXPECT_LT(max_abs_diff(expected, got), 1e-15) << names[a] << names[b];
    }
  }
}

TEST(SingleSpinOperator, Examples) {
  const auto ix = single_spin_operator(Axis::x, 0, 1);
  EXPECT_EQ(ix, SymbolicOperator::term(PauliWord::from_string("X"), kHalf));
  const auto iz = single_spin_operator(Axis::z, 1, 2);
  EXPECT_EQ(iz, SymbolicOperator::term(PauliWord::from_string("EZ"), kHalf));
  EXPECT_LT(max_abs_diff(to_dense(ix), dense2(0, 0.5, 0.5, 0)), 1e-15);
  EXPECT_THROW(single_spin_operator(Axis::x, 2, 2), ArgumentError);
}

TEST(Multiply, AngularMomentumExamples) {
  const auto ix = single_spin_operator(Axis::x, 0, 1);
  const auto iy = single_spin_operator(Axis::y, 0, 1);
  const auto iz = single_spin_operator(Axis::z, 0, 1);
  // I_x I_y = (i/2) I_z
  EXPECT_EQ(multiply(ix, iy), iz * Polynomial(ComplexRational(0, Rational(1, 2))));
  // I_x I_x = 1/4
  EXPECT_EQ(multiply(ix, ix), SymbolicOperator::identity(1, kQuarter));
  const auto id = SymbolicOperator::identity(1);
  EXPECT_EQ(multiply(id, ix), ix);
  EXPECT_THROW(multiply(ix, single_spin_operator(Axis::x, 0, 2)), ArgumentError);
}

TEST(Commutator, Examples) {
  const auto ix = single_spin_operator(Axis::x, 0, 1);
  const auto iy = single_spin_operator(Axis::y, 0, 1);
  const auto iz = single_spin_operator(Axis::z, 0, 1);
  EXPECT_EQ(commutator(ix, iy), iz * Polynomial(ComplexRational(0, 1)));
  EXPECT_TRUE(commutator(iz, iz).is_zero());
  auto rng = ddsim::testing::test_rng();
  const auto a = ddsim::testing::random_symbolic(2, 6, rng);
  EXPECT_TRUE(commutator(a, a).is_zero());
}

TEST(Commutator, ZeemanWithSecularDipolarAgainstDense) {
  // [I_z^1, 3 I_z^1 I_z^2 - I^1 . I^2], oracle: 4x4 dense commutator.
  const std::size_t n = 2;
  SymbolicOperator dipolar(n);
  for (Axis ax : {Axis::x, Axis::y, Axis::z}) {
    dipolar += multiply(single_spin_operator(ax, 0, n), single_spin_operator(ax, 1, n)) *
               Polynomial(ax == Axis::z ? 2 : -1);
  }
  const auto iz1 = single_spin_operator(Axis::z, 0, n);
  const auto symbolic = commutator(iz1, dipolar);
  const DenseOperator a = to_dense(iz1);
  const DenseOperator b = to_dense(dipolar);
  EXPECT_LT(max_abs_diff(to_dense(symbolic), a * b - b * a), 1e-15);
  // Flip-flop part: [Z/2, -(XX + YY)/4] = (i/4)(XY - YX).
  EXPECT_FALSE(symbolic.is_zero());
  EXPECT_EQ(symbolic.coefficient(PauliWord::from_string("XY")), Polynomial(ComplexRational(0, Rational(1, 4))));
  EXPECT_EQ(symbolic.coefficient(PauliWord::from_string("YX")), Polynomial(ComplexRational(0, Rational(-1, 4))));
}

TEST(Commutator, AntisymmetryAndJacobi) {
  auto rng = ddsim::testing::test_rng(1);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto a = ddsim::testing::random_symbolic(n, 4, rng);
    const auto b = ddsim::testing::random_symbolic(n, 4, rng);
    const auto c = ddsim::testing::random_symbolic(n, 4, rng);
    EXPECT_EQ(commutator(a, b), -commutator(b, a));
    const auto jacobi = commutator(a, commutator(b, c)) + commutator(b, commutator(c, a)) +
                        commutator(c, commutator(a, b));
    EXPECT_TRUE(jacobi.is_zero());
  }
}

TEST(Multiply, MatchesDenseProduct) {
  auto rng = ddsim::testing::test_rng(2);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto a = ddsim::testing::random_symbolic(n, 5, rng);
    const auto b = ddsim::testing::random_symbolic(n, 5, rng);
    EXPECT_LT(max_abs_diff(to_dense(multiply(a, b)), to_dense(a) * to_dense(b)), 1e-12);
  }
}

TEST(CliffordConjugate, IntervalExamples) {
  const std::size_t n = 2;
  // exp(-i pi/2 I_x): I_z -> I_y
  const auto iz = total_spin_operator(Axis::z, n);
  EXPECT_EQ(clifford_conjugate(iz, {Axis::x, 1}, 1), total_spin_operator(Axis::y, n));
  // exp(+i pi I_x): Zeeman flips, secular dipolar is invariant.
  SymbolicOperator dipolar(n);
  for (Axis ax : {Axis::x, Axis::y, Axis::z}) {
    dipolar += multiply(single_spin_operator(ax, 0, n), single_spin_operator(ax, 1, n)) *
               Polynomial(ax == Axis::z ? 2 : -1);
  }
  EXPECT_EQ(clifford_conjugate(dipolar, {Axis::x, -1}, 2), dipolar);
  EXPECT_EQ(clifford_conjugate(iz, {Axis::x, -1}, 2), -iz);
  EXPECT_EQ(clifford_conjugate(dipolar, {Axis::y, 1}, 0), dipolar);
}

TEST(CliffordConjugate, RejectsNonCliffordAngles) {
  const auto iz = total_spin_operator(Axis::z, 1);
  EXPECT_THROW(clifford_conjugate(iz, SignedAxis{Axis::x, 1}, 0.3), UnsupportedAngleError);
  EXPECT_NO_THROW(clifford_conjugate(iz, SignedAxis{Axis::x, 1}, std::numbers::pi));
}

TEST(CliffordConjugate, AgreesWithDenseConjugation) {
  auto rng = ddsim::testing::test_rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 1 + trial % 3;
    const auto a = ddsim::testing::random_symbolic(n, 6, rng);
    for (Axis ax : {Axis::x, Axis::y, Axis::z}) {
      for (int sign : {1, -1}) {
        for (int quarters : {-2, -1, 1, 2, 3}) {
          const double angle = quarters * std::numbers::pi / 2;
          const DenseOperator gen = to_dense(total_spin_operator<Complex>(ax, n)) * static_cast<double>(sign);
          const DenseOperator u = expm_hermitian(gen, angle);
          const DenseOperator expected = u.adjoint() * to_dense(a) * u;
          const auto got = clifford_conjugate(a, SignedAxis{ax, sign}, quarters);
          EXPECT_LT(max_abs_diff(to_dense(got), expected), 1e-12);
        }
      }
    }
  }
}

TEST(ToDense, Examples) {
  EXPECT_LT(max_abs_diff(to_dense(SymbolicOperator::identity(2)), DenseOperator::Identity(4, 4)), 1e-300);
  EXPECT_LT(max_abs_diff(to_dense(single_spin_operator(Axis::z, 0, 1)), dense2(0.5, 0, 0, -0.5)), 1e-300);
}

TEST(ToDense, PairHamiltonianAgainstElementwiseConstruction) {
  // Delta1 Iz1 + Delta2 Iz2 + a (3 Iz1 Iz2 - I1.I2) with (1, 2, 3), basis
  // |uu>, |ud>, |du>, |dd>. Diagonal: (D1 + D2)/2 + a/2, (D1 - D2)/2 - a/2 ... :
  // 3 IzIz - IzIz = 2 IzIz = +-1/2; flip-flop -(IxIx + IyIy) = -(1/2)(I+I- + I-I+)
  // couples |ud> and |du> with -a/2.
  const double d1 = 1, d2 = 2, a = 3;
  DenseOperator expected = DenseOperator::Zero(4, 4);
  expected(0, 0) = 0.5 * (d1 + d2) + 0.5 * a;
  expected(1, 1) = 0.5 * (d1 - d2) - 0.5 * a;
  expected(2, 2) = 0.5 * (-d1 + d2) - 0.5 * a;
  expected(3, 3) = -0.5 * (d1 + d2) + 0.5 * a;
  expected(1, 2) = expected(2, 1) = -0.5 * a;
  const auto h = internal_hamiltonian<Polynomial>({Polynomial(1), Polynomial(2)},
                                                  {Polynomial(0), Polynomial(3), Polynomial(3), Polynomial(0)});
  EXPECT_LT(max_abs_diff(to_dense(h), expected), 1e-15);
}

TEST(ExpmHermitian, Examples) {
  const DenseOperator ix = to_dense(single_spin_operator<Complex>(Axis::x, 0, 1));
  // exp(-i pi I_x) = -i sigma_x
  EXPECT_LT(max_abs_diff(expm_hermitian(ix, std::numbers::pi), dense2(0, Complex(0, -1), Complex(0, -1), 0)), 1e-15);
  EXPECT_LT(max_abs_diff(expm_hermitian(ix, 0.0), DenseOperator::Identity(2, 2)), 1e-300);
  const double delta = 1.7, t = 0.9;
  const DenseOperator iz = to_dense(single_spin_operator<Complex>(Axis::z, 0, 1)) * delta;
  EXPECT_LT(max_abs_diff(expm_hermitian(iz, t),
                         dense2(std::polar(1.0, -delta * t / 2), 0, 0, std::polar(1.0, delta * t / 2))),
            1e-15);
  DenseOperator bad = DenseOperator::Zero(2, 2);
  bad(0, 1) = 1.0;
  EXPECT_THROW(expm_hermitian(bad, 1.0), ValidationError);
}

TEST(ExpmHermitian, RandomOutputsAreUnitary) {
  auto rng = ddsim::testing::test_rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const DenseOperator h = to_dense(ddsim::testing::random_numeric(n, 8, rng, true));
    const double t = 10.0 / std::max(1e-9, operator_norm(h));
    const DenseOperator u = expm_hermitian(h, t);
    EXPECT_TRUE(is_unitary(u, 1e-12));
  }
}

TEST(Distance, ModPhaseExamples) {
  const DenseOperator h = to_dense(single_spin_operator<Complex>(Axis::z, 0, 2));
  const DenseOperator u = expm_hermitian(h + to_dense(single_spin_operator<Complex>(Axis::x, 1, 2)), 0.7);
  EXPECT_NEAR(frobenius_distance_mod_phase(u, u), 0.0, 1e-14);
  EXPECT_NEAR(frobenius_distance_mod_phase(u, std::polar(1.0, std::numbers::pi / 3) * u), 0.0, 1e-14);
  EXPECT_THROW(frobenius_distance_mod_phase(u, DenseOperator::Identity(2, 2)), ArgumentError);
}

TEST(Distance, SmallRotationMatchesSeries) {
  // Oracle: for U = exp(-i eps I_z) on one spin the eigenphases are -+eps/2;
  // minimizing over phase leaves 2 - 2 cos(eps/2) per eigenvalue pair, i.e.
  // d^2 = 4 (1 - cos(eps/2)) ~ eps^2/2 - eps^4/96, so d ~ eps/sqrt(2).
  const DenseOperator iz = to_dense(single_spin_operator<Complex>(Axis::z, 0, 1));
  for (double eps : {1e-1, 1e-2, 1e-3}) {
    const double d = frobenius_distance_mod_phase(DenseOperator::Identity(2, 2), expm_hermitian(iz, eps));
    const double series = std::sqrt(eps * eps / 2.0 - std::pow(eps, 4) / 96.0);
    EXPECT_NEAR(d, series, 1e-6 * eps);
    EXPECT_NEAR(d / (eps / std::sqrt(2.0)), 1.0, eps * eps);
  }
}

TEST(OperatorSum, CanonicalFormAndHermiticity) {
  SymbolicOperator a(1);
  a.add_term(PauliWord::from_string("X"), kHalf);
  a.add_term(PauliWord::from_string("X"), -kHalf);
  EXPECT_TRUE(a.is_zero());
  EXPECT_EQ(a.str(), "0");
  a.add_term(PauliWord::from_string("Y"), Polynomial(ComplexRational(0, 1)));
  EXPECT_FALSE(a.is_hermitian());
  EXPECT_TRUE(total_spin_operator(Axis::y, 3).is_hermitian());
  EXPECT_THROW(a.add_term(PauliWord::from_string("XX"), kHalf), ArgumentError);
}

TEST(OperatorSum, TextForm) {
  auto op = single_spin_operator(Axis::x, 0, 3) + single_spin_operator(Axis::z, 1, 3);
  EXPECT_EQ(op.str(), "+1/2 * EZE\n+1/2 * XEE");
  SymbolicOperator c(1);
  c.add_term(PauliWord::from_string("Z"), Polynomial(ComplexRational(Rational(1, 2), Rational(-1, 3))));
  EXPECT_EQ(c.str(), "(1/2 - 1/3 i) * Z");
  NumericOperator num = NumericOperator::term(PauliWord::from_string("XZE"), Complex(0.5));
  EXPECT_EQ(num.str(), "+0.5 * XZE");
}

TEST(FromDense, RoundTripsRandomOperators) {
  auto rng = ddsim::testing::test_rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto a = ddsim::testing::random_numeric(1 + trial % 3, 5, rng, false);
    const auto back = from_dense(to_dense(a), 1e-14);
    EXPECT_LT(max_abs_diff(to_dense(back), to_dense(a)), 1e-14);
    EXPECT_EQ(back.terms().size(), a.terms().size());
  }
}

TEST(Symbolic, RationalFromDoubleIsExact) {
  for (double v : {0.1, -3.75, 1e-300, 123456789.123, 0.0}) {
    EXPECT_EQ(rational_from_double(v).convert_to<double>(), v);
  }
  EXPECT_EQ(rational_from_double(0.5), Rational(1, 2));
  EXPECT_THROW(rational_from_double(std::nan("")), ArgumentError);
}

TEST(Symbolic, PolynomialArithmetic) {
  const auto x = Polynomial::symbol("x");
  const auto y = Polynomial::symbol("y");
  const auto p = (x + y) * (x - y);
  EXPECT_EQ(p, x * x - y * y);
  EXPECT_EQ(p.str(), "x^2 - y^2");
  EXPECT_DOUBLE_EQ(p.evaluate({{"x", 3.0}, {"y", 2.0}}).real(), 5.0);
  EXPECT_THROW(p.evaluate({{"x", 1.0}}), ArgumentError);
  EXPECT_TRUE((x - x).is_zero());
  EXPECT_EQ(p.substitute({{"y", Rational(1)}}), x * x - Polynomial(1));
}

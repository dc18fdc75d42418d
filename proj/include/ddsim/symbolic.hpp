#pragma once

// Exact coefficients for symbolic operator algebra: complex rationals and
// multivariate polynomials over them. Polynomials let the average
// Hamiltonian be evaluated with the detunings and couplings left as symbols.

#include <complex>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace ddsim {

using Rational = boost::multiprecision::cpp_rational;

/// Exact value of a finite double (every double is a dyadic rational).
Rational rational_from_double(double value);

std::string format_rational(const Rational& r);

struct ComplexRational {
  Rational re;
  Rational im;

  ComplexRational() = default;
  ComplexRational(Rational real) : re(std::move(real)) {}
  ComplexRational(Rational real, Rational imag) : re(std::move(real)), im(std::move(imag)) {}
  ComplexRational(int real) : re(real) {}

  bool is_zero() const { return re == 0 && im == 0; }
  bool is_real() const { return im == 0; }
  ComplexRational conj() const { return {re, -im}; }
  std::complex<double> to_complex() const;

  ComplexRational& operator+=(const ComplexRational& o);
  ComplexRational& operator-=(const ComplexRational& o);
  ComplexRational& operator*=(const ComplexRational& o);
  friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
  friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
  friend ComplexRational operator*(ComplexRational a, const ComplexRational& b) { return a *= b; }
  friend ComplexRational operator-(const ComplexRational& a) { return {-a.re, -a.im}; }
  friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
    return a.re == b.re && a.im == b.im;
  }
};

/// Multiply by i^k (k taken mod 4).
ComplexRational times_i_power(const ComplexRational& c, int k);

/// Text form `p/q`, `p/q i`, or `p/q + p'/q' i`.
std::string format_complex_rational(const ComplexRational& c);

using Bindings = std::map<std::string, double>;

/// Polynomial in named real symbols with complex-rational coefficients.
/// Canonical: no zero coefficients, monomials sorted, exponents > 0.
class Polynomial {
 public:
  using Monomial = std::vector<std::pair<std::string, unsigned>>;
  using TermMap = std::map<Monomial, ComplexRational>;

  Polynomial() = default;
  Polynomial(const ComplexRational& constant);
  Polynomial(const Rational& constant) : Polynomial(ComplexRational(constant)) {}
  Polynomial(int constant) : Polynomial(ComplexRational(constant)) {}

  static Polynomial symbol(const std::string& name);
  static Polynomial from_double(double value) { return Polynomial(rational_from_double(value)); }

  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// All coefficients real (real for every real assignment of the symbols).
  bool is_real() const;
  bool is_constant() const;
  /// Constant term (zero if absent).
  ComplexRational constant_term() const;

  /// Numeric value; throws ArgumentError if a symbol is unbound.
  std::complex<double> evaluate(const Bindings& bindings) const;
  /// Substitute exact values for a subset of the symbols.
  Polynomial substitute(const std::map<std::string, Rational>& values) const;

  Polynomial conj() const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a);
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

  std::string str() const;

 private:
  void add_term(const Monomial& m, const ComplexRational& c);
  TermMap terms_;
};

Polynomial times_i_power(const Polynomial& p, int k);

// Coefficient interface used by OperatorSum<C>. Declared here for both the
// exact and the floating-point coefficient types.
inline bool coeff_is_zero(const Polynomial& c) { return c.is_zero(); }
inline bool coeff_is_zero(const std::complex<double>& c) { return c == std::complex<double>{}; }
inline bool coeff_is_real(const Polynomial& c, double) { return c.is_real(); }
inline bool coeff_is_real(const std::complex<double>& c, double tol) { return std::abs(c.imag()) <= tol; }
inline Polynomial coeff_times_i_power(const Polynomial& c, int k) { return times_i_power(c, k); }
std::complex<double> coeff_times_i_power(const std::complex<double>& c, int k);
inline Polynomial coeff_conj(const Polynomial& c) { return c.conj(); }
inline std::complex<double> coeff_conj(const std::complex<double>& c) { return std::conj(c); }
inline std::complex<double> coeff_value(const Polynomial& c, const Bindings& b) { return c.evaluate(b); }
inline std::complex<double> coeff_value(const std::complex<double>& c, const Bindings&) { return c; }
std::string coeff_format(const Polynomial& c);
std::string coeff_format(const std::complex<double>& c);

}  // namespace ddsim

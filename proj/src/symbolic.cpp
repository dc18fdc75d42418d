#include "ddsim/symbolic.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "ddsim/errors.hpp"

namespace ddsim {

using boost::multiprecision::cpp_int;

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) {
    throw ArgumentError("cannot convert non-finite value to a rational");
  }
  if (value == 0.0) {
    return Rational(0);
  }
  int exponent = 0;
  const double mantissa = std::frexp(value, &exponent);  // value = mantissa * 2^exponent
  // 53 bits cover the full double mantissa.
  const auto scaled = static_cast<long long>(std::ldexp(mantissa, 53));
  exponent -= 53;
  cpp_int numerator(scaled);
  if (exponent >= 0) {
    return Rational(numerator << exponent);
  }
  return Rational(numerator, cpp_int(1) << (-exponent));
}

std::string format_rational(const Rational& r) {
  const cpp_int num = boost::multiprecision::numerator(r);
  const cpp_int den = boost::multiprecision::denominator(r);
  if (den == 1) {
    return num.str();
  }
  return num.str() + "/" + den.str();
}

std::complex<double> ComplexRational::to_complex() const {
  return {re.convert_to<double>(), im.convert_to<double>()};
}

ComplexRational& ComplexRational::operator+=(const ComplexRational& o) {
  re += o.re;
  im += o.im;
  return *this;
}

ComplexRational& ComplexRational::operator-=(const ComplexRational& o) {
  re -= o.re;
  im -= o.im;
  return *this;
}

ComplexRational& ComplexRational::operator*=(const ComplexRational& o) {
  Rational r = re * o.re - im * o.im;
  Rational i = re * o.im + im * o.re;
  re = std::move(r);
  im = std::move(i);
  return *this;
}

ComplexRational times_i_power(const ComplexRational& c, int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return c;
    case 1: return {-c.im, c.re};
    case 2: return {-c.re, -c.im};
    default: return {c.im, -c.re};
  }
}

std::string format_complex_rational(const ComplexRational& c) {
  if (c.im == 0) {
    return format_rational(c.re);
  }
  if (c.re == 0) {
    return format_rational(c.im) + " i";
  }
  const bool neg = c.im < 0;
  return format_rational(c.re) + (neg ? " - " : " + ") + format_rational(neg ? Rational(-c.im) : c.im) +
         " i";
}

Polynomial::Polynomial(const ComplexRational& constant) {
  if (!constant.is_zero()) {
    terms_.emplace(Monomial{}, constant);
  }
}

Polynomial Polynomial::symbol(const std::string& name) {
  if (name.empty()) {
    throw ArgumentError("symbol name must be non-empty");
  }
  Polynomial p;
  p.terms_.emplace(Monomial{{name, 1u}}, ComplexRational(1));
  return p;
}

bool Polynomial::is_real() const {
  for (const auto& [m, c] : terms_) {
    if (!c.is_real()) return false;
  }
  return true;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.empty());
}

ComplexRational Polynomial::constant_term() const {
  auto it = terms_.find(Monomial{});
  return it == terms_.end() ? ComplexRational{} : it->second;
}

std::complex<double> Polynomial::evaluate(const Bindings& bindings) const {
  std::complex<double> total{};
  for (const auto& [m, c] : terms_) {
    double factor = 1.0;
    for (const auto& [name, power] : m) {
      auto it = bindings.find(name);
      if (it == bindings.end()) {
        throw ArgumentError("unbound symbol '" + name + "'");
      }
      factor *= std::pow(it->second, static_cast<int>(power));
    }
    total += c.to_complex() * factor;
  }
  return total;
}

Polynomial Polynomial::substitute(const std::map<std::string, Rational>& values) const {
  Polynomial out;
  for (const auto& [m, c] : terms_) {
    Monomial rest;
    ComplexRational coeff = c;
    for (const auto& [name, power] : m) {
      auto it = values.find(name);
      if (it == values.end()) {
        rest.emplace_back(name, power);
        continue;
      }
      for (unsigned k = 0; k < power; ++k) coeff *= ComplexRational(it->second);
    }
    out.add_term(rest, coeff);
  }
  return out;
}

Polynomial Polynomial::conj() const {
  Polynomial out;
  for (const auto& [m, c] : terms_) out.terms_.emplace(m, c.conj());
  return out;
}

void Polynomial::add_term(const Monomial& m, const ComplexRational& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

namespace {

Polynomial::Monomial multiply_monomials(const Polynomial::Monomial& a, const Polynomial::Monomial& b) {
  Polynomial::Monomial out;
  out.reserve(a.size() + b.size());
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() || ib != b.end()) {
    if (ib == b.end() || (ia != a.end() && ia->first < ib->first)) {
      out.push_back(*ia++);
    } else if (ia == a.end() || ib->first < ia->first) {
      out.push_back(*ib++);
    } else {
      out.emplace_back(ia->first, ia->second + ib->second);
      ++ia;
      ++ib;
    }
  }
  return out;
}

}  // namespace

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  Polynomial out;
  for (const auto& [ma, ca] : a.terms_) {
    for (const auto& [mb, cb] : b.terms_) {
      out.add_term(multiply_monomials(ma, mb), ca * cb);
    }
  }
  return out;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) { return *this = *this * o; }

Polynomial operator-(const Polynomial& a) {
  Polynomial out;
  for (const auto& [m, c] : a.terms_) out.terms_.emplace(m, -c);
  return out;
}

Polynomial times_i_power(const Polynomial& p, int k) {
  return p * Polynomial(times_i_power(ComplexRational(1), k));
}

std::string Polynomial::str() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [m, c] : terms_) {
    std::string coeff = format_complex_rational(c);
    const bool compound = !c.re.is_zero() && !c.im.is_zero();
    if (compound) coeff = "(" + coeff + ")";
    bool negative = !compound && coeff.front() == '-';
    if (negative) coeff.erase(0, 1);
    if (!first) {
      os << (negative ? " - " : " + ");
    } else if (negative) {
      os << "-";
    }
    first = false;
    const bool unit = coeff == "1" && !m.empty();
    if (!unit) os << coeff;
    bool sep = !unit;
    for (const auto& [name, power] : m) {
      if (sep) os << "*";
      os << name;
      if (power > 1) os << "^" << power;
      sep = true;
    }
  }
  return os.str();
}

std::complex<double> coeff_times_i_power(const std::complex<double>& c, int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return c;
    case 1: return {-c.imag(), c.real()};
    case 2: return -c;
    default: return {c.imag(), -c.real()};
  }
}

std::string coeff_format(const Polynomial& c) {
  if (c.is_zero()) return "0";
  if (c.is_constant() && c.is_real()) {
    const std::string s = format_rational(c.constant_term().re);
    return s.front() == '-' ? s : "+" + s;
  }
  if (c.is_constant()) return "(" + format_complex_rational(c.constant_term()) + ")";
  return "(" + c.str() + ")";
}

std::string coeff_format(const std::complex<double>& c) {
  char buf[64];
  if (c.imag() == 0.0) {
    std::snprintf(buf, sizeof buf, "%+.17g", c.real());
  } else {
    std::snprintf(buf, sizeof buf, "(%+.17g%+.17gi)", c.real(), c.imag());
  }
  return buf;
}

}  // namespace ddsim

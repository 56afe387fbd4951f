#pragma once

#include <gmpxx.h>

#include <complex>
#include <string>
#include <string_view>

namespace qmorse {

using Rational = mpq_class;

// Canonical "p/q" form, or "p" for integers; sign carried by the numerator.
std::string rational_to_string(const Rational& r);
// Accepts "p", "-p", "p/q". Throws std::invalid_argument.
Rational parse_rational(std::string_view text);

Rational factorial(unsigned n);
Rational binomial(unsigned n, unsigned k);

// Exact element r + s*i + u*sqrt2 + v*i*sqrt2 of the field Q(i, sqrt2).
class Coefficient {
 public:
  Coefficient() = default;
  Coefficient(long value) : re_(value) {}  // NOLINT(google-explicit-constructor)
  Coefficient(const Rational& value) : re_(value) { re_.canonicalize(); }  // NOLINT
  Coefficient(Rational re, Rational im, Rational re_sqrt2, Rational im_sqrt2);

  static Coefficient i();
  static Coefficient sqrt2();

  const Rational& re() const { return re_; }
  const Rational& im() const { return im_; }
  const Rational& re_sqrt2() const { return re_sqrt2_; }
  const Rational& im_sqrt2() const { return im_sqrt2_; }

  bool is_zero() const;
  bool is_rational() const;

  // Complex conjugation i -> -i; sqrt2 is fixed.
  Coefficient conj() const;
  // Throws DomainError on zero.
  Coefficient inverse() const;

  Coefficient operator-() const;
  Coefficient& operator+=(const Coefficient& rhs);
  Coefficient& operator-=(const Coefficient& rhs);
  Coefficient& operator*=(const Coefficient& rhs);
  Coefficient& operator*=(const Rational& rhs);
  Coefficient& operator/=(const Coefficient& rhs) { return *this *= rhs.inverse(); }
  Coefficient& operator/=(const Rational& rhs);

  friend Coefficient operator+(Coefficient lhs, const Coefficient& rhs) { return lhs += rhs; }
  friend Coefficient operator-(Coefficient lhs, const Coefficient& rhs) { return lhs -= rhs; }
  friend Coefficient operator*(Coefficient lhs, const Coefficient& rhs) { return lhs *= rhs; }
  friend Coefficient operator/(Coefficient lhs, const Coefficient& rhs) { return lhs /= rhs; }

  friend bool operator==(const Coefficient& a, const Coefficient& b);
  friend bool operator!=(const Coefficient& a, const Coefficient& b) { return !(a == b); }

  // Adds a*b into *this without temporaries for the common sparse cases.
  void add_product(const Coefficient& a, const Coefficient& b);

  std::complex<double> to_complex() const;
  // Human-readable, e.g. "3/4 + 1/2*i*sqrt2".
  std::string to_string() const;

 private:
  Rational re_{0};
  Rational im_{0};
  Rational re_sqrt2_{0};
  Rational im_sqrt2_{0};
};

}  // namespace qmorse

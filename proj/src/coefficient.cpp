#include "qmorse/coefficient.hpp"

#include <array>
#include <stdexcept>
#include <utility>

#include "qmorse/errors.hpp"

namespace qmorse {

std::string rational_to_string(const Rational& r) { return r.get_str(); }

Rational parse_rational(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty rational");
  std::size_t pos = 0;
  if (text[0] == '-' || text[0] == '+') pos = 1;
  bool seen_digit = false;
  bool seen_slash = false;
  bool digit_after_slash = false;
  for (std::size_t k = pos; k < text.size(); ++k) {
    char c = text[k];
    if (c >= '0' && c <= '9') {
      seen_digit = true;
      if (seen_slash) digit_after_slash = true;
    } else if (c == '/' && !seen_slash && seen_digit) {
      seen_slash = true;
    } else {
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    }
  }
  if (!seen_digit || (seen_slash && !digit_after_slash)) {
    throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
  }
  std::string s(text[0] == '+' ? text.substr(1) : text);
  Rational r;
  if (r.set_str(s, 10) != 0) throw std::invalid_argument("malformed rational '" + s + "'");
  if (r.get_den() == 0) throw std::invalid_argument("zero denominator in '" + s + "'");
  r.canonicalize();
  return r;
}

Rational factorial(unsigned n) {
  mpz_class f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return Rational(f);
}

Rational binomial(unsigned n, unsigned k) {
  mpz_class b;
  mpz_bin_uiui(b.get_mpz_t(), n, k);
  return Rational(b);
}

Coefficient::Coefficient(Rational re, Rational im, Rational re_sqrt2, Rational im_sqrt2)
    : re_(std::move(re)), im_(std::move(im)), re_sqrt2_(std::move(re_sqrt2)),
      im_sqrt2_(std::move(im_sqrt2)) {
  re_.canonicalize();
  im_.canonicalize();
  re_sqrt2_.canonicalize();
  im_sqrt2_.canonicalize();
}

Coefficient Coefficient::i() { return {0, 1, 0, 0}; }
Coefficient Coefficient::sqrt2() { return {0, 0, 1, 0}; }

bool Coefficient::is_zero() const {
  return sgn(re_) == 0 && sgn(im_) == 0 && sgn(re_sqrt2_) == 0 && sgn(im_sqrt2_) == 0;
}

bool Coefficient::is_rational() const {
  return sgn(im_) == 0 && sgn(re_sqrt2_) == 0 && sgn(im_sqrt2_) == 0;
}

Coefficient Coefficient::conj() const { return {re_, -im_, re_sqrt2_, -im_sqrt2_}; }

Coefficient Coefficient::inverse() const {
  if (is_zero()) throw DomainError("division by zero coefficient");
  // Write x = A + B*sqrt2 with Gaussian rationals A, B; then
  // 1/x = (A - B*sqrt2) / (A^2 - 2 B^2) and the norm is Gaussian.
  const Rational& ar = re_;
  const Rational& ai = im_;
  const Rational& br = re_sqrt2_;
  const Rational& bi = im_sqrt2_;
  Rational nr = ar * ar - ai * ai - 2 * (br * br - bi * bi);
  Rational ni = 2 * ar * ai - 4 * br * bi;
  Rational mod2 = nr * nr + ni * ni;
  // 1/N = conj(N) / |N|^2
  Rational inv_r = nr / mod2;
  Rational inv_i = -ni / mod2;
  // (A - B sqrt2) * (inv_r + inv_i i)
  Rational out_re = ar * inv_r - ai * inv_i;
  Rational out_im = ar * inv_i + ai * inv_r;
  Rational out_re2 = -(br * inv_r - bi * inv_i);
  Rational out_im2 = -(br * inv_i + bi * inv_r);
  return {out_re, out_im, out_re2, out_im2};
}

Coefficient Coefficient::operator-() const { return {-re_, -im_, -re_sqrt2_, -im_sqrt2_}; }

Coefficient& Coefficient::operator+=(const Coefficient& rhs) {
  if (sgn(rhs.re_) != 0) re_ += rhs.re_;
  if (sgn(rhs.im_) != 0) im_ += rhs.im_;
  if (sgn(rhs.re_sqrt2_) != 0) re_sqrt2_ += rhs.re_sqrt2_;
  if (sgn(rhs.im_sqrt2_) != 0) im_sqrt2_ += rhs.im_sqrt2_;
  return *this;
}

Coefficient& Coefficient::operator-=(const Coefficient& rhs) {
  if (sgn(rhs.re_) != 0) re_ -= rhs.re_;
  if (sgn(rhs.im_) != 0) im_ -= rhs.im_;
  if (sgn(rhs.re_sqrt2_) != 0) re_sqrt2_ -= rhs.re_sqrt2_;
  if (sgn(rhs.im_sqrt2_) != 0) im_sqrt2_ -= rhs.im_sqrt2_;
  return *this;
}

namespace {

// Basis 1, i, sqrt2, i*sqrt2: e_j * e_k = factor * e_target.
struct BasisProduct {
  int target;
  int factor;
};

constexpr std::array<std::array<BasisProduct, 4>, 4> kBasisTable{{
    {{{0, 1}, {1, 1}, {2, 1}, {3, 1}}},
    {{{1, 1}, {0, -1}, {3, 1}, {2, -1}}},
    {{{2, 1}, {3, 1}, {0, 2}, {1, 2}}},
    {{{3, 1}, {2, -1}, {1, 2}, {0, -2}}},
}};

}  // namespace

void Coefficient::add_product(const Coefficient& a, const Coefficient& b) {
  const std::array<const Rational*, 4> pa{&a.re_, &a.im_, &a.re_sqrt2_, &a.im_sqrt2_};
  const std::array<const Rational*, 4> pb{&b.re_, &b.im_, &b.re_sqrt2_, &b.im_sqrt2_};
  const std::array<Rational*, 4> out{&re_, &im_, &re_sqrt2_, &im_sqrt2_};
  Rational tmp;
  for (int j = 0; j < 4; ++j) {
    if (sgn(*pa[j]) == 0) continue;
    for (int k = 0; k < 4; ++k) {
      if (sgn(*pb[k]) == 0) continue;
      const BasisProduct bp = kBasisTable[j][k];
      mpq_mul(tmp.get_mpq_t(), pa[j]->get_mpq_t(), pb[k]->get_mpq_t());
      if (bp.factor == 2 || bp.factor == -2) mpq_mul_2exp(tmp.get_mpq_t(), tmp.get_mpq_t(), 1);
      if (bp.factor > 0) {
        mpq_add(out[bp.target]->get_mpq_t(), out[bp.target]->get_mpq_t(), tmp.get_mpq_t());
      } else {
        mpq_sub(out[bp.target]->get_mpq_t(), out[bp.target]->get_mpq_t(), tmp.get_mpq_t());
      }
    }
  }
}

Coefficient& Coefficient::operator*=(const Coefficient& rhs) {
  Coefficient product;
  product.add_product(*this, rhs);
  *this = std::move(product);
  return *this;
}

Coefficient& Coefficient::operator*=(const Rational& rhs) {
  if (sgn(re_) != 0) re_ *= rhs;
  if (sgn(im_) != 0) im_ *= rhs;
  if (sgn(re_sqrt2_) != 0) re_sqrt2_ *= rhs;
  if (sgn(im_sqrt2_) != 0) im_sqrt2_ *= rhs;
  return *this;
}

Coefficient& Coefficient::operator/=(const Rational& rhs) {
  if (sgn(rhs) == 0) throw DomainError("division by zero");
  if (sgn(re_) != 0) re_ /= rhs;
  if (sgn(im_) != 0) im_ /= rhs;
  if (sgn(re_sqrt2_) != 0) re_sqrt2_ /= rhs;
  if (sgn(im_sqrt2_) != 0) im_sqrt2_ /= rhs;
  return *this;
}

bool operator==(const Coefficient& a, const Coefficient& b) {
  return a.re_ == b.re_ && a.im_ == b.im_ && a.re_sqrt2_ == b.re_sqrt2_ &&
         a.im_sqrt2_ == b.im_sqrt2_;
}

std::complex<double> Coefficient::to_complex() const {
  const double s2 = 1.4142135623730950488;
  return {re_.get_d() + s2 * re_sqrt2_.get_d(), im_.get_d() + s2 * im_sqrt2_.get_d()};
}

std::string Coefficient::to_string() const {
  if (is_zero()) return "0";
  std::string out;
  auto append = [&out](const Rational& r, const char* unit) {
    if (sgn(r) == 0) return;
    std::string mag = rational_to_string(abs(r));
    if (out.empty()) {
      if (sgn(r) < 0) out += "-";
    } else {
      out += sgn(r) < 0 ? " - " : " + ";
    }
    if (*unit == '\0') {
      out += mag;
    } else if (mag == "1") {
      out += unit;
    } else {
      out += mag + "*" + unit;
    }
  };
  append(re_, "");
  append(im_, "i");
  append(re_sqrt2_, "sqrt2");
  append(im_sqrt2_, "i*sqrt2");
  return out;
}

}  // namespace qmorse

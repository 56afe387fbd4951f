#pragma once

#include <compare>
#include <cstdint>
#include <utility>
#include <vector>

#include "qmorse/coefficient.hpp"
#include "qmorse/truncation.hpp"

namespace qmorse {

// Exponents of left^m right^n hbar^k t^l. In the normal basis left = adag and
// right = a; in the qp basis left = q and right = p; in the pq basis the
// other way round.
struct QMonomial {
  std::uint32_t left = 0;
  std::uint32_t right = 0;
  std::uint32_t hbar = 0;
  std::uint32_t t = 0;

  int weight2() const { return static_cast<int>(left + right + 2 * hbar); }
  bool is_central() const { return left == 0 && right == 0; }

  friend auto operator<=>(const QMonomial&, const QMonomial&) = default;
};

enum class Ordering {
  normal,  // (adag)^m a^n, [a, adag] = hbar
  qp,      // q^m p^n,      [p, q] = -i hbar
  pq,      // p^m q^n,      [q, p] = i hbar
};

// Truncated sparse element of the Heisenberg algebra with central hbar, t.
// Terms are kept sorted by monomial; zero coefficients are never stored.
class QSeries {
 public:
  using Term = std::pair<QMonomial, Coefficient>;

  explicit QSeries(Truncation truncation, Ordering ordering = Ordering::normal)
      : truncation_(truncation), ordering_(ordering) {}

  // Merges duplicate monomials, drops zeros and everything beyond the caps.
  static QSeries from_terms(std::vector<Term> terms, Truncation truncation,
                            Ordering ordering = Ordering::normal);

  // Trusts the input to be sorted, duplicate-free, zero-free and within caps.
  static QSeries from_canonical(std::vector<Term> terms, Truncation truncation,
                                Ordering ordering = Ordering::normal);
  static QSeries constant(const Coefficient& c, Truncation truncation);
  static QSeries monomial(const QMonomial& m, const Coefficient& c, Truncation truncation,
                          Ordering ordering = Ordering::normal);
  static QSeries adag(Truncation truncation);
  static QSeries a(Truncation truncation);
  static QSeries hbar(Truncation truncation);
  static QSeries t(Truncation truncation);
  // q and p expressed in the normal basis.
  static QSeries q(Truncation truncation);
  static QSeries p(Truncation truncation);
  // p^2 + q^2 = 2 adag a + hbar.
  static QSeries harmonic(Truncation truncation);

  const std::vector<Term>& terms() const { return terms_; }
  const Truncation& truncation() const { return truncation_; }
  Ordering ordering() const { return ordering_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Coefficient coefficient(const QMonomial& m) const;
  // True when every monomial is free of the non-central generators.
  bool is_central() const;
  int max_t() const;
  int max_weight2() const;

  // Coefficient of t^l, returned as a t-free series.
  QSeries t_coefficient(int l) const;
  // Multiplies by c * hbar^k * t^l (central, so no reordering).
  QSeries scaled(const Coefficient& c, int hbar_shift = 0, int t_shift = 0) const;
  // Re-truncates at new caps (narrowing drops terms; widening keeps the value).
  QSeries with_truncation(Truncation truncation) const;
  // Drops every term at t-order above `t_cap` and lowers the cap accordingly.
  QSeries truncate_t(int t_cap) const;

  QSeries operator-() const;
  QSeries& operator+=(const QSeries& rhs);
  QSeries& operator-=(const QSeries& rhs);
  friend QSeries operator+(QSeries lhs, const QSeries& rhs) { return lhs += rhs; }
  friend QSeries operator-(QSeries lhs, const QSeries& rhs) { return lhs -= rhs; }

  friend bool operator==(const QSeries& x, const QSeries& y) {
    return x.ordering_ == y.ordering_ && x.terms_ == y.terms_;
  }

 private:
  Truncation truncation_;
  Ordering ordering_;
  std::vector<Term> terms_;
};

}  // namespace qmorse

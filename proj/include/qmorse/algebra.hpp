#pragma once

#include <cstdint>
#include <vector>

#include "qmorse/qseries.hpp"
#include "qmorse/scalar_series.hpp"

namespace qmorse {

// Ordered product with re-ordering of the inner pair. Caps: the meet of the
// operands' caps.
QSeries mul(const QSeries& f, const QSeries& g);
inline QSeries operator*(const QSeries& f, const QSeries& g) { return mul(f, g); }
QSeries power(const QSeries& f, unsigned n);

QSeries commutator(const QSeries& f, const QSeries& g);
// (i/hbar)[f, g]. Computed one weight step above the common cap so the
// division by hbar loses nothing below it.
QSeries bracket(const QSeries& f, const QSeries& g);
// Exact exponent decrement; throws DomainError if a monomial has no hbar.
QSeries divide_by_hbar(const QSeries& f);

// Substitutes images for the two generators of `f` and re-orders in the
// target ordering. Images must be expressed in `target`.
QSeries substitute_generators(const QSeries& f, const QSeries& left_image,
                              const QSeries& right_image, Ordering target);
// q-before-p (or p-before-q) ordered input -> normal ordered.
QSeries from_pq(const QSeries& pq);
// Any view -> q-before-p ordered view.
QSeries to_pq(const QSeries& f);
// Any view -> p-before-q ordered view.
QSeries to_p_first(const QSeries& f);
// Any view -> normal ordered.
QSeries to_normal(const QSeries& f);
// The generators q and p written in the given view.
QSeries generator_q(Truncation truncation, Ordering ordering);
QSeries generator_p(Truncation truncation, Ordering ordering);

ScalarSeries total_symbol(const QSeries& f);
ScalarSeries principal_symbol(const QSeries& f);

QSeries borel(const QSeries& f);
QSeries borel_inverse(const QSeries& f);
ScalarSeries borel(const ScalarSeries& f);
ScalarSeries borel_inverse(const ScalarSeries& f);
// Borel-plane product: hbar^j * hbar^k -> j! k! / (j+k)! hbar^(j+k); the other
// variables multiply as usual.
ScalarSeries hbar_convolution(const ScalarSeries& a, const ScalarSeries& b);

// Lazily extended table of powers f^n at the caps of f.
class PowerTable {
 public:
  explicit PowerTable(QSeries base);
  const QSeries& base() const { return powers_[1]; }
  const QSeries& operator[](unsigned n);

 private:
  std::vector<QSeries> powers_;
};

// u o f = sum_n u_n f^n for u in (z, hbar, t). Requires every monomial of f to
// have weight >= 1/2 or a positive t exponent.
QSeries compose_scalar(const ScalarSeries& u, const QSeries& f);
QSeries compose_scalar(const ScalarSeries& u, PowerTable& powers);

// Embeds a central (hbar, t) series as an element of the algebra.
QSeries central(const ScalarSeries& alpha, Truncation truncation);

QSeries dagger(const QSeries& f);
ScalarSeries pi_restriction(const QSeries& f);
ScalarSeries pairing(const QSeries& f, const QSeries& g);
ScalarSeries tau(const ScalarSeries& alpha);

// While alive, products on this thread visit the left operand's terms in a
// seeded pseudo-random order. Results are unchanged; used to check that
// nothing depends on insertion order.
class ScopedTermOrder {
 public:
  explicit ScopedTermOrder(std::uint64_t seed);
  ~ScopedTermOrder();
  ScopedTermOrder(const ScopedTermOrder&) = delete;
  ScopedTermOrder& operator=(const ScopedTermOrder&) = delete;

 private:
  std::uint64_t previous_;
};

}  // namespace qmorse

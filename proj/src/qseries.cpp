#include "qmorse/qseries.hpp"

#include <algorithm>

#include "detail/accumulator.hpp"

namespace qmorse {

namespace {

std::uint64_t pack(const QMonomial& m) { return detail::pack4(m.left, m.right, m.hbar, m.t); }

QMonomial unpack(std::uint64_t key) {
  auto e = detail::unpack4(key);
  return {e[0], e[1], e[2], e[3]};
}

bool within(const QMonomial& m, const Truncation& tr) {
  return static_cast<int>(m.t) <= tr.t_cap && m.weight2() <= tr.weight_cap2;
}

}  // namespace

QSeries QSeries::from_terms(std::vector<Term> terms, Truncation truncation, Ordering ordering) {
  detail::Accumulator acc(truncation.term_guard);
  for (auto& [mono, coef] : terms) {
    if (!within(mono, truncation) || coef.is_zero()) continue;
    acc.add(pack(mono), coef);
  }
  QSeries out(truncation, ordering);
  for (auto& [key, coef] : std::move(acc).finish()) out.terms_.emplace_back(unpack(key), std::move(coef));
  return out;
}

QSeries QSeries::from_canonical(std::vector<Term> terms, Truncation truncation,
                                Ordering ordering) {
  QSeries out(truncation, ordering);
  out.terms_ = std::move(terms);
  return out;
}

QSeries QSeries::constant(const Coefficient& c, Truncation truncation) {
  return from_terms({{QMonomial{}, c}}, truncation);
}

QSeries QSeries::monomial(const QMonomial& m, const Coefficient& c, Truncation truncation,
                          Ordering ordering) {
  return from_terms({{m, c}}, truncation, ordering);
}

QSeries QSeries::adag(Truncation truncation) { return monomial({1, 0, 0, 0}, 1, truncation); }
QSeries QSeries::a(Truncation truncation) { return monomial({0, 1, 0, 0}, 1, truncation); }
QSeries QSeries::hbar(Truncation truncation) { return monomial({0, 0, 1, 0}, 1, truncation); }
QSeries QSeries::t(Truncation truncation) { return monomial({0, 0, 0, 1}, 1, truncation); }

QSeries QSeries::q(Truncation truncation) {
  // q = (adag - a) / (sqrt2 i) = -i/sqrt2 (adag - a) = (i sqrt2 / 2)(a - adag)
  Coefficient c(0, 0, 0, Rational(1, 2));
  return from_terms({{{1, 0, 0, 0}, -c}, {{0, 1, 0, 0}, c}}, truncation);
}

QSeries QSeries::p(Truncation truncation) {
  // p = (adag + a) / sqrt2
  Coefficient c(0, 0, Rational(1, 2), 0);
  return from_terms({{{1, 0, 0, 0}, c}, {{0, 1, 0, 0}, c}}, truncation);
}

QSeries QSeries::harmonic(Truncation truncation) {
  return from_terms({{{1, 1, 0, 0}, 2}, {{0, 0, 1, 0}, 1}}, truncation);
}

Coefficient QSeries::coefficient(const QMonomial& m) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), m,
                             [](const Term& term, const QMonomial& key) { return term.first < key; });
  if (it != terms_.end() && it->first == m) return it->second;
  return {};
}

bool QSeries::is_central() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const Term& term) { return term.first.is_central(); });
}

int QSeries::max_t() const {
  int out = 0;
  for (const auto& [m, c] : terms_) out = std::max(out, static_cast<int>(m.t));
  return out;
}

int QSeries::max_weight2() const {
  int out = 0;
  for (const auto& [m, c] : terms_) out = std::max(out, m.weight2());
  return out;
}

QSeries QSeries::t_coefficient(int l) const {
  QSeries out(truncation_, ordering_);
  for (const auto& [m, c] : terms_) {
    if (static_cast<int>(m.t) != l) continue;
    QMonomial shifted = m;
    shifted.t = 0;
    out.terms_.emplace_back(shifted, c);
  }
  std::sort(out.terms_.begin(), out.terms_.end(),
            [](const Term& x, const Term& y) { return x.first < y.first; });
  return out;
}

QSeries QSeries::scaled(const Coefficient& c, int hbar_shift, int t_shift) const {
  QSeries out(truncation_, ordering_);
  if (c.is_zero()) return out;
  for (const auto& [m, coef] : terms_) {
    QMonomial shifted = m;
    shifted.hbar += hbar_shift;
    shifted.t += t_shift;
    if (!within(shifted, truncation_)) continue;
    out.terms_.emplace_back(shifted, coef * c);
  }
  // Uniform shifts preserve the ordering of the remaining terms.
  return out;
}

QSeries QSeries::with_truncation(Truncation truncation) const {
  QSeries out(truncation, ordering_);
  for (const auto& term : terms_) {
    if (within(term.first, truncation)) out.terms_.push_back(term);
  }
  return out;
}

QSeries QSeries::truncate_t(int t_cap) const {
  return with_truncation(truncation_.with_t_cap(std::min(t_cap, truncation_.t_cap)));
}

QSeries QSeries::operator-() const {
  QSeries out = *this;
  for (auto& term : out.terms_) term.second = -term.second;
  return out;
}

QSeries& QSeries::operator+=(const QSeries& rhs) {
  if (&rhs == this) {
    QSeries copy = rhs;
    return *this += copy;
  }
  if (rhs.ordering_ != ordering_) throw DomainError("cannot add series in different orderings");
  Truncation tr = truncation_.meet(rhs.truncation_);
  std::vector<Term> merged;
  merged.reserve(terms_.size() + rhs.terms_.size());
  auto x = terms_.begin();
  auto y = rhs.terms_.begin();
  while (x != terms_.end() || y != rhs.terms_.end()) {
    if (y == rhs.terms_.end() || (x != terms_.end() && x->first < y->first)) {
      if (within(x->first, tr)) merged.push_back(std::move(*x));
      ++x;
    } else if (x == terms_.end() || y->first < x->first) {
      if (within(y->first, tr)) merged.push_back(*y);
      ++y;
    } else {
      Coefficient sum = std::move(x->second);
      sum += y->second;
      if (!sum.is_zero() && within(x->first, tr)) merged.emplace_back(x->first, std::move(sum));
      ++x;
      ++y;
    }
  }
  if (merged.size() > tr.term_guard) throw ResourceError("term-count guard exceeded");
  terms_ = std::move(merged);
  truncation_ = tr;
  return *this;
}

QSeries& QSeries::operator-=(const QSeries& rhs) { return *this += -rhs; }

}  // namespace qmorse

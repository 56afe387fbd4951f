#include "qmorse/calculus.hpp"

#include "qmorse/algebra.hpp"
#include "qmorse/errors.hpp"

namespace qmorse {

namespace {

Truncation shift_weight(const Truncation& tr, int delta2) {
  return tr.with_weight_cap2(std::max(0, tr.weight_cap2 + delta2));
}

QSeries differentiate(const QSeries& f, bool by_q) {
  const Truncation tr = f.truncation();
  QSeries g = to_normal(f);
  QSeries out = by_q ? -bracket(g, QSeries::p(tr)) : bracket(g, QSeries::q(tr));
  return out.with_truncation(shift_weight(tr, -1));
}

// In the view where the integration variable comes first, left^m right^n
// -> left^(m+1) right^n / (m+1).
QSeries integrate(const QSeries& f, Ordering view) {
  const Truncation wider = shift_weight(f.truncation(), 1);
  QSeries g = view == Ordering::qp ? to_pq(f) : to_p_first(f);
  std::vector<QSeries::Term> terms;
  terms.reserve(g.size());
  for (const auto& [m, c] : g.terms()) {
    QMonomial up = m;
    up.left += 1;
    terms.emplace_back(up, c / Coefficient(static_cast<long>(up.left)));
  }
  return to_normal(QSeries::from_terms(std::move(terms), wider, view));
}

std::optional<QSeries> left_divide(const QSeries& f, Ordering view) {
  QSeries g = view == Ordering::qp ? to_pq(f) : to_p_first(f);
  std::vector<QSeries::Term> terms;
  for (const auto& [m, c] : g.terms()) {
    if (m.left == 0) return std::nullopt;
    QMonomial down = m;
    down.left -= 1;
    terms.emplace_back(down, c);
  }
  return to_normal(QSeries::from_terms(std::move(terms), f.truncation(), view));
}

}  // namespace

QSeries d_dq(const QSeries& f) { return differentiate(f, true); }
QSeries d_dp(const QSeries& f) { return differentiate(f, false); }
QSeries int_dq(const QSeries& f) { return integrate(f, Ordering::qp); }
QSeries int_dp(const QSeries& f) { return integrate(f, Ordering::pq); }
std::optional<QSeries> left_divide_by_q(const QSeries& f) { return left_divide(f, Ordering::qp); }
std::optional<QSeries> left_divide_by_p(const QSeries& f) { return left_divide(f, Ordering::pq); }

ReconstructedHamiltonian reconstruct_hamiltonian(const DerivationSpec& d) {
  const QSeries dq = to_normal(d.dq);
  const QSeries dp = to_normal(d.dp);
  const Truncation tr = dq.truncation().meet(dp.truncation());
  const QSeries q = QSeries::q(tr);
  const QSeries p = QSeries::p(tr);
  if (!(commutator(dp, q) + commutator(p, dq)).is_zero()) {
    throw DomainError("not a derivation");
  }
  // H = int(Dp)dq - int(Dq)dp + int( int((i/hbar)[p, Dq]) dq ) dp
  QSeries inner = int_dq(bracket(p, dq));
  QSeries h = int_dq(dp) - int_dp(dq) + int_dp(inner);
  return {h.with_truncation(shift_weight(tr, 1)), d.dt};
}

}  // namespace qmorse

#include "qmorse/flow.hpp"

#include <vector>

#include "qmorse/algebra.hpp"
#include "qmorse/errors.hpp"

namespace qmorse {

namespace {

std::vector<QSeries> t_slices(const QSeries& h, int n) {
  std::vector<QSeries> out;
  for (int k = 0; k <= n; ++k) out.push_back(h.t_coefficient(k));
  return out;
}

Truncation flow_caps(const QSeries& h, const QSeries& f, int n) {
  if (n < 0) throw DomainError("t-order must be non-negative");
  Truncation tr = h.truncation().meet(f.truncation());
  return tr.with_t_cap(std::min(tr.t_cap, n));
}

}  // namespace

QSeries integrate_heisenberg(const QSeries& h, const QSeries& f, int n) {
  const Truncation tr = flow_caps(h, f, n);
  const int cap = tr.t_cap;
  const std::vector<QSeries> hs = t_slices(to_normal(h).with_truncation(tr), cap);
  const QSeries g = to_normal(f).with_truncation(tr);

  QSeries result(tr);
  for (int l = 0; l <= std::min(cap, g.max_t()); ++l) {
    QSeries fl = g.t_coefficient(l);
    if (fl.is_zero()) continue;
    std::vector<QSeries> phi{fl};
    for (int k = 0; k + l < cap; ++k) {
      QSeries next(tr);
      for (int j = 0; j <= k; ++j) {
        if (hs[k - j].is_zero()) continue;
        next += bracket(phi[j], hs[k - j]);
      }
      phi.push_back(next.scaled(Coefficient(Rational(1, k + 1))));
    }
    for (int k = 0; k < static_cast<int>(phi.size()); ++k) result += phi[k].scaled(1, 0, k + l);
  }
  return result.with_truncation(tr);
}

QSeries solve_propagator(const QSeries& h, int n) {
  const Truncation tr = flow_caps(h, h, n);
  const int cap = tr.t_cap;
  const std::vector<QSeries> hs = t_slices(to_normal(h).with_truncation(tr), cap);
  std::vector<QSeries> u{QSeries::constant(1, tr)};
  for (int k = 0; k < cap; ++k) {
    QSeries next(tr);
    for (int j = 0; j <= k; ++j) {
      if (hs[k - j].is_zero()) continue;
      next += mul(hs[k - j], u[j]);
    }
    u.push_back(next.scaled(Coefficient(Rational(1, k + 1))));
  }
  QSeries result(tr);
  for (int k = 0; k <= cap; ++k) result += u[k].scaled(1, 0, k);
  return result;
}

}  // namespace qmorse

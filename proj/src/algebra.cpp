#include "qmorse/algebra.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "detail/accumulator.hpp"

namespace qmorse {

namespace {

thread_local std::uint64_t g_term_order_seed = 0;

std::uint64_t pack(const QMonomial& m) { return detail::pack4(m.left, m.right, m.hbar, m.t); }

QMonomial unpack(std::uint64_t key) {
  auto e = detail::unpack4(key);
  return {e[0], e[1], e[2], e[3]};
}

// [right, left] = c * hbar in the given ordering.
Coefficient contraction_constant(Ordering ordering) {
  switch (ordering) {
    case Ordering::normal:
      return 1;
    case Ordering::qp:
      return -Coefficient::i();
    case Ordering::pq:
      return Coefficient::i();
  }
  throw InternalError("unknown ordering");
}

std::vector<std::size_t> visit_order(std::size_t n) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (g_term_order_seed != 0) {
    std::mt19937_64 rng(g_term_order_seed ^ (n * 0x9E3779B97F4A7C15ULL));
    std::shuffle(order.begin(), order.end(), rng);
  }
  return order;
}

// Adds scale * f * g into acc, keeping only contraction orders j >= jmin and
// shifting the hbar exponent of every emitted monomial by hbar_shift.
void accumulate_product(detail::Accumulator& acc, const QSeries& f, const QSeries& g,
                        const Truncation& tr, unsigned jmin, int hbar_shift,
                        const Coefficient& scale) {
  const Ordering ordering = f.ordering();
  const bool normal = ordering == Ordering::normal;
  const Coefficient c = contraction_constant(ordering);

  // Right operand sorted by weight so the inner loop can stop early.
  std::vector<const QSeries::Term*> rhs;
  rhs.reserve(g.size());
  for (const auto& term : g.terms()) rhs.push_back(&term);
  std::stable_sort(rhs.begin(), rhs.end(), [](const auto* x, const auto* y) {
    return x->first.weight2() < y->first.weight2();
  });

  std::vector<Coefficient> cpow{Coefficient(1)};
  mpz_class factor;
  Coefficient base;
  Coefficient piece;
  const int cap2 = tr.weight_cap2 - 2 * hbar_shift;

  for (std::size_t idx : visit_order(f.size())) {
    const auto& [ma, ca] = f.terms()[idx];
    const int wa = ma.weight2();
    if (wa > cap2) continue;
    for (const auto* term : rhs) {
      const auto& [mb, cb] = *term;
      if (wa + mb.weight2() > cap2) break;
      if (static_cast<int>(ma.t + mb.t) > tr.t_cap) continue;
      const unsigned jmax = std::min(ma.right, mb.left);
      if (jmax < jmin) continue;
      base = Coefficient();
      base.add_product(ca, cb);
      if (!(scale == Coefficient(1))) base *= scale;
      factor = 1;
      for (unsigned j = 0; j <= jmax; ++j) {
        if (j > 0) {
          factor *= (ma.right - j + 1) * (mb.left - j + 1);
          mpz_divexact_ui(factor.get_mpz_t(), factor.get_mpz_t(), j);
        }
        if (j < jmin) continue;
        const int hbar = static_cast<int>(ma.hbar + mb.hbar + j) + hbar_shift;
        if (hbar < 0) throw InternalError("negative hbar exponent in product");
        QMonomial m{ma.left + mb.left - j, ma.right + mb.right - j, static_cast<std::uint32_t>(hbar),
                    ma.t + mb.t};
        piece = base;
        piece *= Rational(factor);
        if (!normal) {
          while (cpow.size() <= j) cpow.push_back(cpow.back() * c);
          piece *= cpow[j];
        }
        acc.slot(pack(m)) += piece;
      }
    }
  }
}

QSeries finish(detail::Accumulator&& acc, const Truncation& tr, Ordering ordering) {
  std::vector<QSeries::Term> terms;
  auto packed = std::move(acc).finish();
  terms.reserve(packed.size());
  for (auto& [key, coef] : packed) terms.emplace_back(unpack(key), std::move(coef));
  return QSeries::from_canonical(std::move(terms), tr, ordering);
}

void require_same_ordering(const QSeries& f, const QSeries& g) {
  if (f.ordering() != g.ordering()) throw DomainError("operands use different orderings");
}

QSeries product_at(const QSeries& f, const QSeries& g, const Truncation& tr) {
  require_same_ordering(f, g);
  detail::Accumulator acc(tr.term_guard);
  accumulate_product(acc, f, g, tr, 0, 0, Coefficient(1));
  return finish(std::move(acc), tr, f.ordering());
}

}  // namespace

ScopedTermOrder::ScopedTermOrder(std::uint64_t seed) : previous_(g_term_order_seed) {
  g_term_order_seed = seed;
}

ScopedTermOrder::~ScopedTermOrder() { g_term_order_seed = previous_; }

QSeries mul(const QSeries& f, const QSeries& g) {
  return product_at(f, g, f.truncation().meet(g.truncation()));
}

QSeries power(const QSeries& f, unsigned n) {
  QSeries out = QSeries::monomial({}, 1, f.truncation(), f.ordering());
  for (unsigned k = 0; k < n; ++k) out = mul(out, f);
  return out;
}

QSeries commutator(const QSeries& f, const QSeries& g) {
  require_same_ordering(f, g);
  Truncation tr = f.truncation().meet(g.truncation());
  detail::Accumulator acc(tr.term_guard);
  // Order-zero contractions of fg and gf coincide and cancel.
  accumulate_product(acc, f, g, tr, 1, 0, Coefficient(1));
  accumulate_product(acc, g, f, tr, 1, 0, Coefficient(-1));
  return finish(std::move(acc), tr, f.ordering());
}

QSeries bracket(const QSeries& f, const QSeries& g) {
  require_same_ordering(f, g);
  Truncation tr = f.truncation().meet(g.truncation());
  detail::Accumulator acc(tr.term_guard);
  const Coefficient i = Coefficient::i();
  accumulate_product(acc, f, g, tr, 1, -1, i);
  accumulate_product(acc, g, f, tr, 1, -1, -i);
  return finish(std::move(acc), tr, f.ordering());
}

QSeries divide_by_hbar(const QSeries& f) {
  std::vector<QSeries::Term> terms;
  terms.reserve(f.size());
  for (const auto& [m, c] : f.terms()) {
    if (m.hbar == 0) throw DomainError("series is not divisible by hbar");
    QMonomial d = m;
    d.hbar -= 1;
    terms.emplace_back(d, c);
  }
  // Division lowers every weight by one, so the cap drops with it.
  Truncation tr = f.truncation().with_weight_cap2(f.truncation().weight_cap2 - 2);
  return QSeries::from_terms(std::move(terms), tr, f.ordering());
}

QSeries substitute_generators(const QSeries& f, const QSeries& left_image,
                              const QSeries& right_image, Ordering target) {
  if (left_image.ordering() != target || right_image.ordering() != target) {
    throw DomainError("generator images must use the target ordering");
  }
  const Truncation tr = f.truncation();
  const QSeries left = left_image.with_truncation(tr.meet(left_image.truncation()));
  const QSeries right = right_image.with_truncation(tr.meet(right_image.truncation()));

  // Group by left exponent: f = sum_m L^m * (sum_n c hbar^k t^l R^n).
  std::map<std::uint32_t, std::map<std::uint32_t, std::vector<QSeries::Term>>> grouped;
  for (const auto& [m, c] : f.terms()) {
    grouped[m.left][m.right].push_back({QMonomial{0, 0, m.hbar, m.t}, c});
  }
  auto unit = QSeries::monomial({}, 1, tr, target);
  std::vector<QSeries> right_powers{unit};
  std::vector<QSeries> left_powers{unit};
  auto right_pow = [&](std::uint32_t n) -> const QSeries& {
    while (right_powers.size() <= n) right_powers.push_back(mul(right_powers.back(), right));
    return right_powers[n];
  };
  auto left_pow = [&](std::uint32_t n) -> const QSeries& {
    while (left_powers.size() <= n) left_powers.push_back(mul(left_powers.back(), left));
    return left_powers[n];
  };

  QSeries out(tr, target);
  for (auto& [m, inner] : grouped) {
    QSeries tail(tr, target);
    for (auto& [n, central_terms] : inner) {
      QSeries coeff = QSeries::from_terms(std::move(central_terms), tr, target);
      tail += mul(coeff, right_pow(n));
    }
    out += mul(left_pow(m), tail);
  }
  return out;
}

QSeries generator_q(Truncation truncation, Ordering ordering) {
  switch (ordering) {
    case Ordering::normal:
      return QSeries::q(truncation);
    case Ordering::qp:
      return QSeries::monomial({1, 0, 0, 0}, 1, truncation, ordering);
    case Ordering::pq:
      return QSeries::monomial({0, 1, 0, 0}, 1, truncation, ordering);
  }
  throw InternalError("unknown ordering");
}

QSeries generator_p(Truncation truncation, Ordering ordering) {
  switch (ordering) {
    case Ordering::normal:
      return QSeries::p(truncation);
    case Ordering::qp:
      return QSeries::monomial({0, 1, 0, 0}, 1, truncation, ordering);
    case Ordering::pq:
      return QSeries::monomial({1, 0, 0, 0}, 1, truncation, ordering);
  }
  throw InternalError("unknown ordering");
}

QSeries to_normal(const QSeries& f) {
  const Truncation tr = f.truncation();
  switch (f.ordering()) {
    case Ordering::normal:
      return f;
    case Ordering::qp:
      return substitute_generators(f, QSeries::q(tr), QSeries::p(tr), Ordering::normal);
    case Ordering::pq:
      return substitute_generators(f, QSeries::p(tr), QSeries::q(tr), Ordering::normal);
  }
  throw InternalError("unknown ordering");
}

QSeries from_pq(const QSeries& pq) { return to_normal(pq); }

namespace {

// adag = (p + i q)/sqrt2, a = (p - i q)/sqrt2 written in a q/p view.
QSeries ladder_image(Truncation tr, Ordering target, bool creation) {
  const Coefficient half_sqrt2(0, 0, Rational(1, 2), 0);
  const Coefficient half_i_sqrt2(0, 0, 0, Rational(1, 2));
  QSeries q = generator_q(tr, target);
  QSeries p = generator_p(tr, target);
  return p.scaled(half_sqrt2) + q.scaled(creation ? half_i_sqrt2 : -half_i_sqrt2);
}

QSeries to_view(const QSeries& f, Ordering target) {
  if (f.ordering() == target) return f;
  const QSeries g = to_normal(f);
  const Truncation tr = g.truncation();
  return substitute_generators(g, ladder_image(tr, target, true), ladder_image(tr, target, false),
                               target);
}

}  // namespace

QSeries to_pq(const QSeries& f) { return to_view(f, Ordering::qp); }
QSeries to_p_first(const QSeries& f) { return to_view(f, Ordering::pq); }

ScalarSeries total_symbol(const QSeries& f) {
  const QSeries g = to_normal(f);
  std::vector<ScalarSeries::Term> terms;
  terms.reserve(g.size());
  for (const auto& [m, c] : g.terms()) terms.push_back({{m.left, m.right, m.hbar, m.t}, c});
  return ScalarSeries::from_terms(Signature::x_y_hbar_t(), std::move(terms), g.truncation());
}

ScalarSeries principal_symbol(const QSeries& f) {
  const QSeries g = to_normal(f);
  std::vector<ScalarSeries::Term> terms;
  for (const auto& [m, c] : g.terms()) {
    if (m.hbar == 0) terms.push_back({{m.left, m.right, m.t, 0}, c});
  }
  return ScalarSeries::from_terms(Signature::x_y_t(), std::move(terms), g.truncation());
}

namespace {

QSeries scale_by_hbar_factorial(const QSeries& f, bool divide) {
  std::vector<QSeries::Term> terms = f.terms();
  for (auto& [m, c] : terms) {
    if (m.hbar < 2) continue;
    if (divide) {
      c /= factorial(m.hbar);
    } else {
      c *= factorial(m.hbar);
    }
  }
  return QSeries::from_canonical(std::move(terms), f.truncation(), f.ordering());
}

ScalarSeries scale_by_hbar_factorial(const ScalarSeries& f, bool divide) {
  const int h = f.signature().hbar_index();
  if (h < 0) throw DomainError("Borel transform needs an hbar variable");
  std::vector<ScalarSeries::Term> terms = f.terms();
  for (auto& [e, c] : terms) {
    if (e[h] < 2) continue;
    if (divide) {
      c /= factorial(e[h]);
    } else {
      c *= factorial(e[h]);
    }
  }
  return ScalarSeries::from_terms(f.signature(), std::move(terms), f.truncation());
}

}  // namespace

QSeries borel(const QSeries& f) { return scale_by_hbar_factorial(f, true); }
QSeries borel_inverse(const QSeries& f) { return scale_by_hbar_factorial(f, false); }
ScalarSeries borel(const ScalarSeries& f) { return scale_by_hbar_factorial(f, true); }
ScalarSeries borel_inverse(const ScalarSeries& f) { return scale_by_hbar_factorial(f, false); }

ScalarSeries hbar_convolution(const ScalarSeries& a, const ScalarSeries& b) {
  if (!(a.signature() == b.signature())) throw DomainError("scalar series signatures differ");
  const int h = a.signature().hbar_index();
  if (h < 0) throw DomainError("convolution needs an hbar variable");
  const Truncation tr = a.truncation().meet(b.truncation());
  std::vector<ScalarSeries::Term> terms;
  for (const auto& [ea, ca] : a.terms()) {
    for (const auto& [eb, cb] : b.terms()) {
      Exponents e{};
      for (std::size_t k = 0; k < a.signature().arity(); ++k) e[k] = ea[k] + eb[k];
      Coefficient c = ca * cb;
      // j! k! / (j+k)! = 1 / binom(j+k, j)
      c /= binomial(ea[h] + eb[h], ea[h]);
      terms.emplace_back(e, std::move(c));
    }
  }
  return ScalarSeries::from_terms(a.signature(), std::move(terms), tr);
}

PowerTable::PowerTable(QSeries base) {
  Truncation tr = base.truncation();
  powers_.push_back(QSeries::constant(1, tr));
  powers_.push_back(std::move(base));
}

const QSeries& PowerTable::operator[](unsigned n) {
  while (powers_.size() <= n) powers_.push_back(mul(powers_.back(), powers_[1]));
  return powers_[n];
}

namespace {

void check_composable(const QSeries& f) {
  if (f.ordering() != Ordering::normal) throw DomainError("composition expects normal ordering");
  for (const auto& [m, c] : f.terms()) {
    if (m.weight2() == 0 && m.t == 0) {
      throw DomainError("composition not t-adically/weight-adically finite");
    }
  }
}

void check_z_signature(const ScalarSeries& u) {
  if (!(u.signature() == Signature::z_hbar_t())) {
    throw DomainError("composition expects a series in (z, hbar, t)");
  }
}

// u_n(hbar, t) for every z-power n present in u.
std::map<std::uint32_t, std::vector<QSeries::Term>> split_by_z(const ScalarSeries& u) {
  std::map<std::uint32_t, std::vector<QSeries::Term>> out;
  for (const auto& [e, c] : u.terms()) out[e[0]].push_back({QMonomial{0, 0, e[1], e[2]}, c});
  return out;
}

}  // namespace

QSeries central(const ScalarSeries& alpha, Truncation truncation) {
  const int h = alpha.signature().hbar_index();
  const int t = alpha.signature().t_index();
  std::vector<QSeries::Term> terms;
  for (const auto& [e, c] : alpha.terms()) {
    for (std::size_t k = 0; k < alpha.signature().arity(); ++k) {
      if (static_cast<int>(k) != h && static_cast<int>(k) != t && e[k] != 0) {
        throw DomainError("series is not central in (hbar, t)");
      }
    }
    QMonomial m{0, 0, h >= 0 ? e[h] : 0U, t >= 0 ? e[t] : 0U};
    terms.emplace_back(m, c);
  }
  return QSeries::from_terms(std::move(terms), truncation);
}

QSeries compose_scalar(const ScalarSeries& u, const QSeries& f) {
  check_z_signature(u);
  check_composable(f);
  const Truncation tr = f.truncation().with_t_cap(std::min(f.truncation().t_cap, u.truncation().t_cap));
  auto grouped = split_by_z(u);
  if (grouped.empty()) return QSeries(tr);

  // f^n only matters up to t-order t_cap - (lowest t-order of any u_m, m >= n).
  std::map<std::uint32_t, int> needed_cap;
  int running = -1;
  for (auto it = grouped.rbegin(); it != grouped.rend(); ++it) {
    int tmin = tr.t_cap + 1;
    for (const auto& [m, c] : it->second) tmin = std::min(tmin, static_cast<int>(m.t));
    running = std::max(running, tr.t_cap - tmin);
    needed_cap[it->first] = running;
  }

  QSeries result(tr);
  QSeries pow = QSeries::constant(1, tr);
  std::uint32_t current = 0;
  for (auto& [n, terms] : grouped) {
    const int cap = needed_cap[n];
    if (cap < 0) continue;
    while (current < n) {
      Truncation step = tr.with_t_cap(cap);
      pow = product_at(pow.with_truncation(step), f.with_truncation(step), step);
      ++current;
    }
    QSeries coeff = QSeries::from_terms(std::move(terms), tr);
    result += product_at(coeff, pow, tr).with_truncation(tr);
  }
  return result.with_truncation(tr);
}

QSeries compose_scalar(const ScalarSeries& u, PowerTable& powers) {
  check_z_signature(u);
  check_composable(powers.base());
  const Truncation& ftr = powers.base().truncation();
  const Truncation tr = ftr.with_t_cap(std::min(ftr.t_cap, u.truncation().t_cap));
  QSeries result(tr);
  for (auto& [n, terms] : split_by_z(u)) {
    QSeries coeff = QSeries::from_terms(std::move(terms), tr);
    result += product_at(coeff, powers[n], tr);
  }
  return result;
}

QSeries dagger(const QSeries& f) {
  if (f.ordering() != Ordering::normal) return to_view(dagger(to_normal(f)), f.ordering());
  std::vector<QSeries::Term> terms;
  terms.reserve(f.size());
  for (const auto& [m, c] : f.terms()) terms.push_back({{m.right, m.left, m.hbar, m.t}, c.conj()});
  return QSeries::from_terms(std::move(terms), f.truncation());
}

ScalarSeries pi_restriction(const QSeries& f) {
  const QSeries g = to_normal(f);
  std::vector<ScalarSeries::Term> terms;
  for (const auto& [m, c] : g.terms()) {
    if (m.is_central()) terms.push_back({{m.hbar, m.t, 0, 0}, c});
  }
  return ScalarSeries::from_terms(Signature::hbar_t(), std::move(terms), g.truncation());
}

ScalarSeries pairing(const QSeries& f, const QSeries& g) {
  return pi_restriction(mul(dagger(to_normal(f)), to_normal(g)));
}

ScalarSeries tau(const ScalarSeries& alpha) { return alpha.conj(); }

}  // namespace qmorse

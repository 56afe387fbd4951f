#include "qmorse/normal_form.hpp"

#include <algorithm>
#include <vector>

#include "qmorse/algebra.hpp"
#include "qmorse/errors.hpp"
#include "qmorse/flow.hpp"

namespace qmorse {

namespace {

constexpr std::size_t kZ = 0;
constexpr std::size_t kHbar = 1;
constexpr std::size_t kT = 2;

ScalarSeries zseries(Truncation tr) { return ScalarSeries(Signature::z_hbar_t(), tr); }

ScalarSeries zmono(std::uint32_t z, std::uint32_t hbar, std::uint32_t t, const Coefficient& c,
                   Truncation tr) {
  return ScalarSeries::from_terms(Signature::z_hbar_t(), {{{z, hbar, t, 0}, c}}, tr);
}

ScalarSeries t_slice(const ScalarSeries& s, std::uint32_t l) { return s.coefficient_of(kT, l); }

}  // namespace

ScalarSeries diagonal_to_scalar(const QSeries& d) {
  if (d.ordering() != Ordering::normal) throw DomainError("diagonal_to_scalar expects normal ordering");
  const Truncation tr = d.truncation();
  // N = (z - hbar)/2; (adag)^n a^n = prod_{j<n} (N - j hbar).
  const Coefficient half(Rational(1, 2));
  std::vector<ScalarSeries> falling{ScalarSeries::constant(Signature::z_hbar_t(), 1, tr)};
  auto falling_at = [&](std::uint32_t n) -> const ScalarSeries& {
    while (falling.size() <= n) {
      const auto j = static_cast<long>(falling.size() - 1);
      // N - j hbar = z/2 - (2j + 1)/2 hbar
      ScalarSeries factor = zmono(1, 0, 0, half, tr) +
                            zmono(0, 1, 0, Coefficient(Rational(-(2 * j + 1), 2)), tr);
      falling.push_back(falling.back() * factor);
    }
    return falling[n];
  };
  ScalarSeries out = zseries(tr);
  std::vector<ScalarSeries::Term> pending;
  for (const auto& [m, c] : d.terms()) {
    if (m.left != m.right) throw DomainError("off-diagonal monomial in diagonal part");
    out += falling_at(m.left).shifted(kHbar, m.hbar).shifted(kT, m.t).scaled(c);
  }
  return out;
}

HomologicalSplit split_homological(const QSeries& r) {
  const QSeries g = to_normal(r);
  std::vector<QSeries::Term> diagonal;
  std::vector<QSeries::Term> off;
  for (const auto& [m, c] : g.terms()) {
    if (m.left == m.right) {
      diagonal.push_back({m, c});
    } else {
      // (i/hbar)[f0, (adag)^m a^n] = 2i(m - n) (adag)^m a^n
      const long diff = static_cast<long>(m.left) - static_cast<long>(m.right);
      off.push_back({m, c / (Coefficient(0, 2 * diff, 0, 0))});
    }
  }
  return {diagonal_to_scalar(QSeries::from_canonical(std::move(diagonal), g.truncation())),
          QSeries::from_canonical(std::move(off), g.truncation())};
}

int automatic_weight_cap2(const QSeries& f_hat, int n) {
  // With t carrying weight -s, f_hat has graded weight <= 1 for s the largest
  // (w - 1)/l; every solver quantity then lies below weight 1 + s n.
  Rational s2(0);
  for (const auto& [m, c] : f_hat.terms()) {
    if (m.t == 0) continue;
    Rational slope(m.weight2() - 2, static_cast<long>(m.t));
    slope.canonicalize();
    s2 = std::max(s2, slope);
  }
  Rational total = s2 * n;
  mpz_class ceil = total.get_num() / total.get_den();
  if (ceil * total.get_den() < total.get_num()) ceil += 1;
  return 2 + static_cast<int>(ceil.get_si());
}

namespace {

struct Normalized {
  Coefficient scale;
  ScalarSeries shift;
  QSeries f_hat;
};

Normalized normalize(const QSeries& f, Truncation tr) {
  const QSeries g = to_normal(f);
  const QSeries base = g.t_coefficient(0);
  const Coefficient two_c = base.coefficient({1, 1, 0, 0});
  if (two_c.is_zero()) throw DomainError("not a harmonic deformation");
  const Coefficient c = two_c / Coefficient(2);
  std::vector<ScalarSeries::Term> shift_terms;
  for (const auto& [m, coef] : base.terms()) {
    if (m == QMonomial{1, 1, 0, 0}) continue;
    Coefficient value = coef;
    if (m == QMonomial{0, 0, 1, 0}) value -= c;
    if (!m.is_central()) throw DomainError("not a harmonic deformation");
    if (!value.is_zero()) shift_terms.push_back({{m.hbar, 0, 0, 0}, value});
  }
  ScalarSeries shift = ScalarSeries::from_terms(Signature::hbar_t(), shift_terms, tr);
  const Truncation wide = g.truncation().with_t_cap(tr.t_cap);
  QSeries f_hat = (g - central(shift, wide)).scaled(c.inverse());
  return {c, shift, f_hat};
}

}  // namespace

NormalFormResult quantum_morse(const QSeries& f, const NormalFormOptions& options) {
  const int n = options.order;
  if (n < 0) throw DomainError("t-order must be non-negative");
  std::optional<ScopedTermOrder> order_guard;
  if (options.term_order_seed != 0) order_guard.emplace(options.term_order_seed);

  Truncation probe = f.truncation().with_t_cap(n);
  Normalized norm = normalize(f, probe);
  const int w2 = options.weight_cap2.value_or(automatic_weight_cap2(norm.f_hat, n));
  Truncation tr = probe.with_weight_cap2(w2);
  tr.term_guard = f.truncation().term_guard;
  const QSeries f_hat = norm.f_hat.with_truncation(tr);
  const QSeries f0 = QSeries::harmonic(tr);
  if (!(f_hat.t_coefficient(0) == f0.with_truncation(f_hat.truncation()))) {
    throw InternalError("normalization failed");
  }

  NormalFormResult result;
  result.scale = norm.scale;
  result.shift = norm.shift.with_truncation(tr);
  result.f_hat = f_hat;
  result.order = n;
  result.truncation = tr;

  // Homological equation g o f + (i/hbar)[f, H] = -d f/dt, order by order.
  const Truncation lower = tr.with_t_cap(std::max(0, n - 1));
  std::vector<ScalarSeries> gs;
  std::vector<QSeries> hs;
  if (n > 0) {
    const QSeries fl = f_hat.with_truncation(lower);
    std::vector<QSeries::Term> dt;
    for (const auto& [m, c] : f_hat.terms()) {
      if (m.t == 0) continue;
      QMonomial d = m;
      d.t -= 1;
      dt.push_back({d, -c * Coefficient(static_cast<long>(m.t))});
    }
    QSeries residual = QSeries::from_terms(std::move(dt), lower);
    PowerTable powers(fl);
    for (int k = 0; k < n; ++k) {
      HomologicalSplit split = split_homological(residual.t_coefficient(k));
      ScalarSeries gk = split.s.with_truncation(lower);
      QSeries hk = split.k.with_truncation(lower);
      if (k + 1 < n) {
        residual -= compose_scalar(gk.shifted(kT, k), powers);
        residual -= bracket(fl, hk.scaled(1, 0, k));
      }
      gs.push_back(std::move(gk));
      hs.push_back(std::move(hk));
    }
  }
  ScalarSeries g = zseries(lower);
  for (int k = 0; k < n; ++k) g += gs[k].shifted(kT, k);
  result.g = g;

  // u_{k+1} = 1/(k+1) sum_{i+j=k} d_z u_i g_j, u_0 = z.
  std::vector<ScalarSeries> us{zmono(1, 0, 0, 1, tr)};
  for (int k = 0; k < n; ++k) {
    ScalarSeries next = zseries(tr);
    for (int i = 0; i <= k; ++i) {
      next += us[i].derivative(kZ) * gs[k - i].with_truncation(tr);
    }
    us.push_back(next.scaled(Coefficient(Rational(1, k + 1))));
  }
  ScalarSeries u = zseries(tr);
  for (int k = 0; k <= n; ++k) u += us[k].shifted(kT, k);
  result.u = u;

  // The homological solution is the pull-back generator; the flow replays
  // the push-forward K_t = Phi_t(H_t), built order by order.
  std::vector<std::vector<QSeries>> y(n);
  std::vector<QSeries> ks;
  for (int m = 0; m < n; ++m) {
    QSeries km(lower);
    for (int j = 0; j <= m; ++j) {
      const int i = m - j;
      if (i == 0) {
        y[j].push_back(hs[j]);
      } else {
        QSeries next(lower);
        for (int a = 0; a < i; ++a) {
          if (y[j][a].is_zero() || ks[i - 1 - a].is_zero()) continue;
          next += bracket(y[j][a], ks[i - 1 - a]);
        }
        y[j].push_back(next.scaled(Coefficient(Rational(1, i))));
      }
      km += y[j][i];
    }
    ks.push_back(std::move(km));
  }
  QSeries h(lower);
  for (int m = 0; m < n; ++m) h += ks[m].scaled(1, 0, m);
  result.h = h;

  result.u_inv = invert_series_z(u);
  result.spectrum = spectrum_closure(result);
  return result;
}

ScalarSeries invert_series_z(const ScalarSeries& u) {
  if (!(u.signature() == Signature::z_hbar_t())) throw DomainError("expected a series in (z, hbar, t)");
  const Truncation tr = u.truncation();
  const ScalarSeries z = zmono(1, 0, 0, 1, tr);
  if (!(t_slice(u, 0) == z)) throw DomainError("series is not z + O(t)");
  // v = z - (u - z)(v); each pass fixes one more t-order.
  const ScalarSeries tail = u - z;
  ScalarSeries v = z;
  for (int pass = 0; pass <= tr.t_cap; ++pass) v = z - substitute(tail, kZ, v);
  return v;
}

ScalarSeries spectrum_closure(const NormalFormResult& result) {
  const ScalarSeries& v = result.u_inv;
  const Truncation tr = v.truncation();
  const Signature sig = Signature::n_hbar_t();
  // z -> hbar (2n + 1)
  const ScalarSeries level = ScalarSeries::from_terms(
      sig, {{{1, 1, 0, 0}, 2}, {{0, 1, 0, 0}, 1}}, tr);
  std::vector<ScalarSeries> powers{ScalarSeries::constant(sig, 1, tr)};
  ScalarSeries out(sig, tr);
  for (const auto& [e, c] : v.terms()) {
    while (powers.size() <= e[kZ]) powers.push_back(powers.back() * level);
    out += powers[e[kZ]].shifted(1, e[kHbar]).shifted(2, e[kT]).scaled(c);
  }
  out = out.scaled(result.scale);
  std::vector<ScalarSeries::Term> shift;
  for (const auto& [e, c] : result.shift.terms()) shift.push_back({{0, e[0], e[1], 0}, c});
  out += ScalarSeries::from_terms(sig, std::move(shift), tr);
  return out;
}

ScalarSeries rescale_t(const ScalarSeries& e) {
  const int h = e.signature().hbar_index();
  const int t = e.signature().t_index();
  if (h < 0 || t < 0) throw DomainError("rescaling needs hbar and t");
  Truncation tr = e.truncation();
  tr.weight_cap2 += 2 * tr.t_cap;
  std::vector<ScalarSeries::Term> terms;
  for (const auto& [x, c] : e.terms()) {
    Exponents y = x;
    y[h] += x[t];
    terms.emplace_back(y, c);
  }
  return ScalarSeries::from_terms(e.signature(), std::move(terms), tr);
}

bool verify_normal_form(const NormalFormResult& result) {
  const QSeries replayed = integrate_heisenberg(result.h, result.f_hat, result.order);
  const QSeries composed = compose_scalar(result.u, replayed);
  return composed == QSeries::harmonic(composed.truncation());
}

QSeries linear_symplectic(const QSeries& f, const Matrix2& m) {
  if (!(m[0][0] * m[1][1] - m[0][1] * m[1][0] == Coefficient(1))) {
    throw DomainError("matrix is not symplectic (det != 1)");
  }
  const Truncation tr = f.truncation();
  const QSeries q = QSeries::q(tr);
  const QSeries p = QSeries::p(tr);
  const QSeries q_image = q.scaled(m[0][0]) + p.scaled(m[0][1]);
  const QSeries p_image = q.scaled(m[1][0]) + p.scaled(m[1][1]);
  return substitute_generators(to_pq(f), q_image, p_image, Ordering::normal);
}

NormalFormResult reduce_to_harmonic(const QSeries& f0, const NormalFormOptions& options) {
  const QSeries g = to_normal(f0);
  if (g.max_t() > 0) throw DomainError("expected a t-independent operator");
  for (const auto& [m, c] : g.terms()) {
    if (m.hbar == 0 && m.left + m.right == 1) throw DomainError("not Morse: nonzero linear part");
  }
  const Coefficient alpha = g.coefficient({2, 0, 0, 0});
  const Coefficient beta = g.coefficient({1, 1, 0, 0});
  const Coefficient gamma = g.coefficient({0, 2, 0, 0});
  if ((beta * beta - Coefficient(4) * alpha * gamma).is_zero()) {
    throw DomainError("not Morse: degenerate Hessian");
  }
  if (!alpha.is_zero() || !gamma.is_zero()) {
    throw DomainError(
        "quadratic part is not a multiple of p^2 + q^2; apply linear_symplectic first");
  }
  Truncation tr = g.truncation().with_t_cap(std::max(g.truncation().t_cap, options.order));
  const QSeries quadratic = QSeries::harmonic(tr).scaled(beta / Coefficient(2));
  const QSeries lifted = g.with_truncation(tr);
  const QSeries family = quadratic + (lifted - quadratic).scaled(1, 0, 1);
  return quantum_morse(family, options);
}

}  // namespace qmorse

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qmorse/algebra.hpp"
#include "qmorse/errors.hpp"
#include "qmorse/flow.hpp"
#include "qmorse/json_io.hpp"
#include "qmorse/normal_form.hpp"
#include "support.hpp"

using namespace qmorse;
using qmorse::testing::caps;

namespace {

const Coefficient I = Coefficient::i();
const Truncation kInput = caps(12, 40);

QSeries q() { return QSeries::q(kInput); }
QSeries p() { return QSeries::p(kInput); }
QSeries f0() { return QSeries::harmonic(kInput); }
QSeries t() { return QSeries::t(kInput); }

QSeries qpow(unsigned d) { return power(q(), d); }

ScalarSeries z_term(std::uint32_t z, std::uint32_t h, std::uint32_t l, Coefficient c,
                    Truncation tr) {
  return ScalarSeries::from_terms(Signature::z_hbar_t(), {{{z, h, l, 0}, c}}, tr);
}

ScalarSeries e_term(std::uint32_t n, std::uint32_t h, std::uint32_t l, Coefficient c,
                    Truncation tr) {
  return ScalarSeries::from_terms(Signature::n_hbar_t(), {{{n, h, l, 0}, c}}, tr);
}

// binom(1/2, k)
Rational half_binomial(unsigned k) {
  Rational out(1);
  for (unsigned j = 0; j < k; ++j) {
    Rational f(1 - 2 * static_cast<long>(j), 2 * static_cast<long>(j + 1));
    f.canonicalize();
    out *= f;
  }
  return out;
}

NormalFormResult solve(const QSeries& f, int n) {
  NormalFormOptions opts;
  opts.order = n;
  return quantum_morse(f, opts);
}

}  // namespace

TEST_CASE("diagonal part as a function of the harmonic oscillator") {
  Truncation tr = caps(0, 12);
  const Coefficient half(Rational(1, 2));
  ScalarSeries n1 = diagonal_to_scalar(QSeries::monomial({1, 1, 0, 0}, 1, tr));
  CHECK(n1 == z_term(1, 0, 0, half, tr) + z_term(0, 1, 0, -half, tr));
  ScalarSeries n2 = diagonal_to_scalar(QSeries::monomial({2, 2, 0, 0}, 1, tr));
  const Coefficient quarter(Rational(1, 4));
  CHECK(n2 == z_term(2, 0, 0, quarter, tr) + z_term(1, 1, 0, -quarter * Coefficient(4), tr) +
                  z_term(0, 2, 0, quarter * Coefficient(3), tr));
  CHECK(diagonal_to_scalar(QSeries::constant(1, tr)) ==
        ScalarSeries::constant(Signature::z_hbar_t(), 1, tr));
  CHECK_THROWS_AS(diagonal_to_scalar(QSeries::adag(tr)), DomainError);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<QSeries::Term> terms;
    std::uniform_int_distribution<unsigned> deg(0, 4);
    for (int k = 0; k < 4; ++k) {
      unsigned m = deg(rng);
      terms.push_back({{m, m, deg(rng) % 2, 0}, qmorse::testing::random_coefficient(rng)});
    }
    QSeries d = QSeries::from_terms(terms, tr);
    CHECK(compose_scalar(diagonal_to_scalar(d), QSeries::harmonic(tr)) == d);
  }
}

TEST_CASE("homological splitting") {
  Truncation tr = caps(0, 12);
  auto split = split_homological(QSeries::monomial({2, 0, 0, 0}, 1, tr));
  CHECK(split.s.is_zero());
  CHECK(split.k == QSeries::monomial({2, 0, 0, 0}, -I * Coefficient(Rational(1, 4)), tr));
  split = split_homological(QSeries::monomial({1, 1, 0, 0}, 1, tr));
  CHECK(split.k.is_zero());
  split = split_homological(QSeries::constant(1, tr));
  CHECK(split.s == ScalarSeries::constant(Signature::z_hbar_t(), 1, tr));
  std::mt19937 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    QSeries r = qmorse::testing::random_series(rng, tr, 6, 4);
    auto parts = split_homological(r);
    QSeries f = QSeries::harmonic(tr);
    CHECK(compose_scalar(parts.s, f) + bracket(f, parts.k) == r);
    for (const auto& [m, c] : parts.k.terms()) CHECK(m.left != m.right);
  }
}

TEST_CASE("undeformed oscillator is already normal") {
  auto r = solve(f0(), 4);
  Truncation tr = r.u.truncation();
  CHECK(r.u == z_term(1, 0, 0, 1, tr));
  CHECK(r.g.is_zero());
  CHECK(r.h.is_zero());
  CHECK(r.spectrum == e_term(1, 1, 0, 2, tr) + e_term(0, 1, 0, 1, tr));
}

TEST_CASE("rescaled oscillator has the square-root normal form") {
  const int n = 8;
  auto r = solve(f0() + mul(t(), mul(q(), q())), n);
  CHECK(verify_normal_form(r));
  Truncation tr = r.u.truncation();
  ScalarSeries u_expected(Signature::z_hbar_t(), tr);
  ScalarSeries e_expected(Signature::n_hbar_t(), tr);
  for (unsigned k = 0; k <= n; ++k) {
    // 1/sqrt(1+t) = sum binom(-1/2, k) t^k
    Rational inv(1);
    for (unsigned j = 0; j < k; ++j) {
      Rational f(-1 - 2 * static_cast<long>(j), 2 * static_cast<long>(j + 1));
      f.canonicalize();
      inv *= f;
    }
    u_expected += z_term(1, 0, k, Coefficient(inv), tr);
    e_expected += e_term(1, 1, k, Coefficient(2 * half_binomial(k)), tr) +
                  e_term(0, 1, k, Coefficient(half_binomial(k)), tr);
  }
  CHECK(r.u == u_expected);
  CHECK(r.spectrum == e_expected);
}

TEST_CASE("linear perturbation terminates") {
  auto r = solve(f0() + mul(t(), q()), 8);
  CHECK(verify_normal_form(r));
  Truncation tr = r.spectrum.truncation();
  CHECK(r.spectrum == e_term(1, 1, 0, 2, tr) + e_term(0, 1, 0, 1, tr) +
                          e_term(0, 0, 2, Coefficient(Rational(-1, 4)), tr));
}

TEST_CASE("quartic perturbation: first order and master identity") {
  auto r = solve(f0() + mul(t(), qpow(4)), 4);
  CHECK(verify_normal_form(r));
  Truncation tr = r.spectrum.truncation();
  ScalarSeries first = r.spectrum.coefficient_of(2, 1);
  const Coefficient c(Rational(3, 4));
  CHECK(first == e_term(2, 2, 0, c * Coefficient(2), tr) + e_term(1, 2, 0, c * Coefficient(2), tr) +
                     e_term(0, 2, 0, c, tr));
}

TEST_CASE("master identity for assorted perturbations") {
  QSeries sym = (mul(mul(q(), q()), mul(p(), p())) + mul(mul(p(), p()), mul(q(), q())))
                    .scaled(Coefficient(Rational(1, 2)));
  for (const QSeries& g : {q(), qpow(2), qpow(3), qpow(4), sym, mul(q(), p()) + qpow(3)}) {
    auto r = solve(f0() + mul(t(), g), 5);
    CHECK(verify_normal_form(r));
    CHECK(invert_series_z(r.u_inv) == r.u);
  }
}

TEST_CASE("scale and shift of the base point") {
  // 3(p^2 + q^2) + hbar^2 + t q^4 has spectrum 3 E(t/3) + hbar^2.
  QSeries f = f0().scaled(3) + QSeries::monomial({0, 0, 2, 0}, 1, kInput) + mul(t(), qpow(4));
  auto scaled = solve(f, 3);
  auto plain = solve(f0() + mul(t(), qpow(4)), 3);
  CHECK(verify_normal_form(scaled));
  ScalarSeries expected(Signature::n_hbar_t(), scaled.spectrum.truncation());
  for (const auto& [e, c] : plain.spectrum.terms()) {
    Rational factor = 3;
    for (unsigned k = 0; k < e[2]; ++k) factor /= 3;
    expected += e_term(e[0], e[1], e[2], c * Coefficient(factor), expected.truncation());
  }
  expected += e_term(0, 2, 0, 1, expected.truncation());
  CHECK(scaled.spectrum == expected.with_truncation(scaled.spectrum.truncation()));
  CHECK_THROWS_WITH_AS(solve(mul(q(), q()) + mul(t(), q()), 2), "not a harmonic deformation",
                       DomainError);
}

TEST_CASE("series inversion") {
  Truncation tr = caps(3, 20);
  ScalarSeries z = z_term(1, 0, 0, 1, tr);
  CHECK(invert_series_z(z) == z);
  ScalarSeries u = z_term(1, 0, 0, 1, tr) + z_term(1, 0, 1, Coefficient(Rational(-1, 2)), tr) +
                   z_term(1, 0, 2, Coefficient(Rational(3, 8)), tr);
  ScalarSeries v = invert_series_z(u);
  CHECK(v.coefficient({1, 0, 1, 0}) == Coefficient(Rational(1, 2)));
  CHECK(v.coefficient({1, 0, 2, 0}) == Coefficient(Rational(-1, 8)));
  ScalarSeries w = invert_series_z(z + z_term(2, 0, 1, 1, tr));
  CHECK(w == z + z_term(2, 0, 1, -1, tr) + z_term(3, 0, 2, 2, tr) + z_term(4, 0, 3, -5, tr));
  CHECK_THROWS_AS(invert_series_z(z.scaled(2)), DomainError);
}

TEST_CASE("solver is deterministic under permuted term order") {
  QSeries f = f0() + mul(t(), qpow(4) + mul(q(), p()));
  auto base = solve(f, 4);
  NormalFormOptions opts;
  opts.order = 4;
  opts.term_order_seed = 12345;
  auto shuffled = quantum_morse(f, opts);
  CHECK(dump(to_json(base.u)) == dump(to_json(shuffled.u)));
  CHECK(dump(to_json(base.spectrum)) == dump(to_json(shuffled.spectrum)));
}

TEST_CASE("conjugating by an inner flow leaves the spectrum unchanged") {
  std::mt19937 rng(17);
  QSeries f = f0() + mul(t(), qpow(4));
  auto base = solve(f, 4);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<QSeries::Term> terms;
    std::uniform_int_distribution<unsigned> deg(0, 2);
    for (int k = 0; k < 3; ++k) {
      terms.push_back({{deg(rng), deg(rng), 0, 0}, qmorse::testing::random_coefficient(rng, true)});
    }
    QSeries gen = to_normal(QSeries::from_terms(terms, kInput, Ordering::qp));
    QSeries conjugated = integrate_heisenberg(gen, f, 4);
    auto moved = solve(conjugated, 4);
    CHECK(moved.spectrum == base.spectrum.with_truncation(moved.spectrum.truncation()));
  }
}

TEST_CASE("spectrum homogeneity for single monomial perturbations") {
  for (unsigned d : {3U, 4U, 5U}) {
    auto r = solve(f0() + mul(t(), qpow(d)), 4);
    for (const auto& [e, c] : r.spectrum.terms()) {
      const int l = static_cast<int>(e[2]);
      CHECK(2 * static_cast<int>(e[1]) == l * (static_cast<int>(d) - 2) + 2);
      if (d % 2 == 1) CHECK(l % 2 == 0);
    }
  }
}

TEST_CASE("reduction to the harmonic oscillator") {
  auto r = reduce_to_harmonic(f0(), {3, std::nullopt, 0});
  CHECK(r.u == z_term(1, 0, 0, 1, r.u.truncation()));
  auto cubic = reduce_to_harmonic(f0() + qpow(3), {4, std::nullopt, 0});
  CHECK(verify_normal_form(cubic));
  QSeries flipped = mul(p(), p()) - mul(q(), q());
  CHECK_THROWS_AS(reduce_to_harmonic(flipped, {2, std::nullopt, 0}), DomainError);
  // omega^2 = i with omega = (1 + i)/sqrt2 turns p^2 - q^2 into -i (p^2 + q^2).
  Coefficient omega(0, 0, Rational(1, 2), Rational(1, 2));
  Matrix2 m{{{omega, 0}, {0, omega.inverse()}}};
  QSeries fixed = linear_symplectic(flipped, m);
  CHECK(fixed == f0().scaled(-I));
  auto rotated = reduce_to_harmonic(fixed + qpow(4).scaled(omega), {3, std::nullopt, 0});
  CHECK(rotated.scale == -I);
  CHECK(verify_normal_form(rotated));
  CHECK_THROWS_AS(reduce_to_harmonic(mul(p(), p()), {2, std::nullopt, 0}), DomainError);
  CHECK_THROWS_AS(reduce_to_harmonic(f0() + q(), {2, std::nullopt, 0}), DomainError);
}

TEST_CASE("linear symplectic substitutions") {
  Matrix2 id{{{1, 0}, {0, 1}}};
  QSeries f = qpow(3) + mul(q(), p());
  CHECK(linear_symplectic(f, id) == f);
  Matrix2 rot{{{0, 1}, {-1, 0}}};
  CHECK(linear_symplectic(mul(q(), q()), rot) == mul(p(), p()));
  // lambda = sqrt2 scales p^2 + q^2/4 to (p^2 + q^2)/2.
  Matrix2 scale{{{Coefficient::sqrt2(), 0}, {0, Coefficient::sqrt2().inverse()}}};
  QSeries g = mul(p(), p()) + mul(q(), q()).scaled(Coefficient(Rational(1, 4)));
  CHECK(linear_symplectic(g, scale) == f0().scaled(Coefficient(Rational(1, 2))));
  Matrix2 bad{{{2, 0}, {0, 1}}};
  CHECK_THROWS_AS(linear_symplectic(f, bad), DomainError);
}

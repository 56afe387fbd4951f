#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qmorse/algebra.hpp"
#include "qmorse/calculus.hpp"
#include "qmorse/errors.hpp"
#include "qmorse/flow.hpp"
#include "support.hpp"

using namespace qmorse;
using qmorse::testing::caps;
using qmorse::testing::random_series;

namespace {

const Coefficient I = Coefficient::i();

QSeries qp_view(std::vector<QSeries::Term> terms, Truncation tr) {
  return to_normal(QSeries::from_terms(std::move(terms), tr, Ordering::qp));
}

// Random polynomial in q, p with hbar corrections, of weight <= 3.
QSeries random_qp(std::mt19937& rng, Truncation tr) {
  std::uniform_int_distribution<unsigned> deg(0, 4);
  std::uniform_int_distribution<unsigned> hb(0, 1);
  std::vector<QSeries::Term> terms;
  for (int k = 0; k < 4; ++k) {
    unsigned m = deg(rng);
    unsigned n = deg(rng);
    unsigned h = hb(rng);
    if (m + n + 2 * h > 6) continue;
    terms.push_back({{m, n, h, 0}, qmorse::testing::random_coefficient(rng)});
  }
  return qp_view(std::move(terms), tr);
}

}  // namespace

TEST_CASE("partial derivatives act classically in q-before-p order") {
  Truncation tr = caps(0, 20);
  QSeries q = QSeries::q(tr);
  QSeries p = QSeries::p(tr);
  CHECK(d_dq(mul(q, q)) == q.scaled(2).with_truncation(caps(0, 19)));
  CHECK(d_dq(p).is_zero());
  CHECK(d_dq(mul(q, p)) == p.with_truncation(caps(0, 19)));
  std::mt19937 rng(1);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<QSeries::Term> terms;
    std::vector<QSeries::Term> dq_terms;
    std::vector<QSeries::Term> dp_terms;
    std::uniform_int_distribution<unsigned> deg(0, 4);
    for (int k = 0; k < 3; ++k) {
      unsigned m = deg(rng);
      unsigned n = deg(rng);
      Coefficient c = qmorse::testing::random_coefficient(rng);
      terms.push_back({{m, n, 0, 0}, c});
      if (m > 0) dq_terms.push_back({{m - 1, n, 0, 0}, c * Coefficient(static_cast<long>(m))});
      if (n > 0) dp_terms.push_back({{m, n - 1, 0, 0}, c * Coefficient(static_cast<long>(n))});
    }
    QSeries f = qp_view(terms, tr);
    CHECK(d_dq(f) == qp_view(dq_terms, caps(0, 19)));
    CHECK(d_dp(f) == qp_view(dp_terms, caps(0, 19)));
    CHECK(d_dq(d_dp(f)) == d_dp(d_dq(f)));
  }
}

TEST_CASE("antiderivatives") {
  Truncation tr = caps(0, 20);
  QSeries q = QSeries::q(tr);
  QSeries p = QSeries::p(tr);
  Truncation wider = caps(0, 21);
  CHECK(int_dq(p) == mul(q, p).with_truncation(wider));
  CHECK(int_dq(q) == mul(q, q).scaled(Coefficient(Rational(1, 2))).with_truncation(wider));
  CHECK(int_dq(QSeries::constant(1, tr)) == q.with_truncation(wider));
  CHECK(int_dp(q) == mul(p, q).with_truncation(wider));
  CHECK_FALSE(left_divide_by_q(mul(p, q)).has_value());
  std::mt19937 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    QSeries f = random_qp(rng, tr);
    QSeries fq = int_dq(f);
    QSeries fp = int_dp(f);
    CHECK(d_dq(fq) == f);
    CHECK(d_dp(fp) == f);
    auto g = left_divide_by_q(fq);
    REQUIRE(g.has_value());
    CHECK(mul(q.with_truncation(wider), *g) == fq);
    auto h = left_divide_by_p(fp);
    REQUIRE(h.has_value());
    CHECK(mul(p.with_truncation(wider), *h) == fp);
  }
}

TEST_CASE("hamiltonian reconstruction") {
  Truncation tr = caps(0, 20);
  QSeries q = QSeries::q(tr);
  QSeries p = QSeries::p(tr);
  auto h = reconstruct_hamiltonian({-q, p, std::nullopt}).h;
  CHECK(h == mul(q, p).with_truncation(caps(0, 21)));
  CHECK(reconstruct_hamiltonian({QSeries(tr), QSeries(tr), std::nullopt}).h.is_zero());
  QSeries harmonic = (mul(p, p) + mul(q, q)).scaled(Coefficient(Rational(-1, 2)));
  auto rotation = reconstruct_hamiltonian({p, -q, std::nullopt}).h;
  CHECK(rotation == harmonic.with_truncation(caps(0, 21)));
  CHECK_THROWS_WITH_AS(reconstruct_hamiltonian({p, p, std::nullopt}), "not a derivation",
                       DomainError);
}

TEST_CASE("reconstruction recovers random hamiltonians up to the centre") {
  Truncation tr = caps(0, 14);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    QSeries h = random_qp(rng, tr);
    QSeries q = QSeries::q(tr);
    QSeries p = QSeries::p(tr);
    QSeries hr = reconstruct_hamiltonian({bracket(q, h), bracket(p, h), std::nullopt}).h;
    QSeries diff = hr.with_truncation(tr) - h;
    CHECK(commutator(q, diff).is_zero());
    CHECK(commutator(p, diff).is_zero());
    CHECK(diff.is_central());
  }
}

TEST_CASE("heisenberg flow closed forms") {
  Truncation tr = caps(12, 20);
  QSeries a = QSeries::a(tr);
  QSeries n = mul(QSeries::adag(tr), a);
  QSeries phi = integrate_heisenberg(n, a, 12);
  Coefficient ik = 1;
  for (int k = 0; k <= 12; ++k) {
    CHECK(phi.t_coefficient(k) == a.scaled(ik * Coefficient(1 / factorial(k))));
    ik *= I;
  }
  QSeries h = QSeries::harmonic(tr) + mul(n, n);
  CHECK(integrate_heisenberg(h, h, 12) == h);
  QSeries q = QSeries::q(tr);
  QSeries p = QSeries::p(tr);
  CHECK(integrate_heisenberg(q, p, 12) == p + QSeries::t(tr));
  CHECK(integrate_heisenberg(n, QSeries::hbar(tr), 12) == QSeries::hbar(tr));
}

TEST_CASE("heisenberg flow is an automorphism") {
  Truncation tr = caps(5, 14);
  std::mt19937 rng(4);
  for (int trial = 0; trial < 6; ++trial) {
    QSeries h = random_series(rng, tr, 3, 2, 0, 1);
    QSeries f = random_series(rng, tr, 3, 2);
    QSeries g = random_series(rng, tr, 3, 2);
    QSeries pf = integrate_heisenberg(h, f, 5);
    QSeries pg = integrate_heisenberg(h, g, 5);
    CHECK(integrate_heisenberg(h, mul(f, g), 5) == mul(pf, pg));
    CHECK(integrate_heisenberg(h, commutator(f, g), 5) == commutator(pf, pg));
  }
}

TEST_CASE("flows of opposite generators cancel") {
  Truncation tr = caps(6, 12);
  std::mt19937 rng(5);
  for (int trial = 0; trial < 5; ++trial) {
    QSeries h = random_series(rng, tr, 3, 2);
    QSeries f = random_series(rng, tr, 3, 2);
    CHECK(integrate_heisenberg(-h, integrate_heisenberg(h, f, 6), 6) == f);
  }
}

TEST_CASE("propagators") {
  Truncation tr = caps(8, 20);
  std::vector<QSeries::Term> exp_terms;
  std::vector<QSeries::Term> creation_terms;
  for (unsigned k = 0; k <= 8; ++k) {
    exp_terms.push_back({{0, 0, 0, k}, Coefficient(1 / factorial(k))});
    creation_terms.push_back({{k, 0, 0, k}, Coefficient(1 / factorial(k))});
  }
  CHECK(solve_propagator(QSeries::constant(1, tr), 8) == QSeries::from_terms(exp_terms, tr));
  CHECK(solve_propagator(QSeries::adag(tr), 8) == QSeries::from_terms(creation_terms, tr));
  CHECK(solve_propagator(QSeries(tr), 8) == QSeries::constant(1, tr));
}

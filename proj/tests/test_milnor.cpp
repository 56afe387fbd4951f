#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "qmorse/errors.hpp"
#include "qmorse/milnor.hpp"

using namespace qmorse;

namespace {

PlanePoly x_pow(std::uint32_t n) { return PlanePoly::monomial(n, 0); }
PlanePoly y_pow(std::uint32_t n) { return PlanePoly::monomial(0, n); }

std::vector<PlanePoly::Exp> x_powers(std::uint32_t k) {
  std::vector<PlanePoly::Exp> out;
  for (std::uint32_t i = 0; i < k; ++i) out.push_back({i, 0});
  return out;
}

// Monomials outside a monomial ideal, counted directly.
int staircase(const std::vector<PlanePoly::Exp>& gens, int d) {
  int n = 0;
  for (int i = 0; i <= d; ++i) {
    for (int j = 0; i + j <= d; ++j) {
      bool inside = false;
      for (const auto& [a, b] : gens) inside |= i >= static_cast<int>(a) && j >= static_cast<int>(b);
      n += inside ? 0 : 1;
    }
  }
  return n;
}

}  // namespace

TEST_CASE("Morse germ has Milnor number one") {
  auto r = milnor_number(y_pow(2) + x_pow(2), 6);
  CHECK(r.dim == 1);
  CHECK(r.stabilized);
  CHECK(r.basis == std::vector<PlanePoly::Exp>{{0, 0}});
}

TEST_CASE("A_k germs") {
  for (std::uint32_t k = 1; k <= 6; ++k) {
    PlanePoly f = y_pow(2) + x_pow(k + 1);
    auto m = milnor_number(f, k + 3);
    CHECK(m.dim == static_cast<int>(k));
    CHECK(m.stabilized);
    CHECK(m.basis == x_powers(k));
    auto v = versality_dimension(f, k + 3);
    CHECK(v.dim == static_cast<int>(k));
    CHECK(v.stabilized);
    CHECK(v.basis == x_powers(k));
  }
}

TEST_CASE("x^3 + y^3 against the staircase count") {
  PlanePoly f = x_pow(3) + y_pow(3);
  for (int d = 0; d <= 6; ++d) {
    CHECK(milnor_number(f, d).dim == staircase({{2, 0}, {0, 2}}, d));
  }
  auto r = milnor_number(f, 6);
  CHECK(r.dim == 4);
  CHECK(r.stabilized);
  std::vector<PlanePoly::Exp> basis = r.basis;
  std::sort(basis.begin(), basis.end());
  CHECK(basis == std::vector<PlanePoly::Exp>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});
}

TEST_CASE("smooth germ has trivial versality quotient") {
  for (int d = 0; d <= 5; ++d) CHECK(versality_dimension(x_pow(1), d).dim == 0);
  CHECK(milnor_number(x_pow(1), 3).dim == 0);
}

TEST_CASE("cutoff below the singularity does not stabilize") {
  PlanePoly f = y_pow(2) + x_pow(7);
  auto r = milnor_number(f, 3);
  CHECK_FALSE(r.stabilized);
  CHECK(r.dim < 6);
  bool seen = false;
  for (int d = 2; d <= 10; ++d) {
    bool s = milnor_number(f, d).stabilized;
    if (seen) CHECK(s);
    seen = seen || s;
  }
  CHECK(seen);
}

TEST_CASE("quasi-homogeneous germs: versality matches Milnor") {
  std::vector<PlanePoly> germs = {x_pow(3) + y_pow(3), x_pow(3) + y_pow(4), x_pow(2) * y_pow(1) + y_pow(4),
                                  x_pow(4) + y_pow(5)};
  for (const auto& f : germs) {
    CHECK(versality_dimension(f, 12).dim == milnor_number(f, 12).dim);
  }
}

TEST_CASE("versality check") {
  for (std::uint32_t k = 1; k <= 6; ++k) {
    PlaneFamily fam;
    fam.base = y_pow(2) + x_pow(k + 1);
    for (std::uint32_t j = 1; j < k; ++j) {
      fam.params.push_back("l" + std::to_string(j));
      fam.derivatives.push_back(x_pow(j));
    }
    auto r = check_versal(fam, k + 3);
    CHECK(r.versal);
    CHECK(r.stabilized);
    CHECK(r.quotient_dim == static_cast<int>(k));
  }
  PlaneFamily cusp{y_pow(2) + x_pow(3), {}, {}};
  CHECK_FALSE(check_versal(cusp, 6).versal);
  CHECK(check_versal(cusp, 6).quotient_dim == 2);
  PlaneFamily morse{y_pow(2) + x_pow(2), {}, {}};
  CHECK(check_versal(morse, 6).versal);
  // A deformation along y does not reach the class of x.
  PlaneFamily wrong{y_pow(2) + x_pow(3), {"l"}, {y_pow(1)}};
  CHECK_FALSE(check_versal(wrong, 6).versal);
}

TEST_CASE("non-vanishing constant term is rejected") {
  CHECK_THROWS_AS(milnor_number(PlanePoly::monomial(0, 0) + x_pow(2), 4), DomainError);
  CHECK_THROWS_AS(versality_dimension(PlanePoly::monomial(0, 0, 3), 4), DomainError);
}

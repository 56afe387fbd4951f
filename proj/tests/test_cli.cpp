#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <fstream>
#include <random>
#include <sstream>

#include "qmorse/algebra.hpp"
#include "qmorse/cli.hpp"
#include "qmorse/errors.hpp"
#include "qmorse/expr.hpp"
#include "qmorse/json_io.hpp"
#include "support.hpp"

using namespace qmorse;
using qmorse::testing::caps;

namespace {

const Truncation kCaps = caps(6, 16);

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "qmorse");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

Coefficient coef(const Json& term) { return coefficient_from_json(term.at("coef")); }

}  // namespace

TEST_CASE("elaboration of the basic examples") {
  CHECK(parse_qseries("p^2+q^2", kCaps) == QSeries::harmonic(kCaps));
  CHECK(parse_qseries("p*q-q*p", kCaps) == QSeries::hbar(kCaps).scaled(-Coefficient::i()));
  CHECK(parse_qseries("a*ad - ad*a", kCaps) == QSeries::hbar(kCaps));
  CHECK(parse_qseries("ad*a", kCaps) == mul(QSeries::adag(kCaps), QSeries::a(kCaps)));
  CHECK(parse_qseries("(i/2)*hbar*ad*a", kCaps) ==
        mul(QSeries::adag(kCaps), QSeries::a(kCaps)).scaled(Coefficient(0, Rational(1, 2), 0, 0), 1));
  CHECK(parse_qseries("q^4", kCaps) == power(QSeries::q(kCaps), 4));
  CHECK(parse_qseries("sqrt2^2 - 2", kCaps).is_zero());
  CHECK(parse_qseries("0.25*t", kCaps) == QSeries::t(kCaps).scaled(Coefficient(Rational(1, 4))));
  CHECK(parse_qseries("3/4", kCaps) == QSeries::constant(Coefficient(Rational(3, 4)), kCaps));
}

TEST_CASE("q^4 agrees with word rewriting") {
  // q = (i sqrt2/2)(a - adag): expand the 16 words of length 4 by brute force.
  QSeries sum(kCaps);
  for (int mask = 0; mask < 16; ++mask) {
    std::vector<char> word;
    int sign = 1;
    for (int k = 0; k < 4; ++k) {
      bool creator = (mask >> k) & 1;
      word.push_back(creator ? 'L' : 'R');
      if (creator) sign = -sign;
    }
    sum += qmorse::testing::word_to_series(word, kCaps).scaled(Coefficient(sign));
  }
  // (i sqrt2 / 2)^4 = 1/4
  CHECK(parse_qseries("q^4", kCaps) == sum.scaled(Coefficient(Rational(1, 4))));
}

TEST_CASE("precedence and unary minus") {
  CHECK(parse_qseries("-q^2", kCaps) == -power(QSeries::q(kCaps), 2));
  CHECK(parse_qseries("2*-q", kCaps) == QSeries::q(kCaps).scaled(-2));
  CHECK(parse_qseries("1-2-3", kCaps) == QSeries::constant(-4, kCaps));
  CHECK(parse_qseries("12/4/3", kCaps) == QSeries::constant(1, kCaps));
  CHECK(parse_qseries("(q+p)^0", kCaps) == QSeries::constant(1, kCaps));
  CHECK(to_string(parse_expr("q*p+2^3")) == "((q)*(p))+((2)^3)");
}

TEST_CASE("parse errors carry offsets and expectations") {
  auto offset_of = [](const std::string& text) -> std::size_t {
    try {
      parse_expr(text);
    } catch (const ParseError& e) {
      return e.offset();
    }
    return std::string::npos;
  };
  try {
    parse_expr("q p");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 2);
    CHECK(e.detail() == "implicit multiplication not allowed");
    CHECK_FALSE(e.expected().empty());
  }
  CHECK(offset_of("2q") == 1);
  CHECK(offset_of("qp") == 0);
  CHECK(offset_of("q^p") == 2);
  CHECK(offset_of("q^1.5") == 2);
  CHECK(offset_of("(q+p") == 4);
  CHECK(offset_of("q+") == 2);
  CHECK(offset_of("q)") == 1);
  CHECK(offset_of("q $ p") == 2);
  CHECK(offset_of("") == 0);
  CHECK(offset_of("q^2^3") == 3);
  CHECK_THROWS_AS(parse_qseries("q/p", kCaps), ParseError);
  CHECK_THROWS_AS(parse_qseries("q/(1-1)", kCaps), ParseError);
  CHECK_THROWS_AS(parse_expr(std::string(1000, '(') + "q" + std::string(1000, ')')), ParseError);
}

TEST_CASE("fuzzed input never crashes") {
  std::mt19937_64 rng(2024);
  const std::string alphabet = "qpadhbarti2sqrt+-*/^() 0123456789.\x01\xff";
  int parsed = 0;
  for (int trial = 0; trial < 4000; ++trial) {
    std::string text;
    const int len = static_cast<int>(rng() % 24);
    for (int k = 0; k < len; ++k) {
      text += (trial % 4 == 0) ? static_cast<char>(rng() % 256) : alphabet[rng() % alphabet.size()];
    }
    try {
      parse_qseries(text, caps(2, 6));
      ++parsed;
    } catch (const ParseError& e) {
      CHECK(e.offset() <= text.size());
    } catch (const ResourceError&) {
    }
  }
  CHECK(parsed > 0);
}

TEST_CASE("symbol families") {
  PlaneFamily f = parse_plane_family("p^2+q^4+l1*q+l2*q^2+l1*l2*q^3", {"l1", "l2"});
  CHECK(f.base == PlanePoly::monomial(0, 2) + PlanePoly::monomial(4, 0));
  REQUIRE(f.derivatives.size() == 2);
  CHECK(f.derivatives[0] == PlanePoly::monomial(1, 0));
  CHECK(f.derivatives[1] == PlanePoly::monomial(2, 0));
  CHECK(parse_plane_family("(x+y)^2").base ==
        PlanePoly::monomial(2, 0) + PlanePoly::monomial(1, 1, 2) + PlanePoly::monomial(0, 2));
  CHECK_THROWS_AS(parse_plane_family("x*hbar"), ParseError);
  CHECK_THROWS_AS(parse_plane_family("x", {"x"}), DomainError);
}

TEST_CASE("JSON round trip through the CLI") {
  Run r = run({"mul", "q+t*p^2", "(1/3)*hbar*q", "--t-cap", "3", "--weight-cap", "7/2"});
  REQUIRE(r.code == 0);
  Json j = Json::parse(r.out);
  QSeries got = qseries_from_json(j.at("result"));
  Truncation tr = Truncation::make(3, Rational(7, 2));
  CHECK(got == mul(parse_qseries("q+t*p^2", tr), parse_qseries("(1/3)*hbar*q", tr)));
  CHECK(dump(to_json(got)) == dump(to_json(qseries_from_json(to_json(got)))));

  const std::string path = "cli_roundtrip.json";
  std::ofstream(path) << dump(j.at("result"));
  Run again = run({"mul", "@" + path, "1", "--t-cap", "3", "--weight-cap", "7/2"});
  REQUIRE(again.code == 0);
  CHECK(qseries_from_json(Json::parse(again.out).at("result")) == got);
  std::remove(path.c_str());
}

TEST_CASE("commands and exit codes") {
  Run comm = run({"commutator", "p", "q"});
  REQUIRE(comm.code == 0);
  Json terms = Json::parse(comm.out).at("result").at("terms");
  REQUIRE(terms.size() == 1);
  CHECK(coef(terms[0]) == -Coefficient::i());
  CHECK(terms[0].at("approx") == Json::array({0.0, -1.0}));

  Run spec = run({"spectrum", "--perturbation", "t*q", "--order", "4", "--level", "0"});
  REQUIRE(spec.code == 0);
  // hbar - t^2 / 4
  Json e = Json::parse(spec.out).at("spectrum").at("terms");
  REQUIRE(e.size() == 2);
  for (const auto& term : e) {
    if (term.at("exp") == Json::array({1, 0})) CHECK(coef(term) == Coefficient(1));
    if (term.at("exp") == Json::array({0, 2})) CHECK(coef(term) == Coefficient(Rational(-1, 4)));
  }

  Run rs = run({"rs", "--perturbation", "t*q^4", "--level", "1", "--order", "2"});
  CHECK(rs.code == 0);
  Run nf = run({"normal-form", "--perturbation", "t*q^3", "--order", "3"});
  REQUIRE(nf.code == 0);
  CHECK(Json::parse(nf.out).at("verified") == true);

  Run milnor = run({"milnor", "--symbol", "y^2+x^3", "--cutoff", "5"});
  REQUIRE(milnor.code == 0);
  CHECK(Json::parse(milnor.out).at("dim") == 2);
  Run versal = run({"versal", "--symbol", "p^2+q^3+l*q", "--params", "l", "--cutoff", "5"});
  REQUIRE(versal.code == 0);
  CHECK(Json::parse(versal.out).at("versal") == true);

  Run diag = run({"diag", "--perturbation", "t*q^4", "--t", "0.01", "--dim", "30", "--levels", "2"});
  REQUIRE(diag.code == 0);
  CHECK(Json::parse(diag.out).at("values")[0][0].get<double>() == doctest::Approx(1.0073737).epsilon(1e-6));

  CHECK(run({"mul", "q p", "q"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({"mul", "q", "q", "--weight-cap", "x"}).code == 2);
  CHECK(run({"normal-form", "--hamiltonian", "p^2", "--order", "2"}).code == 3);
  CHECK(run({"milnor", "--symbol", "1+x^2"}).code == 3);
  CHECK(run({"gevrey"}).code == 2);
  CHECK(run({"--help"}).code == 0);
}

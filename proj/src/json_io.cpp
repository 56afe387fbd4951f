#include "qmorse/json_io.hpp"

#include <stdexcept>

#include "qmorse/errors.hpp"

namespace qmorse {

namespace {

constexpr const char* kFormat = "qseries-v1";

Rational rational_field(const Json& j, const char* key) {
  if (!j.contains(key)) return Rational(0);
  if (!j.at(key).is_string()) throw DomainError(std::string("coefficient field '") + key + "' must be a string");
  try {
    return parse_rational(j.at(key).get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw DomainError(std::string("bad rational in coefficient field '") + key + "': " + e.what());
  }
}

Json approx_of(const Coefficient& c) {
  auto z = c.to_complex();
  return Json::array({z.real(), z.imag()});
}

Rational weight_cap_from_json(const Json& j) {
  const Json& w = j.at("weight_cap");
  if (w.is_number_integer()) return Rational(w.get<long>());
  try {
    return parse_rational(w.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw DomainError(std::string("bad weight_cap: ") + e.what());
  }
}

Truncation truncation_from_json(const Json& j) {
  return Truncation::make(j.at("t_cap").get<int>(), weight_cap_from_json(j));
}

void check_format(const Json& j) {
  if (!j.is_object() || j.value("format", "") != kFormat) {
    throw DomainError("expected a qseries-v1 document");
  }
}

Json header(const Truncation& tr, Json vars) {
  Json out;
  out["format"] = kFormat;
  out["vars"] = std::move(vars);
  out["t_cap"] = tr.t_cap;
  out["weight_cap"] = rational_to_string(tr.weight_cap());
  return out;
}

}  // namespace

Json coefficient_to_json(const Coefficient& c) {
  return {{"r", rational_to_string(c.re())},
          {"i", rational_to_string(c.im())},
          {"r2", rational_to_string(c.re_sqrt2())},
          {"ir2", rational_to_string(c.im_sqrt2())}};
}

Coefficient coefficient_from_json(const Json& j) {
  if (!j.is_object()) throw DomainError("coefficient must be an object");
  return {rational_field(j, "r"), rational_field(j, "i"), rational_field(j, "r2"),
          rational_field(j, "ir2")};
}

Json to_json(const QSeries& f, bool approx) {
  Json vars;
  switch (f.ordering()) {
    case Ordering::normal:
      vars = Json::array({"adag", "a", "hbar", "t"});
      break;
    case Ordering::qp:
      vars = Json::array({"q", "p", "hbar", "t"});
      break;
    case Ordering::pq:
      vars = Json::array({"p", "q", "hbar", "t"});
      break;
  }
  Json out = header(f.truncation(), std::move(vars));
  Json terms = Json::array();
  for (const auto& [m, c] : f.terms()) {
    Json term = {{"exp", {m.left, m.right, m.hbar, m.t}}, {"coef", coefficient_to_json(c)}};
    if (approx) term["approx"] = approx_of(c);
    terms.push_back(std::move(term));
  }
  out["terms"] = std::move(terms);
  return out;
}

Json to_json(const ScalarSeries& s, bool approx) {
  Json out = header(s.truncation(), s.signature().vars());
  Json terms = Json::array();
  const std::size_t arity = s.signature().arity();
  for (const auto& [e, c] : s.terms()) {
    Json exp = Json::array();
    for (std::size_t k = 0; k < arity; ++k) exp.push_back(e[k]);
    Json term = {{"exp", std::move(exp)}, {"coef", coefficient_to_json(c)}};
    if (approx) term["approx"] = approx_of(c);
    terms.push_back(std::move(term));
  }
  out["terms"] = std::move(terms);
  return out;
}

QSeries qseries_from_json(const Json& j) {
  check_format(j);
  try {
    auto vars = j.at("vars").get<std::vector<std::string>>();
    Ordering ordering;
    if (vars == std::vector<std::string>{"adag", "a", "hbar", "t"}) {
      ordering = Ordering::normal;
    } else if (vars == std::vector<std::string>{"q", "p", "hbar", "t"}) {
      ordering = Ordering::qp;
    } else if (vars == std::vector<std::string>{"p", "q", "hbar", "t"}) {
      ordering = Ordering::pq;
    } else {
      throw DomainError("unsupported variable list for an operator series");
    }
    Truncation tr = truncation_from_json(j);
    std::vector<QSeries::Term> terms;
    for (const auto& term : j.at("terms")) {
      auto exp = term.at("exp").get<std::vector<std::uint32_t>>();
      if (exp.size() != 4) throw DomainError("operator monomials need four exponents");
      terms.push_back({{exp[0], exp[1], exp[2], exp[3]}, coefficient_from_json(term.at("coef"))});
    }
    return QSeries::from_terms(std::move(terms), tr, ordering);
  } catch (const Json::exception& e) {
    throw DomainError(std::string("malformed series document: ") + e.what());
  }
}

ScalarSeries scalar_series_from_json(const Json& j) {
  check_format(j);
  try {
    Signature sig = Signature::from_vars(j.at("vars").get<std::vector<std::string>>());
    Truncation tr = truncation_from_json(j);
    std::vector<ScalarSeries::Term> terms;
    for (const auto& term : j.at("terms")) {
      auto exp = term.at("exp").get<std::vector<std::uint32_t>>();
      if (exp.size() != sig.arity()) throw DomainError("exponent list does not match vars");
      Exponents e{};
      std::copy(exp.begin(), exp.end(), e.begin());
      terms.emplace_back(e, coefficient_from_json(term.at("coef")));
    }
    return ScalarSeries::from_terms(std::move(sig), std::move(terms), tr);
  } catch (const Json::exception& e) {
    throw DomainError(std::string("malformed series document: ") + e.what());
  }
}

std::string dump(const Json& j) { return j.dump(2); }

}  // namespace qmorse

#include "qmorse/scalar_series.hpp"

#include <algorithm>
#include <map>

#include "detail/accumulator.hpp"

namespace qmorse {

namespace {

std::uint64_t pack(const Exponents& e) { return detail::pack4(e[0], e[1], e[2], e[3]); }

Exponents unpack(std::uint64_t key) { return detail::unpack4(key); }

}  // namespace

Signature::Signature(std::vector<std::string> vars, std::vector<int> weights2)
    : vars_(std::move(vars)), weights2_(std::move(weights2)) {}

Signature Signature::z_hbar_t() { return {{"z", "hbar", "t"}, {2, 2, 0}}; }
Signature Signature::hbar_t() { return {{"hbar", "t"}, {2, 0}}; }
Signature Signature::n_hbar_t() { return {{"n", "hbar", "t"}, {0, 2, 0}}; }
Signature Signature::x_y_hbar_t() { return {{"x", "y", "hbar", "t"}, {1, 1, 2, 0}}; }
Signature Signature::x_y_t() { return {{"x", "y", "t"}, {1, 1, 0}}; }
Signature Signature::single(std::string name, int weight2) {
  return {{std::move(name)}, {weight2}};
}

Signature Signature::from_vars(std::vector<std::string> vars) {
  if (vars.empty() || vars.size() > kMaxVars) throw DomainError("unsupported variable count");
  std::vector<int> weights;
  for (const auto& name : vars) {
    if (std::count(vars.begin(), vars.end(), name) > 1) {
      throw DomainError("duplicate variable '" + name + "'");
    }
    if (name == "z" || name == "hbar") {
      weights.push_back(2);
    } else if (name == "x" || name == "y") {
      weights.push_back(1);
    } else {
      weights.push_back(0);
    }
  }
  return {std::move(vars), std::move(weights)};
}

int Signature::index_of(const std::string& name) const {
  for (std::size_t k = 0; k < vars_.size(); ++k) {
    if (vars_[k] == name) return static_cast<int>(k);
  }
  return -1;
}

int ScalarSeries::weight2(const Exponents& e) const {
  int w = 0;
  for (std::size_t k = 0; k < signature_.arity(); ++k) {
    w += signature_.weight2(k) * static_cast<int>(e[k]);
  }
  return w;
}

bool ScalarSeries::within_caps(const Exponents& e) const {
  int ti = signature_.t_index();
  if (ti >= 0 && static_cast<int>(e[ti]) > truncation_.t_cap) return false;
  return weight2(e) <= truncation_.weight_cap2;
}

ScalarSeries ScalarSeries::from_terms(Signature signature, std::vector<Term> terms,
                                      Truncation truncation) {
  ScalarSeries out(std::move(signature), truncation);
  detail::Accumulator acc(truncation.term_guard);
  for (auto& [e, c] : terms) {
    for (std::size_t k = out.signature_.arity(); k < Signature::kMaxVars; ++k) {
      if (e[k] != 0) throw InternalError("exponent outside signature");
    }
    if (c.is_zero() || !out.within_caps(e)) continue;
    acc.add(pack(e), c);
  }
  for (auto& [key, c] : std::move(acc).finish()) out.terms_.emplace_back(unpack(key), std::move(c));
  return out;
}

ScalarSeries ScalarSeries::constant(Signature signature, const Coefficient& c,
                                    Truncation truncation) {
  return from_terms(std::move(signature), {{Exponents{}, c}}, truncation);
}

ScalarSeries ScalarSeries::variable(Signature signature, const std::string& name,
                                    Truncation truncation) {
  int idx = signature.index_of(name);
  if (idx < 0) throw DomainError("variable '" + name + "' not in signature");
  Exponents e{};
  e[idx] = 1;
  return from_terms(std::move(signature), {{e, 1}}, truncation);
}

Coefficient ScalarSeries::coefficient(const Exponents& e) const {
  auto it = std::lower_bound(terms_.begin(), terms_.end(), e,
                             [](const Term& term, const Exponents& key) { return term.first < key; });
  if (it != terms_.end() && it->first == e) return it->second;
  return {};
}

int ScalarSeries::max_degree(std::size_t var) const {
  int out = 0;
  for (const auto& [e, c] : terms_) out = std::max(out, static_cast<int>(e[var]));
  return out;
}

int ScalarSeries::min_degree(std::size_t var) const {
  if (terms_.empty()) return 0;
  int out = static_cast<int>(terms_.front().first[var]);
  for (const auto& [e, c] : terms_) out = std::min(out, static_cast<int>(e[var]));
  return out;
}

ScalarSeries ScalarSeries::coefficient_of(std::size_t var, std::uint32_t power) const {
  std::vector<Term> out;
  for (const auto& [e, c] : terms_) {
    if (e[var] != power) continue;
    Exponents f = e;
    f[var] = 0;
    out.emplace_back(f, c);
  }
  return from_terms(signature_, std::move(out), truncation_);
}

ScalarSeries ScalarSeries::derivative(std::size_t var) const {
  std::vector<Term> out;
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents f = e;
    f[var] -= 1;
    Coefficient d = c;
    d *= Rational(e[var]);
    out.emplace_back(f, std::move(d));
  }
  return from_terms(signature_, std::move(out), truncation_);
}

ScalarSeries ScalarSeries::scaled(const Coefficient& c) const {
  ScalarSeries out(signature_, truncation_);
  if (c.is_zero()) return out;
  out.terms_ = terms_;
  for (auto& term : out.terms_) term.second *= c;
  return out;
}

ScalarSeries ScalarSeries::shifted(std::size_t var, std::uint32_t power) const {
  std::vector<Term> out;
  out.reserve(terms_.size());
  for (const auto& [e, c] : terms_) {
    Exponents f = e;
    f[var] += power;
    out.emplace_back(f, c);
  }
  return from_terms(signature_, std::move(out), truncation_);
}

ScalarSeries ScalarSeries::with_truncation(Truncation truncation) const {
  ScalarSeries out(signature_, truncation);
  for (const auto& term : terms_) {
    if (out.within_caps(term.first)) out.terms_.push_back(term);
  }
  return out;
}

ScalarSeries ScalarSeries::conj() const {
  ScalarSeries out = *this;
  for (auto& term : out.terms_) term.second = term.second.conj();
  return out;
}

ScalarSeries ScalarSeries::operator-() const { return scaled(-1); }

void ScalarSeries::require_same_signature(const ScalarSeries& other) const {
  if (!(signature_ == other.signature_)) {
    throw DomainError("scalar series signatures differ");
  }
}

ScalarSeries& ScalarSeries::operator+=(const ScalarSeries& rhs) {
  require_same_signature(rhs);
  std::vector<Term> all = terms_;
  all.insert(all.end(), rhs.terms_.begin(), rhs.terms_.end());
  *this = from_terms(signature_, std::move(all), truncation_.meet(rhs.truncation_));
  return *this;
}

ScalarSeries& ScalarSeries::operator-=(const ScalarSeries& rhs) { return *this += -rhs; }

ScalarSeries operator*(const ScalarSeries& lhs, const ScalarSeries& rhs) {
  lhs.require_same_signature(rhs);
  Truncation tr = lhs.truncation_.meet(rhs.truncation_);
  ScalarSeries out(lhs.signature_, tr);
  detail::Accumulator acc(tr.term_guard);
  const std::size_t arity = lhs.signature_.arity();
  const int ti = lhs.signature_.t_index();
  for (const auto& [ea, ca] : lhs.terms_) {
    const int wa = lhs.weight2(ea);
    for (const auto& [eb, cb] : rhs.terms_) {
      if (ti >= 0 && static_cast<int>(ea[ti] + eb[ti]) > tr.t_cap) continue;
      if (wa + lhs.weight2(eb) > tr.weight_cap2) continue;
      Exponents e{};
      for (std::size_t k = 0; k < arity; ++k) e[k] = ea[k] + eb[k];
      acc.slot(pack(e)).add_product(ca, cb);
    }
  }
  for (auto& [key, c] : std::move(acc).finish()) out.terms_.emplace_back(unpack(key), std::move(c));
  return out;
}

ScalarSeries substitute(const ScalarSeries& u, std::size_t var, const ScalarSeries& v) {
  if (!(u.signature() == v.signature())) throw DomainError("scalar series signatures differ");
  Truncation tr = u.truncation().meet(v.truncation());
  std::map<std::uint32_t, std::vector<ScalarSeries::Term>> by_power;
  for (const auto& [e, c] : u.terms()) {
    Exponents f = e;
    f[var] = 0;
    by_power[e[var]].emplace_back(f, c);
  }
  ScalarSeries result(u.signature(), tr);
  ScalarSeries power = ScalarSeries::constant(u.signature(), 1, tr);
  std::uint32_t current = 0;
  for (auto& [n, terms] : by_power) {
    while (current < n) {
      power = power * v;
      ++current;
    }
    ScalarSeries coeff = ScalarSeries::from_terms(u.signature(), std::move(terms), tr);
    result += coeff * power;
  }
  return result;
}

}  // namespace qmorse

#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "qmorse/coefficient.hpp"
#include "qmorse/truncation.hpp"

namespace qmorse {

// Variable set of a commutative series. Each variable carries a doubled
// weight used by the weight cap; the variable named "t" (if any) is governed
// by the t cap instead.
class Signature {
 public:
  static constexpr std::size_t kMaxVars = 4;

  static Signature z_hbar_t();
  static Signature hbar_t();
  static Signature n_hbar_t();
  static Signature x_y_hbar_t();
  static Signature x_y_t();
  static Signature single(std::string name, int weight2);
  // Weights inferred from the names: z, hbar -> 2; x, y -> 1; anything else 0.
  static Signature from_vars(std::vector<std::string> vars);

  const std::vector<std::string>& vars() const { return vars_; }
  std::size_t arity() const { return vars_.size(); }
  int weight2(std::size_t var) const { return weights2_[var]; }
  // -1 when absent.
  int index_of(const std::string& name) const;
  int t_index() const { return index_of("t"); }
  int hbar_index() const { return index_of("hbar"); }

  friend bool operator==(const Signature& a, const Signature& b) { return a.vars_ == b.vars_; }

 private:
  Signature(std::vector<std::string> vars, std::vector<int> weights2);
  std::vector<std::string> vars_;
  std::vector<int> weights2_;
};

using Exponents = std::array<std::uint32_t, Signature::kMaxVars>;

// Truncated sparse commutative polynomial over Q(i, sqrt2). Central in every
// sense: no ordering data. Arithmetic across different signatures throws.
class ScalarSeries {
 public:
  using Term = std::pair<Exponents, Coefficient>;

  ScalarSeries(Signature signature, Truncation truncation)
      : signature_(std::move(signature)), truncation_(truncation) {}

  static ScalarSeries from_terms(Signature signature, std::vector<Term> terms,
                                 Truncation truncation);
  static ScalarSeries constant(Signature signature, const Coefficient& c, Truncation truncation);
  static ScalarSeries variable(Signature signature, const std::string& name,
                               Truncation truncation);

  const Signature& signature() const { return signature_; }
  const Truncation& truncation() const { return truncation_; }
  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Coefficient coefficient(const Exponents& e) const;
  int weight2(const Exponents& e) const;
  bool within_caps(const Exponents& e) const;
  int max_degree(std::size_t var) const;
  // Smallest exponent of `var` among the terms (0 for the zero series).
  int min_degree(std::size_t var) const;

  // Collects the coefficient of var^power as a series in the same signature.
  ScalarSeries coefficient_of(std::size_t var, std::uint32_t power) const;
  ScalarSeries derivative(std::size_t var) const;
  ScalarSeries scaled(const Coefficient& c) const;
  ScalarSeries shifted(std::size_t var, std::uint32_t power) const;
  ScalarSeries with_truncation(Truncation truncation) const;
  // Complex conjugation of every coefficient.
  ScalarSeries conj() const;

  ScalarSeries operator-() const;
  ScalarSeries& operator+=(const ScalarSeries& rhs);
  ScalarSeries& operator-=(const ScalarSeries& rhs);
  friend ScalarSeries operator+(ScalarSeries lhs, const ScalarSeries& rhs) { return lhs += rhs; }
  friend ScalarSeries operator-(ScalarSeries lhs, const ScalarSeries& rhs) { return lhs -= rhs; }
  friend ScalarSeries operator*(const ScalarSeries& lhs, const ScalarSeries& rhs);

  friend bool operator==(const ScalarSeries& x, const ScalarSeries& y) {
    return x.signature_ == y.signature_ && x.terms_ == y.terms_;
  }

 private:
  void require_same_signature(const ScalarSeries& other) const;

  Signature signature_;
  Truncation truncation_;
  std::vector<Term> terms_;
};

// v composed into the variable `var` of u: u(..., v, ...). Both series share a
// signature; v must vanish at the origin of the t-adic filtration or be
// polynomial (u is finite, so the sum is always finite).
ScalarSeries substitute(const ScalarSeries& u, std::size_t var, const ScalarSeries& v);

}  // namespace qmorse

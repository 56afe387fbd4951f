#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "qmorse/coefficient.hpp"

namespace qmorse {

// Sparse polynomial in commuting x, y.
class PlanePoly {
 public:
  using Exp = std::pair<std::uint32_t, std::uint32_t>;
  using Terms = std::map<Exp, Coefficient>;

  PlanePoly() = default;
  static PlanePoly monomial(std::uint32_t i, std::uint32_t j, const Coefficient& c = 1);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  Coefficient coefficient(std::uint32_t i, std::uint32_t j) const;
  int degree() const;  // -1 for zero
  void add(const Exp& e, const Coefficient& c);

  PlanePoly dx() const;
  PlanePoly dy() const;
  // Drops every monomial of total degree above d.
  PlanePoly truncated(int d) const;
  std::string to_string() const;

  PlanePoly& operator+=(const PlanePoly& rhs);
  PlanePoly& operator-=(const PlanePoly& rhs);
  friend PlanePoly operator+(PlanePoly a, const PlanePoly& b) { return a += b; }
  friend PlanePoly operator-(PlanePoly a, const PlanePoly& b) { return a -= b; }
  friend PlanePoly operator*(const PlanePoly& a, const PlanePoly& b);
  friend bool operator==(const PlanePoly& a, const PlanePoly& b) { return a.terms_ == b.terms_; }

 private:
  Terms terms_;
};

// F at lambda = 0 together with dF/dlambda_j at lambda = 0.
struct PlaneFamily {
  PlanePoly base;
  std::vector<std::string> params;
  std::vector<PlanePoly> derivatives;
};

struct QuotientDimension {
  int dim = 0;
  bool stabilized = false;
  std::vector<PlanePoly::Exp> basis;  // monomials spanning the quotient
};

// dim C[x,y]_{<=D} / (F_x, F_y)_{<=D}.
QuotientDimension milnor_number(const PlanePoly& f, int cutoff);

// dim C[x,y]_{<=D} / ({g, F} + g F)_{<=D}, {g, F} = g_x F_y - g_y F_x.
QuotientDimension versality_dimension(const PlanePoly& f, int cutoff);

struct VersalityCheck {
  bool versal = false;
  bool stabilized = false;
  int quotient_dim = 0;
};
// 1 and the dF/dlambda_j span the versality quotient.
VersalityCheck check_versal(const PlaneFamily& family, int cutoff);

}  // namespace qmorse

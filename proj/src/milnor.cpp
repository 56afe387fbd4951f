#include "qmorse/milnor.hpp"

#include <algorithm>
#include <sstream>

#include "qmorse/errors.hpp"

namespace qmorse {

PlanePoly PlanePoly::monomial(std::uint32_t i, std::uint32_t j, const Coefficient& c) {
  PlanePoly out;
  out.add({i, j}, c);
  return out;
}

Coefficient PlanePoly::coefficient(std::uint32_t i, std::uint32_t j) const {
  auto it = terms_.find({i, j});
  return it == terms_.end() ? Coefficient() : it->second;
}

int PlanePoly::degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(e.first + e.second));
  return d;
}

void PlanePoly::add(const Exp& e, const Coefficient& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

PlanePoly PlanePoly::dx() const {
  PlanePoly out;
  for (const auto& [e, c] : terms_) {
    if (e.first > 0) out.add({e.first - 1, e.second}, c * Coefficient(static_cast<long>(e.first)));
  }
  return out;
}

PlanePoly PlanePoly::dy() const {
  PlanePoly out;
  for (const auto& [e, c] : terms_) {
    if (e.second > 0) out.add({e.first, e.second - 1}, c * Coefficient(static_cast<long>(e.second)));
  }
  return out;
}

PlanePoly PlanePoly::truncated(int d) const {
  PlanePoly out;
  for (const auto& [e, c] : terms_) {
    if (static_cast<int>(e.first + e.second) <= d) out.terms_.emplace(e, c);
  }
  return out;
}

std::string PlanePoly::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  for (const auto& [e, c] : terms_) {
    if (!first) out << " + ";
    first = false;
    out << '(' << c.to_string() << ")*x^" << e.first << "*y^" << e.second;
  }
  return out.str();
}

PlanePoly& PlanePoly::operator+=(const PlanePoly& rhs) {
  for (const auto& [e, c] : rhs.terms_) add(e, c);
  return *this;
}

PlanePoly& PlanePoly::operator-=(const PlanePoly& rhs) {
  for (const auto& [e, c] : rhs.terms_) add(e, -c);
  return *this;
}

PlanePoly operator*(const PlanePoly& a, const PlanePoly& b) {
  PlanePoly out;
  for (const auto& [ea, ca] : a.terms_) {
    for (const auto& [eb, cb] : b.terms_) out.add({ea.first + eb.first, ea.second + eb.second}, ca * cb);
  }
  return out;
}

namespace {

// Monomials of degree <= d, in elimination priority: higher degree first,
// then higher y power. Unpivoted columns come out as low-degree x powers.
std::vector<PlanePoly::Exp> column_order(int d) {
  std::vector<PlanePoly::Exp> out;
  for (int total = d; total >= 0; --total) {
    for (int j = total; j >= 0; --j) out.push_back({total - j, j});
  }
  return out;
}

std::vector<PlanePoly::Exp> monomials_upto(int d) {
  std::vector<PlanePoly::Exp> out;
  for (int total = 0; total <= d; ++total) {
    for (int j = 0; j <= total; ++j) out.push_back({total - j, j});
  }
  return out;
}

// Incremental row echelon form over the coefficient field.
class Span {
 public:
  explicit Span(int d) : columns_(column_order(d)) {
    for (std::size_t k = 0; k < columns_.size(); ++k) index_[columns_[k]] = k;
  }

  std::size_t ambient() const { return columns_.size(); }
  std::size_t rank() const { return pivots_.size(); }

  void insert(const PlanePoly& p) {
    std::vector<Coefficient> row(columns_.size());
    bool any = false;
    for (const auto& [e, c] : p.terms()) {
      auto it = index_.find(e);
      if (it == index_.end()) continue;
      row[it->second] = c;
      any = true;
    }
    if (!any) return;
    for (const auto& [col, pivot_row] : pivots_) {
      if (row[col].is_zero()) continue;
      const Coefficient factor = row[col];
      for (std::size_t k = col; k < row.size(); ++k) {
        if (!pivot_row[k].is_zero()) row[k] -= factor * pivot_row[k];
      }
    }
    std::size_t lead = 0;
    while (lead < row.size() && row[lead].is_zero()) ++lead;
    if (lead == row.size()) return;
    const Coefficient inv = row[lead].inverse();
    for (std::size_t k = lead; k < row.size(); ++k) row[k] *= inv;
    // Keep earlier pivot rows reduced against the new pivot.
    for (auto& [col, pivot_row] : pivots_) {
      if (pivot_row[lead].is_zero()) continue;
      const Coefficient factor = pivot_row[lead];
      for (std::size_t k = lead; k < row.size(); ++k) {
        if (!row[k].is_zero()) pivot_row[k] -= factor * row[k];
      }
    }
    pivots_.emplace(lead, std::move(row));
  }

  std::vector<PlanePoly::Exp> complement() const {
    std::vector<PlanePoly::Exp> out;
    for (std::size_t k = columns_.size(); k-- > 0;) {
      if (!pivots_.count(k)) out.push_back(columns_[k]);
    }
    return out;
  }

 private:
  std::vector<PlanePoly::Exp> columns_;
  std::map<PlanePoly::Exp, std::size_t> index_;
  std::map<std::size_t, std::vector<Coefficient>> pivots_;
};

void require_singular_point(const PlanePoly& f) {
  if (!f.coefficient(0, 0).is_zero()) throw DomainError("F(0, 0) must vanish");
}

Span jacobian_span(const PlanePoly& f, int d) {
  Span span(d);
  const PlanePoly fx = f.dx();
  const PlanePoly fy = f.dy();
  for (const auto& [i, j] : monomials_upto(d)) {
    const PlanePoly m = PlanePoly::monomial(i, j);
    span.insert((m * fx).truncated(d));
    span.insert((m * fy).truncated(d));
  }
  return span;
}

Span versality_span(const PlanePoly& f, int d) {
  Span span(d);
  const PlanePoly fx = f.dx();
  const PlanePoly fy = f.dy();
  const int reach = d + std::max(f.degree(), 0);
  for (const auto& [i, j] : monomials_upto(reach)) {
    const PlanePoly g = PlanePoly::monomial(i, j);
    span.insert((g.dx() * fy - g.dy() * fx).truncated(d));
    if (i + j <= static_cast<std::uint32_t>(d)) span.insert((g * f).truncated(d));
  }
  return span;
}

template <typename Builder>
QuotientDimension quotient(const PlanePoly& f, int cutoff, Builder build) {
  if (cutoff < 0) throw DomainError("degree cutoff must be non-negative");
  require_singular_point(f);
  Span at = build(f, cutoff);
  Span next = build(f, cutoff + 1);
  QuotientDimension out;
  out.dim = static_cast<int>(at.ambient() - at.rank());
  out.stabilized = out.dim == static_cast<int>(next.ambient() - next.rank());
  out.basis = at.complement();
  return out;
}

}  // namespace

QuotientDimension milnor_number(const PlanePoly& f, int cutoff) {
  return quotient(f, cutoff, jacobian_span);
}

QuotientDimension versality_dimension(const PlanePoly& f, int cutoff) {
  return quotient(f, cutoff, versality_span);
}

VersalityCheck check_versal(const PlaneFamily& family, int cutoff) {
  QuotientDimension q = versality_dimension(family.base, cutoff);
  Span span = versality_span(family.base, cutoff);
  span.insert(PlanePoly::monomial(0, 0));
  for (const auto& d : family.derivatives) span.insert(d.truncated(cutoff));
  VersalityCheck out;
  out.quotient_dim = q.dim;
  out.stabilized = q.stabilized;
  out.versal = span.rank() == span.ambient();
  return out;
}

}  // namespace qmorse

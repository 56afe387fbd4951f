#include "qmorse/spectrum.hpp"

#include <algorithm>
#include <cmath>

#include "qmorse/algebra.hpp"
#include "qmorse/errors.hpp"

namespace qmorse {

namespace {

Truncation unbounded_caps(int t_cap, int weight_cap2) {
  Truncation tr;
  tr.t_cap = t_cap;
  tr.weight_cap2 = weight_cap2;
  return tr;
}

// (hbar, t) series from the level-0 entries of a Laurent vector.
ScalarSeries to_hbar_t(const FockVector& v, int t_cap) {
  std::vector<ScalarSeries::Term> terms;
  int max_hbar = 0;
  for (const auto& [key, c] : v.terms()) {
    if (key.hbar < 0) throw InternalError("negative hbar power in a final result");
    max_hbar = std::max(max_hbar, key.hbar);
    terms.push_back({{static_cast<std::uint32_t>(key.hbar), key.t, 0, 0}, c});
  }
  return ScalarSeries::from_terms(Signature::hbar_t(), std::move(terms),
                                  unbounded_caps(t_cap, 2 * max_hbar));
}

}  // namespace

FockVector FockVector::basis(std::uint32_t level, const Coefficient& c) {
  FockVector out;
  out.add({level, 0, 0}, c);
  return out;
}

void FockVector::add(const Key& key, const Coefficient& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (inserted) return;
  it->second += c;
  if (it->second.is_zero()) terms_.erase(it);
}

FockVector FockVector::component(std::uint32_t level) const {
  FockVector out;
  for (const auto& [key, c] : terms_) {
    if (key.level == level) out.terms_.emplace(Key{0, key.hbar, key.t}, c);
  }
  return out;
}

FockVector FockVector::scaled(const Coefficient& c, std::int32_t hbar_shift) const {
  FockVector out;
  if (c.is_zero()) return out;
  for (const auto& [key, coef] : terms_) {
    out.terms_.emplace(Key{key.level, key.hbar + hbar_shift, key.t}, coef * c);
  }
  return out;
}

FockVector& FockVector::operator+=(const FockVector& rhs) {
  for (const auto& [key, c] : rhs.terms_) add(key, c);
  return *this;
}

FockVector& FockVector::operator-=(const FockVector& rhs) {
  for (const auto& [key, c] : rhs.terms_) add(key, -c);
  return *this;
}

FockVector operator*(const FockVector& x, const FockVector& y) {
  FockVector out;
  for (const auto& [kx, cx] : x.terms_) {
    for (const auto& [ky, cy] : y.terms_) {
      out.add({kx.level + ky.level, kx.hbar + ky.hbar, kx.t + ky.t}, cx * cy);
    }
  }
  return out;
}

FockVector apply_rho(const QSeries& f, const FockVector& psi) {
  const QSeries g = to_normal(f);
  FockVector out;
  for (const auto& [m, c] : g.terms()) {
    for (const auto& [key, d] : psi.terms()) {
      if (m.right > key.level) continue;
      // a^n z^j = j!/(j-n)! hbar^n z^(j-n)
      Rational falling(1);
      for (std::uint32_t r = 0; r < m.right; ++r) falling *= key.level - r;
      Coefficient coef = c * d;
      coef *= falling;
      out.add({key.level - m.right + m.left, key.hbar + static_cast<std::int32_t>(m.hbar + m.right),
               key.t + m.t},
              coef);
    }
  }
  return out;
}

ScalarSeries inner_product(const FockVector& psi, const FockVector& chi) {
  FockVector acc;
  for (const auto& [kx, cx] : psi.terms()) {
    for (const auto& [ky, cy] : chi.terms()) {
      if (kx.level != ky.level) continue;
      Coefficient c = cx.conj() * cy;
      c *= factorial(kx.level);
      acc.add({0, kx.hbar + ky.hbar + static_cast<std::int32_t>(kx.level), kx.t + ky.t}, c);
    }
  }
  int t_cap = 0;
  for (const auto& [key, c] : acc.terms()) t_cap = std::max(t_cap, static_cast<int>(key.t));
  return to_hbar_t(acc, t_cap);
}

ScalarSeries rs_perturbation(const QSeries& f, unsigned level, int order) {
  if (order < 0) throw DomainError("t-order must be non-negative");
  const QSeries g = to_normal(f);
  const QSeries base = g.t_coefficient(0);
  if (!(base == QSeries::harmonic(base.truncation()))) {
    throw DomainError("unperturbed operator must be p^2 + q^2");
  }
  std::vector<QSeries> slices;
  for (int l = 0; l <= order; ++l) slices.push_back(g.t_coefficient(l));

  // psi_k with <z^level component of psi_k> = 0 for k >= 1; E_k Laurent in hbar.
  std::vector<FockVector> psi{FockVector::basis(level)};
  std::vector<FockVector> energy{FockVector::basis(0, 1).scaled(2 * static_cast<long>(level) + 1, 1)};
  for (int k = 1; k <= order; ++k) {
    FockVector source;  // sum_l g_l psi_{k-l}
    for (int l = 1; l <= k; ++l) {
      if (slices[l].is_zero()) continue;
      source += apply_rho(slices[l], psi[k - l]);
    }
    energy.push_back(source.component(level));
    FockVector next;
    std::vector<std::uint32_t> levels;
    for (const auto& [key, c] : source.terms()) levels.push_back(key.level);
    for (int j = 1; j < k; ++j) {
      for (const auto& [key, c] : psi[k - j].terms()) levels.push_back(key.level);
    }
    std::sort(levels.begin(), levels.end());
    levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
    for (std::uint32_t m : levels) {
      if (m == level) continue;
      FockVector rhs = source.component(m).scaled(-1);
      for (int j = 1; j < k; ++j) rhs += energy[j] * psi[k - j].component(m);
      // (f0 - E0) z^m = 2 hbar (m - n) z^m
      const long gap = 2 * (static_cast<long>(m) - static_cast<long>(level));
      for (const auto& [key, c] : rhs.terms()) {
        next.add({m, key.hbar - 1, 0}, c / Coefficient(gap));
      }
    }
    psi.push_back(std::move(next));
  }
  FockVector total;
  for (int k = 0; k <= order; ++k) {
    for (const auto& [key, c] : energy[k].terms()) total.add({0, key.hbar, static_cast<std::uint32_t>(k)}, c);
  }
  return to_hbar_t(total, order);
}

ScalarSeries evaluate_level(const ScalarSeries& e, unsigned level) {
  const int n = e.signature().index_of("n");
  const int h = e.signature().hbar_index();
  const int t = e.signature().t_index();
  if (n < 0 || h < 0 || t < 0) throw DomainError("expected a series in (n, hbar, t)");
  std::vector<ScalarSeries::Term> terms;
  for (const auto& [x, c] : e.terms()) {
    Rational factor(1);
    for (std::uint32_t r = 0; r < x[n]; ++r) factor *= level;
    Coefficient value = c;
    value *= factor;
    terms.push_back({{x[h], x[t], 0, 0}, value});
  }
  return ScalarSeries::from_terms(Signature::hbar_t(), std::move(terms), e.truncation());
}

FockOperator fock_matrix(const QSeries& f, int dim, double t, double hbar) {
  if (dim < 1) throw DomainError("dimension must be at least 1");
  if (!(hbar > 0)) throw DomainError("hbar must be positive");
  const QSeries g = to_normal(f);
  FockOperator out = FockOperator::Zero(dim, dim);
  const double log_hbar = std::log(hbar);
  for (const auto& [m, c] : g.terms()) {
    const std::complex<double> value = c.to_complex() * std::pow(t, m.t) * std::pow(hbar, m.hbar);
    if (value == 0.0) continue;
    for (int n = static_cast<int>(m.right); n < dim; ++n) {
      const int j = n - static_cast<int>(m.right) + static_cast<int>(m.left);
      if (j >= dim) continue;
      // e_n -> n!/(n-r)! hbar^r z^(n-r+l) / sqrt(n! hbar^n), re-expressed in e_j.
      const double log_factor = std::lgamma(n + 1.0) - std::lgamma(n - m.right + 1.0) +
                                m.right * log_hbar +
                                0.5 * (std::lgamma(j + 1.0) + j * log_hbar) -
                                0.5 * (std::lgamma(n + 1.0) + n * log_hbar);
      out(j, n) += value * std::exp(log_factor);
    }
  }
  return out;
}

void write_csv(std::ostream& out, const FockOperator& m) {
  out.precision(17);
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out << ',';
      out << m(r, c).real() << ',' << m(r, c).imag();
    }
    out << '\n';
  }
}

namespace {

std::vector<std::complex<double>> lowest(const FockOperator& m, int levels, bool hermitian) {
  std::vector<std::complex<double>> values;
  if (hermitian) {
    Eigen::SelfAdjointEigenSolver<FockOperator> solver(m, Eigen::EigenvaluesOnly);
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) values.emplace_back(solver.eigenvalues()(k), 0.0);
  } else {
    Eigen::ComplexEigenSolver<FockOperator> solver(m, false);
    for (Eigen::Index k = 0; k < solver.eigenvalues().size(); ++k) values.push_back(solver.eigenvalues()(k));
  }
  std::sort(values.begin(), values.end(), [](const auto& x, const auto& y) {
    return x.real() < y.real() || (x.real() == y.real() && x.imag() < y.imag());
  });
  if (static_cast<int>(values.size()) > levels) values.resize(levels);
  return values;
}

}  // namespace

Diagonalization diagonalize(const QSeries& f, double t, double hbar, int dim, int levels) {
  if (levels < 1 || levels > dim) throw DomainError("level count must lie in [1, dim]");
  const FockOperator m = fock_matrix(f, dim, t, hbar);
  Diagonalization out;
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  out.hermitian = (m - m.adjoint()).cwiseAbs().maxCoeff() <= 1e-12 * scale;
  if (!out.hermitian) out.warning = "operator is not hermitian; eigenvalues are complex and unsorted by magnitude";
  out.values = lowest(m, levels, out.hermitian);
  const FockOperator bigger = fock_matrix(f, dim + 10, t, hbar);
  const auto check = lowest(bigger, levels, out.hermitian);
  out.converged = true;
  for (int k = 0; k < levels; ++k) {
    const double ref = std::max(std::abs(check[k]), 1e-300);
    if (std::abs(check[k] - out.values[k]) / ref >= 1e-10) out.converged = false;
  }
  return out;
}

ScalarSeries trace_hbar(const QSeries& f, unsigned levels) {
  FockVector total;
  for (unsigned n = 0; n <= levels; ++n) {
    FockVector image = apply_rho(f, FockVector::basis(n)).component(n);
    total += image.scaled(Coefficient(factorial(n)), static_cast<std::int32_t>(n));
  }
  return to_hbar_t(total, f.truncation().t_cap);
}

}  // namespace qmorse

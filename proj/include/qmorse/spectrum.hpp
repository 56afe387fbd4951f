#pragma once

#include <compare>
#include <complex>
#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qmorse/qseries.hpp"
#include "qmorse/scalar_series.hpp"

namespace qmorse {

// Element of C_hbar[t][z] in the unnormalized basis z^j, with hbar allowed to
// carry negative powers (perturbation theory divides by energy gaps).
class FockVector {
 public:
  struct Key {
    std::uint32_t level = 0;
    std::int32_t hbar = 0;
    std::uint32_t t = 0;
    friend auto operator<=>(const Key&, const Key&) = default;
  };
  using Terms = std::map<Key, Coefficient>;

  FockVector() = default;
  static FockVector basis(std::uint32_t level, const Coefficient& c = 1);

  const Terms& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add(const Key& key, const Coefficient& c);
  // Component along z^level as a Laurent polynomial in hbar (level set to 0).
  FockVector component(std::uint32_t level) const;
  FockVector scaled(const Coefficient& c, std::int32_t hbar_shift = 0) const;

  FockVector& operator+=(const FockVector& rhs);
  FockVector& operator-=(const FockVector& rhs);
  friend FockVector operator*(const FockVector& x, const FockVector& y);  // Laurent product
  friend bool operator==(const FockVector& x, const FockVector& y) { return x.terms_ == y.terms_; }

 private:
  Terms terms_;
};

// adag -> z, a -> hbar d/dz.
FockVector apply_rho(const QSeries& f, const FockVector& psi);

// sum_n conj(c_n) d_n n! hbar^n, as a series in (hbar, t).
ScalarSeries inner_product(const FockVector& psi, const FockVector& chi);

// Exact Rayleigh-Schroedinger expansion of level n of f = p^2 + q^2 + O(t)
// through t^order, as a series in (hbar, t).
ScalarSeries rs_perturbation(const QSeries& f, unsigned level, int order);

// E_n(hbar, t) at a concrete level n of an (n, hbar, t) series.
ScalarSeries evaluate_level(const ScalarSeries& e, unsigned level);

using FockOperator = Eigen::MatrixXcd;

// Matrix of f in the normalized basis z^n / sqrt(n! hbar^n), n < dim.
FockOperator fock_matrix(const QSeries& f, int dim, double t, double hbar);
void write_csv(std::ostream& out, const FockOperator& m);

struct Diagonalization {
  std::vector<std::complex<double>> values;  // lowest `levels`, ascending real part
  bool hermitian = true;
  bool converged = false;
  std::string warning;
};
// Lowest eigenvalues at (t, hbar); converged when dimension dim + 10 moves
// none of them by more than 1e-10 relative.
Diagonalization diagonalize(const QSeries& f, double t, double hbar, int dim, int levels);

// sum_{n <= levels} pi(a^n f (adag)^n), as a series in (hbar, t).
ScalarSeries trace_hbar(const QSeries& f, unsigned levels);

}  // namespace qmorse

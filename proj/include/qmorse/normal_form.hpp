#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <utility>

#include "qmorse/qseries.hpp"
#include "qmorse/scalar_series.hpp"

namespace qmorse {

struct NormalFormResult {
  // f = scale * f_hat + shift with f_hat = p^2 + q^2 at t = 0.
  Coefficient scale;
  ScalarSeries shift{Signature::hbar_t(), {}};  // t-free
  QSeries f_hat{Truncation{}};
  ScalarSeries g{Signature::z_hbar_t(), {}};  // t-orders 0..N-1
  // Generator replayed by integrate_heisenberg, t-orders 0..N-1.
  QSeries h{Truncation{}};
  ScalarSeries u{Signature::z_hbar_t(), {}};  // u(0, z) = z
  ScalarSeries u_inv{Signature::z_hbar_t(), {}};
  ScalarSeries spectrum{Signature::n_hbar_t(), {}};
  int order = 0;
  Truncation truncation;
};

struct NormalFormOptions {
  int order = 4;
  // Doubled weight cap; chosen from the perturbation when absent.
  std::optional<int> weight_cap2;
  // Nonzero: shuffle the visiting order inside products (results must not change).
  std::uint64_t term_order_seed = 0;
};

// s with compose_scalar(s, 2 adag a + hbar) = d, for d built from (adag)^n a^n.
ScalarSeries diagonal_to_scalar(const QSeries& d);

struct HomologicalSplit {
  ScalarSeries s;
  QSeries k;
};
// r = s o f0 + (i/hbar)[f0, k], f0 = 2 adag a + hbar, k with zero diagonal.
HomologicalSplit split_homological(const QSeries& r);

// Smallest doubled weight cap that keeps every term of the solver inside the
// caps through t-order n.
int automatic_weight_cap2(const QSeries& f_hat, int n);

NormalFormResult quantum_morse(const QSeries& f, const NormalFormOptions& options);

// Compositional inverse in z of u = z + O(t).
ScalarSeries invert_series_z(const ScalarSeries& u);

// E_n = scale * u_inv(t, hbar (2n + 1)) + shift.
ScalarSeries spectrum_closure(const NormalFormResult& result);

// t -> hbar t on an (n, hbar, t) series.
ScalarSeries rescale_t(const ScalarSeries& e);

// compose_scalar(u, integrate_heisenberg(h, f_hat)) == 2 adag a + hbar.
bool verify_normal_form(const NormalFormResult& result);

using Matrix2 = std::array<std::array<Coefficient, 2>, 2>;
// (q, p) -> (m11 q + m12 p, m21 q + m22 p). Requires det = 1.
QSeries linear_symplectic(const QSeries& f, const Matrix2& m);

// Solves along f_s = Q + t (f0 - Q), Q the quadratic part of f0.
NormalFormResult reduce_to_harmonic(const QSeries& f0, const NormalFormOptions& options);

}  // namespace qmorse

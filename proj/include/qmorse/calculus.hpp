#pragma once

#include <optional>

#include "qmorse/qseries.hpp"
#include "qmorse/scalar_series.hpp"

namespace qmorse {

// -(i/hbar)[f, p] and (i/hbar)[f, q]. Differentiation lowers weight by 1/2,
// so the result cap is half a unit below the input cap.
QSeries d_dq(const QSeries& f);
QSeries d_dp(const QSeries& f);

// The antiderivative divisible by q (resp. p) on the left. The result cap is
// half a unit above the input cap. Output is normal ordered.
QSeries int_dq(const QSeries& f);
QSeries int_dp(const QSeries& f);

// G with f = q G (resp. p G), or nothing when f is not left-divisible.
std::optional<QSeries> left_divide_by_q(const QSeries& f);
std::optional<QSeries> left_divide_by_p(const QSeries& f);

struct DerivationSpec {
  QSeries dq;
  QSeries dp;
  std::optional<ScalarSeries> dt;
};

struct ReconstructedHamiltonian {
  QSeries h;
  std::optional<ScalarSeries> alpha;
};

// H with (i/hbar)[q, H] = Dq and (i/hbar)[p, H] = Dp. Throws DomainError
// "not a derivation" when [Dp, q] + [p, Dq] != 0.
ReconstructedHamiltonian reconstruct_hamiltonian(const DerivationSpec& d);

}  // namespace qmorse

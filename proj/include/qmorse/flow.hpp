#pragma once

#include "qmorse/qseries.hpp"

namespace qmorse {

// phi_t(f) with phi_0(f) = f and d/dt phi(f) = (i/hbar)[phi(f), H], solved
// order by order in t through order n. H may depend on t; phi is linear over
// the centre, so t-dependence in f is carried along.
QSeries integrate_heisenberg(const QSeries& h, const QSeries& f, int n);

// U with dU/dt = H U and U(0) = 1, through t-order n.
QSeries solve_propagator(const QSeries& h, int n);

}  // namespace qmorse

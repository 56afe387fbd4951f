#pragma once

#include <cstddef>

#include "qmorse/coefficient.hpp"

namespace qmorse {

// Default term-count guard, overridable through QMORSE_TERM_GUARD.
std::size_t default_term_guard();

// Truncation policy carried by every series value. Weights are half-integers
// and are stored doubled: weight(adag) = weight(a) = 1/2 -> 1, weight(hbar) -> 2.
struct Truncation {
  int t_cap = 0;
  int weight_cap2 = 0;
  std::size_t term_guard = default_term_guard();

  static Truncation make(int t_cap, const Rational& weight_cap);

  Rational weight_cap() const {
    Rational w(weight_cap2, 2);
    w.canonicalize();
    return w;
  }
  Truncation meet(const Truncation& other) const;
  Truncation with_t_cap(int cap) const;
  Truncation with_weight_cap2(int cap2) const;

  friend bool operator==(const Truncation& a, const Truncation& b) {
    return a.t_cap == b.t_cap && a.weight_cap2 == b.weight_cap2;
  }
};

}  // namespace qmorse

#include "qmorse/truncation.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "qmorse/errors.hpp"

namespace qmorse {

std::size_t default_term_guard() {
  static const std::size_t guard = [] {
    constexpr std::size_t kDefault = 1000000;
    const char* env = std::getenv("QMORSE_TERM_GUARD");
    if (env == nullptr || *env == '\0') return kDefault;
    try {
      long long v = std::stoll(env);
      return v > 0 ? static_cast<std::size_t>(v) : kDefault;
    } catch (const std::exception&) {
      return kDefault;
    }
  }();
  return guard;
}

Truncation Truncation::make(int t_cap, const Rational& weight_cap) {
  if (t_cap < 0) throw DomainError("t cap must be non-negative");
  Rational twice = 2 * weight_cap;
  if (twice.get_den() != 1 || sgn(twice) < 0) {
    throw DomainError("weight cap must be a non-negative half-integer");
  }
  Truncation tr;
  tr.t_cap = t_cap;
  tr.weight_cap2 = static_cast<int>(twice.get_num().get_si());
  return tr;
}

Truncation Truncation::meet(const Truncation& other) const {
  Truncation tr;
  tr.t_cap = std::min(t_cap, other.t_cap);
  tr.weight_cap2 = std::min(weight_cap2, other.weight_cap2);
  tr.term_guard = std::min(term_guard, other.term_guard);
  return tr;
}

Truncation Truncation::with_t_cap(int cap) const {
  Truncation tr = *this;
  tr.t_cap = cap;
  return tr;
}

Truncation Truncation::with_weight_cap2(int cap2) const {
  Truncation tr = *this;
  tr.weight_cap2 = cap2;
  return tr;
}

}  // namespace qmorse

#pragma once

#include <algorithm>
#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "qmorse/coefficient.hpp"
#include "qmorse/errors.hpp"

namespace qmorse::detail {

constexpr std::uint32_t kMaxExponent = 0xFFFF;

inline std::uint64_t pack4(std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d) {
  if (a > kMaxExponent || b > kMaxExponent || c > kMaxExponent || d > kMaxExponent) {
    throw ResourceError("exponent exceeds 65535");
  }
  return (std::uint64_t{a} << 48) | (std::uint64_t{b} << 32) | (std::uint64_t{c} << 16) |
         std::uint64_t{d};
}

inline std::array<std::uint32_t, 4> unpack4(std::uint64_t key) {
  return {static_cast<std::uint32_t>(key >> 48), static_cast<std::uint32_t>((key >> 32) & 0xFFFF),
          static_cast<std::uint32_t>((key >> 16) & 0xFFFF),
          static_cast<std::uint32_t>(key & 0xFFFF)};
}

// Hash-map accumulator keyed by packed exponents; `finish` yields the
// canonical sorted term list with zeros removed.
class Accumulator {
 public:
  explicit Accumulator(std::size_t guard) : guard_(guard) {}

  Coefficient& slot(std::uint64_t key) {
    auto [it, inserted] = map_.try_emplace(key);
    if (inserted && map_.size() > guard_) {
      throw ResourceError("term-count guard exceeded (" + std::to_string(guard_) +
                          " terms); raise QMORSE_TERM_GUARD or lower the caps");
    }
    return it->second;
  }

  void add(std::uint64_t key, const Coefficient& c) { slot(key) += c; }

  std::vector<std::pair<std::uint64_t, Coefficient>> finish() && {
    std::vector<std::pair<std::uint64_t, Coefficient>> out;
    out.reserve(map_.size());
    for (auto& [key, coef] : map_) {
      if (!coef.is_zero()) out.emplace_back(key, std::move(coef));
    }
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
  }

 private:
  std::size_t guard_;
  std::unordered_map<std::uint64_t, Coefficient> map_;
};

}  // namespace qmorse::detail

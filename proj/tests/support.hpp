#pragma once

#include <array>
#include <map>
#include <random>
#include <vector>

#include "qmorse/qseries.hpp"

namespace qmorse::testing {

inline Truncation caps(int t_cap, int weight_cap2) {
  Truncation tr;
  tr.t_cap = t_cap;
  tr.weight_cap2 = weight_cap2;
  return tr;
}

// Large caps for checks that must not see truncation.
inline Truncation wide() { return caps(12, 60); }

inline Coefficient random_coefficient(std::mt19937& rng, bool rational_only = false) {
  std::uniform_int_distribution<int> num(-5, 5);
  std::uniform_int_distribution<int> den(1, 4);
  auto r = [&] {
    Rational x(num(rng), den(rng));
    x.canonicalize();
    return x;
  };
  if (rational_only) return Coefficient(r());
  std::uniform_int_distribution<int> pick(0, 3);
  Coefficient c(r());
  if (pick(rng) == 0) c += Coefficient(0, r(), 0, 0);
  if (pick(rng) == 0) c += Coefficient(0, 0, r(), 0);
  return c;
}

inline QSeries random_series(std::mt19937& rng, Truncation tr, int terms, int max_gen,
                             int max_hbar = 1, int max_t = 0, bool rational_only = false) {
  std::uniform_int_distribution<int> gen(0, max_gen);
  std::uniform_int_distribution<int> hb(0, max_hbar);
  std::uniform_int_distribution<int> tt(0, max_t);
  std::vector<QSeries::Term> out;
  for (int k = 0; k < terms; ++k) {
    QMonomial m{static_cast<std::uint32_t>(gen(rng)), static_cast<std::uint32_t>(gen(rng)),
                static_cast<std::uint32_t>(hb(rng)), static_cast<std::uint32_t>(tt(rng))};
    out.emplace_back(m, random_coefficient(rng, rational_only));
  }
  return QSeries::from_terms(std::move(out), tr);
}

// Brute-force normal ordering of a word in {a, adag}: rewrites the leftmost
// "a adag" pair as "adag a + hbar" until none is left. Letters: 'L' = adag,
// 'R' = a. Result keyed by (left, right, hbar).
inline std::map<std::array<unsigned, 3>, Coefficient> rewrite_word(const std::vector<char>& word) {
  std::map<std::array<unsigned, 3>, Coefficient> out;
  // (word, hbar power) -> coefficient
  std::map<std::pair<std::vector<char>, unsigned>, Coefficient> work{{{word, 0}, Coefficient(1)}};
  while (!work.empty()) {
    auto node = work.begin();
    auto [w, k] = node->first;
    Coefficient c = node->second;
    work.erase(node);
    std::size_t pos = w.size();
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i] == 'R' && w[i + 1] == 'L') {
        pos = i;
        break;
      }
    }
    if (pos == w.size()) {
      unsigned left = 0;
      unsigned right = 0;
      for (char ch : w) (ch == 'L' ? left : right)++;
      out[{left, right, k}] += c;
      continue;
    }
    std::vector<char> swapped = w;
    std::swap(swapped[pos], swapped[pos + 1]);
    work[{swapped, k}] += c;
    std::vector<char> contracted(w.begin(), w.begin() + static_cast<long>(pos));
    contracted.insert(contracted.end(), w.begin() + static_cast<long>(pos) + 2, w.end());
    work[{contracted, k + 1}] += c;
  }
  return out;
}

inline QSeries word_to_series(const std::vector<char>& word, Truncation tr) {
  std::vector<QSeries::Term> terms;
  for (auto& [e, c] : rewrite_word(word)) terms.push_back({{e[0], e[1], e[2], 0}, c});
  return QSeries::from_terms(std::move(terms), tr);
}

}  // namespace qmorse::testing

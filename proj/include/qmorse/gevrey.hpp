#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qmorse/coefficient.hpp"
#include "qmorse/json_io.hpp"
#include "qmorse/scalar_series.hpp"

namespace qmorse {

enum class Verdict { gevrey1_consistent, inconclusive, violated };
std::string to_string(Verdict v);

struct GevreyThresholds {
  double band_ratio = 4.0;  // max/min ratio allowed for a consistent verdict
  double max_slope = 0.5;   // log-log slope above which growth is too fast
  int min_nonzero = 6;
};

struct BorelReport {
  std::string source;
  int k_min = 0;
  int k_max = 0;
  std::vector<double> alpha;
  std::vector<double> beta;  // alpha_k / k!
  // (k, |beta_{k+1}| / |beta_k|) over the window, zeros skipped.
  std::vector<std::pair<int, double>> ratios;
  std::vector<double> roots;  // |beta_k|^(1/k), k >= 1
  std::optional<double> slope;
  std::optional<double> radius;
  Verdict verdict = Verdict::inconclusive;
};

// Coefficients of E / hbar in lambda = t hbar^w at level n*; each term
// t^l hbar^k n^j must have k = 1 + w l.
std::vector<Coefficient> extract_diagonal(const ScalarSeries& e, unsigned level, const Rational& w);

// Every term t^l hbar^k n^j has k = l (d/2 - 1) + 1.
bool homogeneity_check(const ScalarSeries& e, unsigned degree);

BorelReport gevrey_report(const std::vector<Coefficient>& alpha, int k_min, int k_max,
                          const GevreyThresholds& thresholds = {});
BorelReport gevrey_report(const std::vector<double>& alpha, int k_min, int k_max,
                          const GevreyThresholds& thresholds = {});

Json to_json(const BorelReport& report);

}  // namespace qmorse

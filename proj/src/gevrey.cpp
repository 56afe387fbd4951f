#include "qmorse/gevrey.hpp"

#include <algorithm>
#include <cmath>

#include "qmorse/errors.hpp"

namespace qmorse {

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::gevrey1_consistent:
      return "gevrey1-consistent";
    case Verdict::inconclusive:
      return "inconclusive";
    case Verdict::violated:
      return "violated";
  }
  return "inconclusive";
}

std::vector<Coefficient> extract_diagonal(const ScalarSeries& e, unsigned level, const Rational& w) {
  const int n = e.signature().index_of("n");
  const int h = e.signature().hbar_index();
  const int t = e.signature().t_index();
  if (n < 0 || h < 0 || t < 0) throw DomainError("expected a series in (n, hbar, t)");
  std::vector<Coefficient> out;
  for (const auto& [x, c] : e.terms()) {
    Rational expected = 1 + w * x[t];
    if (expected != Rational(x[h])) {
      throw DomainError("series is not homogeneous for the requested exponent");
    }
    if (out.size() <= x[t]) out.resize(x[t] + 1);
    Rational power(1);
    for (std::uint32_t r = 0; r < x[n]; ++r) power *= level;
    Coefficient value = c;
    value *= power;
    out[x[t]] += value;
  }
  return out;
}

bool homogeneity_check(const ScalarSeries& e, unsigned degree) {
  const int h = e.signature().hbar_index();
  const int t = e.signature().t_index();
  if (h < 0 || t < 0) return false;
  for (const auto& [x, c] : e.terms()) {
    // 2k = l (d - 2) + 2
    if (2 * static_cast<long>(x[h]) != static_cast<long>(x[t]) * (static_cast<long>(degree) - 2) + 2) {
      return false;
    }
  }
  return true;
}

namespace {

// Growth only looks at magnitudes; real values keep their sign for display.
double real_or_modulus(const Coefficient& c) {
  const auto z = c.to_complex();
  return z.imag() == 0.0 ? z.real() : std::abs(z);
}

BorelReport analyse(std::vector<double> alpha, std::vector<double> beta, int k_min, int k_max,
                    const GevreyThresholds& th) {
  if (k_min < 0 || k_max < k_min) throw DomainError("window must satisfy 0 <= k_min <= k_max");
  if (static_cast<int>(alpha.size()) < k_max + 2) {
    throw DomainError("window needs coefficients through k_max + 1");
  }
  BorelReport report;
  report.k_min = k_min;
  report.k_max = k_max;
  report.alpha = std::move(alpha);
  report.beta = std::move(beta);
  for (std::size_t k = 1; k < report.beta.size(); ++k) {
    report.roots.push_back(std::pow(std::abs(report.beta[k]), 1.0 / static_cast<double>(k)));
  }
  int nonzero = 0;
  for (int k = k_min; k <= k_max + 1; ++k) {
    if (report.beta[k] != 0.0) ++nonzero;
  }
  for (int k = k_min; k <= k_max; ++k) {
    if (report.beta[k] == 0.0 || report.beta[k + 1] == 0.0) continue;
    report.ratios.emplace_back(k, std::abs(report.beta[k + 1]) / std::abs(report.beta[k]));
  }
  if (nonzero < th.min_nonzero || report.ratios.size() < 2) return report;

  // Least squares fit of log ratio against log k (k >= 1).
  double sx = 0;
  double sy = 0;
  double sxx = 0;
  double sxy = 0;
  int count = 0;
  for (const auto& [k, r] : report.ratios) {
    if (k < 1) continue;
    const double x = std::log(static_cast<double>(k));
    const double y = std::log(r);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++count;
  }
  if (count >= 2 && count * sxx - sx * sx > 0) {
    report.slope = (count * sxy - sx * sy) / (count * sxx - sx * sx);
  }

  std::vector<double> upper;
  const double middle = 0.5 * (k_min + k_max);
  for (const auto& [k, r] : report.ratios) {
    if (k >= middle) upper.push_back(r);
  }
  if (!upper.empty()) {
    std::sort(upper.begin(), upper.end());
    const std::size_t mid = upper.size() / 2;
    const double median = upper.size() % 2 == 1 ? upper[mid] : 0.5 * (upper[mid - 1] + upper[mid]);
    if (median > 0) report.radius = 1.0 / median;
  }

  const auto [lo, hi] = std::minmax_element(report.ratios.begin(), report.ratios.end(),
                                            [](const auto& x, const auto& y) { return x.second < y.second; });
  if (report.slope && *report.slope > th.max_slope) {
    report.verdict = Verdict::violated;
  } else if (hi->second < th.band_ratio * lo->second) {
    report.verdict = Verdict::gevrey1_consistent;
  }
  return report;
}

}  // namespace

BorelReport gevrey_report(const std::vector<Coefficient>& alpha, int k_min, int k_max,
                          const GevreyThresholds& thresholds) {
  std::vector<double> a;
  std::vector<double> b;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    a.push_back(real_or_modulus(alpha[k]));
    b.push_back(real_or_modulus(alpha[k] / Coefficient(factorial(k))));
  }
  return analyse(std::move(a), std::move(b), k_min, k_max, thresholds);
}

BorelReport gevrey_report(const std::vector<double>& alpha, int k_min, int k_max,
                          const GevreyThresholds& thresholds) {
  std::vector<double> b;
  for (std::size_t k = 0; k < alpha.size(); ++k) {
    b.push_back(alpha[k] / std::tgamma(static_cast<double>(k) + 1.0));
  }
  return analyse(alpha, std::move(b), k_min, k_max, thresholds);
}

Json to_json(const BorelReport& report) {
  Json ratios = Json::array();
  for (const auto& [k, r] : report.ratios) ratios.push_back({{"k", k}, {"ratio", r}});
  Json out = {{"source", report.source},
              {"window", {report.k_min, report.k_max}},
              {"alpha", report.alpha},
              {"beta", report.beta},
              {"ratios", ratios},
              {"roots", report.roots},
              {"verdict", to_string(report.verdict)}};
  out["slope"] = report.slope ? Json(*report.slope) : Json(nullptr);
  out["radius"] = report.radius ? Json(*report.radius) : Json(nullptr);
  return out;
}

}  // namespace qmorse

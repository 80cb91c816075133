#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace benford {

namespace detail {

inline void check_pvalues(std::span<const double> p) {
  if (p.empty()) throw std::domain_error("p-value adjustment: empty vector");
  for (double v : p) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::domain_error("p-value outside [0,1]");
  }
}

/// Step-up adjustment q_(i) = min(1, min_{j>=i} scale * (m/j) * p_(j)) on the
/// sorted p-values, mapped back to input order. scale = 1 gives BH, scale =
/// c(m) gives BY.
inline std::vector<double> step_up_adjust(std::span<const double> p, double scale) {
  check_pvalues(p);
  const std::size_t m = p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return p[a] < p[b]; });
  std::vector<double> adjusted(m);
  double suffix_min = 1.0;
  for (std::size_t i = m; i-- > 0;) {
    const double q = scale * (static_cast<double>(m) / static_cast<double>(i + 1)) * p[order[i]];
    suffix_min = std::min(suffix_min, q);
    adjusted[order[i]] = std::min(1.0, suffix_min);
  }
  return adjusted;
}

}  // namespace detail

/// Benjamini-Hochberg step-up adjustment.
inline std::vector<double> bh_adjust(std::span<const double> p) {
  return detail::step_up_adjust(p, 1.0);
}

/// Benjamini-Yekutieli adjustment: BH scaled by c(m) = sum_{i=1..m} 1/i,
/// valid under arbitrary dependence.
inline std::vector<double> by_adjust(std::span<const double> p) {
  detail::check_pvalues(p);
  double c = 0.0;
  for (std::size_t i = 1; i <= p.size(); ++i) c += 1.0 / static_cast<double>(i);
  return detail::step_up_adjust(p, c);
}

inline std::vector<double> bh_adjust(const std::vector<double>& p) {
  return bh_adjust(std::span<const double>(p));
}
inline std::vector<double> by_adjust(const std::vector<double>& p) {
  return by_adjust(std::span<const double>(p));
}

/// Bonferroni split: per-family error budget alpha / families.
inline double bonferroni_level(double alpha, int families) {
  if (!(alpha > 0.0 && alpha < 1.0)) throw std::domain_error("bonferroni_level: alpha must be in (0,1)");
  if (families < 1) throw std::domain_error("bonferroni_level: families must be >= 1");
  return alpha / static_cast<double>(families);
}

/// A jointly adjusted family of labelled p-values.
struct PValueFamily {
  std::vector<std::pair<std::string, double>> entries;
  std::vector<double> adjusted_bh;
  std::vector<double> adjusted_by;

  void adjust() {
    std::vector<double> raw;
    raw.reserve(entries.size());
    for (const auto& e : entries) raw.push_back(e.second);
    adjusted_bh = bh_adjust(raw);
    adjusted_by = by_adjust(raw);
  }
};

}  // namespace benford

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "benford/digits.hpp"

namespace benford {

/// Simultaneous confidence bounds for multinomial cell proportions.
/// All intervals share the half-width (c + 2*gamma)/n before clipping.
struct MultinomialIntervals {
  std::vector<double> lower;
  std::vector<double> upper;
  double confidence = 0.0;
  int c_value = 0;
  double gamma = 0.0;
};

/// Digit-indexed wrapper around MultinomialIntervals.
struct IntervalSet {
  DigitPosition position = DigitPosition::First;
  std::vector<double> lower;
  std::vector<double> upper;
  double confidence = 0.0;
  int c_value = 0;
  double gamma = 0.0;
};

namespace detail {

inline double poisson_pmf(std::int64_t k, double lambda) {
  if (k < 0) return 0.0;
  if (lambda == 0.0) return k == 0 ? 1.0 : 0.0;
  return std::exp(static_cast<double>(k) * std::log(lambda) - lambda -
                  std::lgamma(static_cast<double>(k) + 1.0));
}

/// Sum of Poisson(lambda) pmf over [lo, hi].
inline double poisson_window(std::int64_t lo, std::int64_t hi, double lambda) {
  lo = std::max<std::int64_t>(lo, 0);
  double s = 0.0;
  for (std::int64_t k = lo; k <= hi; ++k) s += poisson_pmf(k, lambda);
  return s;
}

struct CellMoments {
  double mean = 0, var = 0, mu3 = 0, mu4 = 0, mass = 0;
};

/// Central moments of a Poisson(lambda) variable truncated to
/// [lambda - c, lambda + c] (lambda is the integer cell count). Computed from
/// the factorial-moment window sums; supports are finite so everything is a
/// direct summation.
inline CellMoments truncated_cell_moments(std::int64_t count, std::int64_t c) {
  const double lambda = static_cast<double>(count);
  const std::int64_t a = count + c;
  const std::int64_t b = std::max<std::int64_t>(count - c, 0);
  CellMoments m;
  m.mass = poisson_window(b, a, lambda);
  if (m.mass <= 0.0) m.mass = 1.0;
  double mu[5] = {0, 0, 0, 0, 0};
  for (int r = 1; r <= 4; ++r) {
    const double win_a = poisson_window(a - r + 1, a, lambda);
    const double win_b = poisson_window(b - r, b - 1, lambda);
    mu[r] = std::pow(lambda, r) * (1.0 - (win_a - win_b) / m.mass);
  }
  m.mean = mu[1];
  m.var = mu[2] + mu[1] - mu[1] * mu[1];
  m.mu3 = mu[3] + mu[2] * (3 - 3 * mu[1]) + (mu[1] - 3 * mu[1] * mu[1] + 2 * mu[1] * mu[1] * mu[1]);
  m.mu4 = mu[4] + mu[3] * (6 - 4 * mu[1]) + mu[2] * (7 - 12 * mu[1] + 6 * mu[1] * mu[1]) +
          mu[1] - 4 * mu[1] * mu[1] + 6 * mu[1] * mu[1] * mu[1] - 3 * mu[1] * mu[1] * mu[1] * mu[1];
  return m;
}

}  // namespace detail

/// Approximate simultaneous coverage nu(c) = P(for all d, |N_d - counts_d| <= c)
/// via independent truncated-Poisson cells and an Edgeworth-corrected
/// conditioning factor for the truncated sum landing on n.
inline double sg_coverage(std::span<const std::int64_t> counts, std::int64_t c) {
  std::int64_t n = 0;
  for (std::int64_t x : counts) {
    if (x < 0) throw std::domain_error("sg_coverage: negative cell count");
    n += x;
  }
  if (n < 1) throw std::domain_error("sg_coverage: n must be >= 1");
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0, prob_cells = 1.0;
  for (std::int64_t x : counts) {
    const auto m = detail::truncated_cell_moments(x, c);
    s1 += m.mean;
    s2 += m.var;
    s3 += m.mu3;
    s4 += m.mu4 - 3.0 * m.var * m.var;  // fourth cumulant
    prob_cells *= m.mass;
  }
  const double prob_n = 1.0 / detail::poisson_pmf(n, static_cast<double>(n));
  if (s2 <= 0.0) {
    // All cells degenerate: the truncated sum is a point mass at s1.
    return std::abs(s1 - static_cast<double>(n)) < 0.5 ? prob_n * prob_cells : 0.0;
  }
  const double z = (static_cast<double>(n) - s1) / std::sqrt(s2);
  const double g1 = s3 / std::pow(s2, 1.5);
  const double g2 = s4 / (s2 * s2);
  const double z2 = z * z;
  const double poly = 1.0 + g1 * (z2 * z - 3 * z) / 6.0 + g2 * (z2 * z2 - 6 * z2 + 3) / 24.0 +
                      g1 * g1 * (z2 * z2 * z2 - 15 * z2 * z2 + 45 * z2 - 15) / 72.0;
  const double density = poly * std::exp(-z2 / 2.0) / std::sqrt(2.0 * M_PI);
  return prob_n * prob_cells * density / std::sqrt(s2);
}

namespace detail {

template <typename Nu>
inline MultinomialIntervals build_intervals(std::span<const std::int64_t> counts, double confidence,
                                            Nu&& nu) {
  if (counts.size() < 2) throw std::domain_error("simultaneous intervals need at least 2 cells");
  if (!(confidence > 0.0 && confidence < 1.0)) {
    throw std::domain_error("confidence must be in (0,1)");
  }
  std::int64_t n = 0;
  for (std::int64_t x : counts) {
    if (x < 0) throw std::domain_error("negative cell count");
    n += x;
  }
  if (n < 1) throw std::domain_error("simultaneous intervals: n must be >= 1");

  MultinomialIntervals out;
  out.confidence = confidence;
  double nu_c = nu(counts, std::int64_t{0});
  if (nu_c >= confidence) {
    out.c_value = 0;
    out.gamma = 0.0;
  } else {
    std::int64_t c = 0;
    while (true) {
      const double nu_next = nu(counts, c + 1);
      if (nu_next >= confidence || c + 1 >= n) {
        out.c_value = static_cast<int>(c);
        out.gamma = nu_next > nu_c ? (confidence - nu_c) / (nu_next - nu_c) : 0.0;
        break;
      }
      nu_c = nu_next;
      ++c;
    }
  }
  const double half = static_cast<double>(out.c_value) / static_cast<double>(n);
  const double slack = 2.0 * out.gamma / static_cast<double>(n);
  for (std::int64_t x : counts) {
    const double phat = static_cast<double>(x) / static_cast<double>(n);
    out.lower.push_back(std::max(0.0, phat - half));
    out.upper.push_back(std::min(1.0, phat + half + slack));
  }
  return out;
}

/// Visits every composition of n into k parts.
template <typename Fn>
inline void for_each_composition(std::int64_t n, std::size_t k, std::vector<std::int64_t>& vec,
                                 std::size_t index, Fn&& fn) {
  if (index + 1 == k) {
    vec[index] = n;
    fn(vec);
    return;
  }
  for (std::int64_t i = 0; i <= n; ++i) {
    vec[index] = i;
    for_each_composition(n - i, k, vec, index + 1, fn);
  }
}

inline double log_multinomial_pmf(std::span<const std::int64_t> outcome, std::int64_t n,
                                  std::span<const double> p) {
  double lp = std::lgamma(static_cast<double>(n) + 1.0);
  for (std::size_t i = 0; i < outcome.size(); ++i) {
    if (p[i] == 0.0) {
      if (outcome[i] != 0) return -std::numeric_limits<double>::infinity();
      continue;
    }
    lp += static_cast<double>(outcome[i]) * std::log(p[i]) -
          std::lgamma(static_cast<double>(outcome[i]) + 1.0);
  }
  return lp;
}

inline std::uint64_t composition_count(std::int64_t n, std::size_t k) {
  // C(n + k - 1, k - 1), saturating.
  long double v = 1.0L;
  for (std::size_t i = 1; i < k; ++i) {
    v *= static_cast<long double>(n + static_cast<std::int64_t>(i)) / static_cast<long double>(i);
    if (v > 1e18L) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(v + 0.5L);
}

}  // namespace detail

/// Exact simultaneous coverage under the MLE p-hat, by full enumeration of
/// the multinomial state space.
inline double sg_coverage_exact(std::span<const std::int64_t> counts, std::int64_t c) {
  std::int64_t n = 0;
  for (std::int64_t x : counts) n += x;
  if (n < 1) throw std::domain_error("sg_coverage_exact: n must be >= 1");
  std::vector<double> p;
  for (std::int64_t x : counts) p.push_back(static_cast<double>(x) / static_cast<double>(n));
  double total = 0.0;
  std::vector<std::int64_t> vec(counts.size());
  detail::for_each_composition(n, counts.size(), vec, 0, [&](const std::vector<std::int64_t>& outcome) {
    for (std::size_t i = 0; i < outcome.size(); ++i) {
      if (std::llabs(outcome[i] - counts[i]) > c) return;
    }
    const double lp = detail::log_multinomial_pmf(outcome, n, p);
    if (lp > -std::numeric_limits<double>::infinity()) total += std::exp(lp);
  });
  return total;
}

/// Sison-Glaz simultaneous intervals: find c with nu(c) < confidence <=
/// nu(c+1), interpolate gamma, and report [p - c/n, p + c/n + 2*gamma/n]
/// clipped to [0,1].
inline MultinomialIntervals sison_glaz(std::span<const std::int64_t> counts, double confidence) {
  return detail::build_intervals(counts, confidence, [](std::span<const std::int64_t> x, std::int64_t c) {
    return sg_coverage(x, c);
  });
}

/// Same construction with nu computed exactly by enumeration; the validation
/// oracle for sison_glaz on small state spaces.
inline MultinomialIntervals exact_intervals(std::span<const std::int64_t> counts, double confidence,
                                            std::uint64_t max_states = 2'000'000) {
  std::int64_t n = 0;
  for (std::int64_t x : counts) n += x;
  if (detail::composition_count(n, counts.size()) > max_states) {
    throw std::length_error("exact_intervals: multinomial state space exceeds max_states");
  }
  return detail::build_intervals(counts, confidence, [](std::span<const std::int64_t> x, std::int64_t c) {
    return sg_coverage_exact(x, c);
  });
}

namespace detail {

inline IntervalSet to_interval_set(const MultinomialIntervals& iv, DigitPosition position) {
  IntervalSet set;
  set.position = position;
  set.lower = iv.lower;
  set.upper = iv.upper;
  set.confidence = iv.confidence;
  set.c_value = iv.c_value;
  set.gamma = iv.gamma;
  return set;
}

}  // namespace detail

inline IntervalSet sison_glaz_intervals(const DigitCounts& counts, double confidence) {
  return detail::to_interval_set(sison_glaz(counts.counts, confidence), counts.position);
}

inline IntervalSet exact_intervals_small(const DigitCounts& counts, double confidence,
                                         std::uint64_t max_states = 2'000'000) {
  return detail::to_interval_set(exact_intervals(counts.counts, confidence, max_states),
                                 counts.position);
}

}  // namespace benford

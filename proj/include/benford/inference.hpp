#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "benford/digits.hpp"
#include "benford/rng.hpp"

namespace benford {

struct TestResult {
  enum class Kind { GoodnessOfFit, Independence };

  double statistic = 0.0;
  double p_raw = 1.0;
  int replications = 0;
  std::uint64_t seed = 0;
  Kind test_kind = Kind::GoodnessOfFit;
  std::string label;
  /// Asymptotic chi-squared p-value, reported as a diagnostic next to the
  /// Monte-Carlo one.
  double p_asymptotic = 1.0;
  int df = 0;
};

/// Survival function of the chi-squared distribution.
inline double chi2_sf(double statistic, int df) {
  if (statistic <= 0.0) return 1.0;
  return boost::math::gamma_q(static_cast<double>(df) / 2.0, statistic / 2.0);
}

/// Pearson goodness-of-fit statistic sum_d (O_d - n p_d)^2 / (n p_d).
inline double chi2_gof_statistic(const DigitCounts& observed, const DigitDistribution& expected) {
  if (observed.position != expected.position) {
    throw std::domain_error("chi2_gof_statistic: digit position mismatch");
  }
  if (observed.n <= 0) {
    throw std::domain_error("chi2_gof_statistic: sample size must be positive");
  }
  if (observed.counts.size() != expected.probabilities.size()) {
    throw std::domain_error("chi2_gof_statistic: cell count mismatch");
  }
  const double n = static_cast<double>(observed.n);
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.counts.size(); ++i) {
    const double e = n * expected.probabilities[i];
    const double diff = static_cast<double>(observed.counts[i]) - e;
    stat += diff * diff / e;
  }
  return stat;
}

namespace detail {

inline void check_probs(std::span<const double> probs) {
  if (probs.empty()) throw std::domain_error("sample_multinomial: empty probability vector");
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0 || !(p == p)) throw std::domain_error("sample_multinomial: invalid probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    throw std::domain_error("sample_multinomial: probabilities sum to " + std::to_string(sum));
  }
}

}  // namespace detail

/// One multinomial draw of n trials. Small n uses per-trial CDF inversion;
/// large n falls back to conditional binomials. The branch depends only on n,
/// so a fixed stream always yields the same vector.
inline std::vector<std::int64_t> sample_multinomial(std::int64_t n, std::span<const double> probs,
                                                    SplitMix64& rng) {
  detail::check_probs(probs);
  if (n < 1) throw std::domain_error("sample_multinomial: n must be >= 1");
  const std::size_t k = probs.size();
  std::vector<std::int64_t> counts(k, 0);
  if (n < 5000) {
    std::vector<double> cdf(k);
    double acc = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
      acc += probs[i];
      cdf[i] = acc;
    }
    cdf[k - 1] = 1.0;
    for (std::int64_t t = 0; t < n; ++t) {
      const double u = rng.next_double();
      std::size_t i = 0;
      while (u >= cdf[i]) ++i;
      ++counts[i];
    }
  } else {
    std::int64_t remaining = n;
    double mass = 1.0;
    for (std::size_t i = 0; i + 1 < k && remaining > 0; ++i) {
      const double p = std::clamp(probs[i] / mass, 0.0, 1.0);
      std::binomial_distribution<std::int64_t> binom(remaining, p);
      const std::int64_t c = binom(rng);
      counts[i] = c;
      remaining -= c;
      mass -= probs[i];
    }
    counts[k - 1] += remaining;
  }
  return counts;
}

/// Monte-Carlo goodness-of-fit test: B multinomial replicates under the
/// expected distribution, add-one p-value (1 + #{T_b >= T_obs}) / (B + 1).
inline TestResult mc_gof_test(const DigitCounts& observed, const DigitDistribution& expected,
                              int replications, std::uint64_t seed, std::string label = {}) {
  if (replications < 1) throw std::domain_error("mc_gof_test: replications must be >= 1");
  TestResult result;
  result.test_kind = TestResult::Kind::GoodnessOfFit;
  result.label = std::move(label);
  result.replications = replications;
  result.seed = seed;
  result.statistic = chi2_gof_statistic(observed, expected);
  result.df = static_cast<int>(expected.probabilities.size()) - 1;
  result.p_asymptotic = chi2_sf(result.statistic, result.df);

  DigitCounts replicate;
  replicate.position = observed.position;
  replicate.n = observed.n;
  std::int64_t tail = 0;
  for (int b = 0; b < replications; ++b) {
    SplitMix64 rng = replicate_stream(seed, static_cast<std::uint64_t>(b));
    replicate.counts = sample_multinomial(observed.n, expected.probabilities, rng);
    if (chi2_gof_statistic(replicate, expected) >= result.statistic) ++tail;
  }
  result.p_raw = static_cast<double>(1 + tail) / static_cast<double>(replications + 1);
  return result;
}

struct ContingencyTable {
  std::vector<std::string> rows;
  std::vector<std::string> cols;
  /// cells[r][c], non-negative.
  std::vector<std::vector<std::int64_t>> cells;
};

namespace detail {

/// Drops all-zero rows and columns; errors if fewer than 2 of either remain.
inline ContingencyTable reduce_table(const ContingencyTable& table) {
  const std::size_t nr = table.cells.size();
  const std::size_t nc = nr ? table.cells[0].size() : 0;
  std::vector<std::int64_t> row_sum(nr, 0), col_sum(nc, 0);
  for (std::size_t r = 0; r < nr; ++r) {
    if (table.cells[r].size() != nc) throw std::domain_error("contingency table is ragged");
    for (std::size_t c = 0; c < nc; ++c) {
      if (table.cells[r][c] < 0) throw std::domain_error("contingency table has negative cell");
      row_sum[r] += table.cells[r][c];
      col_sum[c] += table.cells[r][c];
    }
  }
  ContingencyTable out;
  std::vector<std::size_t> keep_cols;
  for (std::size_t c = 0; c < nc; ++c) {
    if (col_sum[c] > 0) {
      keep_cols.push_back(c);
      out.cols.push_back(table.cols.empty() ? std::to_string(c) : table.cols[c]);
    }
  }
  for (std::size_t r = 0; r < nr; ++r) {
    if (row_sum[r] == 0) continue;
    out.rows.push_back(table.rows.empty() ? std::to_string(r) : table.rows[r]);
    std::vector<std::int64_t> row;
    for (std::size_t c : keep_cols) row.push_back(table.cells[r][c]);
    out.cells.push_back(std::move(row));
  }
  if (out.cells.size() < 2 || out.cols.size() < 2) {
    throw std::domain_error("independence test needs at least 2 nonzero rows and columns");
  }
  return out;
}

inline double chi2_independence_reduced(const ContingencyTable& table) {
  const std::size_t nr = table.cells.size();
  const std::size_t nc = table.cells[0].size();
  std::vector<double> row_sum(nr, 0.0), col_sum(nc, 0.0);
  double total = 0.0;
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t c = 0; c < nc; ++c) {
      const double v = static_cast<double>(table.cells[r][c]);
      row_sum[r] += v;
      col_sum[c] += v;
      total += v;
    }
  }
  double stat = 0.0;
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t c = 0; c < nc; ++c) {
      const double e = row_sum[r] * col_sum[c] / total;
      const double diff = static_cast<double>(table.cells[r][c]) - e;
      stat += diff * diff / e;
    }
  }
  return stat;
}

}  // namespace detail

/// Pearson independence statistic with E_ij = row_i * col_j / total.
/// All-zero rows and columns are dropped first.
inline double chi2_independence_statistic(const ContingencyTable& table) {
  return detail::chi2_independence_reduced(detail::reduce_table(table));
}

/// Monte-Carlo independence test. Replicate tables are drawn uniformly over
/// tables with both margins fixed, by shuffling unit-level column labels and
/// re-cutting them into rows.
inline TestResult mc_independence_test(const ContingencyTable& table, int replications,
                                       std::uint64_t seed, std::string label = {}) {
  if (replications < 1) throw std::domain_error("mc_independence_test: replications must be >= 1");
  const ContingencyTable reduced = detail::reduce_table(table);
  const std::size_t nr = reduced.cells.size();
  const std::size_t nc = reduced.cells[0].size();

  TestResult result;
  result.test_kind = TestResult::Kind::Independence;
  result.label = std::move(label);
  result.replications = replications;
  result.seed = seed;
  result.statistic = detail::chi2_independence_reduced(reduced);
  result.df = static_cast<int>((nr - 1) * (nc - 1));
  result.p_asymptotic = chi2_sf(result.statistic, result.df);

  std::vector<std::int64_t> row_sum(nr, 0);
  std::vector<std::uint8_t> labels;  // column index per unit
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t c = 0; c < nc; ++c) {
      row_sum[r] += reduced.cells[r][c];
      for (std::int64_t i = 0; i < reduced.cells[r][c]; ++i) {
        labels.push_back(static_cast<std::uint8_t>(c));
      }
    }
  }

  std::int64_t tail = 0;
  std::vector<std::uint8_t> shuffled;
  ContingencyTable replicate = reduced;
  for (int b = 0; b < replications; ++b) {
    SplitMix64 rng = replicate_stream(seed, static_cast<std::uint64_t>(b));
    shuffled = labels;
    for (std::size_t i = shuffled.size(); i > 1; --i) {
      std::swap(shuffled[i - 1], shuffled[rng.next_below(i)]);
    }
    std::size_t offset = 0;
    for (std::size_t r = 0; r < nr; ++r) {
      std::fill(replicate.cells[r].begin(), replicate.cells[r].end(), 0);
      for (std::int64_t i = 0; i < row_sum[r]; ++i) {
        ++replicate.cells[r][shuffled[offset++]];
      }
    }
    if (detail::chi2_independence_reduced(replicate) >= result.statistic) ++tail;
  }
  result.p_raw = static_cast<double>(1 + tail) / static_cast<double>(replications + 1);
  return result;
}

struct QuantileSummary {
  double min = 0, q025 = 0, q25 = 0, median = 0, q75 = 0, q975 = 0, max = 0;
};

/// Linear-interpolation empirical quantile on a sorted sample.
inline double sorted_quantile(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw std::domain_error("quantile of empty sample");
  const double h = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= sorted.size()) return sorted.back();
  const double w = h - static_cast<double>(lo);
  return sorted[lo] * (1.0 - w) + sorted[lo + 1] * w;
}

/// Per-digit quantile summaries of B simulated proportions under `expected`
/// at sample size n (the violin-plot data of the study figures).
inline std::vector<QuantileSummary> violin_quantiles(const DigitDistribution& expected,
                                                     std::int64_t n, int replications,
                                                     std::uint64_t seed) {
  if (n < 1) throw std::domain_error("violin_quantiles: n must be >= 1");
  if (replications < 1) throw std::domain_error("violin_quantiles: replications must be >= 1");
  const std::size_t k = expected.probabilities.size();
  std::vector<std::vector<double>> proportions(k, std::vector<double>(static_cast<std::size_t>(replications)));
  for (int b = 0; b < replications; ++b) {
    SplitMix64 rng = replicate_stream(seed, static_cast<std::uint64_t>(b));
    const auto counts = sample_multinomial(n, expected.probabilities, rng);
    for (std::size_t i = 0; i < k; ++i) {
      proportions[i][static_cast<std::size_t>(b)] =
          static_cast<double>(counts[i]) / static_cast<double>(n);
    }
  }
  std::vector<QuantileSummary> out(k);
  for (std::size_t i = 0; i < k; ++i) {
    std::sort(proportions[i].begin(), proportions[i].end());
    const auto& s = proportions[i];
    out[i].min = s.front();
    out[i].q025 = sorted_quantile(s, 0.025);
    out[i].q25 = sorted_quantile(s, 0.25);
    out[i].median = sorted_quantile(s, 0.5);
    out[i].q75 = sorted_quantile(s, 0.75);
    out[i].q975 = sorted_quantile(s, 0.975);
    out[i].max = s.back();
  }
  return out;
}

}  // namespace benford

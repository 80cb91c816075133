#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "benford/digits.hpp"
#include "benford/inference.hpp"
#include "benford/pipeline.hpp"
#include "benford/rng.hpp"

namespace benford {

enum class GrowthModel { Geometric, Logistic };

struct GrowthSpec {
  GrowthModel model = GrowthModel::Geometric;
  double initial = 1.0;
  double rate = 2.0;
  double capacity = 0.0;  // logistic only
  int horizon = 100;      // number of days, t = 0 .. horizon-1
  double noise_sd = 0.0;  // lognormal multiplicative noise
  std::uint64_t seed = 0;
  std::string label;

  void validate() const {
    if (horizon < 1) throw std::domain_error("growth spec: horizon must be >= 1");
    if (!(initial > 0.0)) throw std::domain_error("growth spec: initial must be > 0");
    if (!(rate > 0.0)) throw std::domain_error("growth spec: rate must be > 0");
    if (noise_sd < 0.0) throw std::domain_error("growth spec: noise_sd must be >= 0");
    if (model == GrowthModel::Logistic && !(capacity > initial)) {
      throw std::domain_error("growth spec: logistic capacity must exceed initial");
    }
  }
};

namespace detail {

inline long double standard_normal(SplitMix64& rng) {
  // Box-Muller; one value per call keeps the stream layout simple.
  double u1 = rng.next_double();
  const double u2 = rng.next_double();
  if (u1 <= 0.0) u1 = std::numeric_limits<double>::min();
  return static_cast<long double>(std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2));
}

}  // namespace detail

/// Growth-curve values in extended precision. Long pure-exponential runs
/// overflow 64-bit integers, so the digit path works on these directly;
/// rounding is applied where the magnitude still resolves integers.
inline std::vector<long double> generate_values(const GrowthSpec& spec) {
  spec.validate();
  std::vector<long double> values;
  values.reserve(static_cast<std::size_t>(spec.horizon));
  SplitMix64 rng = replicate_stream(spec.seed, 0);
  for (int t = 0; t < spec.horizon; ++t) {
    long double v;
    if (spec.model == GrowthModel::Geometric) {
      v = static_cast<long double>(spec.initial) *
          std::pow(static_cast<long double>(spec.rate), static_cast<long double>(t));
    } else {
      const long double odds = (static_cast<long double>(spec.capacity) - spec.initial) / spec.initial;
      v = static_cast<long double>(spec.capacity) /
          (1.0L + odds * std::exp(-static_cast<long double>(spec.rate) * t));
    }
    if (spec.noise_sd > 0.0) {
      v *= std::exp(static_cast<long double>(spec.noise_sd) * detail::standard_normal(rng));
    }
    if (v < 1e18L) v = std::round(v);
    values.push_back(v);
  }
  return values;
}

/// Emits the curve as a cumulative ObservationSeries with synthetic daily
/// dates. Errors when a value exceeds the 64-bit integer range.
inline ObservationSeries generate_series(const GrowthSpec& spec) {
  const auto values = generate_values(spec);
  ObservationSeries series;
  series.unit_id = spec.label.empty() ? "synthetic" : spec.label;
  series.group_id = "synth";
  series.measure = Measure::Cases;
  series.kind = Kind::Cumulative;
  const Date start{2020, 1, 1};
  for (int t = 0; t < spec.horizon; ++t) {
    const long double v = values[static_cast<std::size_t>(t)];
    if (v > 9.2e18L) {
      throw std::domain_error("generate_series: value at t=" + std::to_string(t) +
                              " exceeds the 64-bit integer range");
    }
    series.points.emplace_back(start.plus_days(t), static_cast<std::int64_t>(v));
  }
  return series;
}

struct SweepRow {
  std::string label;
  std::int64_t n = 0;
  double statistic = 0.0;
  double p_raw = 1.0;
  double tv_distance = 0.0;
  bool tested = false;
  std::string note;
};

/// Digit tally of growth values using the pipeline eligibility thresholds
/// (>= 1 for the first digit, >= second_digit_min for the second).
inline DigitCounts tally_growth_values(std::span<const long double> values, DigitPosition position,
                                       std::int64_t second_digit_min = 10) {
  DigitCounts tally;
  tally.position = position;
  tally.counts.assign(static_cast<std::size_t>(num_digits(position)), 0);
  for (long double v : values) {
    if (v < 1.0L) continue;
    if (position == DigitPosition::Second && v < static_cast<long double>(second_digit_min)) {
      ++tally.skipped;
      continue;
    }
    const auto d = extract_digit_real(v, position);
    if (!d) {
      ++tally.skipped;
      continue;
    }
    ++tally.counts[static_cast<std::size_t>(*d - min_digit(position))];
    ++tally.n;
  }
  return tally;
}

/// Total-variation distance between the tallied digit proportions and a
/// reference distribution.
inline double tv_distance(const DigitCounts& tally, const DigitDistribution& reference) {
  if (tally.n <= 0) return 1.0;
  double tv = 0.0;
  for (std::size_t i = 0; i < tally.counts.size(); ++i) {
    tv += std::abs(static_cast<double>(tally.counts[i]) / static_cast<double>(tally.n) -
                   reference.probabilities[i]);
  }
  return tv / 2.0;
}

/// Empirical digit-law conformance of growth curves: per spec, eligibility
/// filtering, tally, and a Monte-Carlo goodness-of-fit test against the
/// digit law.
inline std::vector<SweepRow> conformance_sweep(std::span<const GrowthSpec> specs,
                                               DigitPosition position, int replications,
                                               std::uint64_t seed) {
  if (specs.empty()) throw std::domain_error("conformance_sweep: empty spec list");
  const DigitDistribution reference = benford_distribution(position);
  std::vector<SweepRow> rows;
  std::uint64_t index = 0;
  for (const auto& spec : specs) {
    SweepRow row;
    row.label = spec.label;
    const auto values = generate_values(spec);
    const DigitCounts tally = tally_growth_values(values, position);
    row.n = tally.n;
    if (tally.n == 0) {
      row.note = "no eligible values";
      rows.push_back(std::move(row));
      ++index;
      continue;
    }
    row.tv_distance = tv_distance(tally, reference);
    const TestResult result =
        mc_gof_test(tally, reference, replications, mix64(seed ^ mix64(index)), spec.label);
    row.statistic = result.statistic;
    row.p_raw = result.p_raw;
    row.tested = true;
    rows.push_back(std::move(row));
    ++index;
  }
  return rows;
}

}  // namespace benford

#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace benford {

enum class DigitPosition { First, Second };

/// Smallest admissible digit value at a position (1 for First, 0 for Second).
constexpr int min_digit(DigitPosition position) {
  return position == DigitPosition::First ? 1 : 0;
}

/// Number of admissible digit values at a position (9 for First, 10 for Second).
constexpr int num_digits(DigitPosition position) {
  return position == DigitPosition::First ? 9 : 10;
}

inline const char* position_name(DigitPosition position) {
  return position == DigitPosition::First ? "first" : "second";
}

/// Newcomb-Benford probability of first digit k: log10(1 + 1/k).
inline double benford_first(int k) {
  if (k < 1 || k > 9) {
    throw std::domain_error("benford_first: digit must be in 1..9, got " + std::to_string(k));
  }
  return std::log10(1.0 + 1.0 / static_cast<double>(k));
}

/// Newcomb-Benford marginal probability of second digit k, summed over all
/// first digits: sum_{j=1..9} log10(1 + 1/(10j + k)).
inline double benford_second(int k) {
  if (k < 0 || k > 9) {
    throw std::domain_error("benford_second: digit must be in 0..9, got " + std::to_string(k));
  }
  double p = 0.0;
  for (int j = 1; j <= 9; ++j) {
    p += std::log10(1.0 + 1.0 / static_cast<double>(10 * j + k));
  }
  return p;
}

/// A digit distribution over the admissible values of one position.
/// probabilities[i] is the probability of digit min_digit(position) + i.
struct DigitDistribution {
  DigitPosition position = DigitPosition::First;
  std::vector<double> probabilities;

  double prob(int digit) const { return probabilities.at(static_cast<std::size_t>(digit - min_digit(position))); }
};

inline DigitDistribution benford_distribution(DigitPosition position) {
  DigitDistribution dist;
  dist.position = position;
  if (position == DigitPosition::First) {
    for (int k = 1; k <= 9; ++k) dist.probabilities.push_back(benford_first(k));
  } else {
    for (int k = 0; k <= 9; ++k) dist.probabilities.push_back(benford_second(k));
  }
  return dist;
}

/// Leading or second decimal digit of a positive integer, extracted
/// arithmetically. Second digit is absent for single-digit values.
inline std::optional<int> extract_digit(std::int64_t value, DigitPosition position) {
  if (value <= 0) {
    throw std::domain_error("extract_digit: value must be positive, got " + std::to_string(value));
  }
  if (position == DigitPosition::First) {
    while (value >= 10) value /= 10;
    return static_cast<int>(value);
  }
  if (value < 10) return std::nullopt;
  while (value >= 100) value /= 10;
  return static_cast<int>(value % 10);
}

/// Digit extraction for integer-valued reals too large for 64-bit storage
/// (synthetic growth curves). Values below 2^62 take the exact integer path;
/// larger ones use the base-10 mantissa.
inline std::optional<int> extract_digit_real(long double value, DigitPosition position) {
  if (!(value >= 1.0L)) {
    throw std::domain_error("extract_digit_real: value must be >= 1");
  }
  if (value < 4.611686018427387904e18L) {  // 2^62
    return extract_digit(static_cast<std::int64_t>(std::llround(value)), position);
  }
  long double e = std::floor(std::log10(value));
  long double mant = value / std::pow(10.0L, e);
  if (mant < 1.0L) mant = 1.0L;
  if (mant >= 10.0L) mant = std::nextafter(10.0L, 0.0L);
  if (position == DigitPosition::First) return static_cast<int>(mant);
  return static_cast<int>(mant * 10.0L) % 10;
}

/// Occurrence counts of one digit position over a sample.
/// counts[i] corresponds to digit min_digit(position) + i; n is the number of
/// eligible values, skipped the number with no digit at the position.
struct DigitCounts {
  DigitPosition position = DigitPosition::First;
  std::vector<std::int64_t> counts;
  std::int64_t n = 0;
  std::int64_t skipped = 0;
};

inline DigitCounts tally_digits(std::span<const std::int64_t> values, DigitPosition position) {
  DigitCounts tally;
  tally.position = position;
  tally.counts.assign(static_cast<std::size_t>(num_digits(position)), 0);
  for (std::int64_t v : values) {
    auto d = extract_digit(v, position);
    if (!d) {
      ++tally.skipped;
      continue;
    }
    ++tally.counts[static_cast<std::size_t>(*d - min_digit(position))];
    ++tally.n;
  }
  return tally;
}

inline DigitCounts tally_digits(const std::vector<std::int64_t>& values, DigitPosition position) {
  return tally_digits(std::span<const std::int64_t>(values), position);
}

}  // namespace benford

#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "benford/digits.hpp"

using namespace benford;

TEST_CASE("first-digit law matches the published rounded percentages") {
  const double expected[9] = {30.1, 17.6, 12.5, 9.7, 7.9, 6.7, 5.8, 5.1, 4.6};
  for (int k = 1; k <= 9; ++k) {
    const double pct = std::round(1000.0 * benford_first(k)) / 10.0;
    CHECK(pct == expected[k - 1]);
  }
}

TEST_CASE("second-digit marginal matches the published rounded percentages") {
  const double expected[10] = {12.0, 11.4, 10.9, 10.4, 10.0, 9.7, 9.3, 9.0, 8.8, 8.5};
  for (int k = 0; k <= 9; ++k) {
    const double pct = std::round(1000.0 * benford_second(k)) / 10.0;
    CHECK(pct == expected[k]);
  }
}

TEST_CASE("digit-law probabilities sum to one") {
  double s1 = 0.0, s2 = 0.0;
  for (int k = 1; k <= 9; ++k) s1 += benford_first(k);
  for (int k = 0; k <= 9; ++k) s2 += benford_second(k);
  CHECK(std::abs(s1 - 1.0) < 1e-12);
  CHECK(std::abs(s2 - 1.0) < 1e-12);
}

TEST_CASE("digit-law arguments are range checked") {
  CHECK_THROWS_AS(benford_first(0), std::domain_error);
  CHECK_THROWS_AS(benford_first(10), std::domain_error);
  CHECK_THROWS_AS(benford_second(-1), std::domain_error);
  CHECK_THROWS_AS(benford_second(10), std::domain_error);
}

TEST_CASE("benford_distribution wraps the closed forms") {
  const auto first = benford_distribution(DigitPosition::First);
  REQUIRE(first.probabilities.size() == 9);
  CHECK(first.prob(1) == benford_first(1));
  CHECK(first.prob(9) == benford_first(9));
  const auto second = benford_distribution(DigitPosition::Second);
  REQUIRE(second.probabilities.size() == 10);
  CHECK(second.prob(0) == benford_second(0));
  CHECK(second.prob(9) == benford_second(9));
}

TEST_CASE("integer digit extraction") {
  CHECK(extract_digit(7, DigitPosition::First) == 7);
  CHECK(extract_digit(10, DigitPosition::First) == 1);
  CHECK(extract_digit(95, DigitPosition::First) == 9);
  CHECK(extract_digit(1234567890123456789LL, DigitPosition::First) == 1);

  CHECK(extract_digit(10, DigitPosition::Second) == 0);
  CHECK(extract_digit(95, DigitPosition::Second) == 5);
  CHECK(extract_digit(1234567890123456789LL, DigitPosition::Second) == 2);
  CHECK_FALSE(extract_digit(9, DigitPosition::Second).has_value());

  CHECK_THROWS_AS(extract_digit(0, DigitPosition::First), std::domain_error);
  CHECK_THROWS_AS(extract_digit(-5, DigitPosition::Second), std::domain_error);
}

TEST_CASE("real digit extraction agrees with the integer path and scales up") {
  for (std::int64_t v : {1LL, 9LL, 10LL, 95LL, 123456LL, 4000000000000000000LL}) {
    CHECK(extract_digit_real(static_cast<long double>(v), DigitPosition::First) ==
          extract_digit(v, DigitPosition::First));
    CHECK(extract_digit_real(static_cast<long double>(v), DigitPosition::Second) ==
          extract_digit(v, DigitPosition::Second));
  }
  // Beyond 64-bit range: powers of ten have a known digit pattern.
  const long double big = 7.3e25L;
  CHECK(extract_digit_real(big, DigitPosition::First) == 7);
  CHECK(extract_digit_real(big, DigitPosition::Second) == 3);
  // 2^200 = 1.6069...e60
  const long double p200 = std::pow(2.0L, 200.0L);
  CHECK(extract_digit_real(p200, DigitPosition::First) == 1);
  CHECK(extract_digit_real(p200, DigitPosition::Second) == 6);
  CHECK_THROWS_AS(extract_digit_real(0.5L, DigitPosition::First), std::domain_error);
}

TEST_CASE("tally_digits counts eligible values and skips digitless ones") {
  const std::vector<std::int64_t> values = {1, 12, 19, 95, 200, 7, 3};
  const auto first = tally_digits(values, DigitPosition::First);
  CHECK(first.n == 7);
  CHECK(first.skipped == 0);
  CHECK(first.counts[0] == 3);  // 1, 12, 19
  CHECK(first.counts[1] == 1);  // 200
  CHECK(first.counts[2] == 1);  // 3
  CHECK(first.counts[6] == 1);  // 7
  CHECK(first.counts[8] == 1);  // 95

  const auto second = tally_digits(values, DigitPosition::Second);
  CHECK(second.n == 4);    // 12, 19, 95, 200
  CHECK(second.skipped == 3);  // 1, 7, 3 have no second digit
  CHECK(second.counts[2] == 1);  // 12
  CHECK(second.counts[9] == 1);  // 19
  CHECK(second.counts[5] == 1);  // 95
  CHECK(second.counts[0] == 1);  // 200
}

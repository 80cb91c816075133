#pragma once

#include <algorithm>
#include <charconv>
#include <compare>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "benford/digits.hpp"
#include "benford/inference.hpp"

namespace benford {

/// Input or configuration problems; mapped to exit code 1 by the CLI.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Date {
  int year = 0;
  int month = 0;
  int day = 0;

  auto operator<=>(const Date&) const = default;

  static Date parse(std::string_view text) {
    auto fail = [&] { throw InputError("invalid date '" + std::string(text) + "', expected YYYY-MM-DD"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') fail();
    Date d;
    auto num = [&](std::string_view part, int& out) {
      auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), out);
      if (ec != std::errc() || ptr != part.data() + part.size()) fail();
    };
    num(text.substr(0, 4), d.year);
    num(text.substr(5, 2), d.month);
    num(text.substr(8, 2), d.day);
    if (d.month < 1 || d.month > 12 || d.day < 1 || d.day > 31) fail();
    return d;
  }

  std::string str() const {
    char buf[11];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", year, month, day);
    return buf;
  }

  /// Days since civil epoch (Howard Hinnant's days_from_civil).
  std::int64_t serial() const {
    const int y = year - (month <= 2);
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * static_cast<unsigned>(month + (month > 2 ? -3 : 9)) + 2u) / 5u +
                         static_cast<unsigned>(day) - 1u;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
  }

  static Date from_serial(std::int64_t z) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    Date d;
    d.day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    d.month = static_cast<int>(mp + (mp < 10 ? 3 : -9));
    d.year = static_cast<int>(y + (d.month <= 2));
    return d;
  }

  Date plus_days(std::int64_t days) const { return from_serial(serial() + days); }
};

enum class Measure { Cases, Deaths };
enum class Kind { Daily, Cumulative };

inline const char* measure_name(Measure m) { return m == Measure::Cases ? "cases" : "deaths"; }
inline const char* kind_name(Kind k) { return k == Kind::Daily ? "daily" : "cumulative"; }

struct ObservationSeries {
  std::string unit_id;
  std::string group_id;
  Measure measure = Measure::Cases;
  Kind kind = Kind::Daily;
  /// Date-ordered, strictly increasing dates.
  std::vector<std::pair<Date, std::int64_t>> points;
  /// Set when a cumulative series decreases or a derived daily value is
  /// negative (downward revision in the source).
  bool correction_flag = false;

  /// National-level rows pass through aggregation untouched.
  bool is_national() const { return unit_id == group_id; }
};

struct StudyConfig {
  std::set<DigitPosition> digit_positions = {DigitPosition::First, DigitPosition::Second};
  std::set<Measure> measures = {Measure::Cases, Measure::Deaths};
  std::set<Kind> kinds = {Kind::Daily, Kind::Cumulative};
  std::vector<std::string> groups;
  std::map<std::string, Date> cumulative_cutoff;
  Date daily_window_start{2019, 12, 1};
  Date daily_window_end{2020, 5, 11};
  std::int64_t second_digit_min = 10;
  bool second_digit_strict = false;  // read "larger than 10" as > 10
  double aggregation_quantile = 0.10;
  int replications = 5000;
  double alpha = 0.05;
  std::uint64_t seed = 0;
  /// 0 means "one family per dataset", i.e. derived at run time.
  int ci_families = 0;
  std::string focal_group;
  /// Whether goodness-of-fit and independence p-values form one adjustment
  /// family or two.
  enum class Partition { Separate, Pooled } partition = Partition::Separate;

  void validate() const {
    if (second_digit_min < 10) throw InputError("second_digit_min must be >= 10");
    if (!(aggregation_quantile > 0.0 && aggregation_quantile < 1.0)) {
      throw InputError("aggregation_quantile must be in (0,1)");
    }
    if (replications < 1) throw InputError("replications must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("alpha must be in (0,1)");
  }
};

namespace detail {

inline std::vector<std::string> split_csv_line(std::string_view line) {
  std::vector<std::string> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.emplace_back(line.substr(start));
      break;
    }
    fields.emplace_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  for (auto& f : fields) {
    while (!f.empty() && (f.back() == '\r' || f.back() == ' ')) f.pop_back();
    while (!f.empty() && f.front() == ' ') f.erase(f.begin());
  }
  return fields;
}

inline std::int64_t parse_int(std::string_view text, int line_no) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw InputError("line " + std::to_string(line_no) + ": value '" + std::string(text) +
                     "' is not a base-10 integer");
  }
  return value;
}

}  // namespace detail

/// Loads the normalized long-format CSV
/// (unit_id,group_id,date,measure,kind,value) into one series per
/// (unit, measure, kind) triple, date-sorted and validated.
inline std::vector<ObservationSeries> load_series(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open input file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw InputError(path.string() + ": empty file, header row required");
  const std::vector<std::string> expected = {"unit_id", "group_id", "date",
                                             "measure", "kind",     "value"};
  auto header = detail::split_csv_line(line);
  std::vector<std::size_t> column(expected.size());
  if (header.size() != expected.size()) {
    throw InputError(path.string() + ": expected 6 columns in header, got " +
                     std::to_string(header.size()));
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    auto it = std::find(header.begin(), header.end(), expected[i]);
    if (it == header.end()) {
      throw InputError(path.string() + ": unknown or missing column in header: '" + header[i] + "'");
    }
    column[i] = static_cast<std::size_t>(it - header.begin());
  }

  struct Key {
    std::string unit, group;
    Measure measure;
    Kind kind;
    auto operator<=>(const Key&) const = default;
  };
  std::map<Key, ObservationSeries> series;
  std::set<std::tuple<std::string, std::string, Measure, Kind>> seen;

  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const auto fields = detail::split_csv_line(line);
    if (fields.size() != expected.size()) {
      throw InputError("line " + std::to_string(line_no) + ": expected 6 fields, got " +
                       std::to_string(fields.size()));
    }
    const std::string& unit = fields[column[0]];
    const std::string& group = fields[column[1]];
    Date date;
    try {
      date = Date::parse(fields[column[2]]);
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(line_no) + ": " + e.what());
    }
    const std::string& measure_s = fields[column[3]];
    const std::string& kind_s = fields[column[4]];
    Measure measure;
    if (measure_s == "cases") measure = Measure::Cases;
    else if (measure_s == "deaths") measure = Measure::Deaths;
    else throw InputError("line " + std::to_string(line_no) + ": unknown measure '" + measure_s + "'");
    Kind kind;
    if (kind_s == "daily") kind = Kind::Daily;
    else if (kind_s == "cumulative") kind = Kind::Cumulative;
    else throw InputError("line " + std::to_string(line_no) + ": unknown kind '" + kind_s + "'");
    const std::int64_t value = detail::parse_int(fields[column[5]], line_no);

    if (!seen.insert({unit, date.str(), measure, kind}).second) {
      throw InputError("line " + std::to_string(line_no) + ": duplicate observation for unit '" +
                       unit + "' on " + date.str());
    }
    Key key{unit, group, measure, kind};
    auto& s = series[key];
    if (s.points.empty()) {
      s.unit_id = unit;
      s.group_id = group;
      s.measure = measure;
      s.kind = kind;
    }
    s.points.emplace_back(date, value);
  }

  std::vector<ObservationSeries> out;
  out.reserve(series.size());
  for (auto& [key, s] : series) {
    std::sort(s.points.begin(), s.points.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (s.kind == Kind::Cumulative) {
      for (std::size_t i = 1; i < s.points.size(); ++i) {
        if (s.points[i].second < s.points[i - 1].second) s.correction_flag = true;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

/// First differences; negative differences (downward revisions) are kept and
/// flagged for the data-quality report.
inline ObservationSeries cumulative_to_daily(const ObservationSeries& series) {
  if (series.kind != Kind::Cumulative) {
    throw std::domain_error("cumulative_to_daily: series kind must be cumulative");
  }
  ObservationSeries out = series;
  out.kind = Kind::Daily;
  std::int64_t prev = 0;
  for (auto& [date, value] : out.points) {
    const std::int64_t daily = value - prev;
    prev = value;
    value = daily;
    if (value < 0) out.correction_flag = true;
  }
  return out;
}

/// Running sum; exact inverse of cumulative_to_daily on clean data.
inline ObservationSeries daily_to_cumulative(const ObservationSeries& series) {
  if (series.kind != Kind::Daily) {
    throw std::domain_error("daily_to_cumulative: series kind must be daily");
  }
  ObservationSeries out = series;
  out.kind = Kind::Cumulative;
  std::int64_t acc = 0;
  for (auto& [date, value] : out.points) {
    acc += value;
    value = acc;
  }
  return out;
}

/// Inclusive empirical quantile with linear interpolation between order
/// statistics.
inline double empirical_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::domain_error("empirical_quantile: empty sample");
  std::sort(values.begin(), values.end());
  const double h = q * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  const double w = h - static_cast<double>(lo);
  return values[lo] * (1.0 - w) + values[lo + 1] * w;
}

namespace detail {

inline std::int64_t value_at_or_before(const ObservationSeries& s, const Date& date) {
  std::int64_t v = 0;
  for (const auto& [d, x] : s.points) {
    if (d > date) break;
    v = x;
  }
  return v;
}

}  // namespace detail

/// Merges the reporting units whose cumulative deaths at reference_date fall
/// strictly below the given quantile of the group's per-unit values into one
/// synthetic unit. National rows pass through and are excluded from the
/// quantile computation. All series must share one group.
inline std::vector<ObservationSeries> aggregate_small_units(
    const std::vector<ObservationSeries>& series, double quantile, const Date& reference_date) {
  if (series.empty()) throw std::domain_error("aggregate_small_units: empty input");
  const std::string& group = series.front().group_id;
  for (const auto& s : series) {
    if (s.group_id != group) {
      throw std::domain_error("aggregate_small_units: series span multiple groups");
    }
  }

  // Cumulative deaths per non-national unit at the reference date.
  std::map<std::string, std::int64_t> deaths;
  for (const auto& s : series) {
    if (s.is_national()) continue;
    deaths.try_emplace(s.unit_id, 0);
    if (s.measure == Measure::Deaths && s.kind == Kind::Cumulative) {
      deaths[s.unit_id] = detail::value_at_or_before(s, reference_date);
    }
  }
  if (deaths.empty()) return series;

  std::vector<double> values;
  values.reserve(deaths.size());
  for (const auto& [unit, v] : deaths) values.push_back(static_cast<double>(v));
  const double threshold = empirical_quantile(values, quantile);

  std::set<std::string> merged_units;
  for (const auto& [unit, v] : deaths) {
    if (static_cast<double>(v) < threshold) merged_units.insert(unit);
  }
  if (merged_units.empty()) return series;

  std::vector<ObservationSeries> out;
  std::map<std::pair<Measure, Kind>, std::vector<const ObservationSeries*>> to_merge;
  for (const auto& s : series) {
    if (!s.is_national() && merged_units.count(s.unit_id)) {
      to_merge[{s.measure, s.kind}].push_back(&s);
    } else {
      out.push_back(s);
    }
  }

  for (const auto& [mk, parts] : to_merge) {
    ObservationSeries agg;
    agg.unit_id = group + "/small-aggregate";
    agg.group_id = group;
    agg.measure = mk.first;
    agg.kind = mk.second;
    std::set<Date> dates;
    for (const auto* p : parts) {
      for (const auto& [d, v] : p->points) dates.insert(d);
      agg.correction_flag = agg.correction_flag || p->correction_flag;
    }
    for (const Date& d : dates) {
      std::int64_t total = 0;
      for (const auto* p : parts) {
        if (mk.second == Kind::Cumulative) {
          total += detail::value_at_or_before(*p, d);  // carry forward
        } else {
          for (const auto& [pd, v] : p->points) {
            if (pd == d) total += v;  // missing date = zero daily
          }
        }
      }
      agg.points.emplace_back(d, total);
    }
    out.push_back(std::move(agg));
  }
  return out;
}

/// Clips a daily series to the study window, or a cumulative series to the
/// group's cutoff date (post-peak plateaus overweight one digit).
inline ObservationSeries apply_study_window(const ObservationSeries& series,
                                            const StudyConfig& config) {
  ObservationSeries out = series;
  out.points.clear();
  if (series.kind == Kind::Daily) {
    for (const auto& [d, v] : series.points) {
      if (d >= config.daily_window_start && d <= config.daily_window_end) out.points.emplace_back(d, v);
    }
  } else {
    auto it = config.cumulative_cutoff.find(series.group_id);
    if (it == config.cumulative_cutoff.end()) {
      throw InputError("no cumulative cutoff date configured for group '" + series.group_id + "'");
    }
    for (const auto& [d, v] : series.points) {
      if (d <= it->second) out.points.emplace_back(d, v);
    }
  }
  return out;
}

/// Values of the series that carry the requested digit: positive values for
/// the first digit; values at or above second_digit_min (strictly above in
/// strict mode) for the second. Chronological order is preserved.
inline std::vector<std::int64_t> eligible_values(const ObservationSeries& series,
                                                 DigitPosition position,
                                                 const StudyConfig& config) {
  std::vector<std::int64_t> out;
  for (const auto& [d, v] : series.points) {
    if (position == DigitPosition::First) {
      if (v >= 1) out.push_back(v);
    } else {
      if (config.second_digit_strict ? v > config.second_digit_min : v >= config.second_digit_min) {
        out.push_back(v);
      }
    }
  }
  return out;
}

/// Parses the key=value study configuration file. CLI flags override these.
inline StudyConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path.string());
  StudyConfig config;
  config.digit_positions.clear();
  config.measures.clear();
  config.kinds.clear();

  auto split_list = [](const std::string& v) {
    std::vector<std::string> items;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      while (!item.empty() && item.front() == ' ') item.erase(item.begin());
      while (!item.empty() && item.back() == ' ') item.pop_back();
      if (!item.empty()) items.push_back(item);
    }
    return items;
  };

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\r' || line.back() == '\t')) {
      line.pop_back();
    }
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError(path.string() + " line " + std::to_string(line_no) + ": expected key = value");
    }
    std::string key = line.substr(0, eq);
    std::string value = line.substr(eq + 1);
    auto trim = [](std::string& s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
    };
    trim(key);
    trim(value);

    try {
      if (key == "digit_positions") {
        for (const auto& item : split_list(value)) {
          if (item == "first") config.digit_positions.insert(DigitPosition::First);
          else if (item == "second") config.digit_positions.insert(DigitPosition::Second);
          else throw InputError("unknown digit position '" + item + "'");
        }
      } else if (key == "measures") {
        for (const auto& item : split_list(value)) {
          if (item == "cases") config.measures.insert(Measure::Cases);
          else if (item == "deaths") config.measures.insert(Measure::Deaths);
          else throw InputError("unknown measure '" + item + "'");
        }
      } else if (key == "kinds") {
        for (const auto& item : split_list(value)) {
          if (item == "daily") config.kinds.insert(Kind::Daily);
          else if (item == "cumulative") config.kinds.insert(Kind::Cumulative);
          else throw InputError("unknown kind '" + item + "'");
        }
      } else if (key == "groups") {
        config.groups = split_list(value);
      } else if (key.rfind("cumulative_cutoff.", 0) == 0) {
        config.cumulative_cutoff[key.substr(18)] = Date::parse(value);
      } else if (key == "daily_window") {
        const auto parts = split_list(value);
        if (parts.size() != 2) throw InputError("daily_window expects start,end");
        config.daily_window_start = Date::parse(parts[0]);
        config.daily_window_end = Date::parse(parts[1]);
      } else if (key == "second_digit_min") {
        config.second_digit_min = detail::parse_int(value, line_no);
      } else if (key == "second_digit_strict") {
        config.second_digit_strict = (value == "true" || value == "1");
      } else if (key == "aggregation_quantile") {
        config.aggregation_quantile = std::stod(value);
      } else if (key == "replications") {
        config.replications = static_cast<int>(detail::parse_int(value, line_no));
      } else if (key == "alpha") {
        config.alpha = std::stod(value);
      } else if (key == "seed") {
        config.seed = static_cast<std::uint64_t>(std::stoull(value));
      } else if (key == "ci_families") {
        config.ci_families = static_cast<int>(detail::parse_int(value, line_no));
      } else if (key == "focal_group") {
        config.focal_group = value;
      } else if (key == "adjust_partition") {
        if (value == "separate") config.partition = StudyConfig::Partition::Separate;
        else if (value == "pooled") config.partition = StudyConfig::Partition::Pooled;
        else throw InputError("adjust_partition must be 'separate' or 'pooled'");
      } else {
        throw InputError("unknown configuration key '" + key + "'");
      }
    } catch (const InputError&) {
      throw;
    } catch (const std::exception& e) {
      throw InputError(path.string() + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (config.digit_positions.empty()) {
    config.digit_positions = {DigitPosition::First, DigitPosition::Second};
  }
  if (config.measures.empty()) config.measures = {Measure::Cases, Measure::Deaths};
  if (config.kinds.empty()) config.kinds = {Kind::Daily, Kind::Cumulative};
  config.validate();
  return config;
}

}  // namespace benford

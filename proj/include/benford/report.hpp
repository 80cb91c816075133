#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "benford/adjust.hpp"
#include "benford/digits.hpp"
#include "benford/inference.hpp"
#include "benford/pipeline.hpp"
#include "benford/simultci.hpp"

namespace benford {

inline constexpr const char* kReportSchemaVersion = "1.0";

struct DatasetKey {
  DigitPosition position = DigitPosition::First;
  Measure measure = Measure::Cases;
  Kind kind = Kind::Daily;
  std::string group;

  std::string label() const {
    return std::string(position_name(position)) + "/" + measure_name(measure) + "/" +
           kind_name(kind) + "/" + group;
  }
};

struct FrequencyRow {
  DatasetKey key;
  std::int64_t n = 0;
  std::vector<double> proportions;  // empty when n = 0
};

struct ViolinRow {
  DatasetKey key;
  std::int64_t n = 0;
  std::vector<QuantileSummary> quantiles;
};

struct GofRow {
  DatasetKey key;
  TestResult result;
  double p_bh = 1.0;
  double p_by = 1.0;
};

struct IndependenceRow {
  std::string grouping;  // "all-groups" or "focal-vs-rest"
  DigitPosition position = DigitPosition::First;
  Measure measure = Measure::Cases;
  Kind kind = Kind::Daily;
  TestResult result;
  double p_bh = 1.0;
  double p_by = 1.0;

  std::string label() const {
    return grouping + "/" + position_name(position) + "/" + measure_name(measure) + "/" +
           kind_name(kind);
  }
};

struct IntervalRow {
  DatasetKey key;
  std::int64_t n = 0;
  IntervalSet intervals;
};

struct SampleSizeRow {
  DatasetKey key;
  std::int64_t n = 0;
};

struct DataQualityRow {
  DatasetKey key;
  std::int64_t zeros = 0;
  std::int64_t negatives = 0;
  std::int64_t skipped = 0;
  std::int64_t n = 0;
};

struct StudyReport {
  StudyConfig config;
  std::vector<FrequencyRow> frequency_tables;
  std::vector<ViolinRow> violin_tables;
  std::vector<GofRow> gof_results;
  std::vector<IndependenceRow> independence_results;
  std::vector<IntervalRow> interval_sets;
  std::vector<SampleSizeRow> sample_size_table;
  std::vector<DataQualityRow> data_quality;
  /// Skipped stages and other non-fatal diagnostics.
  std::vector<std::string> notes;
};

namespace detail {

inline std::uint64_t sub_seed(std::uint64_t seed, std::uint64_t salt) {
  return mix64(seed ^ mix64(salt));
}

struct DatasetTally {
  DatasetKey key;
  DigitCounts counts;
  std::int64_t zeros = 0;
  std::int64_t negatives = 0;
};

}  // namespace detail

/// Runs the full study: ingestion, preprocessing, per-dataset tallies,
/// Monte-Carlo tests, family adjustment, and simultaneous intervals.
inline StudyReport run_study(const StudyConfig& config_in,
                             const std::vector<std::filesystem::path>& input_paths) {
  StudyConfig config = config_in;
  config.validate();

  std::vector<ObservationSeries> all_series;
  for (const auto& path : input_paths) {
    auto loaded = load_series(path);
    all_series.insert(all_series.end(), loaded.begin(), loaded.end());
  }

  // Group ids default to the sorted distinct ids found in the data.
  if (config.groups.empty()) {
    std::set<std::string> groups;
    for (const auto& s : all_series) groups.insert(s.group_id);
    config.groups.assign(groups.begin(), groups.end());
  }
  if (config.focal_group.empty() && !config.groups.empty()) {
    config.focal_group = config.groups.front();
  }

  std::map<std::string, std::vector<ObservationSeries>> by_group;
  for (auto& s : all_series) by_group[s.group_id].push_back(std::move(s));

  // Complete missing kinds per (unit, measure), then aggregate small units.
  for (const std::string& group : config.groups) {
    auto it = by_group.find(group);
    if (it == by_group.end()) {
      throw InputError("configured group '" + group + "' has no data in the inputs");
    }
    auto& series = it->second;
    std::set<std::tuple<std::string, Measure, Kind>> present;
    for (const auto& s : series) present.insert({s.unit_id, s.measure, s.kind});
    std::vector<ObservationSeries> derived;
    for (const auto& s : series) {
      const Kind other = s.kind == Kind::Daily ? Kind::Cumulative : Kind::Daily;
      if (present.count({s.unit_id, s.measure, other})) continue;
      derived.push_back(s.kind == Kind::Cumulative ? cumulative_to_daily(s) : daily_to_cumulative(s));
      present.insert({s.unit_id, s.measure, other});
    }
    series.insert(series.end(), std::make_move_iterator(derived.begin()),
                  std::make_move_iterator(derived.end()));

    Date reference{1900, 1, 1};
    bool have_reference = false;
    for (const auto& s : series) {
      if (s.measure == Measure::Deaths && s.kind == Kind::Cumulative && !s.points.empty()) {
        reference = std::max(reference, s.points.back().first);
        have_reference = true;
      }
    }
    if (have_reference) {
      series = aggregate_small_units(series, config.aggregation_quantile, reference);
    }
    std::sort(series.begin(), series.end(), [](const ObservationSeries& a, const ObservationSeries& b) {
      return std::tie(a.unit_id, a.measure, a.kind) < std::tie(b.unit_id, b.measure, b.kind);
    });
  }

  StudyReport report;

  // Fixed dataset enumeration order: position, measure, kind, group.
  std::vector<detail::DatasetTally> tallies;
  for (DigitPosition position : {DigitPosition::First, DigitPosition::Second}) {
    if (!config.digit_positions.count(position)) continue;
    for (Measure measure : {Measure::Cases, Measure::Deaths}) {
      if (!config.measures.count(measure)) continue;
      for (Kind kind : {Kind::Daily, Kind::Cumulative}) {
        if (!config.kinds.count(kind)) continue;
        for (const std::string& group : config.groups) {
          detail::DatasetTally tally;
          tally.key = {position, measure, kind, group};
          std::vector<std::int64_t> pooled;
          for (const auto& s : by_group[group]) {
            if (s.measure != measure || s.kind != kind) continue;
            const ObservationSeries windowed = apply_study_window(s, config);
            for (const auto& [d, v] : windowed.points) {
              if (v == 0) ++tally.zeros;
              else if (v < 0) ++tally.negatives;
            }
            const auto values = eligible_values(windowed, position, config);
            pooled.insert(pooled.end(), values.begin(), values.end());
          }
          tally.counts = tally_digits(pooled, position);
          tallies.push_back(std::move(tally));
        }
      }
    }
  }

  // Frequencies, sample sizes, data quality, violins.
  std::uint64_t violin_salt = 0x3000;
  for (const auto& t : tallies) {
    FrequencyRow freq;
    freq.key = t.key;
    freq.n = t.counts.n;
    if (t.counts.n > 0) {
      for (std::int64_t c : t.counts.counts) {
        freq.proportions.push_back(static_cast<double>(c) / static_cast<double>(t.counts.n));
      }
    }
    report.frequency_tables.push_back(std::move(freq));
    report.sample_size_table.push_back({t.key, t.counts.n});
    report.data_quality.push_back({t.key, t.zeros, t.negatives, t.counts.skipped, t.counts.n});

    ViolinRow violin;
    violin.key = t.key;
    violin.n = t.counts.n;
    if (t.counts.n > 0) {
      violin.quantiles = violin_quantiles(benford_distribution(t.key.position), t.counts.n,
                                          config.replications,
                                          detail::sub_seed(config.seed, violin_salt));
    }
    report.violin_tables.push_back(std::move(violin));
    ++violin_salt;
  }

  // Goodness-of-fit tests.
  std::uint64_t gof_salt = 0x1000;
  for (const auto& t : tallies) {
    if (t.counts.n == 0) {
      report.notes.push_back("gof skipped for " + t.key.label() + ": no eligible values");
      ++gof_salt;
      continue;
    }
    GofRow row;
    row.key = t.key;
    row.result = mc_gof_test(t.counts, benford_distribution(t.key.position), config.replications,
                             detail::sub_seed(config.seed, gof_salt), t.key.label());
    report.gof_results.push_back(std::move(row));
    ++gof_salt;
  }

  // Independence tests, both groupings, per count distribution.
  std::uint64_t ind_salt = 0x2000;
  if (config.groups.size() < 2) {
    report.notes.push_back("independence tests skipped: fewer than 2 groups");
  } else {
    for (const char* grouping : {"all-groups", "focal-vs-rest"}) {
      for (DigitPosition position : {DigitPosition::First, DigitPosition::Second}) {
        if (!config.digit_positions.count(position)) continue;
        for (Measure measure : {Measure::Cases, Measure::Deaths}) {
          if (!config.measures.count(measure)) continue;
          for (Kind kind : {Kind::Daily, Kind::Cumulative}) {
            if (!config.kinds.count(kind)) continue;
            ContingencyTable table;
            for (int d = 0; d < num_digits(position); ++d) {
              table.cols.push_back(std::to_string(min_digit(position) + d));
            }
            auto add_row = [&](const std::string& name) -> std::size_t {
              table.rows.push_back(name);
              table.cells.emplace_back(static_cast<std::size_t>(num_digits(position)), 0);
              return table.cells.size() - 1;
            };
            if (std::string(grouping) == "all-groups") {
              for (const std::string& group : config.groups) {
                auto& cells = table.cells[add_row(group)];
                for (const auto& t : tallies) {
                  if (t.key.position == position && t.key.measure == measure &&
                      t.key.kind == kind && t.key.group == group) {
                    for (std::size_t i = 0; i < cells.size(); ++i) cells[i] += t.counts.counts[i];
                  }
                }
              }
            } else {
              const std::size_t focal = add_row(config.focal_group);
              const std::size_t rest = add_row("rest");
              for (const auto& t : tallies) {
                if (t.key.position != position || t.key.measure != measure || t.key.kind != kind) {
                  continue;
                }
                auto& cells = table.cells[t.key.group == config.focal_group ? focal : rest];
                for (std::size_t i = 0; i < cells.size(); ++i) cells[i] += t.counts.counts[i];
              }
            }
            IndependenceRow row;
            row.grouping = grouping;
            row.position = position;
            row.measure = measure;
            row.kind = kind;
            try {
              row.result = mc_independence_test(table, config.replications,
                                                detail::sub_seed(config.seed, ind_salt), row.label());
              report.independence_results.push_back(std::move(row));
            } catch (const std::domain_error& e) {
              report.notes.push_back("independence skipped for " + row.label() + ": " + e.what());
            }
            ++ind_salt;
          }
        }
      }
    }
  }

  // Family-wide adjustment.
  std::vector<double> gof_raw, ind_raw;
  for (const auto& r : report.gof_results) gof_raw.push_back(r.result.p_raw);
  for (const auto& r : report.independence_results) ind_raw.push_back(r.result.p_raw);
  if (config.partition == StudyConfig::Partition::Pooled) {
    std::vector<double> pooled = gof_raw;
    pooled.insert(pooled.end(), ind_raw.begin(), ind_raw.end());
    if (!pooled.empty()) {
      const auto bh = bh_adjust(pooled);
      const auto by = by_adjust(pooled);
      for (std::size_t i = 0; i < report.gof_results.size(); ++i) {
        report.gof_results[i].p_bh = bh[i];
        report.gof_results[i].p_by = by[i];
      }
      for (std::size_t i = 0; i < report.independence_results.size(); ++i) {
        report.independence_results[i].p_bh = bh[report.gof_results.size() + i];
        report.independence_results[i].p_by = by[report.gof_results.size() + i];
      }
    }
  } else {
    if (!gof_raw.empty()) {
      const auto bh = bh_adjust(gof_raw);
      const auto by = by_adjust(gof_raw);
      for (std::size_t i = 0; i < report.gof_results.size(); ++i) {
        report.gof_results[i].p_bh = bh[i];
        report.gof_results[i].p_by = by[i];
      }
    }
    if (!ind_raw.empty()) {
      const auto bh = bh_adjust(ind_raw);
      const auto by = by_adjust(ind_raw);
      for (std::size_t i = 0; i < report.independence_results.size(); ++i) {
        report.independence_results[i].p_bh = bh[i];
        report.independence_results[i].p_by = by[i];
      }
    }
  }

  // Simultaneous intervals at Bonferroni-split confidence.
  const int families = config.ci_families > 0 ? config.ci_families
                                              : static_cast<int>(std::max<std::size_t>(tallies.size(), 1));
  const double confidence = 1.0 - bonferroni_level(config.alpha, families);
  for (const auto& t : tallies) {
    if (t.counts.n == 0) {
      report.notes.push_back("intervals skipped for " + t.key.label() + ": no eligible values");
      continue;
    }
    IntervalRow row;
    row.key = t.key;
    row.n = t.counts.n;
    row.intervals = sison_glaz_intervals(t.counts, confidence);
    report.interval_sets.push_back(std::move(row));
  }

  report.config = config;
  return report;
}

namespace detail {

using ordered_json = nlohmann::ordered_json;

inline ordered_json config_to_json(const StudyConfig& c) {
  ordered_json j;
  {
    std::vector<std::string> positions;
    for (DigitPosition p : c.digit_positions) positions.push_back(position_name(p));
    j["digit_positions"] = positions;
  }
  {
    std::vector<std::string> measures;
    for (Measure m : c.measures) measures.push_back(measure_name(m));
    j["measures"] = measures;
  }
  {
    std::vector<std::string> kinds;
    for (Kind k : c.kinds) kinds.push_back(kind_name(k));
    j["kinds"] = kinds;
  }
  j["groups"] = c.groups;
  ordered_json cutoffs;
  for (const auto& [group, date] : c.cumulative_cutoff) cutoffs[group] = date.str();
  j["cumulative_cutoff"] = cutoffs;
  j["daily_window"] = {c.daily_window_start.str(), c.daily_window_end.str()};
  j["second_digit_min"] = c.second_digit_min;
  j["second_digit_strict"] = c.second_digit_strict;
  j["aggregation_quantile"] = c.aggregation_quantile;
  j["replications"] = c.replications;
  j["alpha"] = c.alpha;
  j["seed"] = c.seed;
  j["ci_families"] = c.ci_families;
  j["focal_group"] = c.focal_group;
  j["adjust_partition"] = c.partition == StudyConfig::Partition::Pooled ? "pooled" : "separate";
  return j;
}

inline ordered_json key_to_json(const DatasetKey& key) {
  ordered_json j;
  j["label"] = key.label();
  j["position"] = position_name(key.position);
  j["measure"] = measure_name(key.measure);
  j["kind"] = kind_name(key.kind);
  j["group"] = key.group;
  return j;
}

/// Shortest round-trip decimal rendering, reused for CSV cells so the two
/// formats agree byte for byte on numbers.
inline std::string num(double v) { return nlohmann::json(v).dump(); }

}  // namespace detail

inline detail::ordered_json report_to_json(const StudyReport& report) {
  using detail::ordered_json;
  ordered_json j;
  j["schema_version"] = kReportSchemaVersion;
  j["config"] = detail::config_to_json(report.config);

  auto& freq = j["frequency_tables"] = ordered_json::array();
  for (const auto& row : report.frequency_tables) {
    ordered_json r = detail::key_to_json(row.key);
    r["n"] = row.n;
    r["proportions"] = row.proportions;
    freq.push_back(std::move(r));
  }

  auto& violins = j["violin_tables"] = ordered_json::array();
  for (const auto& row : report.violin_tables) {
    ordered_json r = detail::key_to_json(row.key);
    r["n"] = row.n;
    ordered_json q = ordered_json::array();
    for (const auto& s : row.quantiles) {
      q.push_back({{"min", s.min},
                   {"q025", s.q025},
                   {"q25", s.q25},
                   {"median", s.median},
                   {"q75", s.q75},
                   {"q975", s.q975},
                   {"max", s.max}});
    }
    r["quantiles"] = std::move(q);
    violins.push_back(std::move(r));
  }

  ordered_json gof;
  gof["partition"] =
      report.config.partition == StudyConfig::Partition::Pooled ? "pooled" : "separate";
  gof["entries"] = ordered_json::array();
  for (const auto& row : report.gof_results) {
    ordered_json r = detail::key_to_json(row.key);
    r["statistic"] = row.result.statistic;
    r["p_raw"] = row.result.p_raw;
    r["p_bh"] = row.p_bh;
    r["p_by"] = row.p_by;
    r["p_asymptotic"] = row.result.p_asymptotic;
    r["df"] = row.result.df;
    r["replications"] = row.result.replications;
    r["seed"] = row.result.seed;
    gof["entries"].push_back(std::move(r));
  }
  j["gof_results"] = std::move(gof);

  ordered_json ind;
  ind["partition"] =
      report.config.partition == StudyConfig::Partition::Pooled ? "pooled" : "separate";
  ind["entries"] = ordered_json::array();
  for (const auto& row : report.independence_results) {
    ordered_json r;
    r["label"] = row.label();
    r["grouping"] = row.grouping;
    r["position"] = position_name(row.position);
    r["measure"] = measure_name(row.measure);
    r["kind"] = kind_name(row.kind);
    r["statistic"] = row.result.statistic;
    r["p_raw"] = row.result.p_raw;
    r["p_bh"] = row.p_bh;
    r["p_by"] = row.p_by;
    r["p_asymptotic"] = row.result.p_asymptotic;
    r["df"] = row.result.df;
    r["replications"] = row.result.replications;
    r["seed"] = row.result.seed;
    ind["entries"].push_back(std::move(r));
  }
  j["independence_results"] = std::move(ind);

  auto& intervals = j["interval_sets"] = ordered_json::array();
  for (const auto& row : report.interval_sets) {
    ordered_json r = detail::key_to_json(row.key);
    r["n"] = row.n;
    r["confidence"] = row.intervals.confidence;
    r["c_value"] = row.intervals.c_value;
    r["gamma"] = row.intervals.gamma;
    r["lower"] = row.intervals.lower;
    r["upper"] = row.intervals.upper;
    intervals.push_back(std::move(r));
  }

  auto& sizes = j["sample_size_table"] = ordered_json::array();
  for (const auto& row : report.sample_size_table) {
    ordered_json r = detail::key_to_json(row.key);
    r["n"] = row.n;
    sizes.push_back(std::move(r));
  }

  auto& quality = j["data_quality"] = ordered_json::array();
  for (const auto& row : report.data_quality) {
    ordered_json r = detail::key_to_json(row.key);
    r["zeros"] = row.zeros;
    r["negatives"] = row.negatives;
    r["skipped"] = row.skipped;
    r["n"] = row.n;
    quality.push_back(std::move(r));
  }

  j["notes"] = report.notes;
  return j;
}

enum class ReportFormat { Json, CsvBundle };

/// Writes the report to out_dir: a single report.json, or a bundle of seven
/// CSVs (one per report table).
inline std::vector<std::filesystem::path> write_report(const StudyReport& report,
                                                       ReportFormat format,
                                                       const std::filesystem::path& out_dir) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  std::vector<std::filesystem::path> written;

  auto open = [&](const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw InputError("cannot write output file: " + path.string());
    return out;
  };

  if (format == ReportFormat::Json) {
    const auto path = out_dir / "report.json";
    auto out = open(path);
    out << report_to_json(report).dump(2) << "\n";
    written.push_back(path);
    return written;
  }

  const std::string version = kReportSchemaVersion;
  auto digit_of = [](const DatasetKey& key, std::size_t i) {
    return std::to_string(min_digit(key.position) + static_cast<int>(i));
  };

  {
    const auto path = out_dir / "frequency_tables.csv";
    auto out = open(path);
    out << "schema_version,label,position,measure,kind,group,digit,n,proportion\n";
    for (const auto& row : report.frequency_tables) {
      for (std::size_t i = 0; i < row.proportions.size(); ++i) {
        out << version << ',' << row.key.label() << ',' << position_name(row.key.position) << ','
            << measure_name(row.key.measure) << ',' << kind_name(row.key.kind) << ','
            << row.key.group << ',' << digit_of(row.key, i) << ',' << row.n << ','
            << detail::num(row.proportions[i]) << "\n";
      }
      if (row.proportions.empty()) {
        out << version << ',' << row.key.label() << ',' << position_name(row.key.position) << ','
            << measure_name(row.key.measure) << ',' << kind_name(row.key.kind) << ','
            << row.key.group << ",,0,\n";
      }
    }
    written.push_back(path);
  }
  {
    const auto path = out_dir / "violin_tables.csv";
    auto out = open(path);
    out << "schema_version,label,digit,n,min,q025,q25,median,q75,q975,max\n";
    for (const auto& row : report.violin_tables) {
      for (std::size_t i = 0; i < row.quantiles.size(); ++i) {
        const auto& s = row.quantiles[i];
        out << version << ',' << row.key.label() << ',' << digit_of(row.key, i) << ',' << row.n
            << ',' << detail::num(s.min) << ',' << detail::num(s.q025) << ',' << detail::num(s.q25)
            << ',' << detail::num(s.median) << ',' << detail::num(s.q75) << ','
            << detail::num(s.q975) << ',' << detail::num(s.max) << "\n";
      }
    }
    written.push_back(path);
  }
  {
    const auto path = out_dir / "gof_results.csv";
    auto out = open(path);
    out << "schema_version,label,statistic,p_raw,p_bh,p_by,p_asymptotic,df,replications,seed\n";
    for (const auto& row : report.gof_results) {
      out << version << ',' << row.key.label() << ',' << detail::num(row.result.statistic) << ','
          << detail::num(row.result.p_raw) << ',' << detail::num(row.p_bh) << ','
          << detail::num(row.p_by) << ',' << detail::num(row.result.p_asymptotic) << ','
          << row.result.df << ',' << row.result.replications << ',' << row.result.seed << "\n";
    }
    written.push_back(path);
  }
  {
    const auto path = out_dir / "independence_results.csv";
    auto out = open(path);
    out << "schema_version,label,grouping,statistic,p_raw,p_bh,p_by,p_asymptotic,df,replications,seed\n";
    for (const auto& row : report.independence_results) {
      out << version << ',' << row.label() << ',' << row.grouping << ','
          << detail::num(row.result.statistic) << ',' << detail::num(row.result.p_raw) << ','
          << detail::num(row.p_bh) << ',' << detail::num(row.p_by) << ','
          << detail::num(row.result.p_asymptotic) << ',' << row.result.df << ','
          << row.result.replications << ',' << row.result.seed << "\n";
    }
    written.push_back(path);
  }
  {
    const auto path = out_dir / "interval_sets.csv";
    auto out = open(path);
    out << "schema_version,label,digit,n,confidence,c_value,gamma,lower,upper\n";
    for (const auto& row : report.interval_sets) {
      for (std::size_t i = 0; i < row.intervals.lower.size(); ++i) {
        out << version << ',' << row.key.label() << ',' << digit_of(row.key, i) << ',' << row.n
            << ',' << detail::num(row.intervals.confidence) << ',' << row.intervals.c_value << ','
            << detail::num(row.intervals.gamma) << ',' << detail::num(row.intervals.lower[i])
            << ',' << detail::num(row.intervals.upper[i]) << "\n";
      }
    }
    written.push_back(path);
  }
  {
    const auto path = out_dir / "sample_size_table.csv";
    auto out = open(path);
    out << "schema_version,label,position,measure,kind,group,n\n";
    for (const auto& row : report.sample_size_table) {
      out << version << ',' << row.key.label() << ',' << position_name(row.key.position) << ','
          << measure_name(row.key.measure) << ',' << kind_name(row.key.kind) << ',' << row.key.group
          << ',' << row.n << "\n";
    }
    written.push_back(path);
  }
  {
    const auto path = out_dir / "data_quality.csv";
    auto out = open(path);
    out << "schema_version,label,zeros,negatives,skipped,n\n";
    for (const auto& row : report.data_quality) {
      out << version << ',' << row.key.label() << ',' << row.zeros << ',' << row.negatives << ','
          << row.skipped << ',' << row.n << "\n";
    }
    written.push_back(path);
  }
  return written;
}

/// Plain-text digit-law table (the CLI's benford-table subcommand).
inline std::string render_benford_table(std::optional<DigitPosition> only = std::nullopt) {
  std::ostringstream out;
  out << "digit  P1(%)    P2(%)\n";
  char buf[64];
  for (int k = 0; k <= 9; ++k) {
    std::string p1 = "    -";
    if (k >= 1 && (!only || *only == DigitPosition::First)) {
      std::snprintf(buf, sizeof(buf), "%5.1f", 100.0 * benford_first(k));
      p1 = buf;
    }
    std::string p2 = "    -";
    if (!only || *only == DigitPosition::Second) {
      std::snprintf(buf, sizeof(buf), "%5.1f", 100.0 * benford_second(k));
      p2 = buf;
    }
    out << "    " << k << "  " << p1 << "    " << p2 << "\n";
  }
  return out.str();
}

}  // namespace benford

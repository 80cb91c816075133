#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "benford/report.hpp"

using namespace benford;
namespace fs = std::filesystem;

namespace {

fs::path data_dir() {
  const char* dir = std::getenv("BENFORD_DATA_DIR");
  REQUIRE(dir != nullptr);
  return fs::path(dir);
}

StudyConfig fixture_config(int replications) {
  auto config = load_config(data_dir() / "fixtures" / "study_config.txt");
  config.replications = replications;  // keep unit tests fast
  return config;
}

std::vector<fs::path> fixture_inputs() {
  return {data_dir() / "fixtures" / "covid_counts.csv"};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

}  // namespace

TEST_CASE("full study on the bundled fixtures has the expected shape") {
  const auto config = fixture_config(199);
  const auto report = run_study(config, fixture_inputs());

  // 2 positions x 2 measures x 2 kinds x 4 groups.
  CHECK(report.frequency_tables.size() == 32);
  CHECK(report.gof_results.size() == 32);
  CHECK(report.sample_size_table.size() == 32);
  CHECK(report.data_quality.size() == 32);
  CHECK(report.violin_tables.size() == 32);
  CHECK(report.interval_sets.size() == 32);
  // Both groupings, 8 count distributions each.
  CHECK(report.independence_results.size() == 16);

  const double confidence = 1.0 - 0.05 / 32.0;
  for (const auto& row : report.interval_sets) {
    CHECK(row.intervals.confidence == confidence);
    CHECK(row.n > 0);
  }

  for (const auto& row : report.gof_results) {
    CHECK(row.result.p_raw >= 1.0 / 200.0);
    CHECK(row.result.p_raw <= 1.0);
    CHECK(row.p_bh >= row.result.p_raw);
    CHECK(row.p_by >= row.p_bh);
  }
  for (const auto& row : report.independence_results) {
    CHECK(row.result.p_raw >= 1.0 / 200.0);
    CHECK(row.result.p_raw <= 1.0);
    CHECK(row.p_by >= row.p_bh);
  }

  // Frequencies are proper distributions.
  for (const auto& row : report.frequency_tables) {
    double sum = 0.0;
    for (double p : row.proportions) sum += p;
    CHECK_THAT(sum, Catch::Matchers::WithinAbs(1.0, 1e-9));
  }
}

TEST_CASE("identical seeds give byte-identical reports") {
  const auto config = fixture_config(99);
  const auto a = report_to_json(run_study(config, fixture_inputs())).dump(2);
  const auto b = report_to_json(run_study(config, fixture_inputs())).dump(2);
  CHECK(a == b);

  auto reseeded = config;
  reseeded.seed += 1;
  const auto c = report_to_json(run_study(reseeded, fixture_inputs())).dump(2);
  CHECK(a != c);
}

TEST_CASE("pooled adjustment spans both test families") {
  auto config = fixture_config(49);
  config.partition = StudyConfig::Partition::Pooled;
  const auto report = run_study(config, fixture_inputs());
  // With one pooled family the BH values are computed over 48 entries; the
  // maximum raw p in the pool caps everything at its own value.
  double max_raw = 0.0;
  for (const auto& r : report.gof_results) max_raw = std::max(max_raw, r.result.p_raw);
  for (const auto& r : report.independence_results) max_raw = std::max(max_raw, r.result.p_raw);
  for (const auto& r : report.gof_results) CHECK(r.p_bh <= std::max(max_raw, r.result.p_raw) + 1e-12);
}

TEST_CASE("unknown configured groups are an input error") {
  auto config = fixture_config(9);
  config.groups.push_back("ZZ");
  CHECK_THROWS_AS(run_study(config, fixture_inputs()), InputError);
}

TEST_CASE("json report carries the schema version and all sections") {
  auto config = fixture_config(29);
  const auto j = report_to_json(run_study(config, fixture_inputs()));
  CHECK(j.at("schema_version") == kReportSchemaVersion);
  for (const char* section : {"config", "frequency_tables", "violin_tables", "gof_results",
                              "independence_results", "interval_sets", "sample_size_table",
                              "data_quality", "notes"}) {
    CHECK(j.contains(section));
  }
  CHECK(j.at("config").at("focal_group") == "CN");
  CHECK(j.at("gof_results").at("partition") == "separate");
  CHECK(j.at("gof_results").at("entries").size() == 32);
}

TEST_CASE("write_report emits one json file or a seven-file csv bundle") {
  auto config = fixture_config(19);
  const auto report = run_study(config, fixture_inputs());

  const fs::path out_json = fs::temp_directory_path() / "bf_report_json";
  const auto json_files = write_report(report, ReportFormat::Json, out_json);
  REQUIRE(json_files.size() == 1);
  CHECK(json_files[0].filename() == "report.json");
  const auto parsed = nlohmann::json::parse(slurp(json_files[0]));
  CHECK(parsed.at("schema_version") == kReportSchemaVersion);

  const fs::path out_csv = fs::temp_directory_path() / "bf_report_csv";
  const auto csv_files = write_report(report, ReportFormat::CsvBundle, out_csv);
  REQUIRE(csv_files.size() == 7);
  std::set<std::string> names;
  for (const auto& f : csv_files) {
    names.insert(f.filename().string());
    const auto content = slurp(f);
    // Every bundle file starts with a schema_version header column.
    CHECK(content.rfind("schema_version,", 0) == 0);
  }
  CHECK(names == std::set<std::string>{"frequency_tables.csv", "violin_tables.csv",
                                       "gof_results.csv", "independence_results.csv",
                                       "interval_sets.csv", "sample_size_table.csv",
                                       "data_quality.csv"});

  // gof_results.csv holds one line per test plus the header.
  std::istringstream gof(slurp(out_csv / "gof_results.csv"));
  std::string line;
  int lines = 0;
  while (std::getline(gof, line)) ++lines;
  CHECK(lines == 33);
}

TEST_CASE("digit-law table rendering") {
  const auto table = render_benford_table();
  CHECK(table.find("30.1") != std::string::npos);
  CHECK(table.find("17.6") != std::string::npos);
  CHECK(table.find("12.0") != std::string::npos);
  CHECK(table.find(" 8.5") != std::string::npos);
  const auto first_only = render_benford_table(DigitPosition::First);
  CHECK(first_only.find("30.1") != std::string::npos);
  CHECK(first_only.find("12.0") == std::string::npos);
}

TEST_CASE("a single group skips independence tests with a recorded reason") {
  auto config = fixture_config(19);
  config.groups = {"CN"};
  config.cumulative_cutoff = {{"CN", Date{2020, 2, 15}}};
  const auto report = run_study(config, fixture_inputs());
  CHECK(report.independence_results.empty());
  bool noted = false;
  for (const auto& note : report.notes) {
    if (note.find("independence") != std::string::npos) noted = true;
  }
  CHECK(noted);
  CHECK(report.gof_results.size() == 8);
}

TEST_CASE("a study selecting no datasets still yields a valid empty report") {
  auto config = fixture_config(19);
  config.digit_positions.clear();
  const auto report = run_study(config, fixture_inputs());
  CHECK(report.gof_results.empty());
  CHECK(report.interval_sets.empty());
  CHECK(report.frequency_tables.empty());
  const fs::path out = fs::temp_directory_path() / "bf_report_empty";
  const auto files = write_report(report, ReportFormat::CsvBundle, out);
  CHECK(files.size() == 7);
  CHECK_NOTHROW(nlohmann::json::parse(report_to_json(report).dump(2)));
}

TEST_CASE("restricting the enumerated dimensions shrinks the report accordingly") {
  auto config = fixture_config(19);
  config.digit_positions = {DigitPosition::First};
  config.measures = {Measure::Cases};
  const auto report = run_study(config, fixture_inputs());
  CHECK(report.gof_results.size() == 8);  // 1 x 1 x 2 kinds x 4 groups
  CHECK(report.independence_results.size() == 4);
}

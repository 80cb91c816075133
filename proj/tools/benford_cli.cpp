// Command-line front end: full study runs, synthetic conformance sweeps, and
// the digit-law reference table.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "benford/pipeline.hpp"
#include "benford/report.hpp"
#include "benford/synth.hpp"

namespace {

benford::GrowthSpec parse_spec_row(const std::vector<std::string>& fields, int line_no) {
  if (fields.size() != 7) {
    throw benford::InputError("spec line " + std::to_string(line_no) + ": expected 7 fields " +
                              "(label,model,initial,rate,capacity,horizon,noise_sd)");
  }
  benford::GrowthSpec spec;
  spec.label = fields[0];
  if (fields[1] == "geometric") spec.model = benford::GrowthModel::Geometric;
  else if (fields[1] == "logistic") spec.model = benford::GrowthModel::Logistic;
  else throw benford::InputError("spec line " + std::to_string(line_no) + ": unknown model '" + fields[1] + "'");
  try {
    spec.initial = std::stod(fields[2]);
    spec.rate = std::stod(fields[3]);
    spec.capacity = fields[4].empty() ? 0.0 : std::stod(fields[4]);
    spec.horizon = std::stoi(fields[5]);
    spec.noise_sd = fields[6].empty() ? 0.0 : std::stod(fields[6]);
  } catch (const std::exception& e) {
    throw benford::InputError("spec line " + std::to_string(line_no) + ": " + e.what());
  }
  return spec;
}

std::vector<benford::GrowthSpec> load_growth_specs(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw benford::InputError("cannot open spec file: " + path.string());
  std::vector<benford::GrowthSpec> specs;
  std::string line;
  int line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#' || line == "\r") continue;
    const auto fields = benford::detail::split_csv_line(line);
    if (header) {
      header = false;
      if (!fields.empty() && fields[0] == "label") continue;  // header row
    }
    specs.push_back(parse_spec_row(fields, line_no));
  }
  if (specs.empty()) throw benford::InputError(path.string() + ": no growth specs found");
  return specs;
}

int run_analyze(const std::string& config_path, const std::vector<std::string>& inputs,
                const std::string& out_dir, const std::string& format, const std::string& digit,
                int replications, std::int64_t seed, double alpha, bool strict,
                const std::string& focal_group) {
  benford::StudyConfig config = benford::load_config(config_path);
  if (digit == "1") config.digit_positions = {benford::DigitPosition::First};
  else if (digit == "2") config.digit_positions = {benford::DigitPosition::Second};
  else if (digit == "both") {
    config.digit_positions = {benford::DigitPosition::First, benford::DigitPosition::Second};
  }
  if (replications > 0) config.replications = replications;
  if (seed >= 0) config.seed = static_cast<std::uint64_t>(seed);
  if (alpha > 0.0) config.alpha = alpha;
  if (strict) config.second_digit_strict = true;
  if (!focal_group.empty()) config.focal_group = focal_group;

  std::vector<std::filesystem::path> paths(inputs.begin(), inputs.end());
  const benford::StudyReport report = benford::run_study(config, paths);
  const auto fmt = format == "csv-bundle" ? benford::ReportFormat::CsvBundle
                                          : benford::ReportFormat::Json;
  const auto written = benford::write_report(report, fmt, out_dir);
  for (const auto& path : written) std::cout << "wrote " << path.string() << "\n";
  for (const auto& note : report.notes) std::cerr << "note: " << note << "\n";
  return 0;
}

int run_synth_sweep(const std::string& spec_path, const std::string& out_dir, int replications,
                    std::int64_t seed) {
  const auto specs = load_growth_specs(spec_path);
  const int B = replications > 0 ? replications : 5000;
  const std::uint64_t s = seed >= 0 ? static_cast<std::uint64_t>(seed) : 0;

  nlohmann::ordered_json j;
  j["schema_version"] = benford::kReportSchemaVersion;
  j["replications"] = B;
  j["seed"] = s;
  j["rows"] = nlohmann::ordered_json::array();

  std::filesystem::create_directories(out_dir);
  std::ofstream csv(std::filesystem::path(out_dir) / "synth_sweep.csv", std::ios::binary);
  csv << "schema_version,label,position,n,statistic,p_raw,tv_distance,tested,note\n";
  for (benford::DigitPosition position :
       {benford::DigitPosition::First, benford::DigitPosition::Second}) {
    const auto rows = benford::conformance_sweep(specs, position, B, s);
    for (const auto& row : rows) {
      nlohmann::ordered_json r;
      r["label"] = row.label;
      r["position"] = benford::position_name(position);
      r["n"] = row.n;
      r["statistic"] = row.statistic;
      r["p_raw"] = row.p_raw;
      r["tv_distance"] = row.tv_distance;
      r["tested"] = row.tested;
      r["note"] = row.note;
      j["rows"].push_back(std::move(r));
      csv << benford::kReportSchemaVersion << ',' << row.label << ','
          << benford::position_name(position) << ',' << row.n << ','
          << benford::detail::num(row.statistic) << ',' << benford::detail::num(row.p_raw) << ','
          << benford::detail::num(row.tv_distance) << ',' << (row.tested ? "true" : "false") << ','
          << row.note << "\n";
    }
  }
  std::ofstream out(std::filesystem::path(out_dir) / "synth_sweep.json", std::ios::binary);
  out << j.dump(2) << "\n";
  std::cout << "wrote " << (std::filesystem::path(out_dir) / "synth_sweep.json").string() << "\n";
  std::cout << "wrote " << (std::filesystem::path(out_dir) / "synth_sweep.csv").string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Digit-forensics toolkit: Newcomb-Benford conformance analysis of count series"};
  app.require_subcommand(1);

  auto* analyze = app.add_subcommand("analyze", "Run the full study on normalized count CSVs");
  std::string config_path, out_dir, format = "json", digit = "both", focal_group;
  std::vector<std::string> inputs;
  int replications = 0;
  std::int64_t seed = -1;
  double alpha = 0.0;
  bool strict = false;
  analyze->add_option("--config", config_path, "Study configuration file")->required();
  analyze->add_option("--input", inputs, "Input CSV file(s)")->required()->expected(-1);
  analyze->add_option("--out", out_dir, "Output directory")->required();
  analyze->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"json", "csv-bundle"}));
  analyze->add_option("--digit", digit, "Digit position(s)")->check(CLI::IsMember({"1", "2", "both"}));
  analyze->add_option("--replications", replications, "Monte-Carlo replications B");
  analyze->add_option("--seed", seed, "Random seed");
  analyze->add_option("--alpha", alpha, "FDR / confidence level alpha");
  analyze->add_flag("--second-digit-strict", strict, "Read 'larger than 10' as > 10");
  analyze->add_option("--focal-group", focal_group, "Focal group for the two-row grouping");

  auto* sweep = app.add_subcommand("synth-sweep", "Digit-law conformance sweep over growth curves");
  std::string spec_path, sweep_out;
  int sweep_replications = 0;
  std::int64_t sweep_seed = -1;
  sweep->add_option("--spec", spec_path, "Growth spec CSV")->required();
  sweep->add_option("--out", sweep_out, "Output directory")->required();
  sweep->add_option("--replications", sweep_replications, "Monte-Carlo replications B");
  sweep->add_option("--seed", sweep_seed, "Random seed");

  auto* table = app.add_subcommand("benford-table", "Print the exact digit-law table");
  std::string table_digit;
  table->add_option("--digit", table_digit, "Restrict to one position")
      ->check(CLI::IsMember({"1", "2"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // Flatten CLI11's error codes onto the documented contract: bad usage is
    // an input error (1); --help and --version exit cleanly.
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (*analyze) {
      return run_analyze(config_path, inputs, out_dir, format, digit, replications, seed, alpha,
                         strict, focal_group);
    }
    if (*sweep) return run_synth_sweep(spec_path, sweep_out, sweep_replications, sweep_seed);
    if (*table) {
      std::optional<benford::DigitPosition> only;
      if (table_digit == "1") only = benford::DigitPosition::First;
      if (table_digit == "2") only = benford::DigitPosition::Second;
      std::cout << benford::render_benford_table(only);
      return 0;
    }
  } catch (const benford::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

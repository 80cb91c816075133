// End-to-end acceptance checks. Each numbered criterion prints exactly one
// PASS/FAIL line; the process exits nonzero if any criterion fails.
#include <cmath>
#include <cstdio>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "benford/adjust.hpp"
#include "benford/digits.hpp"
#include "benford/inference.hpp"
#include "benford/pipeline.hpp"
#include "benford/report.hpp"
#include "benford/rng.hpp"
#include "benford/simultci.hpp"
#include "benford/synth.hpp"

using namespace benford;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void verdict(int criterion, bool pass, const std::string& detail) {
  std::printf("%s criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

// 1. Digit-law exactness: rendered table matches the published values at one
// decimal in percent; closed-form sums equal 1 within 1e-12.
void criterion_1() {
  const double expected_first[9] = {30.1, 17.6, 12.5, 9.7, 7.9, 6.7, 5.8, 5.1, 4.6};
  const double expected_second[10] = {12.0, 11.4, 10.9, 10.4, 10.0, 9.7, 9.3, 9.0, 8.8, 8.5};
  const std::string table = render_benford_table();
  bool ok = true;
  char buf[16];
  for (int k = 1; k <= 9; ++k) {
    if (std::round(1000.0 * benford_first(k)) / 10.0 != expected_first[k - 1]) ok = false;
    std::snprintf(buf, sizeof(buf), "%5.1f", 100.0 * benford_first(k));
    if (table.find(buf) == std::string::npos) ok = false;
  }
  for (int k = 0; k <= 9; ++k) {
    if (std::round(1000.0 * benford_second(k)) / 10.0 != expected_second[k]) ok = false;
    std::snprintf(buf, sizeof(buf), "%5.1f", 100.0 * benford_second(k));
    if (table.find(buf) == std::string::npos) ok = false;
  }
  double s1 = 0.0, s2 = 0.0;
  for (int k = 1; k <= 9; ++k) s1 += benford_first(k);
  for (int k = 0; k <= 9; ++k) s2 += benford_second(k);
  if (std::abs(s1 - 1.0) > 1e-12 || std::abs(s2 - 1.0) > 1e-12) ok = false;
  verdict(1, ok, "digit-law table matches all 18 published one-decimal values, sums exact");
}

// 2. GOF calibration: 1000 observed datasets drawn from the first-digit law
// at n=300, B=2000; rejection rate at 0.05 within [0.03, 0.07].
void criterion_2() {
  const auto dist = benford_distribution(DigitPosition::First);
  const int datasets = 1000, B = 2000;
  const std::int64_t n = 300;
  int rejections = 0;
  for (int i = 0; i < datasets; ++i) {
    SplitMix64 rng = replicate_stream(0xCA11B8ULL, static_cast<std::uint64_t>(i));
    DigitCounts obs;
    obs.position = DigitPosition::First;
    obs.counts = sample_multinomial(n, dist.probabilities, rng);
    obs.n = n;
    const auto result = mc_gof_test(obs, dist, B, mix64(0xCA11B8ULL + static_cast<std::uint64_t>(i)));
    if (result.p_raw < 0.05) ++rejections;
  }
  const double rate = static_cast<double>(rejections) / datasets;
  char detail[128];
  std::snprintf(detail, sizeof(detail),
                "GOF rejection rate %.4f at nominal 0.05 (1000 null datasets, n=300, B=2000)", rate);
  verdict(2, rate >= 0.03 && rate <= 0.07, detail);
}

// 3. FDR arithmetic: hand-derived vectors exact; BY >= BH >= raw on 10^4
// random p-vectors.
void criterion_3() {
  bool ok = true;
  const std::vector<double> ladder = {0.01, 0.02, 0.03, 0.04};
  for (double v : bh_adjust(ladder)) {
    if (std::abs(v - 0.04) > 1e-12) ok = false;
  }
  for (double v : by_adjust(ladder)) {
    if (std::abs(v - 1.0 / 12.0) > 1e-12) ok = false;
  }
  const auto capped = by_adjust(std::vector<double>{0.9, 0.95});
  if (capped[0] != 1.0 || capped[1] != 1.0) ok = false;

  SplitMix64 rng(0xFD12ULL);
  for (int trial = 0; trial < 10000 && ok; ++trial) {
    const std::size_t m = 1 + rng.next_below(16);
    std::vector<double> p(m);
    for (auto& v : p) v = rng.next_double();
    const auto bh = bh_adjust(p);
    const auto by = by_adjust(p);
    for (std::size_t i = 0; i < m; ++i) {
      if (!(by[i] >= bh[i] && bh[i] >= p[i] && by[i] <= 1.0)) ok = false;
    }
  }
  verdict(3, ok, "BH/BY reference vectors exact; BY >= BH >= raw on 10^4 random vectors");
}

// 4. Simultaneous-interval oracle equivalence: for every count vector with
// n <= 20 and k in {2,3}, the approximate c is within one unit of the
// exact-enumeration c, and the simulated probability (10^4 draws from the
// fitted multinomial) of a draw landing inside the selected count box is at
// least 0.93 at confidence 0.95.
void criterion_4() {
  bool ok = true;
  int cases = 0, worst_dc = 0;
  double worst_cov = 1.0;
  auto check_case = [&](const std::vector<std::int64_t>& counts) {
    ++cases;
    const auto approx = sison_glaz(counts, 0.95);
    const auto exact = exact_intervals(counts, 0.95);
    const int dc = std::abs(approx.c_value - exact.c_value);
    worst_dc = std::max(worst_dc, dc);
    if (dc > 1) ok = false;

    std::int64_t n = 0;
    for (auto x : counts) n += x;
    std::vector<double> phat;
    for (auto x : counts) phat.push_back(static_cast<double>(x) / static_cast<double>(n));
    const std::int64_t box = approx.c_value + (approx.gamma > 0.0 ? 1 : 0);
    const int draws = 10000;
    int inside = 0;
    for (int d = 0; d < draws; ++d) {
      SplitMix64 rng = replicate_stream(0xC0Fu + static_cast<std::uint64_t>(cases),
                                        static_cast<std::uint64_t>(d));
      const auto draw = sample_multinomial(n, phat, rng);
      bool in = true;
      for (std::size_t i = 0; i < counts.size(); ++i) {
        if (std::llabs(draw[i] - counts[i]) > box) in = false;
      }
      if (in) ++inside;
    }
    const double cov = static_cast<double>(inside) / draws;
    worst_cov = std::min(worst_cov, cov);
    if (cov < 0.93) ok = false;
  };

  for (std::int64_t n = 1; n <= 20; ++n) {
    for (std::int64_t a = 0; a <= n; ++a) check_case({a, n - a});
    for (std::int64_t a = 0; a <= n; ++a) {
      for (std::int64_t b = 0; a + b <= n; ++b) check_case({a, b, n - a - b});
    }
  }
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "interval oracle over %d cases (n<=20, k=2,3): max |c - c_exact| = %d, "
                "min simulated coverage %.4f (floor 0.93)",
                cases, worst_dc, worst_cov);
  verdict(4, ok, detail);
}

struct FixtureVerdicts {
  bool ok5 = false, ok7 = false;
  std::string detail5, detail7;
};

// 5./7. Full fixture study: shape, joint adjustment, interval confidence,
// determinism, and Monte-Carlo p-value bounds.
FixtureVerdicts run_fixture_study(const fs::path& data) {
  const auto config = load_config(data / "fixtures" / "study_config.txt");
  const std::vector<fs::path> inputs = {data / "fixtures" / "covid_counts.csv"};
  const auto report = run_study(config, inputs);
  const std::string first = report_to_json(report).dump(2);
  const std::string second = report_to_json(run_study(config, inputs)).dump(2);

  bool ok5 = report.gof_results.size() == 32;
  int all_groups = 0, focal = 0;
  for (const auto& r : report.independence_results) {
    if (r.grouping == "all-groups") ++all_groups;
    if (r.grouping == "focal-vs-rest") ++focal;
  }
  if (all_groups != 8 || focal != 8) ok5 = false;
  if (report.interval_sets.size() != 32) ok5 = false;
  const double confidence = 1.0 - 0.05 / 32.0;
  for (const auto& r : report.interval_sets) {
    if (r.intervals.confidence != confidence) ok5 = false;
  }
  // Jointly adjusted family: BH never falls below raw and is shared monotone.
  for (const auto& r : report.gof_results) {
    if (r.p_bh < r.result.p_raw || r.p_by < r.p_bh) ok5 = false;
  }
  if (first != second) ok5 = false;
  char detail5[160];
  std::snprintf(detail5, sizeof(detail5),
                "fixture study: %zu GOF rows, %d+%d independence rows, %zu interval sets at "
                "confidence 1-0.05/32, repeat run byte-identical: %s",
                report.gof_results.size(), all_groups, focal, report.interval_sets.size(),
                first == second ? "yes" : "no");

  const double floor = 1.0 / static_cast<double>(config.replications + 1);
  bool ok7 = true;
  double min_p = 1.0;
  for (const auto& r : report.gof_results) {
    min_p = std::min(min_p, r.result.p_raw);
    if (r.result.p_raw < floor || r.result.p_raw > 1.0) ok7 = false;
  }
  for (const auto& r : report.independence_results) {
    min_p = std::min(min_p, r.result.p_raw);
    if (r.result.p_raw < floor || r.result.p_raw > 1.0) ok7 = false;
  }
  char detail7[128];
  std::snprintf(detail7, sizeof(detail7),
                "all 48 Monte-Carlo p-values in [1/(B+1), 1]; smallest %.6f vs floor %.6f",
                min_p, floor);
  return FixtureVerdicts{ok5, ok7, detail5, detail7};
}

// 6. Exponential conformance: doubling over 1000 days conforms to the
// first-digit law; powers of ten do not.
void criterion_6() {
  const int B = 5000;
  GrowthSpec doubling;
  doubling.model = GrowthModel::Geometric;
  doubling.initial = 1.0;
  doubling.rate = 2.0;
  doubling.horizon = 1000;
  doubling.label = "doubling";
  GrowthSpec tenfold = doubling;
  tenfold.rate = 10.0;
  tenfold.horizon = 18;
  tenfold.label = "tenfold";
  const std::vector<GrowthSpec> specs = {doubling, tenfold};
  const auto rows = conformance_sweep(specs, DigitPosition::First, B, 0x5EEDULL);
  const bool ok = rows.size() == 2 && rows[0].tested && rows[0].tv_distance < 0.05 &&
                  rows[0].p_raw > 0.05 && rows[1].tested &&
                  rows[1].p_raw == 1.0 / static_cast<double>(B + 1);
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "doubling growth: TV=%.5f (<0.05), p=%.4f (>0.05); tenfold growth: p=%.6f "
                "(=1/(B+1))",
                rows[0].tv_distance, rows[0].p_raw, rows[1].p_raw);
  verdict(6, ok, detail);
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::fprintf(stderr, "usage: acceptance <data-dir>\n");
    return 2;
  }
  const fs::path data(argv[1]);
  try {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    const FixtureVerdicts fixture = run_fixture_study(data);
    verdict(5, fixture.ok5, fixture.detail5);
    criterion_6();
    verdict(7, fixture.ok7, fixture.detail7);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance run aborted: %s\n", e.what());
    return 2;
  }
  return failures == 0 ? 0 : 1;
}

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "hdrtrain/report.hpp"
#include "support/tempdir.hpp"

using namespace hdrtrain;

namespace {

EvaluationReport sample_report() {
  EvaluationReport r;
  r.conditions = {"Linear-L1", "PU21-L1", "PQ-L1"};
  r.image_ids = {"a", "b", "c", "d"};
  ScoreMatrix psnr{r.conditions, {{30.0, 31.0, 29.5, 30.2}, {34.0, 35.5, 33.1, 34.9}, {33.9, 35.0, 33.3, 34.0}}};
  ScoreMatrix ssim{r.conditions, {{0.80, 0.82, 0.79, 0.81}, {0.90, 0.91, 0.92, 0.90}, {0.90, 0.91, 0.92, 0.90}}};
  r.metrics.push_back(analyze_metric("PU-PSNR", psnr, {}));
  r.metrics.push_back(analyze_metric("PU-SSIM", ssim, {}));
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace

TEST_CASE("report JSON round-trips") {
  const auto r = sample_report();
  const auto j = report_to_json(r);
  CHECK(j.at("format") == "hdrtrain-evaluation-report");
  CHECK(j.at("metrics").size() == 2);
  const auto back = report_from_json(nlohmann::json::parse(j.dump()));
  CHECK(report_to_json(back) == j);
  CHECK(back.metrics[0].scores.samples == r.metrics[0].scores.samples);
}

TEST_CASE("median table layout") {
  const auto csv = median_table_csv(sample_report());
  CHECK(csv ==
        "metric,Linear-L1,PU21-L1,PQ-L1\n"
        "PU-PSNR,30.100000,34.450000,33.950000\n"
        "PU-PSNR rank,,best,second\n"
        "PU-SSIM,0.805000,0.905000,0.905000\n"
        "PU-SSIM rank,second,best,best\n");
}

TEST_CASE("violin data has one column per condition") {
  const auto r = sample_report();
  const auto csv = violin_csv(r.metrics[0], r.image_ids);
  CHECK(csv.rfind("image_id,Linear-L1,PU21-L1,PQ-L1\na,30.000000,34.000000,33.900000\n", 0) == 0);
}

TEST_CASE("write_report produces the file set") {
  testsupport::TempDir dir("hdrtrain_report");
  write_report(sample_report(), dir.path());
  CHECK(std::filesystem::exists(dir / "report.json"));
  CHECK(std::filesystem::exists(dir / "violin_PU-PSNR.csv"));
  CHECK(std::filesystem::exists(dir / "violin_PU-SSIM.csv"));
  CHECK(slurp(dir / "median_table.csv") == median_table_csv(sample_report()));
  CHECK(report_summary(sample_report()).find("PU-PSNR medians") != std::string::npos);
}

TEST_CASE("registry JSON") {
  const auto j = registry_to_json();
  REQUIRE(j.size() == 8);
  CHECK(j[3].at("label") == "mu-L1");
  CHECK(j[3].at("encoding").at("mu") == 5000.0);
  CHECK(j[7].at("loss").at("name") == "smape");
}

TEST_CASE("number formatting") {
  CHECK(format_number(1.0) == "1.000000");
  CHECK(format_number(INFINITY) == "inf");
}

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>
#include "hdrtrain/loss.hpp"
#include "hdrtrain/stats.hpp"

namespace hdrtrain {

struct MetricReport {
  std::string name;
  bool higher_is_better = true;
  ScoreMatrix scores;
  MedianRow medians;
  PairwiseTests tests;
  SignificanceGroups groups;
};

MetricReport analyze_metric(std::string name, ScoreMatrix scores, const GroupingOptions& options);

struct EvaluationReport {
  std::vector<std::string> conditions;
  std::vector<std::string> image_ids;
  double alpha = 0.05;
  bool bonferroni = false;
  std::vector<MetricReport> metrics;
};

nlohmann::json report_to_json(const EvaluationReport& report);
// Rebuilds a report from the per-image scores stored in the JSON, re-running
// the analysis with the stored alpha and correction setting.
EvaluationReport report_from_json(const nlohmann::json& j);

// One row per metric with condition columns, followed by a rank row marking
// best / second.
std::string median_table_csv(const EvaluationReport& report);
// Columns: image_id, then one score column per condition.
std::string violin_csv(const MetricReport& metric, const std::vector<std::string>& image_ids);
// Human-readable summary: median table plus group lines.
std::string report_summary(const EvaluationReport& report);

// report.json, median_table.csv and violin_<metric>.csv under `dir`.
void write_report(const EvaluationReport& report, const std::filesystem::path& dir);

nlohmann::json encoding_to_json(const EncodingKind& kind);
nlohmann::json condition_to_json(const Condition& condition);
nlohmann::json registry_to_json();

std::string format_number(double v);

}  // namespace hdrtrain

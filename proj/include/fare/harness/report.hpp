#pragma once

#include <map>
#include <string>
#include <vector>

#include "fare/core/io.hpp"

namespace fare {

inline constexpr const char* kMetricAccuracy = "accuracy";
inline constexpr const char* kMetricConsistentAccuracy = "consistent_accuracy";
inline constexpr const char* kMetricProcessBenchF1 = "processbench_f1";
inline constexpr const char* kMetricPearson = "pearson";

struct ReportRow {
  std::string id;
  /// Raw verdict per order (one, or two in consistent mode). "parse_failure"
  /// or "error" when no judgment was obtained for that order.
  std::vector<std::string> predictions;
  ordered_json prediction;  // final judgment as JSON, null when missing
  ordered_json gold;
  bool credited = false;
  bool excluded = false;
  std::string note;
};

struct MetricReport {
  std::string metric;
  double value = 0.0;
  std::size_t n = 0;  // rows that enter the metric
  std::vector<ReportRow> rows;
  std::map<std::string, double> extras;
  ordered_json config = ordered_json::object();
};

/// Recomputes the report's metric from its rows alone. Throws
/// UndefinedMetricError as the metric functions do.
double recompute_metric(const MetricReport& report);

/// Sorts rows by id, then fills value and n from the rows.
void finalize(MetricReport& report);

ordered_json report_to_json(const MetricReport& report);
MetricReport report_from_json(const nlohmann::json& value);

}  // namespace fare

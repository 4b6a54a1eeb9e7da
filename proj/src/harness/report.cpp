#include "fare/harness/report.hpp"

#include <algorithm>

#include "fare/core/error.hpp"
#include "fare/harness/metrics.hpp"

namespace fare {

namespace {

std::size_t included(const MetricReport& r) {
  return static_cast<std::size_t>(std::count_if(r.rows.begin(), r.rows.end(),
                                                [](const ReportRow& row) { return !row.excluded; }));
}

}  // namespace

double recompute_metric(const MetricReport& report) {
  if (report.metric == kMetricAccuracy || report.metric == kMetricConsistentAccuracy) {
    std::size_t n = 0, credited = 0;
    for (const auto& row : report.rows) {
      if (row.excluded) continue;
      ++n;
      credited += row.credited;
    }
    if (n == 0) throw UndefinedMetricError(report.metric + ": no samples");
    return static_cast<double>(credited) / static_cast<double>(n);
  }
  if (report.metric == kMetricProcessBenchF1) {
    std::vector<StepOutcome> outcomes;
    for (const auto& row : report.rows) {
      if (row.excluded) continue;
      StepOutcome o;
      if (row.prediction.is_number_integer()) o.predicted = row.prediction.get<int>();
      o.gold = row.gold.get<int>();
      outcomes.push_back(o);
    }
    return processbench_f1(outcomes).f1;
  }
  if (report.metric == kMetricPearson) {
    std::vector<double> x, y;
    for (const auto& row : report.rows) {
      if (row.excluded) continue;
      x.push_back(row.prediction.get<double>());
      y.push_back(row.gold.get<double>());
    }
    return pearson(x, y);
  }
  throw DomainError("unknown metric '" + report.metric + "'");
}

void finalize(MetricReport& report) {
  std::stable_sort(report.rows.begin(), report.rows.end(),
                   [](const ReportRow& a, const ReportRow& b) { return a.id < b.id; });
  report.n = included(report);
  report.value = recompute_metric(report);
}

ordered_json report_to_json(const MetricReport& r) {
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    ordered_json j{{"id", row.id},
                   {"predictions", row.predictions},
                   {"prediction", row.prediction},
                   {"gold", row.gold},
                   {"credited", row.credited}};
    if (row.excluded) j["excluded"] = true;
    if (!row.note.empty()) j["note"] = row.note;
    rows.push_back(std::move(j));
  }
  ordered_json extras = ordered_json::object();
  for (const auto& [k, v] : r.extras) extras[k] = v;
  return ordered_json{{"metric", r.metric}, {"value", r.value}, {"n", r.n},
                      {"extras", extras},   {"config", r.config}, {"per_sample", rows}};
}

MetricReport report_from_json(const nlohmann::json& v) {
  try {
    MetricReport r;
    r.metric = v.at("metric").get<std::string>();
    r.value = v.at("value").get<double>();
    r.n = v.at("n").get<std::size_t>();
    if (v.contains("extras")) {
      for (const auto& [k, x] : v.at("extras").items()) r.extras[k] = x.get<double>();
    }
    if (v.contains("config")) r.config = v.at("config");
    for (const auto& j : v.at("per_sample")) {
      ReportRow row;
      row.id = j.at("id").get<std::string>();
      row.predictions = j.at("predictions").get<std::vector<std::string>>();
      row.prediction = j.at("prediction");
      row.gold = j.at("gold");
      row.credited = j.at("credited").get<bool>();
      row.excluded = j.value("excluded", false);
      row.note = j.value("note", "");
      r.rows.push_back(std::move(row));
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("bad metric report: ") + e.what());
  }
}

}  // namespace fare

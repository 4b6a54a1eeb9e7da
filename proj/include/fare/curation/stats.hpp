#pragma once

#include <map>
#include <span>
#include <string>

#include "fare/core/io.hpp"

namespace fare {

struct CategoryBreakdown {
  std::map<std::string, std::size_t> counts;
  std::map<std::string, double> fractions;
};

struct DatasetStats {
  std::size_t total = 0;
  CategoryBreakdown by_task;
  CategoryBreakdown by_domain;
  CategoryBreakdown by_provenance;
};

/// Samples with an empty domain tag are counted under "unknown".
DatasetStats dataset_stats(std::span<const LabeledSample> samples);

ordered_json stats_to_json(const DatasetStats& stats);

}  // namespace fare

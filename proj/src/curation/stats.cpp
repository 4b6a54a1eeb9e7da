#include "fare/curation/stats.hpp"

namespace fare {

namespace {

void finish(CategoryBreakdown& b, std::size_t total) {
  for (const auto& [k, c] : b.counts) {
    b.fractions[k] = static_cast<double>(c) / static_cast<double>(total);
  }
}

ordered_json breakdown_json(const CategoryBreakdown& b) {
  ordered_json out = ordered_json::object();
  for (const auto& [k, c] : b.counts) {
    out[k] = ordered_json{{"count", c}, {"fraction", b.fractions.at(k)}};
  }
  return out;
}

}  // namespace

DatasetStats dataset_stats(std::span<const LabeledSample> samples) {
  DatasetStats s;
  s.total = samples.size();
  for (const auto& x : samples) {
    ++s.by_task.counts[std::string(to_string(x.task()))];
    ++s.by_domain.counts[x.domain_tag.empty() ? "unknown" : x.domain_tag];
    ++s.by_provenance.counts[std::string(to_string(x.provenance))];
  }
  if (s.total > 0) {
    finish(s.by_task, s.total);
    finish(s.by_domain, s.total);
    finish(s.by_provenance, s.total);
  }
  return s;
}

ordered_json stats_to_json(const DatasetStats& stats) {
  return ordered_json{{"total", stats.total},
                      {"task", breakdown_json(stats.by_task)},
                      {"domain", breakdown_json(stats.by_domain)},
                      {"provenance", breakdown_json(stats.by_provenance)}};
}

}  // namespace fare

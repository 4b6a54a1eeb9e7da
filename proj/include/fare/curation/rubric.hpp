#pragma once

#include <map>
#include <string>
#include <utility>

#include "fare/core/types.hpp"

namespace fare {

struct Rubric {
  std::string id;
  std::string text;
};

/// Rubric overrides keyed by (source dataset, task). "*" matches any dataset.
/// Lookups that find nothing fall back to the stock rubric for the task.
class RubricCatalog {
 public:
  void add(std::string dataset, TaskKind task, Rubric rubric);

  EvalProtocol protocol_for(TaskKind task, const std::string& dataset,
                            TemplateVariant variant = TemplateVariant::WithCritique) const;

  std::size_t size() const { return entries_.size(); }

 private:
  std::map<std::pair<std::string, TaskKind>, Rubric> entries_;
};

}  // namespace fare

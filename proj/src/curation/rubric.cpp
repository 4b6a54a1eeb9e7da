#include "fare/curation/rubric.hpp"

#include "fare/core/error.hpp"
#include "fare/core/prompt.hpp"

namespace fare {

void RubricCatalog::add(std::string dataset, TaskKind task, Rubric rubric) {
  if (rubric.text.empty()) throw ConfigError("rubric '" + rubric.id + "' has empty text");
  if (rubric.id.empty()) rubric.id = dataset + "/" + std::string(to_string(task));
  entries_[{std::move(dataset), task}] = std::move(rubric);
}

EvalProtocol RubricCatalog::protocol_for(TaskKind task, const std::string& dataset,
                                         TemplateVariant variant) const {
  EvalProtocol p = default_protocol(task, variant);
  auto it = entries_.find({dataset, task});
  if (it == entries_.end()) it = entries_.find({"*", task});
  if (it != entries_.end()) {
    p.rubric_id = it->second.id;
    p.rubric_text = it->second.text;
  }
  return p;
}

}  // namespace fare

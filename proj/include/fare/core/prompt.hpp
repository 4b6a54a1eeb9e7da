#pragma once

#include <string>
#include <string_view>

#include "fare/core/types.hpp"

namespace fare {

/// Raw template pair for one (task, variant). `system` holds a `{rubric}`
/// placeholder; `user` holds `{question}` plus the task's response slots
/// (`{response_a}`/`{response_b}`, `{response}`, `{reference}`).
struct PromptTemplate {
  std::string_view system;
  std::string_view user;
};

/// Throws ConfigError for an unsupported (task, variant) combination.
PromptTemplate prompt_template(TaskKind task, TemplateVariant variant);

/// Rules block shipped with the stock prompt of each task. Curated samples
/// may carry a dataset-specific rubric in its place.
std::string_view default_rubric(TaskKind task);
std::string default_rubric_id(TaskKind task);

/// Protocol with the stock rubric for `task`.
EvalProtocol default_protocol(TaskKind task, TemplateVariant variant = TemplateVariant::WithCritique);

/// Wraps steps as "<step i>\n...\n</step i>", indexed from 0, joined by "\n".
std::string format_steps(const std::vector<std::string>& steps);

/// System + user messages for `input`. Placeholders are substituted in a
/// single pass, so substituted text is never re-expanded.
ChatMessages render_prompt(const EvalInput& input);

}  // namespace fare

#include "fare/core/types.hpp"

#include <algorithm>
#include <cctype>

#include "fare/core/error.hpp"

namespace fare {
namespace {

std::string normalize_name(std::string_view name) {
  std::string out;
  out.reserve(name.size());
  for (char c : name) {
    if (c == '-' || c == ' ') {
      out.push_back('_');
    } else {
      out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string_view to_string(TaskKind task) {
  switch (task) {
    case TaskKind::Pairwise: return "pairwise";
    case TaskKind::StepLevel: return "step_level";
    case TaskKind::RefBasedVerification: return "ref_based_verification";
    case TaskKind::RefFreeVerification: return "ref_free_verification";
    case TaskKind::SingleRating: return "single_rating";
  }
  return "unknown";
}

std::optional<TaskKind> parse_task_kind(std::string_view name) {
  const std::string n = normalize_name(name);
  if (n == "pairwise") return TaskKind::Pairwise;
  if (n == "step_level" || n == "step" || n == "steplevel") return TaskKind::StepLevel;
  if (n == "ref_based_verification" || n == "ref_based" || n == "refbased")
    return TaskKind::RefBasedVerification;
  if (n == "ref_free_verification" || n == "ref_free" || n == "reffree")
    return TaskKind::RefFreeVerification;
  if (n == "single_rating" || n == "rating") return TaskKind::SingleRating;
  return std::nullopt;
}

std::string_view to_string(TemplateVariant variant) {
  switch (variant) {
    case TemplateVariant::WithCritique: return "with_critique";
    case TemplateVariant::DirectJudgment: return "direct_judgment";
  }
  return "unknown";
}

std::optional<TemplateVariant> parse_template_variant(std::string_view name) {
  const std::string n = normalize_name(name);
  if (n == "with_critique" || n == "critique") return TemplateVariant::WithCritique;
  if (n == "direct_judgment" || n == "direct") return TemplateVariant::DirectJudgment;
  return std::nullopt;
}

TaskKind task_of(const ResponseSet& responses) {
  return static_cast<TaskKind>(responses.index());
}

std::size_t judgment_index_for(TaskKind task) {
  switch (task) {
    case TaskKind::Pairwise: return 0;
    case TaskKind::StepLevel: return 1;
    case TaskKind::RefBasedVerification:
    case TaskKind::RefFreeVerification: return 2;
    case TaskKind::SingleRating: return 3;
  }
  throw DomainError("unknown task kind");
}

bool judgment_matches_task(const Judgment& judgment, TaskKind task) {
  return judgment.index() == judgment_index_for(task);
}

std::string format_verdict(const Judgment& judgment) {
  return std::visit(
      overloaded{
          [](const PairChoice& j) { return std::string(j.choice == Choice::A ? "[A]" : "[B]"); },
          [](const ErrorStep& j) { return std::to_string(j.index); },
          [](const BinaryVerdict& j) {
            return std::string(j.verdict == Verdict::Correct ? "[A]" : "[B]");
          },
          [](const Rating& j) { return std::to_string(j.value); },
      },
      judgment);
}

std::string describe(const Judgment& judgment) {
  return std::visit(
      overloaded{
          [](const PairChoice& j) { return std::string(j.choice == Choice::A ? "A" : "B"); },
          [](const ErrorStep& j) { return "step " + std::to_string(j.index); },
          [](const BinaryVerdict& j) {
            return std::string(j.verdict == Verdict::Correct ? "correct" : "incorrect");
          },
          [](const Rating& j) { return "rating " + std::to_string(j.value); },
      },
      judgment);
}

std::string_view to_string(Provenance provenance) {
  return provenance == Provenance::Existing ? "existing" : "synthetic";
}

std::optional<Provenance> parse_provenance(std::string_view name) {
  const std::string n = normalize_name(name);
  if (n == "existing") return Provenance::Existing;
  if (n == "synthetic") return Provenance::Synthetic;
  return std::nullopt;
}

std::string_view to_string(Role role) {
  switch (role) {
    case Role::System: return "system";
    case Role::User: return "user";
    case Role::Assistant: return "assistant";
  }
  return "unknown";
}

std::optional<Role> parse_role(std::string_view name) {
  if (name == "system") return Role::System;
  if (name == "user") return Role::User;
  if (name == "assistant") return Role::Assistant;
  return std::nullopt;
}

void validate(const EvalProtocol& protocol) {
  if (protocol.rubric_text.empty()) throw DomainError("protocol.rubric_text must be non-empty");
  if (protocol.variant != TemplateVariant::WithCritique &&
      protocol.variant != TemplateVariant::DirectJudgment) {
    throw DomainError("protocol.template_variant is not a known variant");
  }
  if (std::find(kAllTasks.begin(), kAllTasks.end(), protocol.task) == kAllTasks.end()) {
    throw DomainError("protocol.task is not a known task");
  }
}

void validate(const EvalInput& input) {
  validate(input.protocol);
  if (task_of(input.responses) != input.protocol.task) {
    throw DomainError("input '" + input.id + "': responses do not match protocol task " +
                      std::string(to_string(input.protocol.task)));
  }
  if (const auto* steps = std::get_if<StepResponses>(&input.responses);
      steps != nullptr && steps->steps.empty()) {
    throw DomainError("input '" + input.id + "': step-level responses need at least one step");
  }
}

void validate_judgment_for(const Judgment& judgment, const EvalInput& input) {
  if (!judgment_matches_task(judgment, input.protocol.task)) {
    throw DomainError("input '" + input.id + "': judgment kind does not match task " +
                      std::string(to_string(input.protocol.task)));
  }
  if (const auto* step = std::get_if<ErrorStep>(&judgment)) {
    const auto& steps = std::get<StepResponses>(input.responses).steps;
    if (step->index < -1 || step->index >= static_cast<int>(steps.size())) {
      throw DomainError("input '" + input.id + "': error step " + std::to_string(step->index) +
                        " outside [-1, " + std::to_string(steps.size() - 1) + "]");
    }
  }
  if (const auto* rating = std::get_if<Rating>(&judgment)) {
    if (rating->value < kMinRating || rating->value > kMaxRating) {
      throw DomainError("input '" + input.id + "': rating " + std::to_string(rating->value) +
                        " outside [1, 5]");
    }
  }
}

void validate(const LabeledSample& sample) {
  validate(sample.input);
  validate_judgment_for(sample.gold, sample.input);
}

}  // namespace fare

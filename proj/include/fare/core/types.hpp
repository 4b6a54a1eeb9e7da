#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace fare {

// ---------------------------------------------------------------------------
// Tasks and protocols
// ---------------------------------------------------------------------------

enum class TaskKind {
  Pairwise,
  StepLevel,
  RefBasedVerification,
  RefFreeVerification,
  SingleRating,
};

inline constexpr std::array<TaskKind, 5> kAllTasks = {
    TaskKind::Pairwise, TaskKind::StepLevel, TaskKind::RefBasedVerification,
    TaskKind::RefFreeVerification, TaskKind::SingleRating};

/// Stable snake_case name used in every file format ("pairwise", "step_level",
/// "ref_based_verification", "ref_free_verification", "single_rating").
std::string_view to_string(TaskKind task);

/// Accepts the canonical names plus kebab-case and a few short aliases
/// ("step", "ref_based", "ref_free", "rating").
std::optional<TaskKind> parse_task_kind(std::string_view name);

enum class TemplateVariant { WithCritique, DirectJudgment };

std::string_view to_string(TemplateVariant variant);
std::optional<TemplateVariant> parse_template_variant(std::string_view name);

struct EvalProtocol {
  TaskKind task = TaskKind::Pairwise;
  std::string rubric_id;
  std::string rubric_text;
  TemplateVariant variant = TemplateVariant::WithCritique;

  friend bool operator==(const EvalProtocol&, const EvalProtocol&) = default;
};

// ---------------------------------------------------------------------------
// Responses under evaluation. Alternative order follows TaskKind.
// ---------------------------------------------------------------------------

struct PairwiseResponses {
  std::string response_a;
  std::string response_b;
  friend bool operator==(const PairwiseResponses&, const PairwiseResponses&) = default;
};

struct StepResponses {
  std::vector<std::string> steps;
  friend bool operator==(const StepResponses&, const StepResponses&) = default;
};

struct RefBasedResponses {
  std::string candidate;
  std::string reference;
  friend bool operator==(const RefBasedResponses&, const RefBasedResponses&) = default;
};

struct RefFreeResponses {
  std::string response;
  friend bool operator==(const RefFreeResponses&, const RefFreeResponses&) = default;
};

struct RatingResponses {
  std::string response;
  friend bool operator==(const RatingResponses&, const RatingResponses&) = default;
};

using ResponseSet = std::variant<PairwiseResponses, StepResponses, RefBasedResponses,
                                 RefFreeResponses, RatingResponses>;

TaskKind task_of(const ResponseSet& responses);

struct EvalInput {
  std::string id;
  EvalProtocol protocol;
  std::string question;
  ResponseSet responses;

  friend bool operator==(const EvalInput&, const EvalInput&) = default;
};

// ---------------------------------------------------------------------------
// Judgments
// ---------------------------------------------------------------------------

enum class Choice { A, B };
enum class Verdict { Correct, Incorrect };

struct PairChoice {
  Choice choice = Choice::A;
  friend bool operator==(const PairChoice&, const PairChoice&) = default;
};

/// Index of the first erroneous step, or -1 when the solution is error free.
struct ErrorStep {
  int index = -1;
  friend bool operator==(const ErrorStep&, const ErrorStep&) = default;
};

struct BinaryVerdict {
  Verdict verdict = Verdict::Correct;
  friend bool operator==(const BinaryVerdict&, const BinaryVerdict&) = default;
};

/// Integer rating in [1, 5].
struct Rating {
  int value = 1;
  friend bool operator==(const Rating&, const Rating&) = default;
};

using Judgment = std::variant<PairChoice, ErrorStep, BinaryVerdict, Rating>;

inline constexpr int kMinRating = 1;
inline constexpr int kMaxRating = 5;

/// Variant index of the judgment a task produces (both verification tasks
/// share BinaryVerdict).
std::size_t judgment_index_for(TaskKind task);

bool judgment_matches_task(const Judgment& judgment, TaskKind task);

/// Text placed after "Verdict: " for this judgment: "[A]"/"[B]" for pairs and
/// verification (Correct is [A]), the bare integer for steps and ratings.
std::string format_verdict(const Judgment& judgment);

/// Short human-readable label ("A", "step 3", "correct", "rating 4").
std::string describe(const Judgment& judgment);

struct EvaluatorOutput {
  std::optional<std::string> critique;
  Judgment judgment;

  friend bool operator==(const EvaluatorOutput&, const EvaluatorOutput&) = default;
};

enum class Provenance { Existing, Synthetic };

std::string_view to_string(Provenance provenance);
std::optional<Provenance> parse_provenance(std::string_view name);

struct LabeledSample {
  EvalInput input;
  Judgment gold;
  Provenance provenance = Provenance::Existing;
  std::string domain_tag;
  std::string source_dataset;

  const std::string& id() const { return input.id; }
  TaskKind task() const { return input.protocol.task; }

  friend bool operator==(const LabeledSample&, const LabeledSample&) = default;
};

// ---------------------------------------------------------------------------
// Chat messages
// ---------------------------------------------------------------------------

enum class Role { System, User, Assistant };

std::string_view to_string(Role role);
std::optional<Role> parse_role(std::string_view name);

struct ChatMessage {
  Role role = Role::User;
  std::string content;
  friend bool operator==(const ChatMessage&, const ChatMessage&) = default;
};

using ChatMessages = std::vector<ChatMessage>;

// ---------------------------------------------------------------------------
// Invariant checks. Each throws DomainError naming the violated field.
// ---------------------------------------------------------------------------

void validate(const EvalProtocol& protocol);
void validate(const EvalInput& input);
/// Also checks that an ErrorStep index is -1 or a valid step of `input`.
void validate_judgment_for(const Judgment& judgment, const EvalInput& input);
void validate(const LabeledSample& sample);

}  // namespace fare

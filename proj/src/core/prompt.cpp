#include "fare/core/prompt.hpp"

#include <array>
#include <map>

#include "fare/core/error.hpp"

namespace fare {
namespace {

// Pieces of the evaluator prompts. A system prompt is
//   intro + separator + {rubric} + "\n\n" + tail
// where the tail is either the critique instructions or the direct-judgment
// instructions. Trailing spaces in the reference-based intro are intentional.

constexpr std::string_view kPairwiseIntro =
    "Please act as an impartial judge and evaluate the quality of the responses provided by two "
    "AI assistants to the user prompt displayed below. You will be given assistant A's answer "
    "and assistant B's answer. Your job is to determine which assistant's answer is better.\n"
    "If assistant A is better, output [A]. If assistant B is better, output [B].";

constexpr std::string_view kPairwiseRubric =
    "Here are some rules for evaluation\n"
    "\n"
    "(1) When evaluating the assistants' answers, identify any mistakes or inaccurate "
    "information. Focus on the content each response and select the response that is logically "
    "sound and error free.\n"
    "\n"
    "(2) If both responses contain inaccurate information, select the response that arrives at "
    "the correct response\n"
    "\n"
    "(3) Avoid any biases, such as order of responses, length, or stylistic elements like "
    "formatting";

constexpr std::string_view kPairwiseCritiqueTail =
    "Before outputting your final judgment, provide an explanation of your judgment. Your "
    "explanation should discuss why your chosen response is better based on the evaluation "
    "criteria. The explanation should concretely discuss strengths and weaknesses of both "
    "answers.\n"
    "\n"
    "After outputting your explanation, provide your final judgment. Use the following format:\n"
    "\n"
    "Explanation: Your explanation here\n"
    "\n"
    "Verdict: Your final verdict";

constexpr std::string_view kPairwiseUser =
    "[User Question]\n"
    "\n"
    "{question}\n"
    "\n"
    "[The Start of Assistant A's Answer]\n"
    "\n"
    "{response_a}\n"
    "\n"
    "[The End of Assistant A's Answer]\n"
    "\n"
    "[The Start of Assistant B's Answer]\n"
    "\n"
    "{response_b}\n"
    "\n"
    "[The End of Assistant B's Answer]";

constexpr std::string_view kStepIntro =
    "Please act as an impartial judge and evaluate the quality of the response provided by an AI "
    "assistant to the user prompt displayed below. You will be given the assistant's solution to "
    "a math problem, which is split into steps, starting with a <step [step number]> tag, where "
    "[step number] is indexed from 0. Your job is to identify which step an error occurs, if an "
    "error is present.\n"
    "When evaluating the solution, consider each step separately. Evaluate the content of each "
    "step for correctness. If you encounter a mistake at <step [step number]>, output [step "
    "number] as your Verdict. If the full response is error free, then select step number -1. "
    "Avoid any biases, such as length of step, or stylistic elements like formatting.";

constexpr std::string_view kStepRubric =
    "Here are some rules for evaluation.\n"
    "\n"
    "(1) The assistant's answer does not need to be complete or arrive at a final solution. You "
    "may receive a partially complete response. Your job is to assess the quality of each step.\n"
    "\n"
    "(2) When evaluating the assistant's answer, identify any mistakes or inaccurate "
    "information. Focus on the content each step and determine if the step is logically valid.\n"
    "\n"
    "(3) For each step, you should provide an explanation of your assessment. If you find an "
    "error, describe the nature and cause of the error.\n"
    "\n"
    "(4) Avoid any biases, such as answer length, or stylistic elements like formatting.";

constexpr std::string_view kStepCritiqueTail =
    "Before providing an your final verdict, think through the judging process and output your "
    "thoughts as an explanation\n"
    "After providing your explanation, you must output the corresponding step number with an "
    "error. Use the following format:\n"
    "\n"
    "Explanation: Your explanation here\n"
    "\n"
    "Verdict: The step number with the error or -1 if no error occurs";

constexpr std::string_view kSingleResponseUser =
    "[User Question]\n"
    "\n"
    "{question}\n"
    "\n"
    "[The Start of Assistant's Answer]\n"
    "\n"
    "{response}\n"
    "\n"
    "[The End of Assistant's Answer]";

constexpr std::string_view kRefBasedIntro =
    "Please act as an impartial judge and evaluate if a response provided by an AI assistant "
    "(candidate answer) is consistent with a provided reference answer. \n"
    "Your job is to determine is the assistant's response is consistent with the reference "
    "answer. \n"
    "\n"
    "If the response is consistent, output [A].\n"
    "\n"
    "If the response is incorrect, output [B].";

constexpr std::string_view kRefBasedRubric =
    "Here are some rules for evaluation.\n"
    "\n"
    "(1) Refer to the given reference answer and determine if the candidate's answer is "
    "consistent with the reference answer.\n"
    "\n"
    "(2) The reference answer is always correct and the question is perfectly valid. Take the "
    "reference answer as the ground truth.\n"
    "\n"
    "(3) When determining if the candidate's answer is consistent with the reference answer, "
    "only compare the final answer. Ignore any potential errors in the reasoning processes.\n"
    "\n"
    "(4) Some answers may be expressed in different ways, such as some answers may be a "
    "mathematical expression, some answers may be a textual description, as long as the "
    "meaning expressed is the same. Before making a judgment, please understand the question "
    "and the reference answer first, and then judge whether the candidate's answer is "
    "consistent with the reference answer.\n"
    "\n"
    "(5) Some answers may consist of multiple items, such as multiple-choice questions, "
    "multiple-select questions, fill-in-the-blank questions, etc. Regardless of the question "
    "type, the final answer will be considered correct as long as it matches the standard "
    "answer, regardless of whether the reasoning process is correct. For multiple-select "
    "questions and multiple-blank fill-in-the-blank questions, all corresponding options or "
    "blanks must be answered correctly and match the standard answer exactly to be deemed "
    "correct.";

constexpr std::string_view kVerificationCritiqueTail =
    "Before outputting your final judgment, provide an explanation of your judgment. Your "
    "explanation should discuss why the response is correct, incorrect, or invalid. The "
    "explanation should concretely discuss reasons for your judgment.\n"
    "After outputting your explanation, provide your final judgment. Use the following format:\n"
    "\n"
    "Explanation: Your explanation here\n"
    "\n"
    "Verdict: Your final judgment of [A] or [B]";

constexpr std::string_view kRefBasedUser =
    "<|User Prompt|>\n"
    "\n"
    "{question}\n"
    "\n"
    "<|The Start of Assistant's Answer|>\n"
    "\n"
    "{response}\n"
    "\n"
    "<|The End of Assistant's Answer|>\n"
    "\n"
    "<|The Start of Reference Answer|>\n"
    "\n"
    "{reference}\n"
    "\n"
    "<|The End of Reference Answer|>";

constexpr std::string_view kRefFreeIntro =
    "Please act as an impartial judge and evaluate if a response provided by an AI assistant "
    "correctly answers the user question.\n"
    "Your job is to determine if the assistant's response is correct.\n"
    "\n"
    "If the response is correct, output [A].\n"
    "\n"
    "If the response is incorrect, output [B].";

constexpr std::string_view kRefFreeRubric =
    "Here are some rules for evaluation.\n"
    "\n"
    "(1) Determine if the assistant's final answer correctly and completely answers the user "
    "question.\n"
    "\n"
    "(2) Identify any mistakes or inaccurate information in the response. A response whose "
    "final answer is wrong is incorrect, even if most of its reasoning is sound.\n"
    "\n"
    "(3) Avoid any biases, such as answer length, or stylistic elements like formatting.";

constexpr std::string_view kRefFreeUser =
    "<|User Prompt|>\n"
    "\n"
    "{question}\n"
    "\n"
    "<|The Start of Assistant's Answer|>\n"
    "\n"
    "{response}\n"
    "\n"
    "<|The End of Assistant's Answer|>";

constexpr std::string_view kRatingIntro =
    "Please act as an impartial judge and evaluate the quality of the response provided by an AI "
    "assistant to the user prompt displayed below. Your job is to rate the response on a scale "
    "of 1 to 5, where 1 is the lowest quality and 5 is the highest quality.\n"
    "Output your rating as a single integer from 1 to 5.";

constexpr std::string_view kRatingRubric =
    "Here are some rules for evaluation\n"
    "\n"
    "(1) Judge how well the response follows the user's instructions and whether its content is "
    "accurate.\n"
    "\n"
    "(2) Identify any mistakes or inaccurate information and lower the rating accordingly.\n"
    "\n"
    "(3) Avoid any biases, such as length, or stylistic elements like formatting";

constexpr std::string_view kRatingCritiqueTail =
    "Before outputting your final judgment, provide an explanation of your judgment. Your "
    "explanation should discuss the strengths and weaknesses of the response based on the "
    "evaluation criteria.\n"
    "\n"
    "After outputting your explanation, provide your final judgment. Use the following format:\n"
    "\n"
    "Explanation: Your explanation here\n"
    "\n"
    "Verdict: Your final rating from 1 to 5";

constexpr std::string_view kDirectLead =
    "Output your final judgment directly. Do not output any explanation or rationale for your "
    "decision. Use the following format:\n"
    "\n"
    "Verdict: ";

struct TaskPieces {
  std::string_view intro;
  std::string_view separator;
  std::string_view rubric;
  std::string_view critique_tail;
  std::string_view direct_verdict;
  std::string_view user;
};

const TaskPieces& pieces_for(TaskKind task) {
  static const std::array<TaskPieces, 5> table = {{
      {kPairwiseIntro, "\n\n", kPairwiseRubric, kPairwiseCritiqueTail, "Your final judgment",
       kPairwiseUser},
      {kStepIntro, "\n\n\n", kStepRubric, kStepCritiqueTail,
       "The step number with the error or -1 if no error occurs", kSingleResponseUser},
      {kRefBasedIntro, "\n\n\n", kRefBasedRubric, kVerificationCritiqueTail,
       "Your final judgment of [A] or [B]", kRefBasedUser},
      {kRefFreeIntro, "\n\n\n", kRefFreeRubric, kVerificationCritiqueTail,
       "Your final judgment of [A] or [B]", kRefFreeUser},
      {kRatingIntro, "\n\n", kRatingRubric, kRatingCritiqueTail, "Your final rating from 1 to 5",
       kSingleResponseUser},
  }};
  const auto index = static_cast<std::size_t>(task);
  if (index >= table.size()) throw ConfigError("no prompt template for this task kind");
  return table[index];
}

struct BuiltTemplates {
  std::map<std::pair<TaskKind, TemplateVariant>, std::string> systems;
};

const BuiltTemplates& built() {
  static const BuiltTemplates templates = [] {
    BuiltTemplates out;
    for (TaskKind task : kAllTasks) {
      const TaskPieces& p = pieces_for(task);
      std::string head = std::string(p.intro) + std::string(p.separator) + "{rubric}\n\n";
      out.systems[{task, TemplateVariant::WithCritique}] = head + std::string(p.critique_tail);
      out.systems[{task, TemplateVariant::DirectJudgment}] =
          head + std::string(kDirectLead) + std::string(p.direct_verdict);
    }
    return out;
  }();
  return templates;
}

using Slot = std::pair<std::string_view, std::string_view>;

// Single left-to-right pass: "{name}" tokens with a known name are replaced,
// everything else (including braces in substituted values) is copied as is.
std::string substitute(std::string_view tpl, std::initializer_list<Slot> slots) {
  std::string out;
  out.reserve(tpl.size() + 256);
  std::size_t i = 0;
  while (i < tpl.size()) {
    if (tpl[i] == '{') {
      const std::size_t close = tpl.find('}', i + 1);
      if (close != std::string_view::npos) {
        const std::string_view name = tpl.substr(i + 1, close - i - 1);
        bool replaced = false;
        for (const auto& [key, value] : slots) {
          if (key == name) {
            out.append(value);
            replaced = true;
            break;
          }
        }
        if (replaced) {
          i = close + 1;
          continue;
        }
      }
    }
    out.push_back(tpl[i]);
    ++i;
  }
  return out;
}

}  // namespace

PromptTemplate prompt_template(TaskKind task, TemplateVariant variant) {
  const auto& systems = built().systems;
  const auto it = systems.find({task, variant});
  if (it == systems.end()) {
    throw ConfigError("unsupported prompt template: task " + std::to_string(static_cast<int>(task)) +
                      ", variant " + std::to_string(static_cast<int>(variant)));
  }
  return PromptTemplate{it->second, pieces_for(task).user};
}

std::string_view default_rubric(TaskKind task) { return pieces_for(task).rubric; }

std::string default_rubric_id(TaskKind task) {
  return "default/" + std::string(to_string(task));
}

EvalProtocol default_protocol(TaskKind task, TemplateVariant variant) {
  return EvalProtocol{task, default_rubric_id(task), std::string(default_rubric(task)), variant};
}

std::string format_steps(const std::vector<std::string>& steps) {
  std::string out;
  for (std::size_t i = 0; i < steps.size(); ++i) {
    const std::string n = std::to_string(i);
    if (i > 0) out += "\n";
    out += "<step " + n + ">\n" + steps[i] + "\n</step " + n + ">";
  }
  return out;
}

ChatMessages render_prompt(const EvalInput& input) {
  const PromptTemplate tpl = prompt_template(input.protocol.task, input.protocol.variant);
  validate(input);

  std::string system = substitute(tpl.system, {{"rubric", input.protocol.rubric_text}});
  std::string user;
  std::visit(
      [&](const auto& r) {
        using T = std::decay_t<decltype(r)>;
        if constexpr (std::is_same_v<T, PairwiseResponses>) {
          user = substitute(tpl.user, {{"question", input.question},
                                       {"response_a", r.response_a},
                                       {"response_b", r.response_b}});
        } else if constexpr (std::is_same_v<T, StepResponses>) {
          const std::string steps = format_steps(r.steps);
          user = substitute(tpl.user, {{"question", input.question}, {"response", steps}});
        } else if constexpr (std::is_same_v<T, RefBasedResponses>) {
          user = substitute(tpl.user, {{"question", input.question},
                                       {"response", r.candidate},
                                       {"reference", r.reference}});
        } else {
          user = substitute(tpl.user, {{"question", input.question}, {"response", r.response}});
        }
      },
      input.responses);

  return {ChatMessage{Role::System, std::move(system)}, ChatMessage{Role::User, std::move(user)}};
}

}  // namespace fare

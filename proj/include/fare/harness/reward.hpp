#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "fare/rollout/engine.hpp"

namespace fare {

/// Decides whether an extracted final answer matches the gold answer.
using AnswerGrader = std::function<bool(std::string_view answer, std::string_view gold)>;

/// Rule-based grader: normalized string or exact numeric equality.
AnswerGrader rule_grader();

/// Asks an evaluator endpoint for a reference-based verdict (direct form).
/// Unparseable verdicts and failed requests grade as incorrect.
AnswerGrader judge_grader(ChatBackend& backend, EndpointDescriptor endpoint,
                          SamplingParams params, std::string question);

struct RewardOptions {
  double parse_fail_reward = -0.5;
  double incorrect_reward = 0.0;
  double length_penalty = 0.05;
  std::size_t length_cap = 10;
};

struct RewardBreakdown {
  double reward = 0.0;
  std::optional<std::string> extracted;
  bool correct = false;
  std::size_t length_delta = 0;  // characters, extracted vs gold
};

/// Extraction is strict (boxed or answer marker); a bare last line does not
/// count as a parsed solution.
RewardBreakdown verifier_reward(std::string_view raw_response, std::string_view gold_answer,
                                const AnswerGrader& grader = rule_grader(),
                                const RewardOptions& options = {});

double compute_verifier_reward(std::string_view raw_response, std::string_view gold_answer,
                               const AnswerGrader& grader = rule_grader(),
                               const RewardOptions& options = {});

/// Number of UTF-8 code points; stray continuation bytes count as one each.
std::size_t utf8_length(std::string_view text);

}  // namespace fare

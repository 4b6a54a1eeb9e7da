#include "fare/harness/reward.hpp"

#include <algorithm>

#include "fare/core/error.hpp"
#include "fare/core/parse.hpp"
#include "fare/core/prompt.hpp"
#include "fare/curation/answer.hpp"

namespace fare {

AnswerGrader rule_grader() {
  return [](std::string_view answer, std::string_view gold) {
    const auto g = extract_final_answer(gold);
    return answers_equivalent(answer, g ? std::string_view(*g) : gold);
  };
}

AnswerGrader judge_grader(ChatBackend& backend, EndpointDescriptor endpoint,
                          SamplingParams params, std::string question) {
  params.k = 1;
  return [&backend, endpoint = std::move(endpoint), params,
          question = std::move(question)](std::string_view answer, std::string_view gold) {
    const EvalInput input{
        "reward", default_protocol(TaskKind::RefBasedVerification, TemplateVariant::DirectJudgment),
        question, RefBasedResponses{std::string(answer), std::string(gold)}};
    try {
      const auto r = sample_k(backend, endpoint, render_prompt(input), params);
      const auto parsed = parse_judgment(TaskKind::RefBasedVerification, r.completions.at(0));
      return parsed_ok(parsed) && std::get<EvaluatorOutput>(parsed).judgment ==
                                      Judgment{BinaryVerdict{Verdict::Correct}};
    } catch (const Error&) {
      return false;
    }
  };
}

std::size_t utf8_length(std::string_view text) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < text.size(); ++n) {
    const auto c = static_cast<unsigned char>(text[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 1;
    if (i + len > text.size()) len = 1;
    for (std::size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(text[i + k]) & 0xC0) != 0x80) {
        len = 1;
        break;
      }
    }
    i += len;
  }
  return n;
}

RewardBreakdown verifier_reward(std::string_view raw_response, std::string_view gold_answer,
                                const AnswerGrader& grader, const RewardOptions& options) {
  RewardBreakdown b;
  b.extracted = extract_final_answer(raw_response, ExtractMode::Strict);
  if (!b.extracted) {
    b.reward = options.parse_fail_reward;
    return b;
  }
  const std::size_t a = utf8_length(*b.extracted);
  const std::size_t g = utf8_length(gold_answer);
  b.length_delta = a > g ? a - g : g - a;
  b.correct = grader(*b.extracted, gold_answer);
  if (!b.correct) {
    b.reward = options.incorrect_reward;
    return b;
  }
  b.reward = 1.0 - options.length_penalty *
                       static_cast<double>(std::min(options.length_cap, b.length_delta));
  return b;
}

double compute_verifier_reward(std::string_view raw_response, std::string_view gold_answer,
                               const AnswerGrader& grader, const RewardOptions& options) {
  return verifier_reward(raw_response, gold_answer, grader, options).reward;
}

}  // namespace fare

#include <gtest/gtest.h>

#include "fare/core/error.hpp"
#include "fare/core/prompt.hpp"
#include "test_util.hpp"

namespace fare {

void PrintTo(TaskKind t, std::ostream* os) { *os << to_string(t); }
void PrintTo(TemplateVariant v, std::ostream* os) { *os << to_string(v); }

namespace {

using testing::golden_path;
using testing::placeholder_input;
using testing::slurp;
using testing::transcript;

class PromptGoldenTest
    : public ::testing::TestWithParam<std::tuple<TaskKind, TemplateVariant>> {};

TEST_P(PromptGoldenTest, MatchesGoldenFileByteForByte) {
  const auto [task, variant] = GetParam();
  const auto path = golden_path(task, variant);
  ASSERT_TRUE(std::filesystem::exists(path)) << path;
  const std::string expected = slurp(path);
  const std::string actual = transcript(render_prompt(placeholder_input(task, variant)));
  EXPECT_EQ(actual, expected);
}

INSTANTIATE_TEST_SUITE_P(
    AllTemplates, PromptGoldenTest,
    ::testing::Combine(::testing::ValuesIn(kAllTasks),
                       ::testing::Values(TemplateVariant::WithCritique,
                                         TemplateVariant::DirectJudgment)),
    [](const auto& info) {
      return std::string(to_string(std::get<0>(info.param))) + "_" +
             std::string(to_string(std::get<1>(info.param)));
    });

TEST(PromptTest, PairwiseSystemMessageOpensWithImpartialJudge) {
  const auto msgs = render_prompt(testing::make_pairwise("x", "q", "r1", "r2"));
  ASSERT_EQ(msgs.size(), 2u);
  EXPECT_EQ(msgs[0].role, Role::System);
  EXPECT_EQ(msgs[1].role, Role::User);
  EXPECT_EQ(msgs[0].content.rfind(
                "Please act as an impartial judge and evaluate the quality of the responses "
                "provided by two AI assistants",
                0),
            0u);
}

TEST(PromptTest, DirectVariantAsksForVerdictOnly) {
  const auto msgs = render_prompt(
      testing::make_pairwise("x", "q", "r1", "r2", TemplateVariant::DirectJudgment));
  EXPECT_NE(msgs[0].content.find(
                "Output your final judgment directly. Do not output any explanation"),
            std::string::npos);
  EXPECT_EQ(msgs[0].content.find("Explanation:"), std::string::npos);
}

TEST(PromptTest, StepsAreWrappedAndIndexedFromZero) {
  const auto msgs = render_prompt(testing::make_steps("x", "q", {"a", "b", "c"}));
  for (const char* tag : {"<step 0>", "<step 1>", "<step 2>"}) {
    EXPECT_NE(msgs[1].content.find(tag), std::string::npos) << tag;
  }
  EXPECT_EQ(msgs[1].content.find("<step 3>"), std::string::npos);
  EXPECT_NE(msgs[1].content.find("<step 1>\nb\n</step 1>"), std::string::npos);
}

TEST(PromptTest, RenderingIsPure) {
  const auto input = testing::make_ref_based("x", "What is 2+2?", "4", "four");
  EXPECT_EQ(render_prompt(input), render_prompt(input));
}

TEST(PromptTest, SubstitutedTextIsNotReexpanded) {
  const auto msgs =
      render_prompt(testing::make_pairwise("x", "explain {response_b}", "{question}", "b"));
  EXPECT_NE(msgs[1].content.find("explain {response_b}"), std::string::npos);
  EXPECT_NE(msgs[1].content.find("[The Start of Assistant A's Answer]\n\n{question}\n"),
            std::string::npos);
}

TEST(PromptTest, CustomRubricReplacesRulesBlock) {
  auto input = testing::make_ref_free("x", "q", "r");
  input.protocol.rubric_id = "swe-rank";
  input.protocol.rubric_text = "Here are some rules for evaluation\n\n(1) Is it relevant?";
  const auto msgs = render_prompt(input);
  EXPECT_NE(msgs[0].content.find("(1) Is it relevant?\n\nBefore outputting"), std::string::npos);
  EXPECT_EQ(msgs[0].content.find(default_rubric(TaskKind::RefFreeVerification)),
            std::string::npos);
}

TEST(PromptTest, UnsupportedCombinationIsConfigError) {
  EXPECT_THROW(prompt_template(TaskKind::Pairwise, static_cast<TemplateVariant>(7)), ConfigError);
  EXPECT_THROW(prompt_template(static_cast<TaskKind>(11), TemplateVariant::WithCritique),
               ConfigError);
}

TEST(PromptTest, MalformedInputIsRejected) {
  auto input = testing::make_pairwise("x", "q", "a", "b");
  input.responses = RefFreeResponses{"r"};
  EXPECT_THROW(render_prompt(input), DomainError);

  auto empty_rubric = testing::make_rating("x", "q", "r");
  empty_rubric.protocol.rubric_text.clear();
  EXPECT_THROW(render_prompt(empty_rubric), DomainError);

  EXPECT_THROW(render_prompt(testing::make_steps("x", "q", {})), DomainError);
}

}  // namespace
}  // namespace fare

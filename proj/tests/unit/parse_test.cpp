#include <gtest/gtest.h>

#include <random>

#include "fare/core/parse.hpp"

namespace fare {
namespace {

const EvaluatorOutput& ok(const ParseResult& r) {
  EXPECT_TRUE(parsed_ok(r)) << std::get<ParseFailure>(r).reason;
  return std::get<EvaluatorOutput>(r);
}

TEST(ParseJudgmentTest, ExplanationAndBracketedPairVerdict) {
  const auto r = parse_judgment(TaskKind::Pairwise,
                                "Explanation: B has an arithmetic slip.\nVerdict: [A]");
  const auto& out = ok(r);
  EXPECT_EQ(out.judgment, Judgment{PairChoice{Choice::A}});
  ASSERT_TRUE(out.critique.has_value());
  EXPECT_EQ(*out.critique, "B has an arithmetic slip.");
}

TEST(ParseJudgmentTest, StepMinusOneMeansNoError) {
  const auto& out = ok(parse_judgment(TaskKind::StepLevel, "Verdict: -1"));
  EXPECT_EQ(out.judgment, Judgment{ErrorStep{-1}});
  EXPECT_FALSE(out.critique.has_value());
}

TEST(ParseJudgmentTest, NoMarkerIsFailureCarryingRawText) {
  const auto r = parse_judgment(TaskKind::Pairwise, "the answer is maybe");
  ASSERT_FALSE(parsed_ok(r));
  EXPECT_EQ(std::get<ParseFailure>(r).raw_text, "the answer is maybe");
}

TEST(ParseJudgmentTest, BracketsAreOptional) {
  EXPECT_EQ(ok(parse_judgment(TaskKind::Pairwise, "Verdict: B")).judgment,
            Judgment{PairChoice{Choice::B}});
  EXPECT_EQ(ok(parse_judgment(TaskKind::Pairwise, "Verdict: [[B]]")).judgment,
            Judgment{PairChoice{Choice::B}});
  EXPECT_EQ(ok(parse_judgment(TaskKind::Pairwise, "**Verdict:** [A]")).judgment,
            Judgment{PairChoice{Choice::A}});
  EXPECT_EQ(ok(parse_judgment(TaskKind::StepLevel, "Verdict: [3]")).judgment,
            Judgment{ErrorStep{3}});
}

TEST(ParseJudgmentTest, LastMarkerWins) {
  const std::string text =
      "Explanation: An earlier draft said Verdict: [B] but that was wrong.\n"
      "Verdict: [B]\n"
      "On reflection A is right.\n"
      "Verdict: [A]\n";
  const auto& out = ok(parse_judgment(TaskKind::Pairwise, text));
  EXPECT_EQ(out.judgment, Judgment{PairChoice{Choice::A}});
  EXPECT_NE(out.critique->find("On reflection"), std::string::npos);
}

TEST(ParseJudgmentTest, ConflictingMarkersOnOneLineFail) {
  EXPECT_FALSE(parsed_ok(parse_judgment(TaskKind::Pairwise, "Verdict: [A] Verdict: [B]")));
  EXPECT_FALSE(parsed_ok(parse_judgment(TaskKind::Pairwise, "Verdict: [A] or [B]")));
}

TEST(ParseJudgmentTest, OutOfRangeValuesFail) {
  EXPECT_FALSE(parsed_ok(parse_judgment(TaskKind::StepLevel, "Verdict: -2")));
  EXPECT_FALSE(parsed_ok(parse_judgment(TaskKind::SingleRating, "Verdict: 6")));
  EXPECT_FALSE(parsed_ok(parse_judgment(TaskKind::SingleRating, "Verdict: 0")));
  EXPECT_FALSE(parsed_ok(parse_judgment(TaskKind::Pairwise, "Verdict: [C]")));
  EXPECT_FALSE(parsed_ok(parse_judgment(TaskKind::StepLevel, "Verdict: 99999999999999999999")));
  EXPECT_FALSE(parsed_ok(parse_judgment(TaskKind::Pairwise, "Verdict:")));
}

TEST(ParseJudgmentTest, VerificationMapsAToCorrect) {
  EXPECT_EQ(ok(parse_judgment(TaskKind::RefBasedVerification, "Verdict: [A]")).judgment,
            Judgment{BinaryVerdict{Verdict::Correct}});
  EXPECT_EQ(ok(parse_judgment(TaskKind::RefFreeVerification, "Verdict: [B]")).judgment,
            Judgment{BinaryVerdict{Verdict::Incorrect}});
}

TEST(ParseJudgmentTest, RatingAndValueOnFollowingLine) {
  EXPECT_EQ(ok(parse_judgment(TaskKind::SingleRating, "Verdict: 4.")).judgment,
            Judgment{Rating{4}});
  EXPECT_EQ(ok(parse_judgment(TaskKind::SingleRating, "Verdict:\n\n5")).judgment,
            Judgment{Rating{5}});
}

TEST(ParseJudgmentTest, CritiqueWithoutExplanationMarkerIsWholePrefix) {
  const auto& out = ok(parse_judgment(TaskKind::Pairwise, "  A is better.\r\nVerdict: [A]\r\n"));
  EXPECT_EQ(out.critique, std::optional<std::string>("A is better."));
}

TEST(ParseJudgmentTest, ReasoningChannelIsNotSearched) {
  const auto& think =
      ok(parse_judgment(TaskKind::Pairwise, "<think>Verdict: [B]?</think>\nVerdict: [A]"));
  EXPECT_EQ(think.judgment, Judgment{PairChoice{Choice::A}});
  EXPECT_FALSE(think.critique.has_value());

  EXPECT_FALSE(parsed_ok(parse_judgment(TaskKind::Pairwise, "<think>Verdict: [B]</think>ok")));

  const auto& harmony = ok(parse_judgment(
      TaskKind::StepLevel,
      "<|channel|>analysis<|message|>step 2 looks off<|end|><|start|>assistant<|channel|>final"
      "<|message|>Explanation: step 2 divides by zero\nVerdict: 2<|return|>"));
  EXPECT_EQ(harmony.judgment, Judgment{ErrorStep{2}});
  EXPECT_EQ(harmony.critique, std::optional<std::string>("step 2 divides by zero"));
}

TEST(SplitReasoningTest, KeepsExactPrefix) {
  const std::string text = "<think>hmm</think>\n\nVerdict: [A]";
  const auto split = split_reasoning(text);
  EXPECT_EQ(split.reasoning_raw, "<think>hmm</think>\n\n");
  EXPECT_EQ(split.answer, "Verdict: [A]");
  EXPECT_EQ(split.reasoning_raw + split.answer, text);

  const auto none = split_reasoning("Verdict: [A]");
  EXPECT_TRUE(none.reasoning_raw.empty());
  EXPECT_EQ(none.answer, "Verdict: [A]");
}

std::vector<std::pair<TaskKind, Judgment>> every_judgment() {
  std::vector<std::pair<TaskKind, Judgment>> out;
  for (Choice c : {Choice::A, Choice::B}) out.emplace_back(TaskKind::Pairwise, PairChoice{c});
  for (int i = -1; i < 40; ++i) out.emplace_back(TaskKind::StepLevel, ErrorStep{i});
  for (Verdict v : {Verdict::Correct, Verdict::Incorrect}) {
    out.emplace_back(TaskKind::RefBasedVerification, BinaryVerdict{v});
    out.emplace_back(TaskKind::RefFreeVerification, BinaryVerdict{v});
  }
  for (int r = kMinRating; r <= kMaxRating; ++r) out.emplace_back(TaskKind::SingleRating, Rating{r});
  return out;
}

TEST(ParseJudgmentProperty, VerdictLineRoundTrips) {
  for (const auto& [task, j] : every_judgment()) {
    const auto r = parse_judgment(task, verdict_line(j));
    ASSERT_TRUE(parsed_ok(r)) << verdict_line(j);
    EXPECT_EQ(std::get<EvaluatorOutput>(r).judgment, j) << verdict_line(j);

    const auto with_critique =
        parse_judgment(task, "Explanation: because.\n\n" + verdict_line(j) + "\n");
    ASSERT_TRUE(parsed_ok(with_critique));
    EXPECT_EQ(std::get<EvaluatorOutput>(with_critique).judgment, j);
  }
}

TEST(ParseJudgmentProperty, NeverThrowsOnArbitraryText) {
  std::mt19937_64 gen(20251016);
  const std::vector<std::string> fragments = {
      "Verdict", ":", " ", "\n", "[", "]", "A", "B", "-1", "7", "Explanation:", "*", "\r",
      "<think>", "</think>", "<|channel|>analysis<|message|>", "<|end|>", "step", "\xff", "\0"};
  for (int iter = 0; iter < 20000; ++iter) {
    std::string text;
    const int len = static_cast<int>(gen() % 24);
    for (int i = 0; i < len; ++i) {
      if (gen() % 4 == 0) {
        text.push_back(static_cast<char>(gen() & 0xFF));
      } else {
        text += fragments[gen() % fragments.size()];
      }
    }
    for (TaskKind task : kAllTasks) {
      EXPECT_NO_THROW({
        const auto r = parse_judgment(task, text);
        if (parsed_ok(r)) {
          EXPECT_TRUE(judgment_matches_task(std::get<EvaluatorOutput>(r).judgment, task));
        }
      });
    }
  }
}

}  // namespace
}  // namespace fare

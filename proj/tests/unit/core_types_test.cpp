#include <gtest/gtest.h>

#include "fare/core/error.hpp"
#include "fare/core/judgment.hpp"
#include "fare/core/rng.hpp"
#include "test_util.hpp"

namespace fare {
namespace {

TEST(TaskKindTest, NamesRoundTrip) {
  EXPECT_EQ(kAllTasks.size(), 5u);
  for (TaskKind t : kAllTasks) EXPECT_EQ(parse_task_kind(to_string(t)), t);
  EXPECT_EQ(parse_task_kind("step-level"), TaskKind::StepLevel);
  EXPECT_EQ(parse_task_kind("rating"), TaskKind::SingleRating);
  EXPECT_FALSE(parse_task_kind("listwise").has_value());
}

TEST(SwapPairwiseTest, ExchangesResponsesOnly) {
  const auto x = testing::make_pairwise("id-1", "q?", "r1", "r2");
  const auto s = swap_pairwise(x);
  EXPECT_EQ(std::get<PairwiseResponses>(s.responses), (PairwiseResponses{"r2", "r1"}));
  EXPECT_EQ(s.id, x.id);
  EXPECT_EQ(s.question, x.question);
  EXPECT_EQ(s.protocol, x.protocol);
  EXPECT_EQ(swap_pairwise(s), x);
}

TEST(SwapPairwiseTest, RejectsOtherTasks) {
  EXPECT_THROW(swap_pairwise(testing::make_ref_free("x", "q", "r")), DomainError);
}

TEST(MapSwappedJudgmentTest, ExchangesChoice) {
  EXPECT_EQ(map_swapped_judgment(PairChoice{Choice::A}), Judgment{PairChoice{Choice::B}});
  EXPECT_EQ(map_swapped_judgment(PairChoice{Choice::B}), Judgment{PairChoice{Choice::A}});
  for (Choice c : {Choice::A, Choice::B}) {
    EXPECT_EQ(map_swapped_judgment(map_swapped_judgment(PairChoice{c})), Judgment{PairChoice{c}});
  }
  EXPECT_THROW(map_swapped_judgment(Rating{3}), DomainError);
}

TEST(GradeJudgmentTest, Examples) {
  EXPECT_TRUE(grade_judgment(PairChoice{Choice::A}, PairChoice{Choice::A}));
  EXPECT_FALSE(grade_judgment(ErrorStep{3}, ErrorStep{2}));
  EXPECT_TRUE(grade_judgment(Rating{4}, Rating{4}));
  EXPECT_FALSE(grade_judgment(Rating{4}, Rating{5}));
  EXPECT_TRUE(grade_judgment(Rating{4}, Rating{5}, GradeOptions{1}));
  EXPECT_FALSE(grade_judgment(BinaryVerdict{Verdict::Correct}, BinaryVerdict{Verdict::Incorrect}));
}

TEST(GradeJudgmentTest, VariantMismatchIsDomainError) {
  EXPECT_THROW(grade_judgment(PairChoice{Choice::A}, BinaryVerdict{Verdict::Correct}), DomainError);
}

// A position-independent judge: prefers the response containing "good".
Judgment content_judge(const EvalInput& x) {
  const auto& p = std::get<PairwiseResponses>(x.responses);
  return PairChoice{p.response_a.find("good") != std::string::npos ? Choice::A : Choice::B};
}

TEST(SwapCoherenceProperty, SwappedJudgmentMapsBackToSameResponse) {
  Rng rng(7);
  for (int i = 0; i < 500; ++i) {
    const bool good_first = rng.bernoulli(0.5);
    const auto x = testing::make_pairwise("s" + std::to_string(i), "q",
                                          good_first ? "good" : "bad", good_first ? "bad" : "good");
    const Judgment gold = PairChoice{good_first ? Choice::A : Choice::B};
    const Judgment direct = content_judge(x);
    const Judgment via_swap = map_swapped_judgment(content_judge(swap_pairwise(x)));
    EXPECT_EQ(direct, via_swap);
    EXPECT_EQ(grade_judgment(direct, gold), grade_judgment(via_swap, gold));
  }
}

TEST(ValidateTest, JudgmentMustFitInput) {
  const auto x = testing::make_steps("x", "q", {"a", "b"});
  EXPECT_NO_THROW(validate_judgment_for(ErrorStep{-1}, x));
  EXPECT_NO_THROW(validate_judgment_for(ErrorStep{1}, x));
  EXPECT_THROW(validate_judgment_for(ErrorStep{2}, x), DomainError);
  EXPECT_THROW(validate_judgment_for(PairChoice{Choice::A}, x), DomainError);

  const auto r = testing::make_rating("y", "q", "resp");
  EXPECT_THROW(validate_judgment_for(Rating{6}, r), DomainError);
}

TEST(RngTest, DeterministicAndInRange) {
  Rng a(42), b(42);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.uniform_index(7);
    EXPECT_EQ(x, b.uniform_index(7));
    EXPECT_LT(x, 7u);
    const double u = a.uniform01();
    b.uniform01();
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
  EXPECT_NE(mix_seed(1, "a"), mix_seed(1, "b"));
}

}  // namespace
}  // namespace fare

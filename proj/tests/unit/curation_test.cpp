#include <gtest/gtest.h>

#include <boost/rational.hpp>
#include <set>

#include "fare/core/error.hpp"
#include "fare/core/rng.hpp"
#include "fare/curation/answer.hpp"
#include "fare/curation/decontam.hpp"
#include "fare/curation/inject.hpp"
#include "fare/curation/samples.hpp"
#include "fare/curation/stats.hpp"
#include "test_util.hpp"

namespace fare {
namespace {

// ---------------------------------------------------------------------------
// inject_error

FunctionCall sample_call() {
  return FunctionCall::parse(
      R"({"name":"get_weather","arguments":{"city":"Paris","days":3,"metric":true}})");
}

bool parses_as_json(const std::string& text) {
  return !nlohmann::json::parse(text, nullptr, false).is_discarded();
}

TEST(FunctionCallTest, RawFormRoundTrips) {
  const auto call = sample_call();
  EXPECT_EQ(call.raw_form(),
            R"({"name":"get_weather","arguments":{"city":"Paris","days":3,"metric":true}})");
  EXPECT_EQ(FunctionCall::parse(call.raw_form()), call);
  EXPECT_THROW(FunctionCall::parse("get_weather(city='Paris')"), DataError);
}

TEST(InjectErrorTest, ExtraArgumentAddsUnseenName) {
  const auto call = FunctionCall::parse(R"({"name":"f","arguments":{"a":1}})");
  const auto out = inject_error(call, CorruptionKind::ExtraArgument, 1);
  ASSERT_TRUE(out);
  const auto parsed = FunctionCall::parse(*out);
  EXPECT_EQ(parsed.arguments.size(), 2u);
  EXPECT_EQ(parsed.arguments.at("a"), 1);
  EXPECT_EQ(diagnose_call(*out, call), CallDefect::ExtraArgument);
}

TEST(InjectErrorTest, InvalidTypeTurnsNumberIntoString) {
  const auto call = FunctionCall::parse(R"({"name":"f","arguments":{"a":1}})");
  const auto out = inject_error(call, CorruptionKind::InvalidType, 1);
  ASSERT_TRUE(out);
  EXPECT_EQ(*out, R"({"name":"f","arguments":{"a":"1"}})");
}

TEST(InjectErrorTest, MalformedJsonDropsFinalBrace) {
  const auto call = sample_call();
  const auto out = inject_error(call, CorruptionKind::MalformedJson, 9);
  ASSERT_TRUE(out);
  EXPECT_EQ(*out + "}", call.raw_form());
  EXPECT_FALSE(parses_as_json(*out));
}

TEST(InjectErrorTest, ArgumentlessCallSkipsArgumentKinds) {
  const auto call = FunctionCall::parse(R"({"name":"now","arguments":{}})");
  EXPECT_FALSE(inject_error(call, CorruptionKind::MissingArgument, 3));
  EXPECT_FALSE(inject_error(call, CorruptionKind::InvalidType, 3));
  EXPECT_TRUE(inject_error(call, CorruptionKind::ExtraArgument, 3));
  EXPECT_TRUE(inject_error(call, CorruptionKind::SyntaxError, 3));
}

TEST(InjectErrorProperty, PostconditionsHoldAcrossSeeds) {
  const std::vector<std::string> calls = {
      R"({"name":"f","arguments":{"a":1}})",
      R"({"name":"search","arguments":{"q":"a \"quoted\" term","limit":10,"tags":["x","y"]}})",
      R"({"name":"g","arguments":{"verbose":false,"debug":null,"opts":{"k":1}}})",
      R"({"name":"h","arguments":{"verbose":1,"debug":2,"timeout":3,"extra_param":4,"format":5,"limit":6,"callback":7,"retries":8}})",
      R"({"name":"s","arguments":{"n":"12"}})"};
  for (const auto& text : calls) {
    const auto call = FunctionCall::parse(text);
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      for (CorruptionKind kind : kAllCorruptions) {
        const auto out = inject_error(call, kind, seed);
        ASSERT_TRUE(out) << text;
        EXPECT_NE(*out, call.raw_form());
        EXPECT_EQ(*out, *inject_error(call, kind, seed));
        switch (kind) {
          case CorruptionKind::InvalidType:
            EXPECT_EQ(diagnose_call(*out, call), CallDefect::InvalidType) << *out;
            break;
          case CorruptionKind::MissingArgument:
            EXPECT_EQ(FunctionCall::parse(*out).arguments.size(), call.arguments.size() - 1);
            EXPECT_EQ(diagnose_call(*out, call), CallDefect::MissingArgument);
            break;
          case CorruptionKind::ExtraArgument:
            EXPECT_EQ(diagnose_call(*out, call), CallDefect::ExtraArgument) << *out;
            break;
          case CorruptionKind::SyntaxError:
          case CorruptionKind::MalformedJson:
            EXPECT_FALSE(parses_as_json(*out)) << *out;
            break;
        }
      }
    }
  }
}

TEST(InjectErrorProperty, SeedsVaryTheOutput) {
  const auto call = sample_call();
  std::set<std::string> seen;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    seen.insert(*inject_error(call, CorruptionKind::SyntaxError, seed));
  }
  EXPECT_GT(seen.size(), 3u);
}

// ---------------------------------------------------------------------------
// grade_against_answer

// Independent exact parser for the oracle: "p/q" or a plain decimal.
boost::rational<long long> oracle_value(const std::string& s) {
  if (const auto slash = s.find('/'); slash != std::string::npos) {
    return {std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1))};
  }
  const auto dot = s.find('.');
  if (dot == std::string::npos) return std::stoll(s);
  const std::string frac = s.substr(dot + 1);
  long long scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  const long long whole = dot == 0 ? 0 : std::stoll(s.substr(0, dot));
  return {whole * scale + std::stoll(frac), scale};
}

TEST(GradeAgainstAnswerTest, Examples) {
  EXPECT_TRUE(grade_against_answer("so the total is \\boxed{42}", "42"));
  EXPECT_TRUE(grade_against_answer("Half of it remains.\n1/2", "0.5"));
  EXPECT_EQ(oracle_value("1/2"), oracle_value("0.5"));
  EXPECT_FALSE(grade_against_answer("Adding up: 43", "42"));
}

TEST(GradeAgainstAnswerTest, RationalEquivalenceMatchesOracle) {
  const std::vector<std::string> forms = {"1/2", "0.5", "2/4", "0.50", "3/4", "0.75", "6/8",
                                          "1",   "1.0", "4/4", "2",    "10/5", "0.125", "1/8",
                                          "7/3", "2.5", "5/2", "0.0",  "0/3"};
  for (const auto& a : forms) {
    for (const auto& b : forms) {
      EXPECT_EQ(grade_against_answer("Answer: " + a, b), oracle_value(a) == oracle_value(b))
          << a << " vs " << b;
    }
  }
}

TEST(GradeAgainstAnswerTest, NormalizationRules) {
  EXPECT_TRUE(grade_against_answer("The answer is $\\frac{1}{2}$.", "0.5"));
  EXPECT_TRUE(grade_against_answer("Final answer: Paris.", "paris"));
  EXPECT_TRUE(grade_against_answer("\\boxed{ -3 }", "-3"));
  EXPECT_TRUE(grade_against_answer("x\n\\boxed{\\text{Yes}}", "yes"));
  EXPECT_TRUE(grade_against_answer("result\n  New   York  ", "new york"));
  EXPECT_FALSE(grade_against_answer("", "42"));
  EXPECT_FALSE(grade_against_answer("1/0", "1"));
  EXPECT_FALSE(grade_against_answer("12", "1.2"));
}

TEST(ExtractFinalAnswerTest, PrecedenceAndStrictMode) {
  EXPECT_EQ(extract_final_answer("\\boxed{1} then \\boxed{\\frac{2}{3}}\nAnswer: 5"),
            std::optional<std::string>("\\frac{2}{3}"));
  EXPECT_EQ(extract_final_answer("The answer is 7\nthanks"), std::optional<std::string>("7"));
  EXPECT_EQ(extract_final_answer("just\n 9 \n\n"), std::optional<std::string>("9"));
  EXPECT_FALSE(extract_final_answer("just\n9", ExtractMode::Strict));
  EXPECT_FALSE(extract_final_answer("   \n"));
}

TEST(GradeAgainstAnswerProperty, ReflexiveOnExtractableText) {
  Rng rng(11);
  const std::vector<std::string> atoms = {"x", "42", "1/2", "0.5", "Paris", "$", ".", " ",
                                          "\\frac{3}{4}", "-", "answer", "a b", "\t", "7."};
  for (int i = 0; i < 3000; ++i) {
    std::string x;
    const auto len = 1 + rng.uniform_index(6);
    for (std::size_t k = 0; k < len; ++k) x += atoms[rng.uniform_index(atoms.size())];
    const auto extracted = extract_final_answer(x);
    if (!extracted || normalize_answer(*extracted).empty()) continue;
    EXPECT_TRUE(grade_against_answer(x, x)) << x;
  }
}

// ---------------------------------------------------------------------------
// sample builders

SeedRecord math_seed(std::string id = "q1") {
  return {std::move(id), "What is 6 * 7?", "42", "math", "gsm8k", SeedKind::Math};
}

std::vector<GradedResponse> graded(int good, int bad) {
  std::vector<GradedResponse> out;
  for (int i = 0; i < good; ++i) out.push_back({"good " + std::to_string(i), "g", 0.7, true});
  for (int i = 0; i < bad; ++i) out.push_back({"bad " + std::to_string(i), "g", 0.7, false});
  return out;
}

std::string correct_text(const LabeledSample& s) {
  const auto& p = std::get<PairwiseResponses>(s.input.responses);
  return std::get<PairChoice>(s.gold).choice == Choice::A ? p.response_a : p.response_b;
}

TEST(BuildPairwiseSamplesTest, SinglePairMarksCorrectPosition) {
  const auto out = build_pairwise_samples(math_seed(), graded(1, 1), kDefaultPairLimit, 5);
  ASSERT_EQ(out.size(), 1u);
  EXPECT_EQ(correct_text(out[0]), "good 0");
  EXPECT_EQ(out[0].task(), TaskKind::Pairwise);
  EXPECT_EQ(out[0].input.question, "What is 6 * 7?");
  EXPECT_EQ(out[0].provenance, Provenance::Synthetic);
  EXPECT_EQ(out[0].source_dataset, "gsm8k");
  EXPECT_NO_THROW(validate(out[0]));
}

TEST(BuildPairwiseSamplesTest, EmptyPartitionGivesNothing) {
  EXPECT_TRUE(build_pairwise_samples(math_seed(), graded(0, 3), 4, 1).empty());
  EXPECT_TRUE(build_pairwise_samples(math_seed(), graded(2, 0), 4, 1).empty());
}

TEST(BuildPairwiseSamplesTest, LimitKeepsDistinctPairs) {
  const auto out = build_pairwise_samples(math_seed(), graded(3, 3), 4, 2);
  ASSERT_EQ(out.size(), 4u);
  std::set<std::pair<std::string, std::string>> pairs;
  for (const auto& s : out) {
    const auto& p = std::get<PairwiseResponses>(s.input.responses);
    const auto good = correct_text(s);
    const auto bad = good == p.response_a ? p.response_b : p.response_a;
    EXPECT_EQ(good.rfind("good", 0), 0u);
    EXPECT_EQ(bad.rfind("bad", 0), 0u);
    pairs.emplace(good, bad);
  }
  EXPECT_EQ(pairs.size(), 4u);
  EXPECT_EQ(build_pairwise_samples(math_seed(), graded(3, 3), 4, 2), out);
  EXPECT_EQ(build_pairwise_samples(math_seed(), graded(3, 3), 100, 2).size(), 9u);
}

TEST(BuildPairwiseSamplesProperty, CorrectPositionIsBalanced) {
  std::size_t a = 0, total = 0;
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    for (const auto& s : build_pairwise_samples(math_seed(), graded(1, 1), 4, seed)) {
      ++total;
      if (std::get<PairChoice>(s.gold).choice == Choice::A) ++a;
    }
  }
  ASSERT_EQ(total, 1000u);
  const double frac = static_cast<double>(a) / static_cast<double>(total);
  EXPECT_NEAR(frac, 0.5, 0.05);
}

TEST(BuildVerificationSamplesTest, RefFreeAndRefBased) {
  const auto rf = build_verification_samples(math_seed(), graded(1, 0), VerificationMode::RefFree);
  ASSERT_EQ(rf.size(), 1u);
  EXPECT_EQ(rf[0].gold, Judgment{BinaryVerdict{Verdict::Correct}});
  EXPECT_EQ(rf[0].task(), TaskKind::RefFreeVerification);

  const auto rb = build_verification_samples(math_seed(), graded(0, 1), VerificationMode::RefBased);
  ASSERT_EQ(rb.size(), 1u);
  EXPECT_EQ(rb[0].gold, Judgment{BinaryVerdict{Verdict::Incorrect}});
  EXPECT_EQ(std::get<RefBasedResponses>(rb[0].input.responses),
            (RefBasedResponses{"bad 0", "42"}));

  EXPECT_TRUE(
      build_verification_samples(math_seed(), {}, VerificationMode::RefBased).empty());
  auto no_gold = math_seed();
  no_gold.gold_answer.clear();
  EXPECT_THROW(build_verification_samples(no_gold, graded(1, 0), VerificationMode::RefBased),
               DomainError);
}

TEST(RubricCatalogTest, OverridesByDatasetThenWildcard) {
  RubricCatalog rubrics;
  rubrics.add("gsm8k", TaskKind::Pairwise, {"math-pw", "Here are some rules\n(1) exact"});
  rubrics.add("*", TaskKind::Pairwise, {"any-pw", "Here are some rules\n(1) any"});
  EXPECT_EQ(rubrics.protocol_for(TaskKind::Pairwise, "gsm8k").rubric_id, "math-pw");
  EXPECT_EQ(rubrics.protocol_for(TaskKind::Pairwise, "other").rubric_id, "any-pw");
  EXPECT_EQ(rubrics.protocol_for(TaskKind::StepLevel, "gsm8k"),
            default_protocol(TaskKind::StepLevel, TemplateVariant::WithCritique));

  const auto out = build_pairwise_samples(math_seed(), graded(1, 1), 4, 0, rubrics);
  EXPECT_EQ(out.at(0).input.protocol.rubric_id, "math-pw");
}

TEST(BuildInjectionSamplesTest, PairsReferenceWithCorruptions) {
  SeedRecord seed{"t1", "Weather in Paris for 3 days?", sample_call().raw_form(), "tool_use",
                  "toolace", SeedKind::ToolCall};
  const auto out = build_injection_samples(seed, kAllCorruptions, 4);
  ASSERT_EQ(out.size(), kAllCorruptions.size());
  std::set<std::string> corruptions;
  for (const auto& s : out) {
    EXPECT_EQ(correct_text(s), sample_call().raw_form());
    const auto& p = std::get<PairwiseResponses>(s.input.responses);
    corruptions.insert(correct_text(s) == p.response_a ? p.response_b : p.response_a);
  }
  EXPECT_EQ(corruptions.size(), out.size());

  SeedRecord bare = seed;
  bare.gold_answer = R"({"name":"now","arguments":{}})";
  const std::vector<CorruptionKind> kinds = {CorruptionKind::MissingArgument,
                                             CorruptionKind::InvalidType,
                                             CorruptionKind::MalformedJson};
  EXPECT_EQ(build_injection_samples(bare, kinds, 4).size(), 1u);
}

// ---------------------------------------------------------------------------
// decontaminate

LabeledSample train_q(std::string id, std::string question) {
  LabeledSample s{testing::make_ref_free(std::move(id), std::move(question), "r"),
                  BinaryVerdict{Verdict::Correct}};
  return s;
}

std::string words(int from, int count, const std::string& prefix = "w") {
  std::string out;
  for (int i = 0; i < count; ++i) out += (i ? " " : "") + prefix + std::to_string(from + i);
  return out;
}

// Exhaustive oracle: every n-gram of every text as a token vector.
std::set<std::vector<std::string>> oracle_grams(const std::string& text, std::size_t n) {
  std::vector<std::string> toks;
  std::string cur;
  for (char c : text + " ") {
    if (c == ' ' || c == '\t' || c == '\n') {
      if (!cur.empty()) toks.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  std::set<std::vector<std::string>> out;
  if (toks.empty()) return out;
  if (toks.size() < n) {
    out.insert(toks);
    return out;
  }
  for (std::size_t i = 0; i + n <= toks.size(); ++i) {
    out.insert(std::vector<std::string>(toks.begin() + static_cast<long>(i),
                                        toks.begin() + static_cast<long>(i + n)));
  }
  return out;
}

bool oracle_contaminated(const std::string& train, const std::vector<std::string>& evals,
                         std::size_t n) {
  const auto tg = oracle_grams(train, n);
  for (const auto& e : evals) {
    for (const auto& g : oracle_grams(e, n)) {
      if (tg.count(g)) return true;
    }
  }
  return false;
}

TEST(DecontaminateTest, Examples) {
  const std::vector<std::string> evals = {"What is the capital of France?"};
  const std::vector<LabeledSample> train = {train_q("dup", "what is the CAPITAL of france?"),
                                            train_q("far", "Compute 2 + 2")};
  const auto r = decontaminate(train, evals);
  ASSERT_EQ(r.removed.size(), 1u);
  EXPECT_EQ(r.removed[0].id, "dup");
  EXPECT_EQ(r.removed[0].eval_index, 0u);
  ASSERT_EQ(r.kept.size(), 1u);
  EXPECT_EQ(r.kept[0].id(), "far");
}

TEST(DecontaminateTest, TwelveTokenRunAgainstOracle) {
  const std::string shared = words(0, 12, "s");
  const std::vector<std::string> evals = {words(0, 5, "e") + " " + shared + " " + words(5, 5, "e")};
  const std::vector<LabeledSample> train = {
      train_q("t", words(0, 4, "t") + " " + shared + " " + words(4, 4, "t"))};
  for (std::size_t n : {13u, 12u}) {
    const auto r = decontaminate(train, evals, n);
    EXPECT_EQ(r.removed.size() == 1, oracle_contaminated(train[0].input.question, evals, n));
  }
  EXPECT_EQ(decontaminate(train, evals, 13).kept.size(), 1u);
  EXPECT_EQ(decontaminate(train, evals, 12).removed.size(), 1u);
}

TEST(DecontaminateProperty, MatchesOracleAndIsIdempotent) {
  Rng rng(3);
  const auto random_text = [&](std::size_t max_len) {
    std::string s;
    const auto len = rng.uniform_index(max_len + 1);
    for (std::size_t i = 0; i < len; ++i) {
      s += (i ? " " : "") + std::string(1, static_cast<char>('a' + rng.uniform_index(3)));
    }
    return s;
  };
  for (int round = 0; round < 200; ++round) {
    const std::size_t n = 1 + rng.uniform_index(5);
    std::vector<std::string> evals;
    for (int i = 0; i < 3; ++i) evals.push_back(random_text(8));
    std::vector<LabeledSample> train;
    for (int i = 0; i < 10; ++i) train.push_back(train_q("t" + std::to_string(i), random_text(8)));

    const auto r = decontaminate(train, evals, n);
    std::set<std::string> removed;
    for (const auto& x : r.removed) removed.insert(x.id);
    for (const auto& s : train) {
      EXPECT_EQ(removed.count(s.id()) == 1, oracle_contaminated(s.input.question, evals, n))
          << s.input.question << " n=" << n;
    }
    EXPECT_EQ(r.kept.size() + r.removed.size(), train.size());
    EXPECT_TRUE(decontaminate(r.kept, evals, n).removed.empty());
  }
  EXPECT_THROW(decontaminate({}, {}, 0), DomainError);
}

TEST(DecontaminateTest, ReportShape) {
  const std::vector<std::string> evals = {"x y", "a b c"};
  const std::vector<LabeledSample> train = {train_q("t0", "a b c")};
  const auto report = removal_report(decontaminate(train, evals, 2));
  EXPECT_EQ(report.dump(), R"({"n":2,"removed":[{"id":"t0","eval_index":1}],"kept":0})");
}

// ---------------------------------------------------------------------------
// dataset_stats

TEST(DatasetStatsTest, PairwiseFraction) {
  std::vector<LabeledSample> samples;
  for (int i = 0; i < 100; ++i) {
    LabeledSample s =
        i < 33 ? LabeledSample{testing::make_pairwise("p" + std::to_string(i), "q", "a", "b"),
                               PairChoice{Choice::A}}
               : train_q("v" + std::to_string(i), "q");
    s.domain_tag = i % 2 ? "math" : "code";
    s.provenance = i < 10 ? Provenance::Existing : Provenance::Synthetic;
    samples.push_back(std::move(s));
  }
  const auto st = dataset_stats(samples);
  EXPECT_EQ(st.total, 100u);
  EXPECT_DOUBLE_EQ(st.by_task.fractions.at("pairwise"), 0.33);
  for (const auto* axis : {&st.by_task, &st.by_domain, &st.by_provenance}) {
    std::size_t count = 0;
    double frac = 0;
    for (const auto& [k, c] : axis->counts) count += c;
    for (const auto& [k, f] : axis->fractions) frac += f;
    EXPECT_EQ(count, st.total);
    EXPECT_NEAR(frac, 1.0, 1e-9);
  }
  EXPECT_EQ(st.by_provenance.counts.at("existing"), 10u);
}

TEST(DatasetStatsTest, EmptyInput) {
  const auto st = dataset_stats({});
  EXPECT_EQ(st.total, 0u);
  EXPECT_TRUE(st.by_task.counts.empty());
  EXPECT_TRUE(st.by_domain.fractions.empty());
  EXPECT_EQ(stats_to_json(st).dump(), R"({"total":0,"task":{},"domain":{},"provenance":{}})");
}

}  // namespace
}  // namespace fare

#include <gtest/gtest.h>

#include <cstdlib>
#include <sstream>

#include "fare/cli/commands.hpp"
#include "fare/core/error.hpp"
#include "fare/core/hash.hpp"
#include "fare/core/io.hpp"
#include "fare/harness/report.hpp"
#include "test_util.hpp"

namespace fare {
namespace {

namespace fs = std::filesystem;
using testing::slurp;
using testing::TempDir;

fs::path fixture(const std::string& name) { return testing::data_dir() / "cli" / name; }

std::string base_config() {
  return "seed = 7\n"
         "[endpoint]\n"
         "backend = \"mock\"\n"
         "model = \"mock-judge\"\n"
         "mock_script = \"" + fixture("judge_mock.json").string() + "\"\n"
         "[rsft]\n"
         "pool = \"" + fixture("pool.jsonl").string() + "\"\n"
         "n_rollout = 8\n"
         "direct_fraction = { pairwise = 0.5 }\n"
         "[curation]\n"
         "seeds = \"" + fixture("seeds.jsonl").string() + "\"\n"
         "eval_questions = [\"" + fixture("eval_questions.jsonl").string() + "\"]\n"
         "[benchmark]\n"
         "samples = \"" + fixture("bench_pairwise.jsonl").string() + "\"\n"
         "[rollout]\n"
         "inputs = \"" + fixture("bench_pairwise.jsonl").string() + "\"\n"
         "[rerank]\n"
         "candidates = \"" + fixture("rerank_sets.jsonl").string() + "\"\n"
         "[reward]\n"
         "inputs = \"" + fixture("reward_pairs.jsonl").string() + "\"\n";
}

struct Run {
  int code;
  std::string out, err;
};

Run fare_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "fare");
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

class CliTest : public ::testing::Test {
 protected:
  CliTest() : dir_("cli") {}

  fs::path write_config(const std::string& text, const std::string& name = "fare.toml") {
    write_text_atomic(dir_ / name, text);
    return dir_ / name;
  }

  std::string config_error(const std::string& text) {
    try {
      parse_config(text, dir_.path());
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  }

  TempDir dir_;
};

// ---------------------------------------------------------------------------
// load_config

TEST_F(CliTest, MinimalConfigFillsDefaults) {
  write_text_atomic(dir_ / "mock.json", "{\"default\": [\"Verdict: [A]\"]}");
  const auto c = load_config(write_config("[endpoint]\nbackend = \"mock\"\nmock_script = \"mock.json\"\n"));
  EXPECT_EQ(c.sampling.k, 4);
  EXPECT_EQ(c.sampling.temperature, 0.9);
  EXPECT_EQ(c.rsft.sampling.temperature, 0.9);
  EXPECT_EQ(c.curation.ngram, 13u);
  EXPECT_EQ(c.endpoint.mock_script, dir_ / "mock.json");
  EXPECT_EQ(c.out_dir, dir_ / "out");
  EXPECT_EQ(c.reward.options.parse_fail_reward, -0.5);
}

TEST_F(CliTest, OutOfRangeFractionNamesTheField) {
  const auto c = parse_config("[rsft]\ndirect_fraction = { pairwise = 1.3 }\n", dir_.path());
  try {
    validate_config(c);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("rsft.direct_fraction.pairwise"), std::string::npos)
        << e.what();
  }
}

TEST_F(CliTest, UnknownKeysAreRejectedWithTheirPath) {
  EXPECT_NE(config_error("foo = 1\n").find("'foo'"), std::string::npos);
  EXPECT_NE(config_error("[rsft]\nfoo = 1\n").find("'rsft.foo'"), std::string::npos);
  EXPECT_NE(config_error("[rsft.trainer]\nlr = 1e-6\n").find("'rsft.trainer.lr'"),
            std::string::npos);
  EXPECT_NE(config_error("[endpoint]\nauth_token = \"sk-inline\"\n").find("endpoint.auth_token"),
            std::string::npos);
  EXPECT_NE(config_error("[rsft.task_mix]\nlistwise = 0.5\n").find("rsft.task_mix.listwise"),
            std::string::npos);
}

TEST_F(CliTest, SchemaViolationsNameTheKey) {
  EXPECT_NE(config_error("[sampling]\nk = \"four\"\n").find("sampling.k"), std::string::npos);
  EXPECT_NE(config_error("[sampling]\nk = 0\n").find("sampling.k"), std::string::npos);
  EXPECT_NE(config_error("[benchmark]\nsc_k = 2.5\n").find("benchmark.sc_k"), std::string::npos);
  EXPECT_NE(config_error("[reward]\ngrader = \"vibes\"\n").find("reward.grader"), std::string::npos);
  EXPECT_NE(config_error("endpoint = 3\n").find("endpoint"), std::string::npos);
  EXPECT_NE(config_error("[sampling\n").find("line 1"), std::string::npos);
}

TEST_F(CliTest, ReferencedPathsMustExist) {
  write_text_atomic(dir_ / "mock.json", "{}");
  const auto path = write_config(
      "[endpoint]\nbackend = \"mock\"\nmock_script = \"mock.json\"\n"
      "[benchmark]\nsamples = \"missing.jsonl\"\n");
  try {
    load_config(path);
    FAIL();
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("benchmark.samples"), std::string::npos);
  }
  EXPECT_THROW(load_config(dir_ / "nope.toml"), ConfigError);
}

TEST_F(CliTest, AuthTokenComesFromTheNamedVariable) {
  const std::string text =
      "[endpoint]\nbase_url = \"http://127.0.0.1:9\"\nauth_env = \"FARE_TEST_TOKEN_VAR\"\n";
  ::unsetenv("FARE_TEST_TOKEN_VAR");
  const auto c = parse_config(text, dir_.path());
  EXPECT_THROW(resolve_endpoint(c), ConfigError);
  ::setenv("FARE_TEST_TOKEN_VAR", "sk-test", 1);
  EXPECT_EQ(resolve_endpoint(c).auth_token, std::optional<std::string>("sk-test"));
  ::unsetenv("FARE_TEST_TOKEN_VAR");
}

TEST_F(CliTest, RubricsAndModesAreParsed) {
  const auto c = parse_config(
      "[curation]\nverification = [\"ref_free\"]\ncorruptions = [\"malformed_json\"]\n"
      "[[curation.rubrics]]\ndataset = \"toy\"\ntask = \"ref_free\"\nid = \"r1\"\ntext = \"Rules\"\n",
      dir_.path());
  ASSERT_EQ(c.curation.verification.size(), 1u);
  EXPECT_EQ(c.curation.corruptions, std::vector<CorruptionKind>{CorruptionKind::MalformedJson});
  EXPECT_EQ(c.curation.rubrics.protocol_for(TaskKind::RefFreeVerification, "toy").rubric_id, "r1");
  EXPECT_NE(config_error("[[curation.rubrics]]\ntask = \"pairwise\"\nid = \"x\"\ntext = \"t\"\n"
                         "colour = \"red\"\n")
                .find("curation.rubrics[0].colour"),
            std::string::npos);
}

// ---------------------------------------------------------------------------
// Commands and exit codes

TEST_F(CliTest, ConsistentEvaluationMatchesHandComputation) {
  // b1, b2: GOLD wins in either slot. b3: TRAP forces [A], so only the
  // original order is right. b4: no verdict at all. 2 of 4 are consistent.
  const auto config = write_config(base_config());
  const auto r = fare_cli({"evaluate", "--config", config.string(), "--task", "pairwise",
                           "--consistent", "--out", (dir_ / "eval").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto report = report_from_json(nlohmann::json::parse(slurp(dir_ / "eval" / "report_pairwise.json")));
  EXPECT_EQ(report.metric, kMetricConsistentAccuracy);
  EXPECT_EQ(report.value, 0.5);
  EXPECT_EQ(report.extras.at("accuracy_original"), 0.75);
  EXPECT_EQ(report.extras.at("accuracy_swapped"), 0.5);
  EXPECT_EQ(report.n, 4u);
}

TEST_F(CliTest, RsftStepIsDeterministic) {
  const auto config = write_config(base_config());
  std::vector<std::string> sums;
  for (const char* out : {"a", "b"}) {
    const auto r = fare_cli({"rsft-step", "--config", config.string(), "--out", (dir_ / out).string()});
    ASSERT_EQ(r.code, 0) << r.err;
    sums.push_back(sha256_hex(slurp(dir_ / out / "iter_0001" / "sft.jsonl")));
  }
  EXPECT_EQ(sums[0], sums[1]);
  EXPECT_EQ(slurp(dir_ / "a" / "iter_0001" / "manifest.json"),
            slurp(dir_ / "b" / "iter_0001" / "manifest.json"));

  const auto other = fare_cli({"rsft-step", "--config", config.string(), "--seed", "8", "--out",
                               (dir_ / "c").string()});
  ASSERT_EQ(other.code, 0) << other.err;
  // Only one iteration is configured.
  EXPECT_EQ(fare_cli({"rsft-step", "--config", config.string(), "--out", (dir_ / "a").string()}).code,
            kExitConfig);
}

TEST_F(CliTest, RewardOnParseFailureIsMinusHalf) {
  const auto config = write_config(base_config());
  const auto r = fare_cli({"reward", "--config", config.string(), "--out", (dir_ / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_jsonl(dir_ / "o" / "rewards.jsonl");
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0]["reward"].get<double>(), -0.5);
  EXPECT_TRUE(rows[0]["extracted"].is_null());
  EXPECT_EQ(rows[1]["reward"].get<double>(), 1.0);
  EXPECT_EQ(rows[2]["reward"].get<double>(), 0.0);
}

TEST_F(CliTest, CurateWritesDecontaminatedSamplesAndStats) {
  const auto config = write_config(base_config());
  const auto r = fare_cli({"curate", "--config", config.string(), "--out", (dir_ / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto samples = read_samples(dir_ / "o" / "curated.jsonl");
  for (const auto& s : samples) EXPECT_NE(s.id().rfind("m2-", 0), 0u) << s.id();
  const auto report = nlohmann::json::parse(slurp(dir_ / "o" / "decontamination.json"));
  EXPECT_EQ(report["removed"].size(), 5u);
  const auto stats = nlohmann::json::parse(slurp(dir_ / "o" / "curation_stats.json"));
  EXPECT_EQ(stats["total"].get<std::size_t>(), samples.size());
}

TEST_F(CliTest, EveryCommandIsIdempotentAndLeavesInputsAlone) {
  const auto config = write_config(base_config());
  std::vector<std::string> before;
  for (const char* f : {"seeds.jsonl", "pool.jsonl", "bench_pairwise.jsonl", "judge_mock.json"}) {
    before.push_back(slurp(fixture(f)));
  }
  const std::vector<std::vector<std::string>> commands = {
      {"curate"}, {"rollout"}, {"evaluate"}, {"rerank"}, {"reward"}};
  for (const auto& cmd : commands) {
    std::vector<std::string> outputs;
    for (const char* out : {"x", "y"}) {
      auto args = cmd;
      args.insert(args.end(), {"--config", config.string(), "--out", (dir_ / out).string()});
      const auto r = fare_cli(args);
      ASSERT_EQ(r.code, 0) << cmd[0] << ": " << r.err;
    }
    for (const auto& entry : fs::directory_iterator(dir_ / "x")) {
      EXPECT_EQ(slurp(entry.path()), slurp(dir_ / "y" / entry.path().filename())) << entry.path();
    }
  }
  std::size_t i = 0;
  for (const char* f : {"seeds.jsonl", "pool.jsonl", "bench_pairwise.jsonl", "judge_mock.json"}) {
    EXPECT_EQ(slurp(fixture(f)), before[i++]) << f;
  }
}

TEST_F(CliTest, RolloutOverSeedsFeedsCuration) {
  auto text = base_config();
  text.replace(text.find("inputs = \"" + fixture("bench_pairwise.jsonl").string()),
               std::string("inputs = \"" + fixture("bench_pairwise.jsonl").string()).size(),
               "inputs = \"" + fixture("seeds.jsonl").string());
  const auto seeds_config = write_config(text, "seeds.toml");
  const auto r = fare_cli({"rollout", "--config", seeds_config.string(), "--out", (dir_ / "o").string()});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_jsonl(dir_ / "o" / "seeds_with_responses.jsonl");
  ASSERT_EQ(rows.size(), 3u);
  // m1 had 4 responses; k = 4 more from the mock.
  EXPECT_EQ(rows[0]["responses"].size(), 8u);
  EXPECT_EQ(rows[0]["responses"][7]["generator"], "mock-judge");
}

TEST_F(CliTest, RerankAndReport) {
  const auto config = write_config(base_config());
  const auto out = (dir_ / "o").string();
  ASSERT_EQ(fare_cli({"rerank", "--config", config.string(), "--out", out}).code, 0);
  ASSERT_EQ(fare_cli({"evaluate", "--config", config.string(), "--out", out}).code, 0);
  const auto rerank = nlohmann::json::parse(slurp(dir_ / "o" / "rerank.json"));
  EXPECT_EQ(rerank["accuracy"].get<double>(), 1.0);
  EXPECT_EQ(rerank["selections"][0]["selected"], 1);

  const auto r = fare_cli({"report", "--config", config.string(), "--out", out});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("accuracy = 0.7500 (n=4)"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("selected correct 1.0000"), std::string::npos) << r.out;
  EXPECT_EQ(slurp(dir_ / "o" / "summary.txt"), r.out);

  const auto direct = fare_cli({"report", (dir_ / "o" / "rerank.json").string()});
  EXPECT_EQ(direct.code, 0);
  EXPECT_NE(direct.out.find("rerank"), std::string::npos);
}

TEST_F(CliTest, ExitCodesFollowTheErrorKind) {
  EXPECT_EQ(fare_cli({"evaluate"}).code, kExitConfig);
  EXPECT_EQ(fare_cli({"evaluate", "--config", (dir_ / "missing.toml").string()}).code, kExitConfig);
  EXPECT_EQ(fare_cli({"bogus"}).code, kExitConfig);
  EXPECT_EQ(fare_cli({"--help"}).code, kExitOk);

  const auto unknown = fare_cli({"evaluate", "--config", write_config("foo = 1\n").string()});
  EXPECT_EQ(unknown.code, kExitConfig);
  EXPECT_NE(unknown.err.find("foo"), std::string::npos);

  write_text_atomic(dir_ / "broken.jsonl", "{\"id\": \"x\", \"task\": \"pairwise\"}\n");
  auto text = base_config();
  const auto bad_data = write_config(
      text.replace(text.find(fixture("bench_pairwise.jsonl").string()),
                   fixture("bench_pairwise.jsonl").string().size(), (dir_ / "broken.jsonl").string()),
      "bad.toml");
  EXPECT_EQ(fare_cli({"evaluate", "--config", bad_data.string(), "--out", (dir_ / "o").string()}).code,
            kExitData);

  const auto unreachable = write_config(
      "[endpoint]\nbase_url = \"http://127.0.0.1:1\"\nmodel = \"m\"\nmax_retries = 0\n"
      "timeout_ms = 2000\n[benchmark]\nsamples = \"" + fixture("bench_pairwise.jsonl").string() + "\"\n",
      "net.toml");
  const auto net = fare_cli({"evaluate", "--config", unreachable.string(), "--out", (dir_ / "o").string()});
  EXPECT_EQ(net.code, kExitTransport) << net.err;

  EXPECT_EQ(exit_code_for(PoolExhaustedError("empty")), kExitData);
  EXPECT_EQ(exit_code_for(ProtocolError("bad body")), kExitTransport);
  EXPECT_EQ(exit_code_for(DomainError("x")), kExitOther);
}

}  // namespace
}  // namespace fare

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "fare/curation/inject.hpp"
#include "fare/curation/rubric.hpp"
#include "fare/curation/samples.hpp"
#include "fare/harness/benchmark.hpp"
#include "fare/harness/rerank.hpp"
#include "fare/harness/reward.hpp"
#include "fare/rsft/config.hpp"

namespace fare {

struct CurationSettings {
  std::vector<std::filesystem::path> seeds;
  std::vector<std::filesystem::path> eval_questions;  // JSONL with a "question" field
  std::size_t ngram = 13;
  std::size_t pairwise_limit = 4;
  std::vector<VerificationMode> verification = {VerificationMode::RefFree,
                                                VerificationMode::RefBased};
  std::vector<CorruptionKind> corruptions = {kAllCorruptions.begin(), kAllCorruptions.end()};
  RubricCatalog rubrics;
};

struct BenchmarkSettings {
  std::optional<TaskKind> task;  // defaults to the task of the first sample
  std::filesystem::path samples;
  std::optional<std::filesystem::path> human_ratings;  // JSON array, rating benchmarks only
  BenchmarkFlags flags;
  std::size_t max_in_flight = 8;
};

struct RolloutSettings {
  std::filesystem::path inputs;  // labeled samples whose prompts are sampled
  bool direct = false;
  std::size_t max_in_flight = 8;
};

struct RerankSettings {
  std::filesystem::path candidates;
  RerankOptions options;
  std::size_t max_in_flight = 8;
};

enum class GraderKind { Rule, Judge };

struct RewardSettings {
  std::filesystem::path inputs;  // JSONL {"id"?, "response", "gold", "question"?}
  GraderKind grader = GraderKind::Rule;
  RewardOptions options;
};

struct PipelineConfig {
  std::filesystem::path source;  // the config file itself
  std::uint64_t seed = 0;
  std::filesystem::path out_dir;
  EndpointDescriptor endpoint;
  std::optional<std::string> auth_env;
  SamplingParams sampling;
  RsftConfig rsft;  // rsft.sampling mirrors `sampling`
  std::filesystem::path rsft_pool;
  CurationSettings curation;
  BenchmarkSettings benchmark;
  RolloutSettings rollout;
  RerankSettings rerank;
  RewardSettings reward;
};

/// Parses TOML text. Relative paths resolve against base_dir. Unknown keys,
/// wrong types and out-of-range values raise ConfigError naming the key path.
/// Referenced paths are not checked here.
PipelineConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir);

/// parse_config on a file, then validate_config.
PipelineConfig load_config(const std::filesystem::path& path);

/// Every configured input path exists; module-level invariants hold.
void validate_config(const PipelineConfig& config);

/// Reads the auth token from the configured environment variable.
EndpointDescriptor resolve_endpoint(const PipelineConfig& config);

}  // namespace fare

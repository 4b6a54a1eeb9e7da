#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fare {

enum class SeedKind { Math, ToolCall };

std::string_view to_string(SeedKind kind);
std::optional<SeedKind> parse_seed_kind(std::string_view name);

/// A question with a verifiable answer. For ToolCall seeds gold_answer holds
/// the reference call as JSON text.
struct SeedRecord {
  std::string id;
  std::string question;
  std::string gold_answer;
  std::string domain_tag;
  std::string source_dataset;
  SeedKind kind = SeedKind::Math;
};

struct RawResponse {
  std::string text;
  std::string generator_id;
  double temperature = 0.0;
};

struct GradedResponse {
  std::string text;
  std::string generator_id;
  double temperature = 0.0;
  bool correct = false;
};

/// Seed plus any responses already collected for it.
struct SeedBundle {
  SeedRecord record;
  std::vector<RawResponse> responses;
};

// Seed JSONL: {"id", "question", "gold_answer", "domain", "dataset",
//              "kind"?: "math"|"tool_call",
//              "responses"?: [{"text", "generator"?, "temperature"?}] or ["text", ...]}
std::vector<SeedBundle> read_seeds(const std::filesystem::path& path);

}  // namespace fare

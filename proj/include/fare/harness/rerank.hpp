#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fare/core/io.hpp"
#include "fare/rollout/engine.hpp"

namespace fare {

struct RerankCandidate {
  std::string id;
  std::string question;
  std::vector<std::string> responses;
  std::optional<std::vector<bool>> correct;  // for scoring only
};

// Rerank JSONL: {"id", "question", "responses": [...], "correct"?: [bool...]}
std::vector<RerankCandidate> read_rerank_candidates(const std::filesystem::path& path);

struct RerankOptions {
  bool direct = false;
  /// Flip a seeded coin per duel for which slot the incumbent takes.
  bool randomize_positions = false;
  std::uint64_t seed = 0;
};

struct RerankOutcome {
  std::size_t selected = 0;
  std::size_t judge_calls = 0;
  std::vector<std::string> notes;  // skipped duels
};

/// Sequential knockout: the champion starts at index 0 and meets each
/// challenger in index order with one pairwise judgment per duel. A parse
/// failure or failed request keeps the incumbent. N-1 judge calls.
RerankOutcome rerank_best_of_n(const RerankCandidate& candidate, ChatBackend& backend,
                               const EndpointDescriptor& endpoint, const SamplingParams& params,
                               const RerankOptions& options = {});

struct RerankSummary {
  std::vector<RerankOutcome> outcomes;  // input order
  std::size_t scored = 0;               // candidates with correctness flags
  double accuracy = 0.0;                // selected response correct
  double oracle = 0.0;                  // any response correct
};

/// Reranks every candidate, up to max_in_flight candidates at a time.
RerankSummary run_rerank(std::span<const RerankCandidate> candidates, ChatBackend& backend,
                         const EndpointDescriptor& endpoint, const SamplingParams& params,
                         const RerankOptions& options, std::size_t max_in_flight);

ordered_json rerank_to_json(std::span<const RerankCandidate> candidates,
                            const RerankSummary& summary);

}  // namespace fare

#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fare/rollout/engine.hpp"
#include "fare/rsft/config.hpp"

namespace fare {

struct PassStats {
  int n_correct = 0;
  int k = 0;
  double pass_rate() const { return k == 0 ? 0.0 : static_cast<double>(n_correct) / k; }
  friend bool operator==(const PassStats&, const PassStats&) = default;
};

struct SFTExample {
  EvalInput input;  // protocol.variant tracks the prompt form
  Judgment gold;
  ChatMessages messages;
  std::string target;
  bool direct = false;
  PassStats pass;
  std::string source_dataset;

  const std::string& id() const { return input.id; }
  TaskKind task() const { return input.protocol.task; }
  friend bool operator==(const SFTExample&, const SFTExample&) = default;
};

struct RejectDecision {
  PassStats stats;
  std::optional<SFTExample> kept;  // nullopt: discarded, no correct completion
};

/// Grades every completion against the gold judgment (parse failures count
/// as incorrect) and keeps one correct completion chosen uniformly with a
/// seed derived from (seed, input id). The prompt is the critique form.
RejectDecision reject_sample(const LabeledSample& sample, const RolloutResult& rollout,
                             std::uint64_t seed);

/// Converts exactly round(fraction * n_task) examples per task, chosen
/// uniformly under the seed, to direct-judgment form: the prompt is
/// re-rendered in the direct variant and the target becomes the verdict line,
/// preceded by the completion's reasoning block unless drop_cot is set.
std::vector<SFTExample> convert_direct_judgment(std::vector<SFTExample> kept,
                                                const TaskFractions& fractions, bool drop_cot,
                                                std::uint64_t seed);

/// Number converted for a task with n kept examples.
std::size_t direct_count(double fraction, std::size_t n);

/// Stable sort by pass rate, highest first.
std::vector<SFTExample> curriculum_sort(std::vector<SFTExample> kept);

/// Emitted view of an example. Field names match the JSONL schema:
/// {"id","task","messages","target","direct","pass_rate","source"}.
struct SftRecord {
  std::string id;
  TaskKind task = TaskKind::Pairwise;
  ChatMessages messages;
  std::string target;
  bool direct = false;
  double pass_rate = 0.0;
  std::string source;
  friend bool operator==(const SftRecord&, const SftRecord&) = default;
};

SftRecord to_record(const SFTExample& example);
ordered_json record_to_json(const SftRecord& record);
SftRecord record_from_json(const nlohmann::json& value);

/// Writes one line per example in order, atomically. Returns the SHA-256 of
/// the file content. Throws DataError on I/O failure, leaving no partial file.
std::string emit_sft_dataset(std::span<const SFTExample> examples,
                             const std::filesystem::path& path);

std::vector<SftRecord> read_sft_dataset(const std::filesystem::path& path);

}  // namespace fare

#pragma once

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "fare/rsft/batch.hpp"
#include "fare/rsft/examples.hpp"

namespace fare {

struct LoopState {
  std::vector<LabeledSample> pool;
  std::set<std::string> seen;
  int next_iteration = 1;
};

/// {"next_iteration": t, "seen": [ids...]}; ids sorted.
ordered_json checkpoint_to_json(const LoopState& state);

/// Pool plus the checkpoint under out_dir, if one exists. Throws DataError on
/// duplicate pool ids or a corrupt checkpoint.
LoopState load_loop_state(std::vector<LabeledSample> pool, const std::filesystem::path& out_dir);

struct TaskCounts {
  std::size_t rolled = 0;
  std::size_t kept = 0;
  std::size_t converted_direct = 0;
};

struct IterationManifest {
  int iteration = 0;
  std::vector<std::string> batch_ids;
  std::size_t rolled = 0;
  std::size_t kept = 0;
  /// Includes inputs whose rollout failed outright; those are also counted
  /// in rollout_errors.
  std::size_t discarded_all_wrong = 0;
  std::size_t rollout_errors = 0;
  std::map<TaskKind, TaskCounts> per_task;
  ordered_json config;
  std::string dataset;  // relative to the output directory
  std::string checksum;
  TrainerSettings trainer;
};

ordered_json manifest_to_json(const IterationManifest& manifest);

/// One loop step: compose, roll out, reject, convert, curriculum sort, emit.
/// Writes <out_dir>/iter_NNNN/{sft.jsonl,manifest.json} and updates
/// <out_dir>/checkpoint.json. Throws PoolExhaustedError when the pool has no
/// unseen samples.
IterationManifest run_iteration(LoopState& state, const RsftConfig& config, ChatBackend& backend,
                                const EndpointDescriptor& endpoint,
                                const std::filesystem::path& out_dir);

}  // namespace fare

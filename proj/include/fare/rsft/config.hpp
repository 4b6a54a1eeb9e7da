#pragma once

#include <cstdint>
#include <map>

#include "fare/core/io.hpp"
#include "fare/rollout/backend.hpp"

namespace fare {

using TaskFractions = std::map<TaskKind, double>;

/// Settings handed to the external trainer. Recorded in every manifest; this
/// toolkit never runs the update itself.
struct TrainerSettings {
  int batch_size = 128;
  double learning_rate = 1e-6;
  std::string lr_schedule = "constant";
};

struct RsftConfig {
  std::size_t n_rollout = 1000;
  SamplingParams sampling;
  /// Share of kept examples per task converted to direct-judgment form.
  TaskFractions direct_fraction;
  /// Target task composition of each batch. Empty: the pool's composition.
  TaskFractions task_mix;
  bool curriculum = true;
  bool drop_intermediate_cot = false;
  std::uint64_t seed = 0;
  int total_iterations = 1;
  std::size_t max_in_flight = 8;
  TrainerSettings trainer;
};

/// Throws ConfigError naming the offending field.
void validate(const RsftConfig& config);

ordered_json fractions_to_json(const TaskFractions& fractions);
ordered_json config_to_json(const RsftConfig& config);

}  // namespace fare

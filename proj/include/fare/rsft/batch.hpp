#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <vector>

#include "fare/rsft/config.hpp"

namespace fare {

/// Largest-remainder apportionment of `size` over the positive weights.
/// Weights need not sum to 1. Ties on the remainder go to the earlier task.
std::map<TaskKind, std::size_t> apportion(std::size_t size, const TaskFractions& weights);

/// Task composition of a sample set as fractions.
TaskFractions task_composition(std::span<const LabeledSample> samples);

struct RolloutBatch {
  std::vector<std::size_t> indices;  // into the pool, ascending
  std::map<TaskKind, std::size_t> per_task;
};

/// Draws up to `size` unseen samples following `mix`. Tasks that run short
/// give all they have and the rest is re-apportioned over the remaining
/// tasks. Selected ids are added to `seen`. Throws PoolExhaustedError when
/// nothing unseen is left.
RolloutBatch compose_batch(std::span<const LabeledSample> pool, std::set<std::string>& seen,
                           std::size_t size, const TaskFractions& mix, std::uint64_t seed);

}  // namespace fare

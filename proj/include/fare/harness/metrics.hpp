#pragma once

#include <optional>
#include <span>
#include <vector>

#include "fare/core/types.hpp"

namespace fare {

/// Modal judgment; among tied modes the one sampled first wins. Throws
/// DomainError on an empty list or mixed alternatives.
Judgment aggregate_self_consistency(std::span<const Judgment> judgments);

struct StepOutcome {
  std::optional<int> predicted;  // nullopt: no parseable prediction
  int gold = -1;
};

struct ProcessBenchScore {
  double f1 = 0.0;
  double acc_error = 0.0;    // exact step match where gold != -1
  double acc_correct = 0.0;  // predicting -1 where gold == -1
  std::size_t n_error = 0;
  std::size_t n_correct = 0;
};

/// Throws UndefinedMetricError naming the empty subset.
ProcessBenchScore processbench_f1(std::span<const StepOutcome> outcomes);

/// Pearson r. Throws UndefinedMetricError for fewer than two pairs or zero
/// variance, DomainError for unequal lengths.
double pearson(std::span<const double> x, std::span<const double> y);

}  // namespace fare
